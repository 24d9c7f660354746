// Copyright 2026 The vqe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace vqelab {

using cxd = std::complex<double>;

enum class StateMode { Pure, Mixed };

/// One circuit element. Ry/Rz/X act on `target`; Cnot flips `target` when
/// `control` is 1.
struct Gate {
  enum class Kind { Ry, Rz, X, Cnot };

  Kind kind = Kind::Ry;
  double angle = 0.0;
  std::size_t target = 0;
  std::size_t control = 0;  // Cnot only

  static Gate ry(double angle, std::size_t target) { return {Kind::Ry, angle, target, 0}; }
  static Gate rz(double angle, std::size_t target) { return {Kind::Rz, angle, target, 0}; }
  static Gate x(std::size_t target) { return {Kind::X, 0.0, target, 0}; }
  static Gate cnot(std::size_t control, std::size_t target) {
    if (control == target) throw std::invalid_argument("CNOT control must differ from target");
    return {Kind::Cnot, 0.0, target, control};
  }
};

/// Kraus operator acting on one or two qubits; 2x2 or 4x4 row-major dense.
struct KrausOp {
  std::size_t arity = 1;
  std::array<cxd, 16> m{};

  static KrausOp one_qubit(cxd m00, cxd m01, cxd m10, cxd m11) {
    KrausOp k;
    k.arity = 1;
    k.m = {m00, m01, m10, m11};
    return k;
  }
  static KrausOp two_qubit(const std::array<cxd, 16>& mat) {
    KrausOp k;
    k.arity = 2;
    k.m = mat;
    return k;
  }
  cxd at(std::size_t r, std::size_t c) const { return m[r * (arity == 1 ? 2 : 4) + c]; }
};

/// q-qubit quantum state: statevector (Pure) or dense density matrix (Mixed).
/// Qubit 0 is the least significant bit of basis-state indices.
class QuantumState {
 public:
  static QuantumState zero(std::size_t num_qubits, StateMode mode) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
      throw std::invalid_argument("qubit count must be between 1 and 10");
    QuantumState s;
    s.mode_ = mode;
    s.q_ = num_qubits;
    const std::size_t dim = std::size_t{1} << num_qubits;
    s.amp_.assign(mode == StateMode::Pure ? dim : dim * dim, cxd{0.0, 0.0});
    s.amp_[0] = 1.0;  // |0..0> amplitude, or rho[0][0]
    return s;
  }

  /// Wraps an explicit statevector (normalised by the caller); test/oracle use.
  static QuantumState pure_from_amplitudes(std::vector<cxd> amplitudes) {
    QuantumState s;
    s.mode_ = StateMode::Pure;
    s.q_ = 0;
    while ((std::size_t{1} << s.q_) < amplitudes.size()) ++s.q_;
    if ((std::size_t{1} << s.q_) != amplitudes.size() || s.q_ < 1 || s.q_ > kMaxQubits)
      throw std::invalid_argument("amplitude vector length must be 2^q, 1 <= q <= 10");
    s.amp_ = std::move(amplitudes);
    return s;
  }

  StateMode mode() const { return mode_; }
  std::size_t num_qubits() const { return q_; }
  std::size_t dim() const { return std::size_t{1} << q_; }

  cxd amplitude(std::size_t i) const { return amp_.at(i); }
  cxd density(std::size_t i, std::size_t j) const { return amp_.at(i * dim() + j); }

  void apply_gate(const Gate& g) {
    check_qubit(g.target);
    switch (g.kind) {
      case Gate::Kind::Ry: {
        const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
        apply_1q(g.target, c, -s, s, c);
        break;
      }
      case Gate::Kind::Rz: {
        const cxd e0 = std::polar(1.0, -g.angle / 2), e1 = std::polar(1.0, g.angle / 2);
        apply_1q(g.target, e0, 0.0, 0.0, e1);
        break;
      }
      case Gate::Kind::X:
        apply_1q(g.target, 0.0, 1.0, 1.0, 0.0);
        break;
      case Gate::Kind::Cnot:
        check_qubit(g.control);
        apply_cnot(g.control, g.target);
        break;
    }
  }

  void apply_circuit(std::span<const Gate> gates) {
    for (const auto& g : gates) apply_gate(g);
  }

  /// rho -> sum_i K_i rho K_i^dagger on the given qubits. Mixed mode only.
  void apply_channel(std::span<const KrausOp> kraus, std::span<const std::size_t> qubits) {
    if (mode_ != StateMode::Mixed)
      throw std::logic_error("apply_channel requires a density-matrix state");
    if (kraus.empty()) throw std::invalid_argument("empty Kraus set");
    for (auto k : qubits) check_qubit(k);
    check_trace_preserving(kraus);

    const std::size_t n = dim();
    std::vector<cxd> acc(n * n, cxd{0.0, 0.0});
    std::vector<cxd> tmp(n * n);
    for (const auto& k : kraus) {
      if ((k.arity == 1 && qubits.size() != 1) || (k.arity == 2 && qubits.size() != 2))
        throw std::invalid_argument("Kraus arity does not match qubit list");
      tmp = amp_;
      if (k.arity == 1) {
        rho_left_1q(tmp, qubits[0], k);
        rho_right_1q_dagger(tmp, qubits[0], k);
      } else {
        rho_left_2q(tmp, qubits[0], qubits[1], k);
        rho_right_2q_dagger(tmp, qubits[0], qubits[1], k);
      }
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += tmp[i];
    }
    amp_ = std::move(acc);
  }

  /// Computational-basis outcome probabilities. Entries are clamped to [0,1]
  /// and renormalised when numerical drift exceeds 1e-12.
  std::vector<double> probabilities() const {
    const std::size_t n = dim();
    std::vector<double> p(n);
    if (mode_ == StateMode::Pure) {
      for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(amp_[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) p[i] = amp_[i * n + i].real();
    }
    double sum = 0.0;
    for (auto& v : p) {
      v = std::min(1.0, std::max(0.0, v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12 && sum > 0.0) {
      for (auto& v : p) v /= sum;
    }
    return p;
  }

  double norm_squared() const {
    double s = 0.0;
    if (mode_ == StateMode::Pure) {
      for (const auto& a : amp_) s += std::norm(a);
    } else {
      for (std::size_t i = 0; i < dim(); ++i) s += amp_[i * dim() + i].real();
    }
    return s;
  }

  static constexpr std::size_t kMaxQubits = 10;

 private:
  QuantumState() = default;

  void check_qubit(std::size_t k) const {
    if (k >= q_) throw std::out_of_range("qubit index out of range");
  }

  static void check_trace_preserving(std::span<const KrausOp> kraus) {
    const std::size_t d = kraus.front().arity == 1 ? 2 : 4;
    std::array<cxd, 16> sum{};
    for (const auto& k : kraus) {
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t i = 0; i < d; ++i) sum[r * d + c] += std::conj(k.at(i, r)) * k.at(i, c);
    }
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const cxd want = (r == c) ? cxd{1.0, 0.0} : cxd{0.0, 0.0};
        if (std::abs(sum[r * d + c] - want) > 1e-10)
          throw std::invalid_argument("Kraus set is not trace preserving");
      }
  }

  // Statevector or matrix-row/column updates over strided index pairs.

  void apply_1q(std::size_t k, cxd u00, cxd u01, cxd u10, cxd u11) {
    if (mode_ == StateMode::Pure) {
      vec_1q(amp_, k, u00, u01, u10, u11);
    } else {
      KrausOp u = KrausOp::one_qubit(u00, u01, u10, u11);
      rho_left_1q(amp_, k, u);
      rho_right_1q_dagger(amp_, k, u);
    }
  }

  void apply_cnot(std::size_t c, std::size_t t) {
    if (mode_ == StateMode::Pure) {
      vec_cnot(amp_, c, t);
    } else {
      const std::size_t n = dim();
      // permutation conjugation: swap rows then columns
      for (std::size_t i = 0; i < n; ++i) {
        if (((i >> c) & 1ULL) && !((i >> t) & 1ULL)) {
          const std::size_t j = i | (std::size_t{1} << t);
          for (std::size_t col = 0; col < n; ++col) std::swap(amp_[i * n + col], amp_[j * n + col]);
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (((j >> c) & 1ULL) && !((j >> t) & 1ULL)) {
          const std::size_t j2 = j | (std::size_t{1} << t);
          for (std::size_t row = 0; row < n; ++row)
            std::swap(amp_[row * n + j], amp_[row * n + j2]);
        }
      }
    }
  }

  void vec_1q(std::vector<cxd>& v, std::size_t k, cxd u00, cxd u01, cxd u10, cxd u11) const {
    const std::size_t n = v.size();
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t i = 0; i < n; ++i) {
      if (i & bit) continue;
      const cxd a0 = v[i], a1 = v[i | bit];
      v[i] = u00 * a0 + u01 * a1;
      v[i | bit] = u10 * a0 + u11 * a1;
    }
  }

  void vec_cnot(std::vector<cxd>& v, std::size_t c, std::size_t t) const {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (((i >> c) & 1ULL) && !((i >> t) & 1ULL)) std::swap(v[i], v[i | (std::size_t{1} << t)]);
    }
  }

  // rho -> (K ⊗ I) rho   (left action on the row index)
  void rho_left_1q(std::vector<cxd>& rho, std::size_t k, const KrausOp& kr) const {
    const std::size_t n = dim();
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t col = 0; col < n; ++col) {
      for (std::size_t row = 0; row < n; ++row) {
        if (row & bit) continue;
        const cxd a0 = rho[row * n + col], a1 = rho[(row | bit) * n + col];
        rho[row * n + col] = kr.at(0, 0) * a0 + kr.at(0, 1) * a1;
        rho[(row | bit) * n + col] = kr.at(1, 0) * a0 + kr.at(1, 1) * a1;
      }
    }
  }

  // rho -> rho (K ⊗ I)^dagger   (right action on the column index)
  void rho_right_1q_dagger(std::vector<cxd>& rho, std::size_t k, const KrausOp& kr) const {
    const std::size_t n = dim();
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t col = 0; col < n; ++col) {
        if (col & bit) continue;
        const cxd a0 = rho[row * n + col], a1 = rho[row * n + (col | bit)];
        rho[row * n + col] = a0 * std::conj(kr.at(0, 0)) + a1 * std::conj(kr.at(0, 1));
        rho[row * n + (col | bit)] = a0 * std::conj(kr.at(1, 0)) + a1 * std::conj(kr.at(1, 1));
      }
    }
  }

  // Two-qubit Kraus index convention: local index = (bit(a) << 1) | bit(b)
  // for qubit list (a, b).
  void rho_left_2q(std::vector<cxd>& rho, std::size_t a, std::size_t b, const KrausOp& kr) const {
    const std::size_t n = dim();
    const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
    for (std::size_t col = 0; col < n; ++col) {
      for (std::size_t base = 0; base < n; ++base) {
        if (base & (ba | bb)) continue;
        cxd in[4], out[4];
        for (std::size_t l = 0; l < 4; ++l)
          in[l] = rho[(base | ((l >> 1) ? ba : 0) | ((l & 1) ? bb : 0)) * n + col];
        for (std::size_t r = 0; r < 4; ++r) {
          out[r] = 0.0;
          for (std::size_t l = 0; l < 4; ++l) out[r] += kr.at(r, l) * in[l];
        }
        for (std::size_t r = 0; r < 4; ++r)
          rho[(base | ((r >> 1) ? ba : 0) | ((r & 1) ? bb : 0)) * n + col] = out[r];
      }
    }
  }

  void rho_right_2q_dagger(std::vector<cxd>& rho, std::size_t a, std::size_t b,
                           const KrausOp& kr) const {
    const std::size_t n = dim();
    const std::size_t ba = std::size_t{1} << a, bb = std::size_t{1} << b;
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t base = 0; base < n; ++base) {
        if (base & (ba | bb)) continue;
        cxd in[4], out[4];
        for (std::size_t l = 0; l < 4; ++l)
          in[l] = rho[row * n + (base | ((l >> 1) ? ba : 0) | ((l & 1) ? bb : 0))];
        for (std::size_t cidx = 0; cidx < 4; ++cidx) {
          out[cidx] = 0.0;
          for (std::size_t l = 0; l < 4; ++l) out[cidx] += in[l] * std::conj(kr.at(cidx, l));
        }
        for (std::size_t cidx = 0; cidx < 4; ++cidx)
          rho[row * n + (base | ((cidx >> 1) ? ba : 0) | ((cidx & 1) ? bb : 0))] = out[cidx];
      }
    }
  }

  StateMode mode_ = StateMode::Pure;
  std::size_t q_ = 0;
  std::vector<cxd> amp_;
};

}  // namespace vqelab
