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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vqelab {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(PauliOp op) { return "IXYZ"[static_cast<int>(op)]; }

inline PauliOp pauli_from_char(char c) {
  switch (c) {
    case 'I': return PauliOp::I;
    case 'X': return PauliOp::X;
    case 'Y': return PauliOp::Y;
    case 'Z': return PauliOp::Z;
    default: throw std::invalid_argument(std::string("unknown Pauli label '") + c + "'");
  }
}

/// Tensor product of single-qubit Pauli operators. Qubit 0 is the least
/// significant bit of basis-state indices; the printed label lists qubit q-1
/// leftmost (so "XZ" on two qubits means X on qubit 1, Z on qubit 0).
class PauliString {
 public:
  explicit PauliString(std::size_t num_qubits) : ops_(num_qubits, PauliOp::I) {}

  static PauliString parse(std::string_view label) {
    PauliString s(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) {
      s.ops_[label.size() - 1 - i] = pauli_from_char(label[i]);
    }
    return s;
  }

  std::size_t num_qubits() const { return ops_.size(); }
  PauliOp op(std::size_t qubit) const { return ops_.at(qubit); }
  void set(std::size_t qubit, PauliOp op) { ops_.at(qubit) = op; }

  bool is_identity() const {
    return std::all_of(ops_.begin(), ops_.end(), [](PauliOp p) { return p == PauliOp::I; });
  }

  /// Bitmask of qubits carrying the given operator.
  std::uint64_t mask_of(PauliOp op) const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < ops_.size(); ++k)
      if (ops_[k] == op) m |= (1ULL << k);
    return m;
  }

  std::uint64_t x_mask() const { return mask_of(PauliOp::X); }
  std::uint64_t y_mask() const { return mask_of(PauliOp::Y); }
  std::uint64_t z_mask() const { return mask_of(PauliOp::Z); }

  /// Qubits where the operator is not the identity.
  std::uint64_t support_mask() const { return x_mask() | y_mask() | z_mask(); }

  std::string str() const {
    std::string out(ops_.size(), 'I');
    for (std::size_t k = 0; k < ops_.size(); ++k)
      out[ops_.size() - 1 - k] = pauli_char(ops_[k]);
    return out;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) { return a.ops_ == b.ops_; }
  friend auto operator<=>(const PauliString& a, const PauliString& b) { return a.ops_ <=> b.ops_; }

 private:
  std::vector<PauliOp> ops_;  // ops_[k] acts on qubit k
};

struct PauliTerm {
  double coefficient = 0.0;  // real, Hartree
  PauliString string{0};
};

/// Real-weighted sum of Pauli strings over a fixed register. Terms are kept
/// in canonical (sorted) order with equal strings merged, so value equality
/// is independent of insertion order.
class PauliSum {
 public:
  explicit PauliSum(std::size_t num_qubits) : num_qubits_(num_qubits) {}

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(double coefficient, const PauliString& string) {
    if (string.num_qubits() != num_qubits_)
      throw std::invalid_argument("Pauli string length does not match register size");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), string,
                               [](const PauliTerm& t, const PauliString& s) { return t.string < s; });
    if (it != terms_.end() && it->string == string) {
      it->coefficient += coefficient;
      if (std::abs(it->coefficient) < kPruneEpsilon) terms_.erase(it);
    } else if (std::abs(coefficient) >= kPruneEpsilon) {
      terms_.insert(it, PauliTerm{coefficient, string});
    }
  }

  void add(double coefficient, std::string_view label) { add(coefficient, PauliString::parse(label)); }

  /// Coefficient of the all-I term (0 if absent).
  double identity_coefficient() const {
    for (const auto& t : terms_)
      if (t.string.is_identity()) return t.coefficient;
    return 0.0;
  }

  double coefficient_of(std::string_view label) const {
    const PauliString s = PauliString::parse(label);
    for (const auto& t : terms_)
      if (t.string == s) return t.coefficient;
    return 0.0;
  }

  friend bool operator==(const PauliSum& a, const PauliSum& b) {
    if (a.num_qubits_ != b.num_qubits_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!(a.terms_[i].string == b.terms_[i].string) ||
          a.terms_[i].coefficient != b.terms_[i].coefficient)
        return false;
    }
    return true;
  }

  static constexpr double kPruneEpsilon = 1e-12;  // merged terms below this are dropped

 private:
  std::size_t num_qubits_;
  std::vector<PauliTerm> terms_;  // sorted by string
};

/// The H2 qubit Hamiltonians, coefficients stored exactly as published
/// (5 decimal digits, Hartree). qubits must be 2 or 4.
inline PauliSum builtin_hamiltonian(int qubits) {
  if (qubits == 2) {
    const double c0 = -1.05016, c1 = 0.40421, c2 = 0.01135, c3 = 0.18038;
    PauliSum h(2);
    h.add(c0, "II");
    h.add(c1, "IZ");
    h.add(c1, "ZI");
    h.add(c2, "ZZ");
    h.add(c3, "XX");
    return h;
  }
  if (qubits == 4) {
    const double c0 = -0.80718, c1 = 0.17374, c2 = -0.23047, c3 = 0.12149, c4 = 0.16940,
                 c5 = -0.04509, c6 = 0.04509, c7 = 0.16658, c8 = 0.17511;
    PauliSum h(4);
    h.add(c0, "IIII");
    h.add(c1, "IIIZ");
    h.add(c2, "IIZZ");
    h.add(c1, "IZII");
    h.add(c2, "ZZZI");
    h.add(c3, "IIZI");
    h.add(c4, "IZIZ");
    h.add(c5, "IXZX");
    h.add(c6, "ZXIX");
    h.add(c6, "IXIX");
    h.add(c5, "ZXZX");
    h.add(c7, "ZZZZ");
    h.add(c7, "IZZZ");
    h.add(c8, "ZZIZ");
    h.add(c3, "ZIZI");
    return h;
  }
  throw std::invalid_argument("builtin_hamiltonian: qubit count must be 2 or 4");
}

/// Removes qubits on which `h` acts only through commuting single-qubit Z
/// symmetries: each listed qubit's Z is replaced by its ±1 sector eigenvalue,
/// the qubit is dropped, and the remaining qubits are relabelled contiguously
/// preserving order.
inline PauliSum taper(const PauliSum& h, std::span<const std::size_t> symmetries,
                      std::span<const int> sector) {
  if (symmetries.size() != sector.size())
    throw std::invalid_argument("taper: sector length must equal symmetry count");
  for (int s : sector)
    if (s != 1 && s != -1) throw std::invalid_argument("taper: sector values must be +1 or -1");

  std::map<std::size_t, int> sym;  // qubit -> eigenvalue
  for (std::size_t i = 0; i < symmetries.size(); ++i) {
    if (symmetries[i] >= h.num_qubits())
      throw std::invalid_argument("taper: symmetry qubit out of range");
    sym[symmetries[i]] = sector[i];
  }

  // Relabelling of the surviving qubits, order-preserving.
  std::vector<std::size_t> new_index(h.num_qubits(), 0);
  std::size_t next = 0;
  for (std::size_t k = 0; k < h.num_qubits(); ++k)
    if (!sym.contains(k)) new_index[k] = next++;

  PauliSum out(next);
  for (const auto& term : h.terms()) {
    double coeff = term.coefficient;
    PauliString s(next);
    for (std::size_t k = 0; k < h.num_qubits(); ++k) {
      const PauliOp op = term.string.op(k);
      if (auto it = sym.find(k); it != sym.end()) {
        if (op == PauliOp::Z) {
          coeff *= it->second;
        } else if (op != PauliOp::I) {
          throw std::domain_error("taper: term " + term.string.str() +
                                  " anticommutes with declared Z symmetry on qubit " +
                                  std::to_string(k));
        }
      } else {
        s.set(new_index[k], op);
      }
    }
    out.add(coeff, s);
  }
  return out;
}

/// Set of Pauli terms measurable from one circuit execution: X-basis readout
/// on the qubits in x_mask, Z-basis elsewhere.
struct MeasurementGroup {
  std::uint64_t x_mask = 0;                 // qubits read in the X basis
  std::vector<std::size_t> member_terms;    // indices into the owning PauliSum

  std::string basis_label(std::size_t num_qubits) const {
    std::string out(num_qubits, 'Z');
    for (std::size_t k = 0; k < num_qubits; ++k)
      if ((x_mask >> k) & 1ULL) out[num_qubits - 1 - k] = 'X';
    return out;
  }
};

/// Partition of the non-identity terms by shared per-qubit readout basis.
/// Terms sharing the same X positions land in one group; the identity term
/// belongs to no group. Y labels are an unsupported extension point.
inline std::vector<MeasurementGroup> group_by_basis(const PauliSum& h) {
  std::map<std::uint64_t, MeasurementGroup> groups;
  const auto& terms = h.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].string.is_identity()) continue;
    if (terms[i].string.y_mask() != 0)
      throw std::domain_error("group_by_basis: Y labels are not supported (term " +
                              terms[i].string.str() + ")");
    auto& g = groups[terms[i].string.x_mask()];
    g.x_mask = terms[i].string.x_mask();
    g.member_terms.push_back(i);
  }
  std::vector<MeasurementGroup> out;
  out.reserve(groups.size());
  for (auto& [mask, g] : groups) out.push_back(std::move(g));
  return out;
}

/// Text format: one term per line, "<coefficient> <label qubit q-1..0>".
inline void write_pauli_sum(std::ostream& os, const PauliSum& h) {
  os.precision(17);
  for (const auto& t : h.terms()) os << t.coefficient << ' ' << t.string.str() << '\n';
}

inline PauliSum parse_pauli_sum(std::istream& is) {
  std::vector<std::pair<double, std::string>> rows;
  std::size_t q = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double coeff = 0.0;
    std::string label;
    if (!(row >> coeff >> label))
      throw std::runtime_error("Hamiltonian line " + std::to_string(lineno) +
                               ": expected '<coefficient> <label>'");
    if (q == 0) q = label.size();
    if (label.size() != q)
      throw std::runtime_error("Hamiltonian line " + std::to_string(lineno) +
                               ": label length differs from earlier terms");
    rows.emplace_back(coeff, label);
  }
  if (rows.empty()) throw std::runtime_error("Hamiltonian file contains no terms");
  PauliSum h(q);
  for (const auto& [coeff, label] : rows) h.add(coeff, label);
  return h;
}

}  // namespace vqelab
