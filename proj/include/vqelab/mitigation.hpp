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
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/noise.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/state.hpp"

namespace vqelab {

/// Measured readout-calibration matrix: column j is the empirical outcome
/// distribution of basis state j prepared with X gates and read through the
/// configured noise.
struct MitigationModel {
  ConfusionMatrix calibration_matrix = ConfusionMatrix::identity(1);
  std::uint64_t shots_per_column = 0;
  double condition_estimate = 1.0;
  double lipschitz = 1.0;  // sigma_max(A)^2, fixed at build time

  bool ill_conditioned() const { return !(condition_estimate < 1e8); }
};

struct MitigatedProbabilities {
  std::vector<double> probabilities;
  bool condition_warning = false;
};

namespace detail {

/// Euclidean projection onto the probability simplex (sort-based).
inline std::vector<double> project_simplex(std::span<const double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - tau);
  return out;
}

/// Largest singular value of A squared, by power iteration on A^T A.
inline double lipschitz_constant(const ConfusionMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> ax(n), atax(n);
  double lambda = 1.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a.entry(i, j) * x[j];
      ax[i] = s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += a.entry(i, j) * ax[i];
      atax[j] = s;
    }
    const double norm = std::sqrt(std::inner_product(atax.begin(), atax.end(), atax.begin(), 0.0));
    if (norm <= 0.0) return 1.0;
    lambda = norm;
    for (std::size_t j = 0; j < n; ++j) x[j] = atax[j] / norm;
  }
  return lambda;
}

/// Smallest pivot magnitude under partial-pivoting elimination; cheap
/// near-singularity signal for the condition warning.
inline double smallest_singular_estimate(const ConfusionMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a.entry(i, j);
  // Gaussian elimination with partial pivoting; the smallest pivot magnitude
  // of the row-echelon form is a cheap ill-conditioning signal.
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (piv != col)
      for (std::size_t c2 = 0; c2 < n; ++c2) std::swap(m[col * n + c2], m[piv * n + c2]);
    const double pivot = m[col * n + col];
    min_pivot = std::min(min_pivot, std::abs(pivot));
    if (std::abs(pivot) < 1e-300) return 0.0;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / pivot;
      for (std::size_t c2 = col; c2 < n; ++c2) m[r * n + c2] -= f * m[col * n + c2];
    }
  }
  return min_pivot;
}

}  // namespace detail

/// Prepares every computational basis state with X gates (noisy when gate
/// errors are enabled), reads it through the readout model with `shots`
/// samples, and collects the empirical columns.
inline MitigationModel build_mitigation(const NoiseConfig& noise, std::size_t num_qubits,
                                        std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("mitigation shots must be >= 1");
  noise.require_calibration(num_qubits);
  const std::size_t n = std::size_t{1} << num_qubits;

  std::optional<ConfusionMatrix> confusion;
  if (noise.readout_noise()) confusion = readout_confusion(*noise.calibration, num_qubits);

  std::vector<std::vector<double>> columns(n);
  for (std::size_t basis = 0; basis < n; ++basis) {
    QuantumState state = QuantumState::zero(
        num_qubits, noise.gate_noise() ? StateMode::Mixed : StateMode::Pure);
    for (std::size_t k = 0; k < num_qubits; ++k) {
      if (!((basis >> k) & 1ULL)) continue;
      state.apply_gate(Gate::x(k));
      if (noise.gate_noise())
        for (const auto& stage : gate_channel(*noise.calibration, Gate::x(k)))
          state.apply_channel(stage.kraus, stage.qubits);
    }
    std::vector<double> p = state.probabilities();
    if (confusion) p = confusion->apply(p);
    const auto counts = rng.multinomial(shots, p);
    columns[basis].resize(n);
    for (std::size_t i = 0; i < n; ++i)
      columns[basis][i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
  }

  MitigationModel model;
  model.calibration_matrix = ConfusionMatrix::from_columns(columns);
  model.shots_per_column = shots;
  model.lipschitz = std::max(detail::lipschitz_constant(model.calibration_matrix), 1e-12);
  const double smax = std::sqrt(model.lipschitz);
  const double smin = detail::smallest_singular_estimate(model.calibration_matrix);
  model.condition_estimate = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  return model;
}

/// argmin over the probability simplex of ||A x - p||_2, by projected
/// gradient descent with step 1/L, converged when the iterate stops moving.
inline MitigatedProbabilities mitigate(const MitigationModel& model,
                                       std::span<const double> noisy_probs) {
  const ConfusionMatrix& a = model.calibration_matrix;
  const std::size_t n = a.dim();
  if (noisy_probs.size() != n)
    throw std::invalid_argument("mitigate: probability vector length mismatch");

  std::vector<double> p(noisy_probs.begin(), noisy_probs.end());
  for (auto& v : p) v = std::max(v, 0.0);  // clamp tiny negative inputs

  const double lip = model.lipschitz;
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> residual(n), grad(n), step(n);
  constexpr double kTol = 1e-10;
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a.entry(i, j) * x[j];
      residual[i] = s - p[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += a.entry(i, j) * residual[i];
      grad[j] = s;
    }
    for (std::size_t j = 0; j < n; ++j) step[j] = x[j] - grad[j] / lip;
    std::vector<double> next = detail::project_simplex(step);
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - x[j]));
    x = std::move(next);
    if (delta < kTol) break;
  }
  return {std::move(x), model.ill_conditioned()};
}

}  // namespace vqelab
