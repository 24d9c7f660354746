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

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <stdexcept>
#include <vector>

#include "vqelab/pauli.hpp"
#include "vqelab/state.hpp"

namespace vqelab {

/// Full real spectrum of a Hermitian Pauli sum, ascending with multiplicity.
struct Spectrum {
  std::vector<double> eigenvalues;
  double ground_energy = 0.0;
};

namespace detail {

/// Action of one Pauli string on basis state |j>: P|j> = phase(j) |j ^ flip>.
/// flip covers X and Y qubits; Z gives (-1)^bit, Y gives i·(-1)^bit.
struct PauliAction {
  std::uint64_t flip_mask;
  std::uint64_t z_mask;  // includes Y positions for the sign part
  std::uint64_t y_mask;

  explicit PauliAction(const PauliString& s)
      : flip_mask(s.x_mask() | s.y_mask()), z_mask(s.z_mask() | s.y_mask()), y_mask(s.y_mask()) {}

  cxd phase(std::uint64_t j) const {
    const int zpar = std::popcount(j & z_mask) & 1;
    double re = zpar ? -1.0 : 1.0;
    cxd ph{re, 0.0};
    const int ycount = std::popcount(y_mask) & 3;
    static constexpr cxd ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ph * ipow[ycount];
  }
};

}  // namespace detail

/// Dense 2^q x 2^q matrix of the Pauli sum (column-major Eigen).
inline Eigen::MatrixXcd dense_matrix(const PauliSum& h) {
  if (h.num_qubits() > QuantumState::kMaxQubits)
    throw std::length_error("dense_matrix: register too large for a dense solve (q > 10)");
  const std::size_t n = std::size_t{1} << h.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (const auto& term : h.terms()) {
    const detail::PauliAction act(term.string);
    for (std::uint64_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(j ^ act.flip_mask), static_cast<Eigen::Index>(j)) +=
          term.coefficient * act.phase(j);
    }
  }
  return m;
}

inline Spectrum diagonalize(const PauliSum& h) {
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
  Spectrum s;
  s.eigenvalues.assign(solver.eigenvalues().data(),
                       solver.eigenvalues().data() + solver.eigenvalues().size());
  s.ground_energy = s.eigenvalues.front();
  return s;
}

/// Normalised ground eigenvector of the Pauli sum (columns of basis index j).
inline std::vector<cxd> ground_eigenvector(const PauliSum& h) {
  const Eigen::MatrixXcd m = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve failed");
  const auto col = solver.eigenvectors().col(0);
  return std::vector<cxd>(col.data(), col.data() + col.size());
}

/// <psi|H|psi> for pure states, Tr(rho H) for density matrices. The result is
/// real for the Hermitian sums in scope; the imaginary part is discarded.
inline double exact_energy(const PauliSum& h, const QuantumState& state) {
  if (state.num_qubits() != h.num_qubits())
    throw std::invalid_argument("exact_energy: state dimension does not match Hamiltonian");
  const std::size_t n = state.dim();
  double energy = 0.0;
  for (const auto& term : h.terms()) {
    const detail::PauliAction act(term.string);
    cxd acc{0.0, 0.0};
    if (state.mode() == StateMode::Pure) {
      for (std::uint64_t j = 0; j < n; ++j)
        acc += std::conj(state.amplitude(j ^ act.flip_mask)) * act.phase(j) * state.amplitude(j);
    } else {
      // Tr(rho P) = sum_j phase(j) rho[j, j ^ flip]
      for (std::uint64_t j = 0; j < n; ++j)
        acc += act.phase(j) * state.density(j, j ^ act.flip_mask);
    }
    energy += term.coefficient * acc.real();
  }
  return energy;
}

}  // namespace vqelab
