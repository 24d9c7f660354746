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

#include <bit>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/ansatz.hpp"
#include "vqelab/mitigation.hpp"
#include "vqelab/noise.hpp"
#include "vqelab/pauli.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/state.hpp"

namespace vqelab {

/// Exact: expectation from the analytic outcome distribution (the
/// infinite-shots limit). Sampled: multinomial frequencies at `shots` draws.
struct ShotPolicy {
  enum class Mode { Exact, Sampled };

  Mode mode = Mode::Exact;
  std::uint64_t shots = 0;

  static ShotPolicy exact() { return {Mode::Exact, 0}; }
  static ShotPolicy sampled(std::uint64_t shots) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    return {Mode::Sampled, shots};
  }
  bool sampled_mode() const { return mode == Mode::Sampled; }
};

struct EstimationResult {
  double energy = 0.0;
  // One probability (or frequency) vector per measurement group, in group order.
  std::vector<std::pair<MeasurementGroup, std::vector<double>>> group_probabilities;
  std::uint64_t shots_used = 0;
};

/// X-basis qubits are rotated into the computational basis with Ry(-pi/2),
/// chosen so that the Z-parity of the rotated state equals the X expectation
/// of the original one (<+|X|+> = +1 maps to outcome 0).
inline void post_rotate(QuantumState& state, const MeasurementGroup& group) {
  for (std::size_t k = 0; k < state.num_qubits(); ++k)
    if ((group.x_mask >> k) & 1ULL) state.apply_gate(Gate::ry(-std::numbers::pi / 2, k));
}

inline std::vector<std::uint64_t> sample_counts(std::span<const double> probs,
                                                std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-9) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("probabilities do not sum to 1");
  return rng.multinomial(shots, probs);
}

/// Parity estimator: sum over outcomes of freq(outcome) * (-1)^popcount of the
/// outcome restricted to the term's non-identity qubits.
inline double term_expectation(std::span<const double> frequencies, const PauliTerm& term,
                               const MeasurementGroup& group) {
  const std::uint64_t support = term.string.support_mask();
  if ((term.string.x_mask() & ~group.x_mask) != 0)
    throw std::invalid_argument("term needs an X basis the group does not provide");
  if ((term.string.z_mask() & group.x_mask) != 0)
    throw std::invalid_argument("term has Z on a qubit the group reads in the X basis");
  double e = 0.0;
  for (std::uint64_t outcome = 0; outcome < frequencies.size(); ++outcome) {
    const int parity = std::popcount(outcome & support) & 1;
    e += parity ? -frequencies[outcome] : frequencies[outcome];
  }
  return e;
}

/// Precomputed VQE energy objective for one (Hamiltonian, ansatz, noise)
/// combination. Immutable after construction; estimate() is safe to call from
/// several threads as long as each caller owns its Rng.
class EnergyEstimator {
 public:
  EnergyEstimator(PauliSum hamiltonian, AnsatzSpec spec, NoiseConfig noise)
      : h_(std::move(hamiltonian)), spec_(spec), noise_(std::move(noise)) {
    spec_.validate();
    if (spec_.num_qubits != h_.num_qubits())
      throw std::invalid_argument("ansatz register size does not match Hamiltonian");
    noise_.require_calibration(spec_.num_qubits);
    groups_ = group_by_basis(h_);
    identity_ = h_.identity_coefficient();
    if (noise_.readout_noise())
      confusion_ = readout_confusion(*noise_.calibration, spec_.num_qubits);
    if (noise_.gate_noise()) build_channel_cache();
  }

  const PauliSum& hamiltonian() const { return h_; }
  const AnsatzSpec& spec() const { return spec_; }
  const NoiseConfig& noise() const { return noise_; }
  const std::vector<MeasurementGroup>& groups() const { return groups_; }

  /// State after the ansatz circuit (and gate noise, when enabled), before
  /// post-rotation.
  QuantumState prepare_state(std::span<const double> theta) const {
    const auto gates = build_circuit(spec_, theta);
    QuantumState state = QuantumState::zero(
        spec_.num_qubits, noise_.gate_noise() ? StateMode::Mixed : StateMode::Pure);
    for (const auto& g : gates) apply_with_noise(state, g);
    return state;
  }

  /// Analytic outcome distribution of one measurement group at theta,
  /// including readout confusion when enabled.
  std::vector<double> group_distribution(const QuantumState& prepared,
                                         const MeasurementGroup& group) const {
    QuantumState state = prepared;
    for (std::size_t k = 0; k < state.num_qubits(); ++k) {
      if ((group.x_mask >> k) & 1ULL) {
        const Gate g = Gate::ry(-std::numbers::pi / 2, k);
        apply_with_noise(state, g);
      }
    }
    std::vector<double> p = state.probabilities();
    if (confusion_) p = confusion_->apply(p);
    return p;
  }

  EstimationResult estimate(std::span<const double> theta, const ShotPolicy& policy, Rng& rng,
                            const MitigationModel* mitigation = nullptr) const {
    EstimationResult result;
    result.shots_used = policy.sampled_mode() ? policy.shots : 0;
    result.energy = identity_;
    const QuantumState prepared = prepare_state(theta);
    for (const auto& group : groups_) {
      std::vector<double> freq = group_distribution(prepared, group);
      if (policy.sampled_mode()) {
        const auto counts = rng.multinomial(policy.shots, freq);
        for (std::size_t i = 0; i < freq.size(); ++i)
          freq[i] = static_cast<double>(counts[i]) / static_cast<double>(policy.shots);
      }
      if (mitigation) freq = mitigate(*mitigation, freq).probabilities;
      for (std::size_t idx : group.member_terms)
        result.energy += h_.terms()[idx].coefficient *
                         term_expectation(freq, h_.terms()[idx], group);
      result.group_probabilities.emplace_back(group, std::move(freq));
    }
    return result;
  }

  /// Circuit executions consumed by one estimate() call under a sampled
  /// policy: every group is measured with the full shot budget.
  std::uint64_t executions_per_estimate(const ShotPolicy& policy) const {
    return policy.sampled_mode() ? policy.shots * groups_.size() : 0;
  }

 private:
  void build_channel_cache() {
    const auto& cal = *noise_.calibration;
    ry_channels_.resize(spec_.num_qubits);
    for (std::size_t k = 0; k < spec_.num_qubits; ++k)
      ry_channels_[k] = gate_channel(cal, Gate::ry(0.0, k));
    if (spec_.form == AnsatzForm::RyRz) {
      rz_channels_.resize(spec_.num_qubits);
      for (std::size_t k = 0; k < spec_.num_qubits; ++k)
        rz_channels_[k] = gate_channel(cal, Gate::rz(0.0, k));
    }
    if (spec_.num_qubits >= 2) {
      cnot_channels_.resize(spec_.num_qubits - 1);
      for (std::size_t k = 0; k + 1 < spec_.num_qubits; ++k)
        cnot_channels_[k] = gate_channel(cal, Gate::cnot(k, k + 1));
    }
  }

  void apply_with_noise(QuantumState& state, const Gate& g) const {
    state.apply_gate(g);
    if (!noise_.gate_noise()) return;
    const std::vector<ChannelStage>* stages = nullptr;
    switch (g.kind) {
      case Gate::Kind::Ry: stages = &ry_channels_[g.target]; break;
      case Gate::Kind::Rz: stages = &rz_channels_[g.target]; break;
      case Gate::Kind::Cnot: stages = &cnot_channels_[g.control]; break;
      case Gate::Kind::X: break;
    }
    if (stages) {
      for (const auto& stage : *stages) state.apply_channel(stage.kraus, stage.qubits);
    } else {
      for (const auto& stage : gate_channel(*noise_.calibration, g))
        state.apply_channel(stage.kraus, stage.qubits);
    }
  }

  PauliSum h_;
  AnsatzSpec spec_;
  NoiseConfig noise_;
  std::vector<MeasurementGroup> groups_;
  double identity_ = 0.0;
  std::optional<ConfusionMatrix> confusion_;
  std::vector<std::vector<ChannelStage>> ry_channels_;
  std::vector<std::vector<ChannelStage>> rz_channels_;
  std::vector<std::vector<ChannelStage>> cnot_channels_;
};

/// One-shot convenience wrapper over EnergyEstimator.
inline EstimationResult estimate_energy(const PauliSum& h, const AnsatzSpec& spec,
                                        std::span<const double> theta, const NoiseConfig& noise,
                                        const ShotPolicy& policy, Rng& rng) {
  return EnergyEstimator(h, spec, noise).estimate(theta, policy, rng);
}

}  // namespace vqelab
