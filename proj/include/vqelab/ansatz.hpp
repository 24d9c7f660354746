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

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqelab/rng.hpp"
#include "vqelab/state.hpp"

namespace vqelab {

enum class AnsatzForm { Ry, RyRz };

inline AnsatzForm ansatz_form_from_string(const std::string& s) {
  if (s == "ry") return AnsatzForm::Ry;
  if (s == "ryrz") return AnsatzForm::RyRz;
  throw std::invalid_argument("ansatz form must be ry|ryrz");
}

inline const char* to_string(AnsatzForm f) { return f == AnsatzForm::Ry ? "ry" : "ryrz"; }

/// Hardware-inspired variational circuit family: d+1 rotation layers
/// interleaved with d linear-chain CNOT layers.
struct AnsatzSpec {
  AnsatzForm form = AnsatzForm::Ry;
  std::size_t num_qubits = 2;
  std::size_t depth = 1;

  std::size_t parameter_count() const {
    const std::size_t per_layer = (form == AnsatzForm::RyRz ? 2 : 1) * num_qubits;
    return per_layer * (depth + 1);
  }

  void validate() const {
    if (num_qubits < 1) throw std::invalid_argument("ansatz needs at least one qubit");
    if (depth < 1) throw std::invalid_argument("ansatz depth must be >= 1");
  }
};

/// Gate sequence for the given parameters. Parameters are consumed
/// layer-major, qubit-minor, Ry before Rz within a qubit; each entangling
/// layer is CNOT(0->1), CNOT(1->2), ..., CNOT(q-2->q-1).
inline std::vector<Gate> build_circuit(const AnsatzSpec& spec, std::span<const double> theta) {
  spec.validate();
  if (theta.size() != spec.parameter_count())
    throw std::invalid_argument("parameter vector length " + std::to_string(theta.size()) +
                                " does not match ansatz parameter count " +
                                std::to_string(spec.parameter_count()));
  std::vector<Gate> gates;
  gates.reserve((spec.depth + 1) * spec.num_qubits * (spec.form == AnsatzForm::RyRz ? 2 : 1) +
                spec.depth * (spec.num_qubits - 1));
  std::size_t p = 0;
  for (std::size_t layer = 0; layer <= spec.depth; ++layer) {
    for (std::size_t k = 0; k < spec.num_qubits; ++k) {
      gates.push_back(Gate::ry(theta[p++], k));
      if (spec.form == AnsatzForm::RyRz) gates.push_back(Gate::rz(theta[p++], k));
    }
    if (layer < spec.depth) {
      for (std::size_t k = 0; k + 1 < spec.num_qubits; ++k) gates.push_back(Gate::cnot(k, k + 1));
    }
  }
  return gates;
}

/// i.i.d. uniform angles on [-pi, pi].
inline std::vector<double> random_parameters(const AnsatzSpec& spec, Rng& rng) {
  std::vector<double> theta(spec.parameter_count());
  for (auto& v : theta) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return theta;
}

}  // namespace vqelab
