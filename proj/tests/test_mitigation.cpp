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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vqelab/mitigation.hpp"
#include "vqelab/rng.hpp"

using namespace vqelab;

namespace {

DeviceCalibration symmetric_readout_calibration(std::size_t qubits, double flip) {
  DeviceCalibration cal;
  cal.backend = "test";
  for (std::size_t i = 0; i < qubits; ++i) cal.qubits.push_back({100.0, 100.0, flip, flip});
  cal.gates["x"] = {1, 0.0, 0.0};
  cal.validate();
  return cal;
}

MitigationModel analytic_model(std::size_t qubits, double flip) {
  const DeviceCalibration cal = symmetric_readout_calibration(qubits, flip);
  MitigationModel model;
  ConfusionMatrix c = readout_confusion(cal, qubits);
  std::vector<std::vector<double>> cols(c.dim(), std::vector<double>(c.dim()));
  for (std::size_t j = 0; j < c.dim(); ++j)
    for (std::size_t i = 0; i < c.dim(); ++i) cols[j][i] = c.entry(i, j);
  model.calibration_matrix = ConfusionMatrix::from_columns(cols);
  model.shots_per_column = 0;
  model.lipschitz = std::max(detail::lipschitz_constant(model.calibration_matrix), 1e-12);
  return model;
}

}  // namespace

TEST_CASE("identity model returns the input", "[mitigation]") {
  MitigationModel model;
  model.calibration_matrix = ConfusionMatrix::identity(2);
  const std::vector<double> p = {0.4, 0.3, 0.2, 0.1};
  const auto out = mitigate(model, p).probabilities;
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out[i] - p[i]) < 1e-9);
}

TEST_CASE("consistent data is recovered exactly", "[mitigation]") {
  const MitigationModel model = analytic_model(2, 0.05);
  const std::vector<double> p_true = {0.62, 0.05, 0.03, 0.30};
  const auto noisy = model.calibration_matrix.apply(p_true);
  const auto recovered = mitigate(model, noisy).probabilities;
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(recovered[i] - p_true[i]) < 1e-6);
}

TEST_CASE("clamped negative inputs still produce a simplex point", "[mitigation]") {
  const MitigationModel model = analytic_model(1, 0.1);
  const std::vector<double> p = {1.0 + 1e-12, -1e-12};
  const auto out = mitigate(model, p).probabilities;
  double sum = 0.0;
  for (double v : out) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("outputs are valid probability vectors for arbitrary inputs", "[mitigation]") {
  Rng rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    const MitigationModel model = analytic_model(2, rng.uniform(0.0, 0.2));
    std::vector<double> p(4);
    double s = 0.0;
    for (auto& v : p) {
      v = rng.uniform(0.0, 1.0);
      s += v;
    }
    for (auto& v : p) v /= s;
    const auto out = mitigate(model, p).probabilities;
    double sum = 0.0;
    for (double v : out) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("noiseless calibration measures a near-identity matrix", "[mitigation]") {
  NoiseConfig none;
  Rng rng(7);
  const MitigationModel model = build_mitigation(none, 2, 4096, rng);
  CHECK(model.shots_per_column == 4096);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(model.calibration_matrix.entry(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
  CHECK(!model.ill_conditioned());

  // mitigation through a measured near-identity stays within sampling noise
  const std::vector<double> p = {0.5, 0.25, 0.125, 0.125};
  const auto out = mitigate(model, p).probabilities;
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out[i] - p[i]) < 1e-9);
}

TEST_CASE("measured columns approach the analytic confusion matrix", "[mitigation]") {
  NoiseConfig noise;
  noise.error_class = ErrorClass::ReadoutOnly;
  noise.calibration = symmetric_readout_calibration(1, 0.1);
  Rng rng(19);
  const MitigationModel model = build_mitigation(noise, 1, 100000, rng);
  CHECK(std::abs(model.calibration_matrix.entry(0, 0) - 0.9) < 0.01);
  CHECK(std::abs(model.calibration_matrix.entry(1, 0) - 0.1) < 0.01);
  CHECK(std::abs(model.calibration_matrix.entry(0, 1) - 0.1) < 0.01);
  CHECK(std::abs(model.calibration_matrix.entry(1, 1) - 0.9) < 0.01);

  // empirical columns sum to one exactly
  for (std::size_t j = 0; j < 2; ++j) {
    double col = model.calibration_matrix.entry(0, j) + model.calibration_matrix.entry(1, j);
    CHECK(std::abs(col - 1.0) < 1e-15);
  }
}

TEST_CASE("build_mitigation rejects zero shots", "[mitigation]") {
  NoiseConfig none;
  Rng rng(1);
  CHECK_THROWS_AS(build_mitigation(none, 2, 0, rng), std::invalid_argument);
}
