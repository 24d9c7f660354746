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

#include <algorithm>
#include <cmath>

#include "vqelab/estimator.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/spsa.hpp"

using namespace vqelab;

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("perturbation draws", "[spsa]") {
  Rng rng(3);
  const auto d = perturbation(16, rng);
  REQUIRE(d.size() == 16);
  for (double v : d) CHECK((v == 1.0 || v == -1.0));

  Rng a(5), b(5);
  CHECK(perturbation(8, a) == perturbation(8, b));

  Rng big(9);
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += big.sign();
  mean /= n;
  CHECK(std::abs(mean) < 0.01);
}

TEST_CASE("gradient estimates on simple objectives", "[spsa]") {
  const std::vector<double> b = {1.0, -2.0, 0.5};
  const Objective linear = [&](std::span<const double> th) {
    double s = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) s += b[i] * th[i];
    return s;
  };
  const std::vector<double> theta = {0.2, 0.4, -0.1};
  const std::vector<double> delta = {1.0, -1.0, 1.0};
  const auto g = gradient_estimate(linear, theta, 0.05, delta);
  // f(th + c d) - f(th - c d) = 2c (b.d), so g = (b.d) * d
  const double bd = 1.0 * 1.0 + (-2.0) * (-1.0) + 0.5 * 1.0;
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(g[i] - bd * delta[i]) < 1e-12);

  // averaging over random directions recovers the true gradient
  Rng rng(31);
  std::vector<double> avg(3, 0.0);
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const auto d = perturbation(3, rng);
    const auto gr = gradient_estimate(linear, theta, 0.05, d);
    for (std::size_t i = 0; i < 3; ++i) avg[i] += gr[i] / reps;
  }
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(avg[i] - b[i]) < 0.05);

  const Objective constant = [](std::span<const double>) { return 4.2; };
  for (double v : gradient_estimate(constant, theta, 0.1, delta)) CHECK(v == 0.0);

  const Objective square0 = [](std::span<const double> th) { return th[0] * th[0]; };
  const std::vector<double> origin = {0.0};
  const std::vector<double> d1 = {1.0};
  for (double v : gradient_estimate(square0, origin, 0.1, d1)) CHECK(v == 0.0);
}

TEST_CASE("calibration step counts", "[spsa]") {
  SpsaConfig cfg;
  cfg.maxiter = 1000;
  CHECK(cfg.calibration_steps() == 25);
  cfg.maxiter = 50;
  CHECK(cfg.calibration_steps() == 10);
  cfg.maxiter = 124;
  CHECK(cfg.calibration_steps() == 24);
  cfg.maxiter = 4;
  CHECK(cfg.calibration_steps() == 0);
}

TEST_CASE("objective call accounting is exact", "[spsa]") {
  std::size_t calls = 0;
  const Objective f = [&](std::span<const double> th) {
    ++calls;
    double s = 0.0;
    for (double x : th) s += x * x;
    return s;
  };
  SpsaConfig cfg;
  cfg.maxiter = 100;
  Rng rng(2);
  const std::vector<double> theta0 = {0.5, 0.5, 0.5, 0.5};
  const auto trace = minimize(f, theta0, cfg, rng);
  CHECK(calls == 2 * cfg.calibration_steps() + 2 * cfg.maxiter);
  CHECK(trace.objective_evaluations == calls);
  CHECK(trace.iterations.size() == cfg.maxiter);
}

TEST_CASE("quadratic bowl converges for most seeds", "[spsa]") {
  const Objective f = [](std::span<const double> th) {
    double s = 0.0;
    for (double x : th) s += x * x;
    return s;
  };
  SpsaConfig cfg;
  cfg.maxiter = 100;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(1234, seed));
    std::vector<double> theta0 = {0.5, -0.5, 0.5, -0.5};
    const double scale = 1.0 / norm2(theta0);
    for (auto& v : theta0) v *= scale;  // ||theta0|| = 1
    const auto trace = minimize(f, theta0, cfg, rng);
    if (norm2(trace.final_theta) < 0.1) ++good;
  }
  CHECK(good >= 90);
}

TEST_CASE("fixed seed reproduces the trace bit for bit", "[spsa]") {
  const Objective f = [](std::span<const double> th) {
    double s = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) s += (th[i] - 0.2 * i) * (th[i] - 0.2 * i);
    return s;
  };
  SpsaConfig cfg;
  cfg.maxiter = 60;
  Rng a(77), b(77);
  const std::vector<double> theta0 = {1.0, -1.0, 0.3};
  const auto ta = minimize(f, theta0, cfg, a);
  const auto tb = minimize(f, theta0, cfg, b);
  CHECK(ta.final_theta == tb.final_theta);
  CHECK(ta.calibrated_a == tb.calibrated_a);
  REQUIRE(ta.iterations.size() == tb.iterations.size());
  for (std::size_t k = 0; k < ta.iterations.size(); ++k) {
    CHECK(ta.iterations[k].f_plus == tb.iterations[k].f_plus);
    CHECK(ta.iterations[k].f_minus == tb.iterations[k].f_minus);
  }
}

TEST_CASE("median final energy improves with the iteration budget", "[spsa][slow]") {
  const PauliSum h = builtin_hamiltonian(2);
  const AnsatzSpec spec{AnsatzForm::Ry, 2, 1};
  const EnergyEstimator estimator(h, spec, {});

  auto median_for = [&](std::size_t maxiter, std::uint64_t seed_base) {
    std::vector<double> finals;
    for (std::uint64_t t = 0; t < 100; ++t) {
      Rng rng(derive_seed(seed_base, t));
      const auto theta0 = random_parameters(spec, rng);
      const Objective f = [&](std::span<const double> th) {
        return estimator.estimate(th, ShotPolicy::exact(), rng).energy;
      };
      SpsaConfig cfg;
      cfg.maxiter = maxiter;
      const auto trace = minimize(f, theta0, cfg, rng);
      finals.push_back(estimator.estimate(trace.final_theta, ShotPolicy::exact(), rng).energy);
    }
    std::nth_element(finals.begin(), finals.begin() + 50, finals.end());
    return finals[50];
  };

  const double m50 = median_for(50, 101);
  const double m100 = median_for(100, 101);
  const double m200 = median_for(200, 101);
  CHECK(m100 <= m50);
  CHECK(m200 <= m100);
}
