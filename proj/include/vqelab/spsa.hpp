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

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/rng.hpp"

namespace vqelab {

/// Simultaneous perturbation stochastic approximation. Two objective
/// evaluations per iteration along a random ±1 direction; gains follow the
/// standard power-law schedules a_k = a/(k+1+A)^alpha, c_k = c/(k+1)^gamma.
struct SpsaConfig {
  std::size_t maxiter = 100;
  double a = 0.0;  // 0 means: calibrate from the objective (see minimize)
  double c = 0.1;  // perturbation magnitude, radians
  double alpha = 0.602;
  double gamma = 0.101;
  double stability = 0.0;  // the constant A
  double target_step = 2.0 * std::numbers::pi / 10.0;  // calibrated first-step size

  /// Calibration phase length: min{maxiter/5, 25} (integer floor).
  std::size_t calibration_steps() const { return std::min<std::size_t>(maxiter / 5, 25); }

  void validate() const {
    if (maxiter < 1) throw std::invalid_argument("maxiter must be >= 1");
    if (c <= 0.0) throw std::invalid_argument("perturbation c must be positive");
    if (a < 0.0) throw std::invalid_argument("gain a must be non-negative");
    if (alpha <= 0.0 || alpha > 1.0 || gamma <= 0.0 || gamma > 1.0)
      throw std::invalid_argument("decay exponents must lie in (0, 1]");
    if (stability < 0.0) throw std::invalid_argument("stability constant must be >= 0");
  }
};

struct SpsaIteration {
  std::size_t k = 0;
  std::vector<double> theta;  // iterate before the update
  double f_plus = 0.0;
  double f_minus = 0.0;
};

struct OptimizationTrace {
  std::vector<SpsaIteration> iterations;
  std::vector<double> final_theta;
  std::uint64_t objective_evaluations = 0;  // 2*calibration_steps + 2*maxiter
  double calibrated_a = 0.0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Random ±1 direction (Bernoulli components).
inline std::vector<double> perturbation(std::size_t dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("perturbation dimension must be >= 1");
  std::vector<double> delta(dim);
  for (auto& d : delta) d = rng.sign();
  return delta;
}

/// g = [f(theta + c*delta) - f(theta - c*delta)] / (2c) * delta
inline std::vector<double> gradient_estimate(const Objective& f, std::span<const double> theta,
                                             double ck, std::span<const double> delta) {
  if (ck <= 0.0) throw std::invalid_argument("perturbation step must be positive");
  if (theta.size() != delta.size()) throw std::invalid_argument("theta/delta length mismatch");
  std::vector<double> plus(theta.begin(), theta.end()), minus(theta.begin(), theta.end());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    plus[i] += ck * delta[i];
    minus[i] -= ck * delta[i];
  }
  const double df = f(plus) - f(minus);
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) g[i] = df / (2.0 * ck) * delta[i];
  return g;
}

/// Runs the calibration phase (skipped when config.a is set explicitly), then
/// maxiter update steps. The final iterate is returned as-is; no extra
/// objective call is spent on it.
inline OptimizationTrace minimize(const Objective& f, std::span<const double> theta0,
                                  const SpsaConfig& config, Rng& rng) {
  config.validate();
  const std::size_t dim = theta0.size();
  if (dim < 1) throw std::invalid_argument("empty parameter vector");

  OptimizationTrace trace;
  std::vector<double> theta(theta0.begin(), theta0.end());
  std::vector<double> plus(dim), minus(dim);

  double a = config.a;
  const std::size_t ncal = config.calibration_steps();
  if (a <= 0.0) {
    // Estimate the objective's response to the perturbation scale and choose
    // a so the first update moves each component by about target_step.
    double avg_delta_f = 0.0;
    for (std::size_t s = 0; s < ncal; ++s) {
      const auto delta = perturbation(dim, rng);
      for (std::size_t i = 0; i < dim; ++i) {
        plus[i] = theta[i] + config.c * delta[i];
        minus[i] = theta[i] - config.c * delta[i];
      }
      avg_delta_f += std::abs(f(plus) - f(minus));
      trace.objective_evaluations += 2;
    }
    avg_delta_f = ncal > 0 ? avg_delta_f / static_cast<double>(ncal) : 0.0;
    if (avg_delta_f < 1e-12) avg_delta_f = 1e-12;
    a = config.target_step * 2.0 * config.c / avg_delta_f *
        std::pow(config.stability + 1.0, config.alpha);
  }
  trace.calibrated_a = a;

  trace.iterations.reserve(config.maxiter);
  for (std::size_t k = 0; k < config.maxiter; ++k) {
    const double ak = a / std::pow(static_cast<double>(k) + 1.0 + config.stability, config.alpha);
    const double ck = config.c / std::pow(static_cast<double>(k) + 1.0, config.gamma);
    const auto delta = perturbation(dim, rng);
    for (std::size_t i = 0; i < dim; ++i) {
      plus[i] = theta[i] + ck * delta[i];
      minus[i] = theta[i] - ck * delta[i];
    }
    const double f_plus = f(plus);
    const double f_minus = f(minus);
    trace.objective_evaluations += 2;
    trace.iterations.push_back({k, theta, f_plus, f_minus});
    const double scale = ak * (f_plus - f_minus) / (2.0 * ck);
    for (std::size_t i = 0; i < dim; ++i) theta[i] -= scale * delta[i];
  }
  trace.final_theta = std::move(theta);
  return trace;
}

}  // namespace vqelab
