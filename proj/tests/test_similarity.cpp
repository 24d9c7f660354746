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

#include "vqelab/pauli.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/similarity.hpp"
#include "vqelab/spectrum.hpp"

using namespace vqelab;

namespace {

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = -std::log(1.0 - rng.uniform01());  // exponential spacings
    s += x;
  }
  for (auto& x : v) x /= s;
  return v;
}

/// Probability vector near a target profile: mix with uniform jitter.
std::vector<double> jittered(const std::vector<double>& profile, double amount, Rng& rng) {
  std::vector<double> v = profile;
  const auto noise = random_simplex(profile.size(), rng);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = (1.0 - amount) * v[i] + amount * noise[i];
    s += v[i];
  }
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("Jaccard-Tanimoto hand values", "[similarity]") {
  const std::vector<double> x = {0.5, 0.5, 0.0, 0.0};
  const std::vector<double> y = {0.5, 0.0, 0.5, 0.0};
  CHECK(std::abs(jaccard_tanimoto(x, y) - 1.0 / 3.0) < 1e-12);
  CHECK(jaccard_tanimoto(x, x) == 1.0);

  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> b = {0.0, 1.0};
  CHECK(jaccard_tanimoto(a, b) == 0.0);

  const std::vector<double> bad = {0.5, 0.5, 0.0};
  CHECK_THROWS_AS(jaccard_tanimoto(x, bad), std::invalid_argument);
}

TEST_CASE("normalized scalar product hand values", "[similarity]") {
  const std::size_t n = 16;
  const std::vector<double> uniform(n, 1.0 / n);
  std::vector<double> basis(n, 0.0);
  basis[0] = 1.0;
  CHECK(std::abs(normalized_scalar(uniform, basis) - 1.0 / std::sqrt(double(n))) < 1e-12);
  CHECK(std::abs(normalized_scalar(uniform, uniform) - 1.0) < 1e-12);

  const std::vector<double> a = {1.0, 0.0};
  const std::vector<double> b = {0.0, 1.0};
  CHECK(normalized_scalar(a, b) == 0.0);
  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS(normalized_scalar(a, zero), std::invalid_argument);
}

TEST_CASE("measures are symmetric, bounded, and exact at equality", "[similarity]") {
  Rng rng(41);
  for (int rep = 0; rep < 10000; ++rep) {
    const auto x = random_simplex(8, rng);
    const auto y = random_simplex(8, rng);
    const double jt = jaccard_tanimoto(x, y);
    const double sc = normalized_scalar(x, y);
    CHECK(jt == jaccard_tanimoto(y, x));
    CHECK(sc == normalized_scalar(y, x));
    CHECK(jt >= 0.0);
    CHECK(jt <= 1.0);
    CHECK(sc >= 0.0);
    CHECK(sc <= 1.0 + 1e-12);
    CHECK(jaccard_tanimoto(x, x) == 1.0);
  }
}

TEST_CASE("J-T reaches 1 only at equality", "[similarity]") {
  Rng rng(43);
  for (int rep = 0; rep < 1000; ++rep) {
    auto x = random_simplex(6, rng);
    auto y = x;
    y[0] += 0.01;
    y[1] -= std::min(0.01, y[1]);
    double s = 0.0;
    for (double v : y) s += v;
    for (auto& v : y) v /= s;
    CHECK(jaccard_tanimoto(x, y) < 1.0);
  }
}

TEST_CASE("averaged similarity over small sets", "[similarity]") {
  const std::vector<double> v = {0.25, 0.75};
  const std::vector<std::vector<double>> same = {v, v, v};
  for (double a : averaged_similarity(same, SimilarityMeasure::JaccardTanimoto))
    CHECK(a == 1.0);

  const std::vector<std::vector<double>> disjoint = {{1.0, 0.0}, {0.0, 1.0}};
  for (double a : averaged_similarity(disjoint, SimilarityMeasure::JaccardTanimoto))
    CHECK(std::abs(a - 0.5) < 1e-15);

  const std::vector<std::vector<double>> single = {v};
  CHECK(averaged_similarity(single, SimilarityMeasure::NormalizedScalar)[0] == 1.0);

  CHECK_THROWS_AS(averaged_similarity({}, SimilarityMeasure::JaccardTanimoto),
                  std::invalid_argument);
}

TEST_CASE("classification of a synthetic trial population", "[similarity]") {
  const PauliSum h = builtin_hamiltonian(4);
  const Spectrum spectrum = diagonalize(h);

  // circuit-0 profile of the ground state and of an excited-sector state
  std::vector<double> ground_profile(16, 0.0);
  {
    const auto gs = ground_eigenvector(h);
    for (std::size_t i = 0; i < 16; ++i) ground_profile[i] = std::norm(gs[i]);
  }
  std::vector<double> excited_profile(16, 0.0);
  excited_profile[2] = 0.85;  // support disjoint from the ground peak
  excited_profile[8] = 0.15;

  Rng rng(59);
  std::vector<std::vector<double>> vectors;
  std::vector<double> energies;
  std::vector<std::size_t> kind;  // 0 ground, 1 excited, 2 mixed
  for (int i = 0; i < 90; ++i) {
    vectors.push_back(jittered(ground_profile, 0.05, rng));
    energies.push_back(spectrum.ground_energy + rng.uniform(0.0, 0.1));
    kind.push_back(0);
  }
  for (int i = 0; i < 5; ++i) {
    vectors.push_back(jittered(excited_profile, 0.05, rng));
    energies.push_back(-1.25 + rng.uniform(-0.02, 0.02));
    kind.push_back(1);
  }
  for (int i = 0; i < 5; ++i) {
    vectors.push_back(random_simplex(16, rng));
    energies.push_back(-1.55 + rng.uniform(-0.05, 0.05));
    kind.push_back(2);
  }

  const auto averaged = averaged_similarity(vectors, SimilarityMeasure::JaccardTanimoto);
  const auto labels = classify(energies, averaged, spectrum);

  double min_ground = 1.0, max_excited = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (kind[i] == 0) {
      CHECK(labels[i] == TrialClass::GroundLike);
      min_ground = std::min(min_ground, averaged[i]);
    } else if (kind[i] == 1) {
      CHECK(labels[i] == TrialClass::Excited);
      max_excited = std::max(max_excited, averaged[i]);
    } else {
      CHECK(labels[i] == TrialClass::Erroneous);
    }
  }
  // the averaged similarity separates the populations by a wide margin
  CHECK(min_ground - max_excited >= 0.3);
}

TEST_CASE("classification examples", "[similarity]") {
  const Spectrum spectrum = diagonalize(builtin_hamiltonian(4));
  const std::vector<double> energies = {-1.86, -1.25, -1.5};
  const std::vector<double> averaged = {0.9, 0.05, 0.35};
  const auto labels = classify(energies, averaged, spectrum);
  CHECK(labels[0] == TrialClass::GroundLike);
  CHECK(labels[1] == TrialClass::Excited);
  CHECK(labels[2] == TrialClass::Erroneous);
}
