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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqelab/spectrum.hpp"

namespace vqelab {

/// Jaccard-Tanimoto index of two non-negative vectors:
/// sum_i min(x_i, y_i) / sum_i max(x_i, y_i). Defined as 1 when both vectors
/// vanish (cannot happen for valid probability vectors).
inline double jaccard_tanimoto(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("jaccard_tanimoto: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::min(x[i], y[i]);
    den += std::max(x[i], y[i]);
  }
  return den > 0.0 ? num / den : 1.0;
}

/// Cosine of the angle between the two vectors: (x.y)/(|x||y|).
inline double normalized_scalar(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("normalized_scalar: length mismatch");
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx <= 0.0 || ny <= 0.0) throw std::invalid_argument("normalized_scalar: zero vector");
  // sqrt of the product keeps the self-pair exactly 1
  return dot / std::sqrt(nx * ny);
}

enum class SimilarityMeasure { JaccardTanimoto, NormalizedScalar };

inline SimilarityMeasure measure_from_string(const std::string& s) {
  if (s == "jt") return SimilarityMeasure::JaccardTanimoto;
  if (s == "scalar") return SimilarityMeasure::NormalizedScalar;
  throw std::invalid_argument("similarity measure must be jt|scalar");
}

inline double similarity(SimilarityMeasure m, std::span<const double> x,
                         std::span<const double> y) {
  return m == SimilarityMeasure::JaccardTanimoto ? jaccard_tanimoto(x, y)
                                                 : normalized_scalar(x, y);
}

/// For every vector in the set: the arithmetic mean of its similarity to all
/// vectors of the set, the self-pair included.
inline std::vector<double> averaged_similarity(const std::vector<std::vector<double>>& set,
                                               SimilarityMeasure measure) {
  if (set.empty()) throw std::invalid_argument("averaged_similarity: empty set");
  const std::size_t n = set.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += similarity(measure, set[i], set[j]);
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

enum class TrialClass { GroundLike, Excited, Erroneous };

inline const char* to_string(TrialClass c) {
  switch (c) {
    case TrialClass::GroundLike: return "ground";
    case TrialClass::Excited: return "excited";
    case TrialClass::Erroneous: return "erroneous";
  }
  return "erroneous";
}

struct ClassificationConfig {
  double theta_high = 0.5;        // minimum averaged similarity for ground-like
  double theta_low = 0.2;         // maximum averaged similarity for excited
  double ground_below = 0.005;    // band extends [E0 - below, E0 + above]
  double ground_above = 0.17;
  double excited_low = -1.30;     // absolute Hartree band for excited states
  double excited_high = -1.10;
};

/// Labels each trial from its energy and its averaged similarity (circuit-0
/// vectors by convention): ground-like when the energy sits in the ground
/// band and the similarity is high, excited when the energy sits in the
/// excited band and the similarity is low, erroneous otherwise.
inline std::vector<TrialClass> classify(std::span<const double> energies,
                                        std::span<const double> averaged,
                                        const Spectrum& spectrum,
                                        const ClassificationConfig& config = {}) {
  if (energies.size() != averaged.size())
    throw std::invalid_argument("classify: energies/similarities length mismatch");
  const double e0 = spectrum.ground_energy;
  std::vector<TrialClass> out(energies.size(), TrialClass::Erroneous);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double e = energies[i];
    const bool in_ground = e >= e0 - config.ground_below && e <= e0 + config.ground_above;
    const bool in_excited = e >= config.excited_low && e <= config.excited_high;
    if (in_ground && averaged[i] >= config.theta_high) {
      out[i] = TrialClass::GroundLike;
    } else if (in_excited && averaged[i] <= config.theta_low) {
      out[i] = TrialClass::Excited;
    }
  }
  return out;
}

struct SimilarityReport {
  std::size_t trial = 0;
  double energy = 0.0;
  double averaged_similarity = 0.0;
  TrialClass label = TrialClass::Erroneous;
};

}  // namespace vqelab
