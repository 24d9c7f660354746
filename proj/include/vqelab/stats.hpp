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
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vqelab {

/// Closed-interval band membership with a representation guard well below
/// any physical tolerance in use.
inline bool within_band(double value, double reference, double band) {
  return std::abs(value - reference) <= band + 1e-12;
}

/// Linearly interpolated percentile of a sorted sample: position (n-1)*p.
inline double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Boxplot-style summary: quartiles by linear interpolation, Tukey fences at
/// 1.5 IQR, and the fraction within the closed accuracy band around the
/// reference energy, with its binomial standard error.
struct SummaryStats {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double fence_low = 0.0;
  double fence_high = 0.0;
  std::size_t outliers = 0;
  double pct_within = 0.0;  // percent in [reference - band, reference + band]
  double pct_stderr = 0.0;  // sqrt(p(1-p)/n) * 100
};

inline SummaryStats summarize(std::span<const double> values, double reference, double band) {
  if (values.empty()) throw std::invalid_argument("summarize: no successful records");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats s;
  s.n = sorted.size();
  s.q1 = percentile_sorted(sorted, 0.25);
  s.median = percentile_sorted(sorted, 0.50);
  s.q3 = percentile_sorted(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  s.fence_low = s.q1 - 1.5 * iqr;
  s.fence_high = s.q3 + 1.5 * iqr;

  std::size_t hits = 0;
  for (double v : sorted) {
    if (v < s.fence_low || v > s.fence_high) ++s.outliers;
    if (within_band(v, reference, band)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(s.n);
  s.pct_within = 100.0 * p;
  s.pct_stderr = 100.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(s.n));
  return s;
}

}  // namespace vqelab
