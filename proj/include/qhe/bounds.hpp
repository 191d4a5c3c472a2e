// Copyright 2026 The qhegrid Authors
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
#include <optional>
#include <stdexcept>

#include "qhe/rng.hpp"

namespace qhe {

// P(all b copies miss at least one T teleportation) = (1 - 2^-t)^b;
// per-copy success is exactly 2^-t.
inline double exact_failure_prob(int b, int t) {
  if (b < 1 || t < 0) throw std::invalid_argument("need b >= 1, t >= 0");
  if (t == 0) return 0.0;
  return std::pow(1.0 - std::exp2(-t), b);
}

// Closed-form failure bound:
//   0 for t = 0, else exp(-b 2^(-2t+1) + sqrt(b) 2^(-t+2) - 2).
// Exceeds 1 for small b; reported as-is, never clamped.
inline double failure_delta_bound(int b, int t) {
  if (b < 1 || t < 0) throw std::invalid_argument("need b >= 1, t >= 0");
  if (t == 0) return 0.0;
  double expo = -b * std::exp2(-2 * t + 1) + std::sqrt(static_cast<double>(b)) * std::exp2(-t + 2) - 2.0;
  return std::exp(expo);
}

// Hoeffding tail on P(at least b-1 copies fail).
inline double hoeffding_failure_bound(int b, int t) {
  if (b < 1 || t < 1) throw std::invalid_argument("need b >= 1, t >= 1");
  double gap = (b - 1.0) - b * (1.0 - std::exp2(-t));
  return std::exp(-2.0 * gap * gap / b);
}

// Smallest b with b >= (sqrt(-ln(delta)/2) + 1)^2 * 2^(2t); guarantees at
// least one clean copy except with probability delta.
inline int min_copies(int t, double delta_target) {
  if (t < 1) throw std::invalid_argument("min_copies needs t >= 1");
  if (!(delta_target > 0.0 && delta_target < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  double root = std::sqrt(-std::log(delta_target) / 2.0) + 1.0;
  double bound = root * root * std::exp2(2 * t);
  int b = static_cast<int>(std::ceil(bound - 1e-12));
  if (exact_failure_prob(b, t) > delta_target)
    throw std::logic_error("min_copies postcondition violated");  // cannot happen per the tail bound
  return b;
}

// Fraction of trials in which every copy fails; each copy fails
// independently with probability 1 - 2^-t. Deterministic per seed.
inline double monte_carlo_failure(int b, int t, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (t == 0) return 0.0;
  const double fail_p = 1.0 - std::exp2(-t);
  Rng rng(seed);
  std::uint64_t all_failed = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    bool any_success = false;
    for (int beta = 0; beta < b; ++beta)
      if (rng.next_double() >= fail_p) {
        any_success = true;
        break;
      }
    // Copies after the first success are irrelevant to the outcome, so
    // skipping their draws keeps the estimate unbiased.
    all_failed += any_success ? 0 : 1;
  }
  return static_cast<double>(all_failed) / static_cast<double>(trials);
}

struct ReliabilityReport {
  int t = 0;
  int b = 0;
  double exact_failure = 0.0;
  double hoeffding_bound = 0.0;
  double delta_bound_value = 0.0;
  bool delta_bound_vacuous = false;  // bound >= 1 proves nothing
  bool hoeffding_vacuous = false;
  // The delta bound is only guaranteed to dominate the exact failure on the
  // directly validated region b >= min_copies(t, 1/2); outside it the
  // comparison is reported, not asserted.
  int delta_region_min_b = 0;
  bool delta_bound_applies = false;
  bool delta_bound_holds = false;
  std::optional<int> min_copies_for_target;
  double delta_target = 0.0;
  std::optional<double> empirical_failure;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

inline ReliabilityReport make_reliability_report(int b, int t, std::optional<double> delta_target = {},
                                                 std::uint64_t trials = 0, std::uint64_t seed = 0) {
  ReliabilityReport rep;
  rep.t = t;
  rep.b = b;
  rep.exact_failure = exact_failure_prob(b, t);
  rep.delta_bound_value = failure_delta_bound(b, t);
  rep.delta_bound_vacuous = t >= 1 && rep.delta_bound_value >= 1.0;
  if (t >= 1) {
    rep.hoeffding_bound = hoeffding_failure_bound(b, t);
    rep.hoeffding_vacuous = rep.hoeffding_bound >= 1.0;
    rep.delta_region_min_b = min_copies(t, 0.5);
    rep.delta_bound_applies = b >= rep.delta_region_min_b;
    rep.delta_bound_holds = rep.exact_failure <= rep.delta_bound_value;
  }
  if (delta_target) {
    rep.delta_target = *delta_target;
    rep.min_copies_for_target = min_copies(t, *delta_target);
  }
  if (trials > 0) {
    rep.trials = trials;
    rep.seed = seed;
    rep.empirical_failure = monte_carlo_failure(b, t, trials, seed);
  }
  return rep;
}

}  // namespace qhe
