// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tptnd/rational.h"
#include "tptnd/strategy.h"

namespace tptnd {

struct ProbInterval {
  long double lo = 0;
  long double hi = 1;

  bool contains(long double x, long double tol = 0) const {
    return x >= lo - tol && x <= hi + tol;
  }
};

struct Hypothesis {
  Rational a;      // success probability
  Rational prior;  // b_i
};

}  // namespace tptnd

namespace tptnd::stats {

// C(n,k) p^k (1-p)^(n-k). Log space above n = 50. RangeError on bad input.
long double binom_pmf(std::int64_t k, std::int64_t n, long double p);
// P[X >= k] and P[X <= k] for X ~ Bin(n, p).
long double upper_tail(std::int64_t k, std::int64_t n, long double p);
long double lower_tail(std::int64_t k, std::int64_t n, long double p);

// Exact binomial interval by bisection on the tails; endpoints within 1e-9.
ProbInterval clopper_pearson(std::int64_t k, std::int64_t n, Rational level);
ProbInterval wald_interval(std::int64_t k, std::int64_t n, Rational level);
// Set of a accepted by the strategy for (k, n), clamped to [0,1].
ProbInterval acceptance_interval(const ThresholdStrategy& s, std::int64_t k,
                                 std::int64_t n);
bool accepts(const ThresholdStrategy& s, Rational a, std::int64_t k,
             std::int64_t n);

// Posterior of hypothesis i (zero-based) after k successes in n trials.
long double bayes_posterior(std::span<const Hypothesis> hyps, std::size_t i,
                            std::int64_t k, std::int64_t n);
std::vector<long double> bayes_posteriors(std::span<const Hypothesis> hyps,
                                          std::int64_t k, std::int64_t n);

long double ml_log_likelihood(Rational x, std::int64_t k, std::int64_t n,
                              MlMode mode);
// Argmax of the likelihood over the candidates, first listed on ties.
Rational ml_contract(std::span<const Rational> candidates, std::int64_t k,
                     std::int64_t n, MlMode mode = MlMode::CountExponent);
// Most likely point inside [lo, hi].
Rational ml_point_in_range(Rational lo, Rational hi, std::int64_t k,
                           std::int64_t n, MlMode mode = MlMode::CountExponent);

}  // namespace tptnd::stats
