// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "tptnd/rational.h"

namespace tptnd {

// Realization of the trust threshold: interval membership under an exact
// binomial or Wald interval, or a literal distance bound.
struct ThresholdStrategy {
  enum class Kind { ExactBinomial, NormalApprox, FixedEpsilon };

  Kind kind = Kind::ExactBinomial;
  Rational param = Rational(19, 20);  // level, or epsilon for FixedEpsilon

  static ThresholdStrategy exact(Rational level);
  static ThresholdStrategy wald(Rational level);
  static ThresholdStrategy epsilon(Rational eps);
  // "exact:0.95", "wald:0.9", "eps:0.05"; throws Error(StrategyError).
  static ThresholdStrategy parse(std::string_view spec);

  std::string str() const;
  bool operator==(const ThresholdStrategy&) const = default;
};

// Likelihood used by maximum-likelihood contraction.
enum class MlMode {
  CountExponent,  // x^k (1-x)^(n-k)
  AsPrinted,      // x^(f/n) (1-x)^(1-f/n) with f = k/n
};

}  // namespace tptnd
