// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/strategy.h"

#include "tptnd/error.h"

namespace tptnd {

ThresholdStrategy ThresholdStrategy::exact(Rational level) {
  if (level <= Rational(0) || level >= Rational(1)) {
    throw Error(ErrorKind::StrategyError, "level must lie in (0,1)");
  }
  return {Kind::ExactBinomial, level};
}

ThresholdStrategy ThresholdStrategy::wald(Rational level) {
  if (level <= Rational(0) || level >= Rational(1)) {
    throw Error(ErrorKind::StrategyError, "level must lie in (0,1)");
  }
  return {Kind::NormalApprox, level};
}

ThresholdStrategy ThresholdStrategy::epsilon(Rational eps) {
  if (!eps.is_probability()) {
    throw Error(ErrorKind::StrategyError, "epsilon must lie in [0,1]");
  }
  return {Kind::FixedEpsilon, eps};
}

ThresholdStrategy ThresholdStrategy::parse(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::StrategyError,
                "expected kind:value, got '" + std::string(spec) + "'");
  }
  std::string_view kind = spec.substr(0, colon);
  Rational value;
  try {
    value = Rational::parse(spec.substr(colon + 1));
  } catch (const Error& e) {
    throw Error(ErrorKind::StrategyError,
                "bad strategy value in '" + std::string(spec) + "'");
  }
  if (kind == "exact") return exact(value);
  if (kind == "wald") return wald(value);
  if (kind == "eps") return epsilon(value);
  throw Error(ErrorKind::StrategyError,
              "unknown strategy '" + std::string(kind) + "'");
}

std::string ThresholdStrategy::str() const {
  switch (kind) {
    case Kind::ExactBinomial: return "exact:" + param.str();
    case Kind::NormalApprox: return "wald:" + param.str();
    case Kind::FixedEpsilon: return "eps:" + param.str();
  }
  return "";
}

}  // namespace tptnd
