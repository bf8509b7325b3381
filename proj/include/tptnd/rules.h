// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace tptnd {

enum class RuleId {
  // distribution construction
  Base, Extend, ExtendDet, Unknown,
  // random variables
  Identity1, Identity2, Bot,
  VarIProd, VarEProdL, VarEProdR, VarISum, VarESumL, VarESumR,
  VarIArrow, VarEArrow,
  // single experiments
  Experiment, ExpIProd, ExpEProdL, ExpEProdR, ExpISum, ExpESumL, ExpESumR,
  ExpIArrow, ExpEArrow,
  // expectation and sampling
  Expectation, Sampling, Update,
  SampISum, SampESumL, SampESumR, SampIProd, SampEProdL, SampEProdR,
  SampIArrow, SampEArrow,
  // prior update
  BayesI, BayesE,
  // trust
  TrustI, TrustE, UTrustI, UTrustE,
  // structural
  Weakening, Contraction, Cut,
};

enum class RuleFamily {
  Distribution, Variable, Experiment, Sampling, Bayes, Trust, Structural
};

struct Arity {
  int min;
  int max;  // -1 when unbounded
  bool admits(int n) const { return n >= min && (max < 0 || n <= max); }
};

std::span<const RuleId> all_rules();
// Canonical ASCII spelling used by the DSL, e.g. "var_I*", "samp_E->".
std::string_view rule_name(RuleId rule);
// Accepts canonical names and a few aliases (unicode ×/→, IT/IUT/ET/EUT,
// "x" for the product).
std::optional<RuleId> rule_from_name(std::string_view name);
Arity rule_arity(RuleId rule);
RuleFamily rule_family(RuleId rule);

}  // namespace tptnd
