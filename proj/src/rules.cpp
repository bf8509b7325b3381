// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/rules.h"

#include <array>
#include <string>

namespace tptnd {
namespace {

struct RuleInfo {
  RuleId id;
  std::string_view name;
  Arity arity;
  RuleFamily family;
};

constexpr int kMany = -1;

constexpr std::array kRules = {
    RuleInfo{RuleId::Base, "base", {0, 0}, RuleFamily::Distribution},
    RuleInfo{RuleId::Extend, "extend", {1, 1}, RuleFamily::Distribution},
    RuleInfo{RuleId::ExtendDet, "extend_det", {1, 1}, RuleFamily::Distribution},
    RuleInfo{RuleId::Unknown, "unknown", {0, 0}, RuleFamily::Distribution},
    RuleInfo{RuleId::Identity1, "identity1", {0, 0}, RuleFamily::Variable},
    RuleInfo{RuleId::Identity2, "identity2", {0, 0}, RuleFamily::Variable},
    RuleInfo{RuleId::Bot, "bot", {1, 1}, RuleFamily::Variable},
    RuleInfo{RuleId::VarIProd, "var_I*", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarEProdL, "var_E*L", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarEProdR, "var_E*R", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarISum, "var_I+", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarESumL, "var_E+L", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarESumR, "var_E+R", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::VarIArrow, "var_I->", {1, 1}, RuleFamily::Variable},
    RuleInfo{RuleId::VarEArrow, "var_E->", {2, 2}, RuleFamily::Variable},
    RuleInfo{RuleId::Experiment, "experiment", {0, 0}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpIProd, "exp_I*", {2, 2}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpEProdL, "exp_E*L", {1, 1}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpEProdR, "exp_E*R", {1, 1}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpISum, "exp_I+", {1, 1}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpESumL, "exp_E+L", {2, 2}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpESumR, "exp_E+R", {2, 2}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpIArrow, "exp_I->", {1, 1}, RuleFamily::Experiment},
    RuleInfo{RuleId::ExpEArrow, "exp_E->", {2, 2}, RuleFamily::Experiment},
    RuleInfo{RuleId::Expectation, "expectation", {0, 0}, RuleFamily::Sampling},
    RuleInfo{RuleId::Sampling, "sampling", {1, kMany}, RuleFamily::Sampling},
    RuleInfo{RuleId::Update, "update", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampISum, "samp_I+", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampESumL, "samp_E+L", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampESumR, "samp_E+R", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampIProd, "samp_I*", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampEProdL, "samp_E*L", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampEProdR, "samp_E*R", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampIArrow, "samp_I->", {1, 1}, RuleFamily::Sampling},
    RuleInfo{RuleId::SampEArrow, "samp_E->", {2, 2}, RuleFamily::Sampling},
    RuleInfo{RuleId::BayesI, "bayes_I", {1, kMany}, RuleFamily::Bayes},
    RuleInfo{RuleId::BayesE, "bayes_E", {2, 2}, RuleFamily::Bayes},
    RuleInfo{RuleId::TrustI, "trust_I", {2, 2}, RuleFamily::Trust},
    RuleInfo{RuleId::TrustE, "trust_E", {1, 1}, RuleFamily::Trust},
    RuleInfo{RuleId::UTrustI, "utrust_I", {2, 2}, RuleFamily::Trust},
    RuleInfo{RuleId::UTrustE, "utrust_E", {1, 1}, RuleFamily::Trust},
    RuleInfo{RuleId::Weakening, "weakening", {2, 2}, RuleFamily::Structural},
    RuleInfo{RuleId::Contraction, "contraction", {1, 1}, RuleFamily::Structural},
    RuleInfo{RuleId::Cut, "cut", {2, 2}, RuleFamily::Structural},
};

constexpr std::array<RuleId, kRules.size()> make_ids() {
  std::array<RuleId, kRules.size()> ids{};
  for (std::size_t i = 0; i < kRules.size(); ++i) ids[i] = kRules[i].id;
  return ids;
}

constexpr auto kIds = make_ids();

const RuleInfo& info(RuleId rule) {
  return kRules[static_cast<std::size_t>(rule)];
}

std::string normalize(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size();) {
    if (name.substr(i, 2) == "\xC3\x97") {  // ×
      out += '*';
      i += 2;
    } else if (name.substr(i, 3) == "\xE2\x86\x92") {  // →
      out += "->";
      i += 3;
    } else {
      out += name[i++];
    }
  }
  return out;
}

}  // namespace

std::span<const RuleId> all_rules() { return kIds; }

std::string_view rule_name(RuleId rule) { return info(rule).name; }

std::optional<RuleId> rule_from_name(std::string_view raw) {
  std::string name = normalize(raw);
  for (const auto& r : kRules) {
    if (r.name == name) return r.id;
  }
  // "var_Ix" style product spelling.
  for (const auto& r : kRules) {
    std::string alt(r.name);
    if (auto star = alt.find('*'); star != std::string::npos) {
      alt[star] = 'x';
      if (alt == name) return r.id;
    }
  }
  if (name == "IT") return RuleId::TrustI;
  if (name == "ET") return RuleId::TrustE;
  if (name == "IUT") return RuleId::UTrustI;
  if (name == "EUT") return RuleId::UTrustE;
  if (name == "I-P") return RuleId::BayesI;
  if (name == "E-P") return RuleId::BayesE;
  return std::nullopt;
}

Arity rule_arity(RuleId rule) { return info(rule).arity; }

RuleFamily rule_family(RuleId rule) { return info(rule).family; }

}  // namespace tptnd
