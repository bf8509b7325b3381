// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tptnd/distribution.h"
#include "tptnd/error.h"
#include "tptnd/strategy.h"
#include "tptnd/syntax.h"

namespace tptnd {

struct CheckFailure {
  std::string path;             // "/" for the root, "/0/1" for nested premises
  std::optional<RuleId> rule;   // empty for assumptions and file-level items
  ErrorKind kind = ErrorKind::ShapeError;
  std::string reason;           // "<Kind>: detail"
  bool operator==(const CheckFailure&) const = default;
};

struct CheckReport {
  std::vector<CheckFailure> failures;
  std::map<std::string, std::int64_t> stats;  // nodes per rule name
  std::int64_t open_assumptions = 0;
  std::int64_t derivations = 0;

  bool accepted() const { return failures.empty(); }
  // Concatenates failures and sums counters.
  CheckReport& merge(const CheckReport& other);
};

}  // namespace tptnd

namespace tptnd::checker {

// Validates every node of d. A node's local check runs even when one of its
// premises fails, so a report lists every broken step.
CheckReport check_derivation(const Derivation& d, const DistributionEnv& env,
                             const ThresholdStrategy& strategy = {});

// Builds the environment from the file's distribution items, validates them,
// resolves the contexts of standalone judgements and checks each derivation.
// Failure paths are prefixed with the item name, or "#i" when unnamed.
CheckReport check_file(const File& file, const ThresholdStrategy& strategy = {});

DistributionEnv environment(const File& file);

// Local checks of a single node; premises are taken as given. Each throws
// Error on failure.
void check_node(const Derivation& node, const DistributionEnv& env,
                const ThresholdStrategy& strategy = {});
void check_distribution_rule(const Derivation& node, const DistributionEnv& env);
void check_variable_rule(const Derivation& node, const DistributionEnv& env);
void check_experiment_rule(const Derivation& node, const DistributionEnv& env);
void check_sampling_rule(const Derivation& node, const DistributionEnv& env);
void check_bayes_rule(const Derivation& node, const DistributionEnv& env);
void check_trust_rule(const Derivation& node, const DistributionEnv& env,
                      const ThresholdStrategy& strategy);
void check_structural_rule(const Derivation& node, const DistributionEnv& env);

nlohmann::json to_json(const CheckReport& report);

}  // namespace tptnd::checker
