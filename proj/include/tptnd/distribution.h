// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tptnd/syntax.h"

namespace tptnd {

using DistributionEnv = std::map<std::string, Distribution, std::less<>>;

}  // namespace tptnd

namespace tptnd::dist {

// Adds one entry. Throws DuplicateEntry when (variable, output) is already
// present, AdditivityViolation when the variable's theoretical mass would
// exceed 1, ShapeError for a non-variable subject.
Distribution extend(const Distribution& d, const TypedStatement& entry);
// One Interval(0,1) entry per output.
Distribution make_unknown(std::span<const OutputType> outputs,
                          const VariableRef& variable, std::string name = "");
// Re-runs extend over the entries of d from the empty distribution.
void validate(const Distribution& d);
// Every variable's theoretical annotations sum to exactly 1.
bool is_complete(const Distribution& d);
std::map<VariableRef, Rational> theoretical_mass(std::span<const TypedStatement> entries);

// Syntactic independence: no entry of one side is tied to a different
// variable of the other side through an abstraction, application or arrow
// typed entry of either side. Identical entries are allowed.
bool independent(std::span<const TypedStatement> a, std::span<const TypedStatement> b);
bool independent(const Distribution& a, const Distribution& b);

// Flattens a context against the named distributions, dropping repeated
// entries. Throws UnresolvedContext for unknown names.
std::vector<TypedStatement> resolve(const std::vector<ContextItem>& context,
                                    const DistributionEnv& env);

nlohmann::json to_json(const Distribution& d);
std::string annotation_kind(const Annotation& a);

}  // namespace tptnd::dist
