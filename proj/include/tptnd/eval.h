// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tptnd/syntax.h"

namespace tptnd {

// SplitMix64 (Steele, Lea, Flood). split() derives an independent stream.
class SplitMix64 {
 public:
  static constexpr std::string_view kId = "splitmix64";

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}
  std::uint64_t next();
  SplitMix64 split();
  std::uint64_t state() const { return state_; }
  bool operator==(const SplitMix64&) const = default;

 private:
  std::uint64_t state_;
};

struct Outcome {
  OutputType output;
  Rational probability;
};

struct ProcessSpec {
  std::string name;
  std::vector<Outcome> outcomes;

  // Throws RangeError unless there is at least one outcome and the
  // probabilities sum to exactly 1.
  void validate() const;
};

struct Frequency {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  Rational value() const { return Rational(successes, trials); }
  bool operator==(const Frequency&) const = default;
};

struct TraceStep {
  std::int64_t step = 0;
  std::string rule;
  std::vector<std::size_t> consumed;
  TypedStatement produced;
  std::uint64_t rng_before = 0;
  std::uint64_t rng_after = 0;
};

struct EvalState {
  std::vector<TypedStatement> items;
  SplitMix64 rng;
  std::vector<TraceStep> trace;
  std::map<std::string, std::int64_t> executions;  // run counter per process

  explicit EvalState(std::uint64_t seed = 0) : rng(seed) {}
};

enum class LogicalRule { ISum, ESumL, ESumR, IProd, EProdL, EProdR, IArrow, EArrow };

}  // namespace tptnd

namespace tptnd::eval {

std::string_view logical_rule_name(LogicalRule r);  // "I+", "E+L", ...

// Appends p^r : alpha_i, alpha_i drawn with its exact probability.
EvalState step_event(EvalState s, const ProcessSpec& p);
// Replaces single executions of `process` at `indices` by
// process[n] : target # k/n.
EvalState step_sampling(EvalState s, std::string_view process,
                        const std::vector<std::size_t>& indices,
                        const OutputType& target);
// Pools t[n] : a # f and t[m] : a # g into t[n+m].
EvalState step_update(EvalState s, std::size_t i, std::size_t j);
// Operand counts: I+, I*, E-> take two; the rest take one. E+/E* take the
// premise statement as `side`, I-> and E-> take the designated variable
// entry x_u : alpha @ a.
EvalState step_logical(EvalState s, LogicalRule rule,
                       const std::vector<std::size_t>& operands,
                       const std::optional<TypedStatement>& side = std::nullopt);

Frequency run_experiment(const ProcessSpec& p, std::int64_t n,
                         const OutputType& target, std::uint64_t seed);

nlohmann::json trace_step_json(const TraceStep& step);
void write_trace_jsonl(std::ostream& out, const std::vector<TraceStep>& trace);

}  // namespace tptnd::eval
