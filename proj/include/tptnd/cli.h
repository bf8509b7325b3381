// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tptnd/rational.h"
#include "tptnd/stats.h"
#include "tptnd/strategy.h"

namespace tptnd::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExitCode : int { Ok = 0, Rejected = 1, ParseFailure = 2, ConfigFailure = 3 };

struct RunConfig {
  enum class Command { Check, Simulate, Trust, Bayes };
  enum class Format { Text, Json };

  Command command = Command::Check;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::int64_t trials = 1000;
  ThresholdStrategy strategy;
  Format format = Format::Text;
  std::optional<Rational> a;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> n;
  std::vector<Hypothesis> hypotheses;
  std::optional<std::size_t> index;
  std::optional<std::string> message;  // help or version text; nothing runs
};

// Reads TPTND_STRATEGY; falls back to exact:0.95.
ThresholdStrategy default_strategy();

// Parses argv into a config. Throws Error(ConfigError) on bad flags.
RunConfig parse_args(int argc, const char* const* argv);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);
// parse_args followed by run; flag errors exit with ConfigFailure.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tptnd::cli
