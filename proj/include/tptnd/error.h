// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tptnd {

enum class ErrorKind {
  SyntaxError,
  ArityError,
  RangeError,
  Overflow,
  AdditivityViolation,
  DuplicateEntry,
  EmptyOutputs,
  IndexError,
  MixedProcess,
  TypeMismatch,
  ProcessMismatch,
  ShapeError,
  DivisionByZero,
  NegativeFrequency,
  UnknownRule,
  UnresolvedContext,
  ArithmeticMismatch,
  IndependenceUnverified,
  DischargeError,
  ComplementOfInterval,
  MissingDesignatedVariable,
  FrequencyMismatch,
  SampleSizeMismatch,
  PriorsNotNormalized,
  NonIntegerSuccessCount,
  StrategyError,
  ContractionValueMismatch,
  ZeroMarginal,
  EmptyCandidates,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column,
             const std::string& expected, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

}  // namespace tptnd
