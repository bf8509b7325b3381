// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/error.h"

namespace tptnd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::AdditivityViolation: return "AdditivityViolation";
    case ErrorKind::DuplicateEntry: return "DuplicateEntry";
    case ErrorKind::EmptyOutputs: return "EmptyOutputs";
    case ErrorKind::IndexError: return "IndexError";
    case ErrorKind::MixedProcess: return "MixedProcess";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ProcessMismatch: return "ProcessMismatch";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NegativeFrequency: return "NegativeFrequency";
    case ErrorKind::UnknownRule: return "UnknownRule";
    case ErrorKind::UnresolvedContext: return "UnresolvedContext";
    case ErrorKind::ArithmeticMismatch: return "ArithmeticMismatch";
    case ErrorKind::IndependenceUnverified: return "IndependenceUnverified";
    case ErrorKind::DischargeError: return "DischargeError";
    case ErrorKind::ComplementOfInterval: return "ComplementOfInterval";
    case ErrorKind::MissingDesignatedVariable: return "MissingDesignatedVariable";
    case ErrorKind::FrequencyMismatch: return "FrequencyMismatch";
    case ErrorKind::SampleSizeMismatch: return "SampleSizeMismatch";
    case ErrorKind::PriorsNotNormalized: return "PriorsNotNormalized";
    case ErrorKind::NonIntegerSuccessCount: return "NonIntegerSuccessCount";
    case ErrorKind::StrategyError: return "StrategyError";
    case ErrorKind::ContractionValueMismatch: return "ContractionValueMismatch";
    case ErrorKind::ZeroMarginal: return "ZeroMarginal";
    case ErrorKind::EmptyCandidates: return "EmptyCandidates";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(message) {}

ParseError::ParseError(ErrorKind kind, std::size_t line, std::size_t column,
                       const std::string& expected, const std::string& message)
    : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " +
                      message),
      line_(line),
      column_(column),
      expected_(expected) {}

}  // namespace tptnd
