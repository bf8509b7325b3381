// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "tptnd/syntax.h"

namespace tptnd::syntax {

// All parse functions throw ParseError carrying line, column and the expected
// token class. Error kinds: SyntaxError, ArityError, RangeError.
File parse_file(std::string_view text);
Judgement parse_judgement(std::string_view text);
Derivation parse_derivation(std::string_view text);
TypedStatement parse_statement(std::string_view text);
OutputType parse_output(std::string_view text);
Term parse_term(std::string_view text);
Annotation parse_annotation(std::string_view text);
// Probability literal ("1/6", "0.45", "1"); RangeError outside [0,1].
Rational parse_probability(std::string_view text);

std::string pretty_print(const Rational& r);
std::string pretty_print(const OutputType& o);
std::string pretty_print(const Annotation& a);
std::string pretty_print(const Term& t);
std::string pretty_print(const TypedStatement& s);
std::string pretty_print(const std::vector<ContextItem>& context);
std::string pretty_print(const Judgement& j);
std::string pretty_print(const Conclusion& c);
std::string pretty_print(const SideCondition& c);
std::string pretty_print(const Derivation& d);
std::string pretty_print(const Distribution& d);
std::string pretty_print(const Item& item);
std::string pretty_print(const File& file);

}  // namespace tptnd::syntax
