// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tptnd/box.h"
#include "tptnd/rational.h"
#include "tptnd/rules.h"
#include "tptnd/strategy.h"

namespace tptnd {

struct OutputType {
  enum class Kind { Atom, Complement, Product, Sum, Arrow };

  Kind kind = Kind::Atom;
  std::string name;  // Atom only
  Box<OutputType> left;   // Complement operand, or left/antecedent
  Box<OutputType> right;  // right/consequent

  static OutputType atom(std::string name);
  static OutputType complement(OutputType inner);
  static OutputType product(OutputType l, OutputType r);
  static OutputType sum(OutputType l, OutputType r);
  static OutputType arrow(OutputType l, OutputType r);

  bool is_atom() const { return kind == Kind::Atom; }
  bool operator==(const OutputType&) const = default;
};

struct Annotation {
  enum class Kind {
    Deterministic,
    Theoretical,
    Expected,
    Frequency,
    Interval,
    Outside,  // [0,1] minus [lo,hi]
    ArrowTagged,
  };

  Kind kind = Kind::Deterministic;
  Rational value;  // Theoretical, Expected; tag of ArrowTagged
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  Rational lo;
  Rational hi;
  Box<Annotation> body;  // ArrowTagged

  static Annotation deterministic();
  static Annotation theoretical(Rational a);
  static Annotation expected(Rational a);
  static Annotation frequency(std::int64_t k, std::int64_t n);
  static Annotation interval(Rational lo, Rational hi);
  static Annotation outside(Rational lo, Rational hi);
  static Annotation tagged(Rational tag, Annotation body);

  bool is_point() const;  // carries a single probability value
  bool is_interval() const {
    return kind == Kind::Interval || kind == Kind::Outside;
  }
  // Probability carried by the annotation: 1 for Deterministic, k/n for
  // Frequency, the body's value for ArrowTagged. Throws for intervals.
  Rational probability() const;
  // The annotation with any ArrowTagged wrappers removed.
  const Annotation& stripped() const;

  bool operator==(const Annotation&) const = default;
};

struct TypedStatement;

struct Term {
  enum class Kind { Name, Pair, Fst, Snd, Abstraction, Application, Trust, UTrust };

  Kind kind = Kind::Name;
  std::string name;                  // Name
  std::optional<std::string> index;  // Name: the process in x_t
  Box<Term> left;   // Pair left, Fst/Snd operand, binder, applied function
  Box<Term> right;  // Pair right, abstraction body
  Box<TypedStatement> arg;  // Application argument, Trust/UTrust payload
  std::optional<std::int64_t> sample;
  std::optional<std::int64_t> run;

  static Term var(std::string name, std::optional<std::string> index = {});
  static Term pair(Term l, Term r);
  static Term fst(Term t);
  static Term snd(Term t);
  static Term abstraction(Term binder, Term body);
  static Term application(Term fun, TypedStatement arg);
  static Term trust(TypedStatement inner);
  static Term utrust(TypedStatement inner);

  Term with_sample(std::int64_t n) const;
  Term with_run(std::int64_t r) const;
  Term without_sample() const;

  bool is_name() const { return kind == Kind::Name; }
  bool operator==(const Term&) const;
};

struct TypedStatement {
  Term subject;
  std::optional<OutputType> output;  // absent only for Trust/UTrust
  Annotation annotation;

  bool operator==(const TypedStatement&) const = default;
};

TypedStatement statement(Term subject, OutputType output,
                         Annotation annotation = Annotation::deterministic());

struct VariableRef {
  std::string name;
  std::optional<std::string> index;

  Term term() const { return Term::var(name, index); }
  bool operator==(const VariableRef&) const = default;
  auto operator<=>(const VariableRef&) const = default;
};

std::optional<VariableRef> as_variable(const Term& t);

struct ContextItem {
  enum class Kind { Ref, Entry, Block };

  Kind kind = Kind::Entry;
  std::string name;                     // Ref
  std::vector<TypedStatement> entries;  // Entry has exactly one

  static ContextItem ref(std::string name);
  static ContextItem entry(TypedStatement s);
  static ContextItem block(std::vector<TypedStatement> entries);
  bool operator==(const ContextItem&) const = default;
};

struct Judgement {
  std::vector<ContextItem> context;
  TypedStatement conclusion;
  bool operator==(const Judgement&) const = default;
};

struct DistributionJudgement {
  std::vector<ContextItem> context;
  bool operator==(const DistributionJudgement&) const = default;
};

struct JudgementFamily {
  std::vector<Judgement> members;
  bool operator==(const JudgementFamily&) const = default;
};

using Conclusion = std::variant<Judgement, DistributionJudgement, JudgementFamily>;

struct SideCondition {
  enum class Kind {
    ThresholdHolds,
    ThresholdFails,
    Independent,
    Additivity,
    NormalizedPriors,
    ContractionFunction,
  };

  Kind kind = Kind::ThresholdHolds;
  Rational a;
  std::int64_t k = 0;
  std::int64_t n = 0;
  std::optional<ThresholdStrategy> strategy;
  std::vector<ContextItem> left;   // Independent
  std::vector<ContextItem> right;  // Independent
  VariableRef variable;            // Additivity
  Rational bound;                  // Additivity
  std::vector<Rational> values;    // NormalizedPriors
  MlMode mode = MlMode::CountExponent;  // ContractionFunction

  static SideCondition holds(Rational a, std::int64_t k, std::int64_t n,
                             std::optional<ThresholdStrategy> s = {});
  static SideCondition fails(Rational a, std::int64_t k, std::int64_t n,
                             std::optional<ThresholdStrategy> s = {});
  static SideCondition independent(std::vector<ContextItem> l,
                                   std::vector<ContextItem> r);
  static SideCondition additivity(VariableRef v, Rational bound);
  static SideCondition normalized(std::vector<Rational> values);
  static SideCondition contraction_function(MlMode mode);

  bool operator==(const SideCondition&) const = default;
};

struct Derivation {
  std::optional<RuleId> rule;  // empty for an assumed premise
  std::vector<Derivation> premises;
  std::vector<SideCondition> side_conditions;
  Conclusion conclusion;

  bool is_assumption() const { return !rule.has_value(); }
  bool operator==(const Derivation&) const;
};

struct Distribution {
  std::string name;
  std::vector<TypedStatement> entries;  // subjects are variables
  bool operator==(const Distribution&) const = default;
};

struct Item {
  std::string name;  // empty for anonymous judgements and derivations
  std::variant<Distribution, Judgement, Derivation> node;
  bool operator==(const Item&) const = default;
};

using File = std::vector<Item>;

// Term with every run superscript removed.
Term strip_runs(const Term& t);
// Names (without index) of all variables/atoms mentioned in a term.
std::set<std::string> mentioned_names(const Term& t);
bool contains_dependency(const Term& t);

}  // namespace tptnd
