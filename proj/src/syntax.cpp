// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/syntax.h"

#include "tptnd/error.h"

namespace tptnd {

OutputType OutputType::atom(std::string name) {
  OutputType o;
  o.kind = Kind::Atom;
  o.name = std::move(name);
  return o;
}

OutputType OutputType::complement(OutputType inner) {
  OutputType o;
  o.kind = Kind::Complement;
  o.left = std::move(inner);
  return o;
}

namespace {

OutputType binary(OutputType::Kind kind, OutputType l, OutputType r) {
  OutputType o;
  o.kind = kind;
  o.left = std::move(l);
  o.right = std::move(r);
  return o;
}

}  // namespace

OutputType OutputType::product(OutputType l, OutputType r) {
  return binary(Kind::Product, std::move(l), std::move(r));
}

OutputType OutputType::sum(OutputType l, OutputType r) {
  return binary(Kind::Sum, std::move(l), std::move(r));
}

OutputType OutputType::arrow(OutputType l, OutputType r) {
  return binary(Kind::Arrow, std::move(l), std::move(r));
}

Annotation Annotation::deterministic() { return {}; }

Annotation Annotation::theoretical(Rational a) {
  Annotation n;
  n.kind = Kind::Theoretical;
  n.value = a;
  return n;
}

Annotation Annotation::expected(Rational a) {
  Annotation n;
  n.kind = Kind::Expected;
  n.value = a;
  return n;
}

Annotation Annotation::frequency(std::int64_t k, std::int64_t n) {
  Annotation a;
  a.kind = Kind::Frequency;
  a.successes = k;
  a.trials = n;
  return a;
}

Annotation Annotation::interval(Rational lo, Rational hi) {
  Annotation a;
  a.kind = Kind::Interval;
  a.lo = lo;
  a.hi = hi;
  return a;
}

Annotation Annotation::outside(Rational lo, Rational hi) {
  Annotation a;
  a.kind = Kind::Outside;
  a.lo = lo;
  a.hi = hi;
  return a;
}

Annotation Annotation::tagged(Rational tag, Annotation body) {
  Annotation a;
  a.kind = Kind::ArrowTagged;
  a.value = tag;
  a.body = std::move(body);
  return a;
}

bool Annotation::is_point() const {
  switch (kind) {
    case Kind::Theoretical:
    case Kind::Expected:
    case Kind::Frequency:
      return true;
    case Kind::ArrowTagged:
      return body->is_point();
    default:
      return false;
  }
}

Rational Annotation::probability() const {
  switch (kind) {
    case Kind::Deterministic: return Rational(1);
    case Kind::Theoretical:
    case Kind::Expected: return value;
    case Kind::Frequency: return Rational(successes, trials);
    case Kind::ArrowTagged: return body->probability();
    case Kind::Interval:
    case Kind::Outside: break;
  }
  throw Error(ErrorKind::ShapeError, "interval annotation has no point value");
}

const Annotation& Annotation::stripped() const {
  const Annotation* a = this;
  while (a->kind == Kind::ArrowTagged) a = &*a->body;
  return *a;
}

Term Term::var(std::string name, std::optional<std::string> index) {
  Term t;
  t.kind = Kind::Name;
  t.name = std::move(name);
  t.index = std::move(index);
  return t;
}

Term Term::pair(Term l, Term r) {
  Term t;
  t.kind = Kind::Pair;
  t.left = std::move(l);
  t.right = std::move(r);
  return t;
}

Term Term::fst(Term inner) {
  Term t;
  t.kind = Kind::Fst;
  t.left = std::move(inner);
  return t;
}

Term Term::snd(Term inner) {
  Term t;
  t.kind = Kind::Snd;
  t.left = std::move(inner);
  return t;
}

Term Term::abstraction(Term binder, Term body) {
  Term t;
  t.kind = Kind::Abstraction;
  t.left = std::move(binder);
  t.right = std::move(body);
  return t;
}

Term Term::application(Term fun, TypedStatement arg) {
  Term t;
  t.kind = Kind::Application;
  t.left = std::move(fun);
  t.arg = std::move(arg);
  return t;
}

Term Term::trust(TypedStatement inner) {
  Term t;
  t.kind = Kind::Trust;
  t.arg = std::move(inner);
  return t;
}

Term Term::utrust(TypedStatement inner) {
  Term t;
  t.kind = Kind::UTrust;
  t.arg = std::move(inner);
  return t;
}

Term Term::with_sample(std::int64_t n) const {
  Term t = *this;
  t.sample = n;
  return t;
}

Term Term::with_run(std::int64_t r) const {
  Term t = *this;
  t.run = r;
  return t;
}

Term Term::without_sample() const {
  Term t = *this;
  t.sample.reset();
  return t;
}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && name == o.name && index == o.index &&
         left == o.left && right == o.right && arg == o.arg &&
         sample == o.sample && run == o.run;
}

TypedStatement statement(Term subject, OutputType output, Annotation annotation) {
  return TypedStatement{std::move(subject), std::move(output),
                        std::move(annotation)};
}

std::optional<VariableRef> as_variable(const Term& t) {
  if (t.kind != Term::Kind::Name || t.sample || t.run) return std::nullopt;
  return VariableRef{t.name, t.index};
}

ContextItem ContextItem::ref(std::string name) {
  ContextItem c;
  c.kind = Kind::Ref;
  c.name = std::move(name);
  return c;
}

ContextItem ContextItem::entry(TypedStatement s) {
  ContextItem c;
  c.kind = Kind::Entry;
  c.entries.push_back(std::move(s));
  return c;
}

ContextItem ContextItem::block(std::vector<TypedStatement> entries) {
  ContextItem c;
  c.kind = Kind::Block;
  c.entries = std::move(entries);
  return c;
}

SideCondition SideCondition::holds(Rational a, std::int64_t k, std::int64_t n,
                                   std::optional<ThresholdStrategy> s) {
  SideCondition c;
  c.kind = Kind::ThresholdHolds;
  c.a = a;
  c.k = k;
  c.n = n;
  c.strategy = s;
  return c;
}

SideCondition SideCondition::fails(Rational a, std::int64_t k, std::int64_t n,
                                   std::optional<ThresholdStrategy> s) {
  SideCondition c = holds(a, k, n, s);
  c.kind = Kind::ThresholdFails;
  return c;
}

SideCondition SideCondition::independent(std::vector<ContextItem> l,
                                         std::vector<ContextItem> r) {
  SideCondition c;
  c.kind = Kind::Independent;
  c.left = std::move(l);
  c.right = std::move(r);
  return c;
}

SideCondition SideCondition::additivity(VariableRef v, Rational bound) {
  SideCondition c;
  c.kind = Kind::Additivity;
  c.variable = std::move(v);
  c.bound = bound;
  return c;
}

SideCondition SideCondition::normalized(std::vector<Rational> values) {
  SideCondition c;
  c.kind = Kind::NormalizedPriors;
  c.values = std::move(values);
  return c;
}

SideCondition SideCondition::contraction_function(MlMode mode) {
  SideCondition c;
  c.kind = Kind::ContractionFunction;
  c.mode = mode;
  return c;
}

bool Derivation::operator==(const Derivation& o) const {
  return rule == o.rule && premises == o.premises &&
         side_conditions == o.side_conditions && conclusion == o.conclusion;
}

Term strip_runs(const Term& t) {
  Term out = t;
  out.run.reset();
  if (out.left) out.left = strip_runs(*out.left);
  if (out.right) out.right = strip_runs(*out.right);
  if (out.arg) {
    TypedStatement s = *out.arg;
    s.subject = strip_runs(s.subject);
    out.arg = std::move(s);
  }
  return out;
}

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Name) out.insert(t.name);
  if (t.left) collect_names(*t.left, out);
  if (t.right) collect_names(*t.right, out);
  if (t.arg) collect_names(t.arg->subject, out);
}

}  // namespace

std::set<std::string> mentioned_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

bool contains_dependency(const Term& t) {
  if (t.kind == Term::Kind::Abstraction || t.kind == Term::Kind::Application) {
    return true;
  }
  return (t.left && contains_dependency(*t.left)) ||
         (t.right && contains_dependency(*t.right)) ||
         (t.arg && contains_dependency(t.arg->subject));
}

}  // namespace tptnd
