// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/checker.h"

#include <algorithm>
#include <cmath>

#include "tptnd/parser.h"
#include "tptnd/stats.h"

namespace tptnd {

CheckReport& CheckReport::merge(const CheckReport& other) {
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  for (const auto& [rule, count] : other.stats) stats[rule] += count;
  open_assumptions += other.open_assumptions;
  derivations += other.derivations;
  return *this;
}

}  // namespace tptnd

namespace tptnd::checker {
namespace {

using Entries = std::vector<TypedStatement>;
using AK = Annotation::Kind;

constexpr long double kIntervalTol = 1e-9L;
constexpr long double kPosteriorTol = 1e-9L;

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

std::string show(const Entries& ctx) {
  std::vector<ContextItem> items;
  for (const auto& e : ctx) items.push_back(ContextItem::entry(e));
  return "{" + syntax::pretty_print(items) + "}";
}
std::string show(const TypedStatement& s) { return syntax::pretty_print(s); }
std::string show(const Term& t) { return syntax::pretty_print(t); }
std::string show(const OutputType& o) { return syntax::pretty_print(o); }
std::string show(const Rational& r) { return r.str(); }

bool contains(const Entries& ctx, const TypedStatement& e) {
  return std::find(ctx.begin(), ctx.end(), e) != ctx.end();
}

bool subset(const Entries& a, const Entries& b) {
  return std::all_of(a.begin(), a.end(), [&](const auto& e) { return contains(b, e); });
}

bool same_set(const Entries& a, const Entries& b) { return subset(a, b) && subset(b, a); }

Entries unite(Entries a, const Entries& b) {
  for (const auto& e : b) {
    if (!contains(a, e)) a.push_back(e);
  }
  return a;
}

Entries minus(const Entries& a, const Entries& drop) {
  Entries out;
  for (const auto& e : a) {
    if (!contains(drop, e)) out.push_back(e);
  }
  return out;
}

void expect_context(const Entries& actual, const Entries& expected) {
  if (!same_set(actual, expected)) {
    fail(ErrorKind::ShapeError,
         "conclusion context " + show(actual) + " should be " + show(expected));
  }
}

bool has_interval(const Entries& ctx) {
  return std::any_of(ctx.begin(), ctx.end(),
                     [](const auto& e) { return e.annotation.stripped().is_interval(); });
}

const Judgement& judgement_of(const Conclusion& c, const std::string& what) {
  if (const auto* j = std::get_if<Judgement>(&c)) return *j;
  fail(ErrorKind::ShapeError, what + " must be a judgement");
}

const OutputType& output_of(const TypedStatement& s) {
  if (!s.output) fail(ErrorKind::ShapeError, show(s) + " has no output type");
  return *s.output;
}

std::optional<std::int64_t> sample_of(const Term& t) {
  if (t.sample) return t.sample;
  switch (t.kind) {
    case Term::Kind::Abstraction: return sample_of(*t.right);
    case Term::Kind::Application: return sample_of(*t.left);
    default: return std::nullopt;
  }
}

void same_samples(const Term& a, const Term& b) {
  auto n = sample_of(a);
  auto m = sample_of(b);
  if (n && m && *n != *m) {
    fail(ErrorKind::SampleSizeMismatch,
         "sample sizes " + std::to_string(*n) + " and " + std::to_string(*m) + " differ");
  }
}

void expect_term(const Term& actual, const Term& expected) {
  if (actual != expected) {
    fail(ErrorKind::ShapeError, "subject " + show(actual) + " should be " + show(expected));
  }
}

void expect_output(const TypedStatement& s, const OutputType& expected) {
  if (output_of(s) != expected) {
    fail(ErrorKind::ShapeError,
         "output " + show(output_of(s)) + " of " + show(s.subject) + " should be " + show(expected));
  }
}

void expect_distinct(const OutputType& a, const OutputType& b) {
  if (a == b) fail(ErrorKind::ShapeError, "rule needs distinct types, both are " + show(a));
}

void mismatch(const Rational& expected, const Rational& found) {
  fail(ErrorKind::ArithmeticMismatch,
       "expected " + show(expected) + ", found " + show(found));
}

// Value of a random-variable annotation: theoretical, or 1 for deterministic.
Rational variable_value(const Annotation& a) {
  if (a.kind == AK::Theoretical) return a.value;
  if (a.kind == AK::Deterministic) return Rational(1);
  fail(ErrorKind::ShapeError, "expected a theoretical probability, found " + syntax::pretty_print(a));
}

void expect_theoretical(const Annotation& a, const Rational& v) {
  if (a.kind != AK::Theoretical) {
    fail(ErrorKind::ShapeError, "conclusion needs a theoretical probability, found " +
                                    syntax::pretty_print(a));
  }
  if (a.value != v) mismatch(v, a.value);
}

void expect_deterministic(const Annotation& a, const std::string& where) {
  if (a.kind != AK::Deterministic) {
    fail(ErrorKind::ShapeError, where + " must be deterministic, found " + syntax::pretty_print(a));
  }
}

// Expected probabilities and frequencies share the arithmetic of the
// sampling rules; a node may not mix them.
enum class Measure { None, Expected, Frequency };

struct Measured {
  Measure measure = Measure::None;
  Rational value;
};

Measured measured(const Annotation& a, bool allow_deterministic = false) {
  switch (a.kind) {
    case AK::Expected: return {Measure::Expected, a.value};
    case AK::Frequency:
      if (a.trials <= 0) fail(ErrorKind::ShapeError, "frequency over zero trials");
      return {Measure::Frequency, Rational(a.successes, a.trials)};
    case AK::Deterministic:
      if (allow_deterministic) return {Measure::None, Rational(1)};
      break;
    default: break;
  }
  fail(ErrorKind::ShapeError,
       "expected an expected probability or a frequency, found " + syntax::pretty_print(a));
}

Measure combine(Measure a, Measure b) {
  if (a == Measure::None) return b;
  if (b == Measure::None || a == b) return a;
  fail(ErrorKind::ShapeError, "operands mix expected probabilities and frequencies");
}

void expect_measured(const Annotation& a, Measure m, const Rational& v) {
  if (m == Measure::Frequency) {
    if (a.kind != AK::Frequency || a.trials <= 0) {
      fail(ErrorKind::ShapeError, "conclusion needs a frequency, found " + syntax::pretty_print(a));
    }
    Rational found(a.successes, a.trials);
    if (found != v) {
      fail(ErrorKind::FrequencyMismatch, "expected frequency " + show(v) + ", found " + show(found));
    }
    return;
  }
  if (a.kind != AK::Expected) {
    fail(ErrorKind::ShapeError,
         "conclusion needs an expected probability, found " + syntax::pretty_print(a));
  }
  if (a.value != v) mismatch(v, a.value);
}

Rational checked(Rational (*op)(const Rational&, const Rational&), const Rational& a,
                 const Rational& b) {
  try {
    return op(a, b);
  } catch (const Error& e) {
    fail(ErrorKind::ArithmeticMismatch, e.detail());
  }
}
Rational add(const Rational& a, const Rational& b) { return a + b; }
Rational sub(const Rational& a, const Rational& b) { return a - b; }
Rational mul(const Rational& a, const Rational& b) { return a * b; }
Rational div(const Rational& a, const Rational& b) {
  if (b == Rational(0)) fail(ErrorKind::ArithmeticMismatch, "division by a zero probability");
  return a / b;
}

// Resolved view of a node: conclusion and premises with flattened contexts.
class Node {
 public:
  Node(const Derivation& d, const DistributionEnv& env) : d_(d), env_(env) {}

  RuleId rule() const { return *d_.rule; }
  const Derivation& raw() const { return d_; }
  std::size_t arity() const { return d_.premises.size(); }

  const Judgement& concl() const { return judgement_of(d_.conclusion, "conclusion"); }
  const TypedStatement& stmt() const { return concl().conclusion; }
  Entries ctx() const { return dist::resolve(concl().context, env_); }

  const Judgement& premise(std::size_t i) const {
    return judgement_of(d_.premises.at(i).conclusion, "premise " + std::to_string(i + 1));
  }
  const TypedStatement& pstmt(std::size_t i) const { return premise(i).conclusion; }
  Entries pctx(std::size_t i) const { return dist::resolve(premise(i).context, env_); }

  Entries resolve(const std::vector<ContextItem>& c) const { return dist::resolve(c, env_); }

  const SideCondition* side(SideCondition::Kind kind) const {
    for (const auto& s : d_.side_conditions) {
      if (s.kind == kind) return &s;
    }
    return nullptr;
  }

  // The conclusion context must be the union of the premise contexts.
  void expect_union() const {
    Entries u;
    for (std::size_t i = 0; i < arity(); ++i) u = unite(std::move(u), pctx(i));
    expect_context(ctx(), u);
  }

  void require_independence(const Entries& g, const Entries& h) const {
    const SideCondition* s = side(SideCondition::Kind::Independent);
    if (!s) fail(ErrorKind::IndependenceUnverified, "missing independence side condition");
    Entries l = resolve(s->left);
    Entries r = resolve(s->right);
    bool matches = (same_set(l, g) && same_set(r, h)) || (same_set(l, h) && same_set(r, g));
    if (!matches) {
      fail(ErrorKind::ShapeError, "independence side condition names " + show(l) + " and " +
                                      show(r) + " instead of the premise contexts");
    }
    if (!dist::independent(g, h)) {
      fail(ErrorKind::IndependenceUnverified,
           show(g) + " and " + show(h) + " are linked by a dependency");
    }
  }

 private:
  const Derivation& d_;
  const DistributionEnv& env_;
};

// Context entry bound by `binder` with output alpha. An indexed binder must
// match the index; a bare one matches any index of that variable.
std::optional<TypedStatement> bound_entry(const Entries& ctx, const Term& binder,
                                          const OutputType& alpha) {
  if (binder.kind != Term::Kind::Name) {
    fail(ErrorKind::ShapeError, "binder " + show(binder) + " is not a variable");
  }
  std::optional<TypedStatement> loose;
  for (const auto& e : ctx) {
    if (e.subject.kind != Term::Kind::Name || e.subject.name != binder.name) continue;
    if (output_of(e) != alpha) continue;
    if (e.subject.index == binder.index) return e;
    if (!binder.index && !loose) loose = e;
  }
  return loose;
}

// Entry x_t : alpha designated to the process named by t.
std::optional<TypedStatement> designated_entry(const Entries& ctx, const Term& t,
                                               const OutputType& alpha) {
  for (const auto& e : ctx) {
    if (e.subject.kind == Term::Kind::Name && e.subject.index && t.kind == Term::Kind::Name &&
        *e.subject.index == t.name && e.output && *e.output == alpha) {
      return e;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// distribution construction

void distribution_rule(const Node& n) {
  const auto* dj = std::get_if<DistributionJudgement>(&n.raw().conclusion);
  if (!dj) fail(ErrorKind::ShapeError, "conclusion must be a distribution judgement");
  Entries c = n.resolve(dj->context);
  switch (n.rule()) {
    case RuleId::Base:
      if (!c.empty()) fail(ErrorKind::ShapeError, "base concludes the empty distribution");
      return;
    case RuleId::Extend:
    case RuleId::ExtendDet: {
      const auto* pj = std::get_if<DistributionJudgement>(&n.raw().premises.at(0).conclusion);
      if (!pj) fail(ErrorKind::ShapeError, "premise must be a distribution judgement");
      Entries p = n.resolve(pj->context);
      Entries added = minus(c, p);
      if (!subset(p, c) || added.size() != 1) {
        fail(ErrorKind::ShapeError, "conclusion must add exactly one entry to " + show(p));
      }
      const TypedStatement& e = added.front();
      if (n.rule() == RuleId::Extend && e.annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "extend adds a theoretical entry, found " + show(e));
      }
      if (n.rule() == RuleId::ExtendDet && e.annotation.kind != AK::Deterministic) {
        fail(ErrorKind::ShapeError, "extend_det adds a deterministic entry, found " + show(e));
      }
      Distribution base{"", p};
      dist::extend(base, e);
      if (const SideCondition* s = n.side(SideCondition::Kind::Additivity)) {
        Distribution ext{"", c};
        Rational mass = dist::theoretical_mass(ext.entries)[s->variable];
        if (mass > s->bound) {
          fail(ErrorKind::AdditivityViolation,
               "mass " + show(mass) + " exceeds the declared bound " + show(s->bound));
        }
      }
      return;
    }
    case RuleId::Unknown: {
      if (c.empty()) fail(ErrorKind::EmptyOutputs, "unknown needs at least one output");
      const Term& v = c.front().subject;
      for (const auto& e : c) {
        if (e.subject != v) fail(ErrorKind::ShapeError, "unknown ranges over a single variable");
        if (e.annotation != Annotation::interval(Rational(0), Rational(1))) {
          fail(ErrorKind::ShapeError, "unknown assigns [0, 1], found " + show(e));
        }
      }
      return;
    }
    default: break;
  }
  fail(ErrorKind::UnknownRule, "not a distribution rule");
}

// ---------------------------------------------------------------------------
// random variables

void variable_rule(const Node& n) {
  const TypedStatement& s = n.stmt();
  switch (n.rule()) {
    case RuleId::Identity1: {
      if (!as_variable(s.subject)) fail(ErrorKind::ShapeError, "identity1 concludes on a variable");
      if (!contains(n.ctx(), statement(s.subject, output_of(s)))) {
        fail(ErrorKind::ShapeError, "context lacks " + show(statement(s.subject, output_of(s))));
      }
      expect_theoretical(s.annotation, Rational(1));
      return;
    }
    case RuleId::Identity2: {
      if (!as_variable(s.subject)) fail(ErrorKind::ShapeError, "identity2 concludes on a variable");
      if (s.annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "identity2 concludes a theoretical probability");
      }
      if (!contains(n.ctx(), s)) fail(ErrorKind::ShapeError, "context lacks " + show(s));
      return;
    }
    case RuleId::Bot: {
      const TypedStatement& p = n.pstmt(0);
      if (p.annotation.stripped().is_interval()) {
        fail(ErrorKind::ComplementOfInterval, "cannot complement " + syntax::pretty_print(p.annotation));
      }
      expect_context(n.ctx(), n.pctx(0));
      expect_term(s.subject, p.subject);
      expect_output(s, OutputType::complement(output_of(p)));
      expect_theoretical(s.annotation, Rational(1) - variable_value(p.annotation));
      return;
    }
    case RuleId::VarIProd: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      n.require_independence(n.pctx(0), n.pctx(1));
      n.expect_union();
      expect_term(s.subject, Term::pair(a.subject, b.subject));
      expect_output(s, OutputType::product(output_of(a), output_of(b)));
      expect_theoretical(s.annotation,
                         checked(mul, variable_value(a.annotation), variable_value(b.annotation)));
      return;
    }
    case RuleId::VarEProdL:
    case RuleId::VarEProdR: {
      const bool left = n.rule() == RuleId::VarEProdL;
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Product) fail(ErrorKind::ShapeError, "major premise needs a product type");
      expect_distinct(*o.left, *o.right);
      const Term& x = major.subject;
      expect_term(minor.subject, left ? Term::fst(x) : Term::snd(x));
      expect_output(minor, left ? *o.left : *o.right);
      n.expect_union();
      expect_term(s.subject, left ? Term::snd(x) : Term::fst(x));
      expect_output(s, left ? *o.right : *o.left);
      expect_theoretical(s.annotation, checked(div, variable_value(major.annotation),
                                               variable_value(minor.annotation)));
      return;
    }
    case RuleId::VarISum: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      expect_term(b.subject, a.subject);
      n.expect_union();
      expect_term(s.subject, a.subject);
      expect_output(s, OutputType::sum(output_of(a), output_of(b)));
      expect_theoretical(s.annotation,
                         checked(add, variable_value(a.annotation), variable_value(b.annotation)));
      return;
    }
    case RuleId::VarESumL:
    case RuleId::VarESumR: {
      // E+R drops the left disjunct, E+L the right one.
      const bool keep_left = n.rule() == RuleId::VarESumL;
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Sum) fail(ErrorKind::ShapeError, "major premise needs a sum type");
      expect_distinct(*o.left, *o.right);
      expect_term(minor.subject, major.subject);
      expect_output(minor, keep_left ? *o.right : *o.left);
      n.expect_union();
      expect_term(s.subject, major.subject);
      expect_output(s, keep_left ? *o.left : *o.right);
      expect_theoretical(s.annotation, checked(sub, variable_value(major.annotation),
                                               variable_value(minor.annotation)));
      return;
    }
    case RuleId::VarIArrow: {
      const TypedStatement& p = n.pstmt(0);
      if (s.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "conclusion subject must be an abstraction");
      }
      const OutputType& o = output_of(s);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "conclusion needs an arrow type");
      const Entries pc = n.pctx(0);
      auto bound = bound_entry(pc, *s.subject.left, *o.left);
      if (!bound || (bound->annotation.kind != AK::Deterministic &&
                     bound->annotation.kind != AK::Theoretical)) {
        fail(ErrorKind::DischargeError, "premise context lacks " +
                                            show(statement(*s.subject.left, *o.left)));
      }
      expect_term(*s.subject.right, p.subject);
      expect_output(s, OutputType::arrow(*o.left, output_of(p)));
      expect_context(n.ctx(), minus(pc, {*bound}));
      expect_theoretical(s.annotation, variable_value(p.annotation));
      return;
    }
    case RuleId::VarEArrow: {
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      if (major.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "major premise must type an abstraction");
      }
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "major premise needs an arrow type");
      expect_term(minor.subject, *major.subject.left);
      expect_output(minor, *o.left);
      const Entries gm = n.pctx(0);
      const Entries c = n.ctx();
      if (!same_set(c, gm) && !same_set(c, unite(gm, n.pctx(1)))) {
        expect_context(c, unite(gm, n.pctx(1)));
      }
      expect_term(s.subject, Term::application(*major.subject.right,
                                               statement(minor.subject, *o.left)));
      expect_output(s, *o.right);
      expect_theoretical(s.annotation, checked(mul, variable_value(minor.annotation),
                                               variable_value(major.annotation)));
      return;
    }
    default: break;
  }
  fail(ErrorKind::UnknownRule, "not a random-variable rule");
}

// ---------------------------------------------------------------------------
// single experiments

void experiment_rule(const Node& n) {
  const TypedStatement& s = n.stmt();
  switch (n.rule()) {
    case RuleId::Experiment: {
      if (s.subject.kind != Term::Kind::Name || s.subject.sample) {
        fail(ErrorKind::ShapeError, "experiment concludes on a single execution of a process");
      }
      expect_deterministic(s.annotation, "experiment conclusion");
      auto e = designated_entry(n.ctx(), s.subject, output_of(s));
      if (!e) {
        fail(ErrorKind::MissingDesignatedVariable,
             "context has no x_" + s.subject.name + " : " + show(output_of(s)));
      }
      if (!e->annotation.is_point() && e->annotation.kind != AK::Deterministic) {
        fail(ErrorKind::ShapeError, "designated entry needs a point probability");
      }
      return;
    }
    case RuleId::ExpIProd: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      expect_deterministic(a.annotation, "premise");
      expect_deterministic(b.annotation, "premise");
      n.require_independence(n.pctx(0), n.pctx(1));
      n.expect_union();
      expect_term(s.subject, Term::pair(a.subject, b.subject));
      expect_output(s, OutputType::product(output_of(a), output_of(b)));
      expect_deterministic(s.annotation, "conclusion");
      return;
    }
    case RuleId::ExpEProdL:
    case RuleId::ExpEProdR: {
      const bool left = n.rule() == RuleId::ExpEProdL;
      const TypedStatement& p = n.pstmt(0);
      const OutputType& o = output_of(p);
      if (o.kind != OutputType::Kind::Product) fail(ErrorKind::ShapeError, "premise needs a product type");
      expect_deterministic(p.annotation, "premise");
      expect_context(n.ctx(), n.pctx(0));
      expect_term(s.subject, left ? Term::fst(p.subject) : Term::snd(p.subject));
      expect_output(s, left ? *o.left : *o.right);
      expect_deterministic(s.annotation, "conclusion");
      return;
    }
    case RuleId::ExpISum: {
      const TypedStatement& p = n.pstmt(0);
      expect_deterministic(p.annotation, "premise");
      const OutputType& o = output_of(s);
      if (o.kind != OutputType::Kind::Sum) fail(ErrorKind::ShapeError, "conclusion needs a sum type");
      expect_output(p, *o.left);
      expect_term(s.subject, p.subject);
      expect_deterministic(s.annotation, "conclusion");
      const Entries pc = n.pctx(0);
      auto ea = designated_entry(pc, p.subject, *o.left);
      auto eb = designated_entry(pc, p.subject, *o.right);
      if (!ea || !eb) {
        fail(ErrorKind::MissingDesignatedVariable,
             "premise context needs designated entries for " + show(*o.left) + " and " + show(*o.right));
      }
      const Entries c = n.ctx();
      if (!same_set(c, pc) && !same_set(c, minus(pc, {*ea, *eb}))) {
        expect_context(c, minus(pc, {*ea, *eb}));
      }
      return;
    }
    case RuleId::ExpESumL:
    case RuleId::ExpESumR: {
      const bool keep_left = n.rule() == RuleId::ExpESumL;
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Sum) fail(ErrorKind::ShapeError, "major premise needs a sum type");
      expect_distinct(*o.left, *o.right);
      expect_deterministic(major.annotation, "premise");
      expect_deterministic(minor.annotation, "premise");
      expect_term(minor.subject, major.subject);
      expect_output(minor, OutputType::complement(keep_left ? *o.right : *o.left));
      n.expect_union();
      expect_term(s.subject, major.subject);
      expect_output(s, keep_left ? *o.left : *o.right);
      expect_deterministic(s.annotation, "conclusion");
      return;
    }
    case RuleId::ExpIArrow: {
      const TypedStatement& p = n.pstmt(0);
      expect_deterministic(p.annotation, "premise");
      if (s.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "conclusion subject must be an abstraction");
      }
      const OutputType& o = output_of(s);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "conclusion needs an arrow type");
      const Entries pc = n.pctx(0);
      auto bound = bound_entry(pc, *s.subject.left, *o.left);
      if (!bound || bound->annotation.kind != AK::Theoretical) {
        fail(ErrorKind::DischargeError, "premise context lacks " + show(*s.subject.left) + " : " +
                                            show(*o.left) + " with a theoretical probability");
      }
      expect_term(*s.subject.right, p.subject);
      expect_output(s, OutputType::arrow(*o.left, output_of(p)));
      expect_context(n.ctx(), minus(pc, {*bound}));
      expect_theoretical(s.annotation, bound->annotation.value);
      return;
    }
    case RuleId::ExpEArrow: {
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      if (major.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "major premise must type an abstraction");
      }
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "major premise needs an arrow type");
      if (major.annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "major premise needs a theoretical probability");
      }
      expect_deterministic(minor.annotation, "minor premise");
      expect_output(minor, *o.left);
      const Term& binder = *major.subject.left;
      if (binder.index && (minor.subject.kind != Term::Kind::Name || *binder.index != minor.subject.name)) {
        fail(ErrorKind::MissingDesignatedVariable,
             show(binder) + " is not designated to " + show(minor.subject));
      }
      const Entries gm = n.pctx(0);
      const Entries c = n.ctx();
      if (!same_set(c, gm) && !same_set(c, unite(gm, n.pctx(1)))) {
        expect_context(c, unite(gm, n.pctx(1)));
      }
      expect_term(s.subject, Term::application(*major.subject.right,
                                               statement(minor.subject, *o.left)));
      expect_output(s, *o.right);
      expect_deterministic(s.annotation, "conclusion");
      return;
    }
    default: break;
  }
  fail(ErrorKind::UnknownRule, "not a single-experiment rule");
}

// ---------------------------------------------------------------------------
// expectation and sampling

// Shared by samp_E-> and cut: major [x]t : (alpha -> beta) [a] b, minor u : alpha.
void application_conclusion(const Node& n, const Term& body, const Annotation& body_ann,
                            const OutputType& alpha, const OutputType& beta,
                            const TypedStatement& minor) {
  const TypedStatement& s = n.stmt();
  expect_output(minor, alpha);
  Measured b = measured(body_ann);
  Measured a = measured(minor.annotation, true);
  const Measure m = combine(b.measure, a.measure);
  same_samples(body, minor.subject);
  Term fun = body;
  if (!sample_of(body) && sample_of(minor.subject)) fun = body.with_sample(*sample_of(minor.subject));
  const TypedStatement arg = statement(minor.subject, alpha);
  if (s.subject != Term::application(body, arg) && s.subject != Term::application(fun, arg)) {
    expect_term(s.subject, Term::application(fun, arg));
  }
  expect_output(s, beta);
  expect_measured(s.annotation, m, checked(mul, a.value, b.value));
}

void sampling_rule(const Node& n) {
  const TypedStatement& s = n.stmt();
  switch (n.rule()) {
    case RuleId::Expectation: {
      if (s.subject.kind != Term::Kind::Name || !s.subject.sample) {
        fail(ErrorKind::ShapeError, "expectation concludes on a sampled process t[n]");
      }
      if (s.annotation.kind != AK::Expected) {
        fail(ErrorKind::ShapeError, "expectation concludes an expected probability");
      }
      auto e = designated_entry(n.ctx(), s.subject, output_of(s));
      if (!e) {
        fail(ErrorKind::MissingDesignatedVariable,
             "context has no x_" + s.subject.name + " : " + show(output_of(s)));
      }
      if (e->annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "designated entry needs a theoretical probability");
      }
      if (e->annotation.value != s.annotation.value) mismatch(e->annotation.value, s.annotation.value);
      return;
    }
    case RuleId::Sampling: {
      const std::int64_t count = static_cast<std::int64_t>(n.arity());
      const Term base = strip_runs(n.pstmt(0).subject);
      if (base.sample) fail(ErrorKind::ShapeError, "sampling premises are single executions");
      const Entries c = n.ctx();
      std::int64_t hits = 0;
      std::vector<Term> seen;
      for (std::size_t i = 0; i < n.arity(); ++i) {
        const TypedStatement& p = n.pstmt(i);
        expect_deterministic(p.annotation, "sampling premise");
        if (strip_runs(p.subject) != base) {
          fail(ErrorKind::ShapeError, "premise " + show(p.subject) + " is not an execution of " + show(base));
        }
        if (std::find(seen.begin(), seen.end(), p.subject) != seen.end()) {
          fail(ErrorKind::ShapeError, "execution " + show(p.subject) + " is counted twice");
        }
        seen.push_back(p.subject);
        if (!same_set(n.pctx(i), c)) {
          fail(ErrorKind::ShapeError, "premise " + std::to_string(i + 1) +
                                          " is not under the conclusion context " + show(c));
        }
        if (output_of(p) == output_of(s)) ++hits;
      }
      if (s.subject != base.with_sample(count)) {
        if (s.subject.without_sample() == base) {
          fail(ErrorKind::SampleSizeMismatch, "sample size should be " + std::to_string(count));
        }
        expect_term(s.subject, base.with_sample(count));
      }
      if (s.annotation.kind != AK::Frequency || s.annotation.trials != count ||
          s.annotation.successes != hits) {
        fail(ErrorKind::FrequencyMismatch, "expected frequency " + std::to_string(hits) + "/" +
                                               std::to_string(count) + ", found " +
                                               syntax::pretty_print(s.annotation));
      }
      return;
    }
    case RuleId::Update: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      if (a.annotation.kind != AK::Frequency || b.annotation.kind != AK::Frequency) {
        fail(ErrorKind::ShapeError, "update pools two frequencies");
      }
      if (a.subject.without_sample() != b.subject.without_sample()) {
        fail(ErrorKind::ShapeError, "update pools samples of one process, found " +
                                        show(a.subject) + " and " + show(b.subject));
      }
      expect_output(b, output_of(a));
      const std::int64_t na = a.subject.sample.value_or(a.annotation.trials);
      const std::int64_t nb = b.subject.sample.value_or(b.annotation.trials);
      n.expect_union();
      if (s.subject.without_sample() != a.subject.without_sample()) {
        expect_term(s.subject, a.subject.without_sample().with_sample(na + nb));
      }
      if (s.subject.sample != na + nb) {
        fail(ErrorKind::SampleSizeMismatch, "pooled sample size should be " + std::to_string(na + nb));
      }
      expect_output(s, output_of(a));
      const Rational fa = Rational(a.annotation.successes, a.annotation.trials);
      const Rational fb = Rational(b.annotation.successes, b.annotation.trials);
      const Rational pooled = checked(add, checked(mul, fa, Rational(na, na + nb)),
                                      checked(mul, fb, Rational(nb, na + nb)));
      expect_measured(s.annotation, Measure::Frequency, pooled);
      return;
    }
    case RuleId::SampISum: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      same_samples(a.subject, b.subject);
      expect_term(b.subject, a.subject);
      Measured x = measured(a.annotation);
      Measured y = measured(b.annotation);
      const Measure m = combine(x.measure, y.measure);
      n.expect_union();
      expect_term(s.subject, a.subject);
      expect_output(s, OutputType::sum(output_of(a), output_of(b)));
      expect_measured(s.annotation, m, checked(add, x.value, y.value));
      return;
    }
    case RuleId::SampESumL:
    case RuleId::SampESumR: {
      // E+L drops the left disjunct; E+R, read symmetrically, the right one.
      const bool keep_left = n.rule() == RuleId::SampESumR;
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Sum) fail(ErrorKind::ShapeError, "major premise needs a sum type");
      expect_distinct(*o.left, *o.right);
      same_samples(major.subject, minor.subject);
      expect_term(minor.subject, major.subject);
      expect_output(minor, keep_left ? *o.right : *o.left);
      Measured c = measured(major.annotation);
      Measured d = measured(minor.annotation);
      const Measure m = combine(c.measure, d.measure);
      n.expect_union();
      expect_term(s.subject, major.subject);
      expect_output(s, keep_left ? *o.left : *o.right);
      const Rational v = checked(sub, c.value, d.value);
      if (v < Rational(0)) fail(ErrorKind::ArithmeticMismatch, "difference is negative");
      expect_measured(s.annotation, m, v);
      return;
    }
    case RuleId::SampIProd: {
      const TypedStatement& a = n.pstmt(0);
      const TypedStatement& b = n.pstmt(1);
      auto na = a.subject.sample;
      auto nb = b.subject.sample;
      if (!na || !nb) fail(ErrorKind::ShapeError, "samp_I* needs sampled operands");
      if (*na != *nb) {
        fail(ErrorKind::SampleSizeMismatch,
             "sample sizes " + std::to_string(*na) + " and " + std::to_string(*nb) + " differ");
      }
      Measured x = measured(a.annotation);
      Measured y = measured(b.annotation);
      const Measure m = combine(x.measure, y.measure);
      n.require_independence(n.pctx(0), n.pctx(1));
      n.expect_union();
      expect_term(s.subject,
                  Term::pair(a.subject.without_sample(), b.subject.without_sample()).with_sample(*na));
      expect_output(s, OutputType::product(output_of(a), output_of(b)));
      expect_measured(s.annotation, m, checked(mul, x.value, y.value));
      return;
    }
    case RuleId::SampEProdL:
    case RuleId::SampEProdR: {
      const bool left = n.rule() == RuleId::SampEProdL;
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Product) fail(ErrorKind::ShapeError, "major premise needs a product type");
      expect_distinct(*o.left, *o.right);
      if (!major.subject.sample) fail(ErrorKind::ShapeError, "major premise needs a sampled term");
      const std::int64_t size = *major.subject.sample;
      const Term base = major.subject.without_sample();
      same_samples(major.subject, minor.subject);
      expect_term(minor.subject, (left ? Term::fst(base) : Term::snd(base)).with_sample(size));
      expect_output(minor, left ? *o.left : *o.right);
      Measured c = measured(major.annotation);
      Measured d = measured(minor.annotation);
      const Measure m = combine(c.measure, d.measure);
      n.expect_union();
      expect_term(s.subject, (left ? Term::snd(base) : Term::fst(base)).with_sample(size));
      expect_output(s, left ? *o.right : *o.left);
      expect_measured(s.annotation, m, checked(div, c.value, d.value));
      return;
    }
    case RuleId::SampIArrow: {
      const TypedStatement& p = n.pstmt(0);
      if (s.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "conclusion subject must be an abstraction");
      }
      const OutputType& o = output_of(s);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "conclusion needs an arrow type");
      const Entries pc = n.pctx(0);
      auto bound = bound_entry(pc, *s.subject.left, *o.left);
      if (!bound || bound->annotation.kind != AK::Theoretical) {
        fail(ErrorKind::DischargeError, "premise context lacks " + show(*s.subject.left) + " : " +
                                            show(*o.left) + " with a theoretical probability");
      }
      expect_term(*s.subject.right, p.subject);
      expect_output(s, OutputType::arrow(*o.left, output_of(p)));
      expect_context(n.ctx(), minus(pc, {*bound}));
      Measured b = measured(p.annotation);
      if (s.annotation.kind != AK::ArrowTagged) {
        fail(ErrorKind::ShapeError, "conclusion needs a tagged annotation [a] b");
      }
      if (s.annotation.value != bound->annotation.value) mismatch(bound->annotation.value, s.annotation.value);
      expect_measured(*s.annotation.body, b.measure, b.value);
      return;
    }
    case RuleId::SampEArrow: {
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      if (major.subject.kind != Term::Kind::Abstraction) {
        fail(ErrorKind::ShapeError, "major premise must type an abstraction");
      }
      const OutputType& o = output_of(major);
      if (o.kind != OutputType::Kind::Arrow) fail(ErrorKind::ShapeError, "major premise needs an arrow type");
      if (major.annotation.kind != AK::ArrowTagged) {
        fail(ErrorKind::ShapeError, "major premise needs a tagged annotation [a] b");
      }
      const Rational tag = major.annotation.value;
      // The minor premise is formed under a variable designated to u with
      // the tagged probability.
      const Entries mc = n.pctx(1);
      std::optional<TypedStatement> y;
      if (minor.subject.kind == Term::Kind::Name) {
        y = designated_entry(mc, minor.subject, *o.left);
        if (!y) {
          fail(ErrorKind::MissingDesignatedVariable,
               "minor context has no x_" + minor.subject.name + " : " + show(*o.left));
        }
      } else {
        for (const auto& e : mc) {
          if (e.output && *e.output == *o.left && e.annotation.kind == AK::Theoretical &&
              e.annotation.value == tag) {
            y = e;
          }
        }
        if (!y) fail(ErrorKind::MissingDesignatedVariable, "minor context has no entry for " + show(*o.left));
      }
      if (y->annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "designated entry needs a theoretical probability");
      }
      if (y->annotation.value != tag) mismatch(tag, y->annotation.value);
      const Entries gm = n.pctx(0);
      const Entries c = n.ctx();
      if (!same_set(c, gm) && !same_set(c, unite(gm, mc))) expect_context(c, unite(gm, mc));
      application_conclusion(n, *major.subject.right, *major.annotation.body, *o.left, *o.right, minor);
      return;
    }
    default: break;
  }
  fail(ErrorKind::UnknownRule, "not an expectation or sampling rule");
}

// ---------------------------------------------------------------------------
// prior update

struct Prior {
  Term binder;
  Term body;
  OutputType alpha;
  OutputType beta;
  Rational a;
  Rational b;
};

Prior prior_member(const Judgement& j, const DistributionEnv& env) {
  const TypedStatement& s = j.conclusion;
  if (!dist::resolve(j.context, env).empty()) fail(ErrorKind::ShapeError, "prior members have no context");
  if (s.subject.kind != Term::Kind::Abstraction || !s.output ||
      s.output->kind != OutputType::Kind::Arrow || s.annotation.kind != AK::ArrowTagged ||
      s.annotation.body->kind != AK::Theoretical) {
    fail(ErrorKind::ShapeError, "prior member must read [x]y : (alpha -> beta) [a] b, found " + show(s));
  }
  return {*s.subject.left, *s.subject.right, *s.output->left, *s.output->right,
          s.annotation.value, s.annotation.body->value};
}

void require_normalized(const std::vector<Rational>& priors, const SideCondition* side) {
  Rational total;
  for (const auto& b : priors) total = checked(add, total, b);
  if (total != Rational(1)) {
    fail(ErrorKind::PriorsNotNormalized, "priors sum to " + show(total));
  }
  if (side && side->values != priors) {
    fail(ErrorKind::ShapeError, "normalization side condition lists other priors");
  }
}

void bayes_rule(const Node& n, const DistributionEnv& env) {
  if (n.rule() == RuleId::BayesI) {
    const auto* fam = std::get_if<JudgementFamily>(&n.raw().conclusion);
    if (!fam) fail(ErrorKind::ShapeError, "bayes_I concludes a family of judgements");
    if (fam->members.size() != n.arity()) {
      fail(ErrorKind::ShapeError, "family needs one member per premise");
    }
    std::vector<Rational> priors;
    for (std::size_t i = 0; i < n.arity(); ++i) {
      const Entries pc = n.pctx(i);
      const TypedStatement& p = n.pstmt(i);
      if (pc.size() != 1 || !as_variable(pc[0].subject) || pc[0].annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "premise " + std::to_string(i + 1) +
                                        " must assume a single x : alpha @ a");
      }
      if (!as_variable(p.subject) || p.annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "premise " + std::to_string(i + 1) + " must conclude y : beta @ b");
      }
      Prior m = prior_member(fam->members[i], env);
      if (m.binder != pc[0].subject || m.body != p.subject || m.alpha != output_of(pc[0]) ||
          m.beta != output_of(p)) {
        fail(ErrorKind::ShapeError, "member " + std::to_string(i + 1) + " does not match its premise");
      }
      if (m.a != pc[0].annotation.value) mismatch(pc[0].annotation.value, m.a);
      if (m.b != p.annotation.value) mismatch(p.annotation.value, m.b);
      if (i > 0) {
        Prior first = prior_member(fam->members[0], env);
        if (first.binder != m.binder || first.body != m.body || first.alpha != m.alpha ||
            first.beta != m.beta) {
          fail(ErrorKind::ShapeError, "family members range over different variables");
        }
      }
      priors.push_back(m.b);
    }
    require_normalized(priors, n.side(SideCondition::Kind::NormalizedPriors));
    return;
  }
  if (n.rule() != RuleId::BayesE) fail(ErrorKind::UnknownRule, "not a prior-update rule");

  const auto* fam = std::get_if<JudgementFamily>(&n.raw().premises.at(0).conclusion);
  if (!fam || fam->members.empty()) fail(ErrorKind::ShapeError, "first premise must be a prior family");
  std::vector<Prior> members;
  std::vector<Hypothesis> hyps;
  std::vector<Rational> priors;
  for (const auto& j : fam->members) {
    members.push_back(prior_member(j, env));
    if (members.back().binder != members.front().binder || members.back().body != members.front().body ||
        members.back().alpha != members.front().alpha || members.back().beta != members.front().beta) {
      fail(ErrorKind::ShapeError, "family members range over different variables");
    }
    hyps.push_back({members.back().a, members.back().b});
    priors.push_back(members.back().b);
  }
  require_normalized(priors, n.side(SideCondition::Kind::NormalizedPriors));
  const Prior& shape = members.front();

  const TypedStatement& data = n.pstmt(1);
  const Entries dc = n.pctx(1);
  expect_output(data, shape.alpha);
  if (data.annotation.kind != AK::Frequency) fail(ErrorKind::ShapeError, "data premise needs a frequency");
  const std::int64_t size = data.subject.sample.value_or(data.annotation.trials);
  const Rational f(data.annotation.successes, data.annotation.trials);
  const Rational fn = checked(mul, f, Rational(size));
  if (!fn.is_integer()) {
    fail(ErrorKind::NonIntegerSuccessCount, "f * n = " + show(fn) + " is not an integer");
  }
  std::optional<std::size_t> index;
  for (std::size_t i = 0; i < members.size() && !index; ++i) {
    if (contains(dc, statement(shape.binder, shape.alpha, Annotation::theoretical(members[i].a)))) index = i;
  }
  if (!index) {
    fail(ErrorKind::ShapeError, "data context assumes no hypothesis " + show(shape.binder) + " : " +
                                    show(shape.alpha) + " @ a_i of the family");
  }
  const TypedStatement& s = n.stmt();
  expect_context(n.ctx(), dc);
  expect_term(s.subject, Term::application(shape.body, data));
  expect_output(s, shape.beta);
  if (s.annotation.kind != AK::Theoretical) fail(ErrorKind::ShapeError, "posterior must be theoretical");
  long double posterior = 0;
  try {
    posterior = stats::bayes_posterior(hyps, *index, fn.num(), size);
  } catch (const Error& e) {
    fail(e.kind(), e.detail());
  }
  const long double declared = s.annotation.value.to_long_double();
  if (std::fabs(posterior - declared) > kPosteriorTol) {
    fail(ErrorKind::ArithmeticMismatch, "posterior is " + std::to_string(static_cast<double>(posterior)) +
                                            ", found " + show(s.annotation.value));
  }
}

// ---------------------------------------------------------------------------
// trust

void trust_rule(const Node& n, const DistributionEnv& env, const ThresholdStrategy& strategy) {
  const RuleId r = n.rule();
  if (r == RuleId::TrustI || r == RuleId::UTrustI) {
    const bool trust = r == RuleId::TrustI;
    const TypedStatement& obs = n.pstmt(1);
    const OutputType& alpha = output_of(obs);
    if (obs.annotation.kind != AK::Frequency) fail(ErrorKind::ShapeError, "second premise needs a frequency");
    const std::int64_t k = obs.annotation.successes;
    const std::int64_t size = obs.annotation.trials;
    if (obs.subject.sample && *obs.subject.sample != size) {
      fail(ErrorKind::SampleSizeMismatch, "frequency trials differ from the sample size");
    }

    const SideCondition* side = n.side(trust ? SideCondition::Kind::ThresholdHolds
                                             : SideCondition::Kind::ThresholdFails);
    if (n.side(trust ? SideCondition::Kind::ThresholdFails : SideCondition::Kind::ThresholdHolds)) {
      fail(ErrorKind::ShapeError, trust ? "trust_I cannot carry a failing threshold"
                                        : "utrust_I cannot carry a holding threshold");
    }

    // First premise: x : alpha @ a, or a distribution holding one.
    Entries g;
    std::vector<Rational> candidates;
    const Conclusion& first = n.raw().premises.at(0).conclusion;
    if (const auto* dj = std::get_if<DistributionJudgement>(&first)) {
      g = dist::resolve(dj->context, env);
      for (const auto& e : g) {
        if (e.output && *e.output == alpha && e.annotation.kind == AK::Theoretical) {
          candidates.push_back(e.annotation.value);
        }
      }
    } else {
      const Judgement& j = judgement_of(first, "first premise");
      g = dist::resolve(j.context, env);
      expect_output(j.conclusion, alpha);
      if (!as_variable(j.conclusion.subject) || j.conclusion.annotation.kind != AK::Theoretical) {
        fail(ErrorKind::ShapeError, "first premise must read x : alpha @ a");
      }
      candidates.push_back(j.conclusion.annotation.value);
    }
    if (candidates.empty()) {
      fail(ErrorKind::ShapeError, "first premise assigns no probability to " + show(alpha));
    }
    Rational a = candidates.front();
    if (side) {
      if (std::find(candidates.begin(), candidates.end(), side->a) == candidates.end()) {
        fail(ErrorKind::ShapeError, "threshold side condition tests " + show(side->a) +
                                        ", not a probability of the first premise");
      }
      a = side->a;
      if (side->k != k || side->n != size) {
        fail(ErrorKind::ShapeError, "threshold side condition tests " + std::to_string(side->k) + "/" +
                                        std::to_string(side->n) + " instead of " + std::to_string(k) +
                                        "/" + std::to_string(size));
      }
    } else if (candidates.size() > 1) {
      fail(ErrorKind::ShapeError, "first premise is ambiguous; state the threshold side condition");
    }
    const ThresholdStrategy& st = side && side->strategy ? *side->strategy : strategy;
    const bool ok = stats::accepts(st, a, k, size);
    if (ok != trust) {
      ProbInterval iv = stats::acceptance_interval(st, k, size);
      fail(ErrorKind::StrategyError,
           show(a) + (ok ? " lies in [" : " lies outside [") + std::to_string(static_cast<double>(iv.lo)) +
               ", " + std::to_string(static_cast<double>(iv.hi)) + "] under " + st.str());
    }
    expect_context(n.ctx(), unite(g, n.pctx(1)));
    const TypedStatement& s = n.stmt();
    const Term expected = trust ? Term::trust(obs) : Term::utrust(obs);
    expect_term(s.subject, expected);
    return;
  }
  if (r != RuleId::TrustE && r != RuleId::UTrustE) fail(ErrorKind::UnknownRule, "not a trust rule");

  const bool trust = r == RuleId::TrustE;
  const TypedStatement& p = n.pstmt(0);
  const Term::Kind want = trust ? Term::Kind::Trust : Term::Kind::UTrust;
  if (p.subject.kind != want || !p.subject.arg) {
    fail(ErrorKind::ShapeError, trust ? "premise must be Trust(...)" : "premise must be UTrust(...)");
  }
  const TypedStatement& obs = *p.subject.arg;
  if (obs.annotation.kind != AK::Frequency) fail(ErrorKind::ShapeError, "trusted statement needs a frequency");
  const OutputType& alpha = output_of(obs);
  const TypedStatement& s = n.stmt();
  if (s != obs) fail(ErrorKind::ShapeError, "conclusion must restate " + show(obs));
  const Entries pc = n.pctx(0);
  const Entries c = n.ctx();
  const Entries added = minus(c, pc);
  if (!subset(pc, c) || added.size() != 1) {
    fail(ErrorKind::ShapeError, "conclusion must add one entry x_u : alpha to the premise context");
  }
  const TypedStatement& e = added.front();
  const Term base = obs.subject.without_sample();
  if (!as_variable(e.subject) || (base.kind == Term::Kind::Name && e.subject.index != base.name)) {
    fail(ErrorKind::MissingDesignatedVariable, show(e.subject) + " is not designated to " + show(base));
  }
  expect_output(e, alpha);
  const AK kind = trust ? AK::Interval : AK::Outside;
  if (e.annotation.kind != kind) {
    fail(ErrorKind::ShapeError, std::string("new entry needs ") + (trust ? "an interval" : "a complement interval") +
                                    ", found " + syntax::pretty_print(e.annotation));
  }
  ProbInterval iv = stats::acceptance_interval(strategy, obs.annotation.successes, obs.annotation.trials);
  const long double lo = e.annotation.lo.to_long_double();
  const long double hi = e.annotation.hi.to_long_double();
  if (std::fabs(lo - iv.lo) > kIntervalTol || std::fabs(hi - iv.hi) > kIntervalTol) {
    fail(ErrorKind::ArithmeticMismatch, "acceptance interval is [" + std::to_string(static_cast<double>(iv.lo)) +
                                            ", " + std::to_string(static_cast<double>(iv.hi)) + "] under " +
                                            strategy.str());
  }
}

// ---------------------------------------------------------------------------
// structural

void structural_rule(const Node& n) {
  const TypedStatement& s = n.stmt();
  switch (n.rule()) {
    case RuleId::Weakening: {
      const Entries g = n.pctx(0);
      const Entries d = n.pctx(1);
      n.require_independence(g, d);
      const TypedStatement& p = n.pstmt(0);
      if (s != p) {
        if (s.subject == p.subject && s.output == p.output) {
          fail(ErrorKind::ArithmeticMismatch, "weakening keeps " + syntax::pretty_print(p.annotation) +
                                                  ", found " + syntax::pretty_print(s.annotation));
        }
        fail(ErrorKind::ShapeError, "weakening keeps the statement " + show(p));
      }
      expect_context(n.ctx(), unite(g, d));
      return;
    }
    case RuleId::Contraction: {
      const TypedStatement& p = n.pstmt(0);
      if (s != p) fail(ErrorKind::ShapeError, "contraction keeps the statement " + show(p));
      if (s.annotation.kind != AK::Frequency) fail(ErrorKind::ShapeError, "contraction needs an observed frequency");
      const Entries pc = n.pctx(0);
      const Entries c = n.ctx();
      const Entries removed = minus(pc, c);
      const Entries added = minus(c, pc);
      if (removed.empty()) fail(ErrorKind::ShapeError, "contraction removes the candidate hypotheses");
      // The chosen value is the one theoretical entry left on the hypotheses'
      // variable and output; it is either new or one of the premise entries.
      const TypedStatement& key = removed[0];
      std::optional<TypedStatement> picked;
      for (const auto& e : c) {
        if (e.subject != key.subject || e.output != key.output) continue;
        if (picked || e.annotation.kind != AK::Theoretical) {
          fail(ErrorKind::ShapeError, "contraction leaves exactly one theoretical value");
        }
        picked = e;
      }
      if (!picked) fail(ErrorKind::ShapeError, "contraction leaves exactly one theoretical value");
      const TypedStatement& chosen = *picked;
      for (const auto& e : added) {
        if (e != chosen) fail(ErrorKind::ShapeError, "contraction adds " + show(e));
      }
      expect_output(s, output_of(chosen));
      const std::int64_t k = s.annotation.successes;
      const std::int64_t size = s.annotation.trials;
      const SideCondition* fn = n.side(SideCondition::Kind::ContractionFunction);
      const MlMode mode = fn ? fn->mode : MlMode::CountExponent;
      std::vector<Rational> candidates;
      for (const auto& e : removed) {
        if (e.subject != chosen.subject || e.output != chosen.output) {
          fail(ErrorKind::ShapeError, "removed entry " + show(e) + " is not a hypothesis on " +
                                          show(chosen.subject) + " : " + show(output_of(chosen)));
        }
        const Annotation& a = e.annotation;
        if (a.kind == AK::Theoretical) {
          candidates.push_back(a.value);
        } else if (a.kind == AK::Interval) {
          candidates.push_back(stats::ml_point_in_range(a.lo, a.hi, k, size, mode));
        } else if (a.kind == AK::Outside) {
          if (a.lo > Rational(0)) candidates.push_back(stats::ml_point_in_range(Rational(0), a.lo, k, size, mode));
          if (a.hi < Rational(1)) candidates.push_back(stats::ml_point_in_range(a.hi, Rational(1), k, size, mode));
        } else {
          fail(ErrorKind::ShapeError, "hypothesis " + show(e) + " carries no probability");
        }
      }
      if (std::find(pc.begin(), pc.end(), chosen) != pc.end()) {
        candidates.push_back(chosen.annotation.value);
      }
      if (candidates.empty()) fail(ErrorKind::EmptyCandidates, "no candidate value to contract");
      const Rational best = stats::ml_contract(candidates, k, size, mode);
      if (chosen.annotation.value != best) {
        fail(ErrorKind::ContractionValueMismatch,
             "maximum likelihood selects " + show(best) + ", found " + show(chosen.annotation.value));
      }
      return;
    }
    case RuleId::Cut: {
      const TypedStatement& major = n.pstmt(0);
      const TypedStatement& minor = n.pstmt(1);
      const OutputType& alpha = output_of(minor);
      const Entries dc = n.pctx(0);
      Measured am = measured(minor.annotation, true);
      std::optional<TypedStatement> bound;
      for (const auto& e : dc) {
        if (!e.output || *e.output != alpha || e.annotation.kind != AK::Theoretical) continue;
        const bool designated = e.subject.index && minor.subject.kind == Term::Kind::Name &&
                                *e.subject.index == minor.subject.name;
        if (!bound || designated) bound = e;
        if (designated) break;
      }
      if (!bound) fail(ErrorKind::DischargeError, "major context has no entry x : " + show(alpha) + " @ a");
      if (am.measure == Measure::Expected && bound->annotation.value != am.value) {
        mismatch(bound->annotation.value, am.value);
      }
      expect_context(n.ctx(), unite(minus(dc, {*bound}), n.pctx(1)));
      application_conclusion(n, major.subject, major.annotation, alpha, output_of(major), minor);
      return;
    }
    default: break;
  }
  fail(ErrorKind::UnknownRule, "not a structural rule");
}

// Interval-annotated contexts feed only these premises.
bool interval_premise_licensed(RuleId r, std::size_t i) {
  switch (r) {
    case RuleId::Sampling:
    case RuleId::Update: return true;
    case RuleId::TrustI:
    case RuleId::UTrustI: return i == 1;
    case RuleId::TrustE:
    case RuleId::UTrustE:
    case RuleId::Contraction: return i == 0;
    default: return false;
  }
}

std::vector<ContextItem> context_of(const Conclusion& c) {
  if (const auto* j = std::get_if<Judgement>(&c)) return j->context;
  if (const auto* d = std::get_if<DistributionJudgement>(&c)) return d->context;
  return {};
}

void check_tree(const Derivation& d, const DistributionEnv& env, const ThresholdStrategy& strategy,
                const std::string& path, CheckReport& report) {
  auto record = [&](std::optional<RuleId> rule, const Error& e) {
    report.failures.push_back({path.empty() ? "/" : path, rule, e.kind(), e.what()});
  };
  if (d.is_assumption()) {
    ++report.open_assumptions;
    try {
      dist::resolve(context_of(d.conclusion), env);
      if (const auto* fam = std::get_if<JudgementFamily>(&d.conclusion)) {
        for (const auto& m : fam->members) dist::resolve(m.context, env);
      }
    } catch (const Error& e) {
      record(std::nullopt, e);
    }
    return;
  }
  ++report.stats[std::string(rule_name(*d.rule))];
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    check_tree(d.premises[i], env, strategy, path + "/" + std::to_string(i), report);
  }
  try {
    check_node(d, env, strategy);
  } catch (const Error& e) {
    record(d.rule, e);
  }
}

}  // namespace

void check_distribution_rule(const Derivation& node, const DistributionEnv& env) {
  distribution_rule(Node(node, env));
}
void check_variable_rule(const Derivation& node, const DistributionEnv& env) {
  variable_rule(Node(node, env));
}
void check_experiment_rule(const Derivation& node, const DistributionEnv& env) {
  experiment_rule(Node(node, env));
}
void check_sampling_rule(const Derivation& node, const DistributionEnv& env) {
  sampling_rule(Node(node, env));
}
void check_bayes_rule(const Derivation& node, const DistributionEnv& env) {
  bayes_rule(Node(node, env), env);
}
void check_trust_rule(const Derivation& node, const DistributionEnv& env,
                      const ThresholdStrategy& strategy) {
  trust_rule(Node(node, env), env, strategy);
}
void check_structural_rule(const Derivation& node, const DistributionEnv& env) {
  structural_rule(Node(node, env));
}

void check_node(const Derivation& node, const DistributionEnv& env, const ThresholdStrategy& strategy) {
  if (!node.rule) return;
  const RuleId r = *node.rule;
  const int count = static_cast<int>(node.premises.size());
  if (!rule_arity(r).admits(count)) {
    fail(ErrorKind::ArityError, std::string(rule_name(r)) + " does not take " + std::to_string(count) +
                                    " premises");
  }
  for (std::size_t i = 0; i < node.premises.size(); ++i) {
    if (interval_premise_licensed(r, i)) continue;
    if (has_interval(dist::resolve(context_of(node.premises[i].conclusion), env))) {
      fail(ErrorKind::ShapeError, "premise " + std::to_string(i + 1) + " of " + std::string(rule_name(r)) +
                                      " cannot rest on interval probabilities");
    }
  }
  switch (rule_family(r)) {
    case RuleFamily::Distribution: return check_distribution_rule(node, env);
    case RuleFamily::Variable: return check_variable_rule(node, env);
    case RuleFamily::Experiment: return check_experiment_rule(node, env);
    case RuleFamily::Sampling: return check_sampling_rule(node, env);
    case RuleFamily::Bayes: return check_bayes_rule(node, env);
    case RuleFamily::Trust: return check_trust_rule(node, env, strategy);
    case RuleFamily::Structural: return check_structural_rule(node, env);
  }
  fail(ErrorKind::UnknownRule, std::string(rule_name(r)));
}

CheckReport check_derivation(const Derivation& d, const DistributionEnv& env,
                             const ThresholdStrategy& strategy) {
  CheckReport report;
  report.derivations = 1;
  check_tree(d, env, strategy, "", report);
  return report;
}

DistributionEnv environment(const File& file) {
  DistributionEnv env;
  for (const auto& item : file) {
    if (const auto* d = std::get_if<Distribution>(&item.node)) env[d->name] = *d;
  }
  return env;
}

CheckReport check_file(const File& file, const ThresholdStrategy& strategy) {
  CheckReport report;
  const DistributionEnv env = environment(file);
  for (std::size_t i = 0; i < file.size(); ++i) {
    const Item& item = file[i];
    const std::string label = item.name.empty() ? "#" + std::to_string(i) : item.name;
    if (const auto* d = std::get_if<Distribution>(&item.node)) {
      try {
        dist::validate(*d);
      } catch (const Error& e) {
        report.failures.push_back({label, std::nullopt, e.kind(), e.what()});
      }
    } else if (const auto* j = std::get_if<Judgement>(&item.node)) {
      try {
        dist::resolve(j->context, env);
      } catch (const Error& e) {
        report.failures.push_back({label, std::nullopt, e.kind(), e.what()});
      }
    } else {
      CheckReport sub = check_derivation(std::get<Derivation>(item.node), env, strategy);
      for (auto& f : sub.failures) f.path = label + (f.path == "/" ? "" : f.path);
      report.merge(sub);
    }
  }
  return report;
}

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"path", f.path},
                        {"rule", f.rule ? nlohmann::json(std::string(rule_name(*f.rule))) : nlohmann::json()},
                        {"kind", to_string(f.kind)},
                        {"reason", f.reason}});
  }
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [rule, count] : report.stats) stats[rule] = count;
  return {{"verdict", report.accepted() ? "accepted" : "rejected"},
          {"failures", failures},
          {"stats", stats},
          {"open_assumptions", report.open_assumptions},
          {"derivations", report.derivations}};
}

}  // namespace tptnd::checker
