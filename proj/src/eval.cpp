// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/eval.h"

#include <algorithm>
#include <set>

#include "tptnd/error.h"
#include "tptnd/parser.h"

namespace tptnd {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::split() { return SplitMix64(next() ^ 0x6A09E667F3BCC909ULL); }

void ProcessSpec::validate() const {
  if (outcomes.empty()) {
    throw Error(ErrorKind::RangeError, "process '" + name + "' has no outcomes");
  }
  Rational total(0);
  for (const auto& o : outcomes) {
    if (!o.probability.is_probability()) {
      throw Error(ErrorKind::RangeError, "outcome probability outside [0,1]");
    }
    total += o.probability;
  }
  if (total != Rational(1)) {
    throw Error(ErrorKind::RangeError,
                "outcomes of '" + name + "' sum to " + total.str() + ", not 1");
  }
}

}  // namespace tptnd

namespace tptnd::eval {
namespace {

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "frequency overflow");
  return r;
}

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "frequency overflow");
  return r;
}

Frequency freq_of(const TypedStatement& s) {
  const Annotation& a = s.annotation.stripped();
  if (a.kind != Annotation::Kind::Frequency) {
    throw Error(ErrorKind::ShapeError, "expected a frequency on " + syntax::pretty_print(s));
  }
  return {a.successes, a.trials};
}

Frequency checked(Frequency f) {
  if (f.successes < 0) throw Error(ErrorKind::NegativeFrequency, "negative frequency");
  if (f.successes > f.trials) throw Error(ErrorKind::ShapeError, "frequency exceeds 1");
  return f;
}

Frequency freq_add(Frequency f, Frequency g) {
  if (f.trials == g.trials) return checked({add(f.successes, g.successes), f.trials});
  return checked({add(mul(f.successes, g.trials), mul(g.successes, f.trials)),
                  mul(f.trials, g.trials)});
}

Frequency freq_sub(Frequency f, Frequency g) {
  if (f.trials == g.trials) return checked({f.successes - g.successes, f.trials});
  return checked({mul(f.successes, g.trials) - mul(g.successes, f.trials),
                  mul(f.trials, g.trials)});
}

Frequency freq_mul(Frequency f, Frequency g) {
  return checked({mul(f.successes, g.successes), mul(f.trials, g.trials)});
}

Frequency freq_div(Frequency f, Frequency g) {
  if (g.successes == 0) throw Error(ErrorKind::DivisionByZero, "division by a zero frequency");
  return checked({mul(f.successes, g.trials), mul(f.trials, g.successes)});
}

std::int64_t sample_of(const Term& t) {
  if (!t.sample) {
    throw Error(ErrorKind::ShapeError, "expected a sampled term, got " + syntax::pretty_print(t));
  }
  return *t.sample;
}

std::int64_t sample_of(const TypedStatement& s) { return sample_of(s.subject); }

const OutputType& output_of(const TypedStatement& s) {
  if (!s.output) throw Error(ErrorKind::ShapeError, "statement without output");
  return *s.output;
}

void check_index(const EvalState& s, std::size_t i) {
  if (i >= s.items.size()) {
    throw Error(ErrorKind::IndexError, "item " + std::to_string(i) + " out of range");
  }
}

// Removes consumed items, appends the product and records the step.
EvalState commit(EvalState s, std::string rule, std::vector<std::size_t> consumed,
                 TypedStatement produced, std::uint64_t rng_before) {
  std::vector<std::size_t> order = consumed;
  std::sort(order.rbegin(), order.rend());
  for (std::size_t i : order) s.items.erase(s.items.begin() + static_cast<std::ptrdiff_t>(i));
  s.items.push_back(produced);
  TraceStep t;
  t.step = static_cast<std::int64_t>(s.trace.size());
  t.rule = std::move(rule);
  t.consumed = std::move(consumed);
  t.produced = std::move(produced);
  t.rng_before = rng_before;
  t.rng_after = s.rng.state();
  s.trace.push_back(std::move(t));
  return s;
}

TypedStatement with_frequency(Term subject, OutputType output, Frequency f) {
  return statement(std::move(subject), std::move(output),
                   Annotation::frequency(f.successes, f.trials));
}

void require_operands(const EvalState& s, const std::vector<std::size_t>& operands,
                      std::size_t count) {
  if (operands.size() != count) {
    throw Error(ErrorKind::ShapeError, "expected " + std::to_string(count) + " operands");
  }
  for (std::size_t i : operands) check_index(s, i);
  if (count == 2 && operands[0] == operands[1]) {
    throw Error(ErrorKind::IndexError, "operand used twice");
  }
}

const TypedStatement& require_side(const std::optional<TypedStatement>& side) {
  if (!side) throw Error(ErrorKind::ShapeError, "rule needs a premise statement");
  return *side;
}

}  // namespace

std::string_view logical_rule_name(LogicalRule r) {
  switch (r) {
    case LogicalRule::ISum: return "I+";
    case LogicalRule::ESumL: return "E+L";
    case LogicalRule::ESumR: return "E+R";
    case LogicalRule::IProd: return "I*";
    case LogicalRule::EProdL: return "E*L";
    case LogicalRule::EProdR: return "E*R";
    case LogicalRule::IArrow: return "I->";
    case LogicalRule::EArrow: return "E->";
  }
  return "";
}

EvalState step_event(EvalState s, const ProcessSpec& p) {
  p.validate();
  const std::uint64_t before = s.rng.state();
  const unsigned __int128 u = s.rng.next();
  // First outcome whose cumulative probability c satisfies u < c * 2^64.
  Rational cumulative(0);
  std::size_t pick = p.outcomes.size() - 1;
  for (std::size_t i = 0; i < p.outcomes.size(); ++i) {
    cumulative += p.outcomes[i].probability;
    const unsigned __int128 lhs = u * static_cast<unsigned __int128>(cumulative.den());
    const unsigned __int128 rhs = static_cast<unsigned __int128>(cumulative.num()) << 64;
    if (lhs < rhs) {
      pick = i;
      break;
    }
  }
  const std::int64_t run = ++s.executions[p.name];
  TypedStatement produced =
      statement(Term::var(p.name).with_run(run), p.outcomes[pick].output);
  return commit(std::move(s), "event", {}, std::move(produced), before);
}

EvalState step_sampling(EvalState s, std::string_view process,
                        const std::vector<std::size_t>& indices,
                        const OutputType& target) {
  if (indices.empty()) throw Error(ErrorKind::IndexError, "sampling needs executions");
  std::set<std::size_t> seen;
  std::int64_t k = 0;
  for (std::size_t i : indices) {
    check_index(s, i);
    if (!seen.insert(i).second) throw Error(ErrorKind::IndexError, "index repeated");
    const TypedStatement& item = s.items[i];
    if (item.subject.kind != Term::Kind::Name || item.subject.sample ||
        item.annotation.kind != Annotation::Kind::Deterministic) {
      throw Error(ErrorKind::IndexError,
                  "item " + std::to_string(i) + " is not a single execution");
    }
    if (item.subject.name != process) {
      throw Error(ErrorKind::MixedProcess, "item " + std::to_string(i) + " belongs to '" +
                                               item.subject.name + "'");
    }
    if (output_of(item) == target) ++k;
  }
  const auto n = static_cast<std::int64_t>(indices.size());
  TypedStatement produced =
      with_frequency(Term::var(std::string(process)).with_sample(n), target, {k, n});
  const std::uint64_t before = s.rng.state();
  return commit(std::move(s), "sampling", indices, std::move(produced), before);
}

EvalState step_update(EvalState s, std::size_t i, std::size_t j) {
  check_index(s, i);
  check_index(s, j);
  if (i == j) throw Error(ErrorKind::IndexError, "update needs two distinct items");
  const TypedStatement& a = s.items[i];
  const TypedStatement& b = s.items[j];
  const std::int64_t n = sample_of(a);
  const std::int64_t m = sample_of(b);
  if (a.subject.without_sample() != b.subject.without_sample()) {
    throw Error(ErrorKind::ProcessMismatch, "update across different processes");
  }
  if (output_of(a) != output_of(b)) {
    throw Error(ErrorKind::TypeMismatch, "update across different outputs");
  }
  const Frequency f = freq_of(a);
  const Frequency g = freq_of(b);
  Frequency pooled;
  if (f.trials == n && g.trials == m) {
    pooled = {add(f.successes, g.successes), add(n, m)};
  } else {
    const Rational v = (f.value() * Rational(n) + g.value() * Rational(m)) / Rational(add(n, m));
    pooled = {v.num(), v.den()};
  }
  TypedStatement produced =
      with_frequency(a.subject.without_sample().with_sample(add(n, m)), output_of(a), pooled);
  const std::uint64_t before = s.rng.state();
  return commit(std::move(s), "update", {i, j}, std::move(produced), before);
}

EvalState step_logical(EvalState s, LogicalRule rule,
                       const std::vector<std::size_t>& operands,
                       const std::optional<TypedStatement>& side) {
  const std::uint64_t before = s.rng.state();
  const std::string name(logical_rule_name(rule));
  switch (rule) {
    case LogicalRule::ISum: {
      require_operands(s, operands, 2);
      const TypedStatement& a = s.items[operands[0]];
      const TypedStatement& b = s.items[operands[1]];
      if (a.subject != b.subject) throw Error(ErrorKind::ShapeError, "I+ needs the same sampled term");
      sample_of(a);
      TypedStatement out = with_frequency(
          a.subject, OutputType::sum(output_of(a), output_of(b)), freq_add(freq_of(a), freq_of(b)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
    case LogicalRule::ESumL:
    case LogicalRule::ESumR: {
      require_operands(s, operands, 1);
      const TypedStatement& a = s.items[operands[0]];
      const TypedStatement& p = require_side(side);
      const OutputType& o = output_of(a);
      if (o.kind != OutputType::Kind::Sum) throw Error(ErrorKind::ShapeError, "E+ needs a sum output");
      if (*o.left == *o.right) throw Error(ErrorKind::ShapeError, "E+ needs distinct disjuncts");
      const bool left = rule == LogicalRule::ESumL;
      const OutputType& kept = left ? *o.left : *o.right;
      const OutputType& dropped = left ? *o.right : *o.left;
      if (p.subject != a.subject || output_of(p) != dropped) {
        throw Error(ErrorKind::ShapeError, "E+ premise must be " + syntax::pretty_print(a.subject) +
                                               " : " + syntax::pretty_print(dropped));
      }
      sample_of(a);
      TypedStatement out = with_frequency(a.subject, kept, freq_sub(freq_of(a), freq_of(p)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
    case LogicalRule::IProd: {
      require_operands(s, operands, 2);
      const TypedStatement& a = s.items[operands[0]];
      const TypedStatement& b = s.items[operands[1]];
      const std::int64_t n = sample_of(a);
      if (sample_of(b) != n) throw Error(ErrorKind::ShapeError, "I* needs equal sample sizes");
      Term pair = Term::pair(a.subject.without_sample(), b.subject.without_sample()).with_sample(n);
      TypedStatement out = with_frequency(std::move(pair),
                                          OutputType::product(output_of(a), output_of(b)),
                                          freq_mul(freq_of(a), freq_of(b)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
    case LogicalRule::EProdL:
    case LogicalRule::EProdR: {
      require_operands(s, operands, 1);
      const TypedStatement& a = s.items[operands[0]];
      const TypedStatement& p = require_side(side);
      const OutputType& o = output_of(a);
      if (o.kind != OutputType::Kind::Product) {
        throw Error(ErrorKind::ShapeError, "E* needs a product output");
      }
      if (*o.left == *o.right) throw Error(ErrorKind::ShapeError, "E* needs distinct factors");
      const bool left = rule == LogicalRule::EProdL;
      const OutputType& kept = left ? *o.left : *o.right;
      const OutputType& other = left ? *o.right : *o.left;
      const std::int64_t n = sample_of(a);
      const Term base = a.subject.without_sample();
      const Term projected_other = (left ? Term::snd(base) : Term::fst(base)).with_sample(n);
      if ((p.subject != a.subject && p.subject != projected_other) || output_of(p) != other) {
        throw Error(ErrorKind::ShapeError, "E* premise must type the other component as " +
                                               syntax::pretty_print(other));
      }
      Term result = (left ? Term::fst(base) : Term::snd(base)).with_sample(n);
      TypedStatement out = with_frequency(std::move(result), kept, freq_div(freq_of(a), freq_of(p)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
    case LogicalRule::IArrow: {
      require_operands(s, operands, 1);
      const TypedStatement& a = s.items[operands[0]];
      const TypedStatement& x = require_side(side);
      if (!as_variable(x.subject) || x.annotation.kind != Annotation::Kind::Theoretical) {
        throw Error(ErrorKind::ShapeError, "I-> needs a variable entry x_u : alpha @ a");
      }
      sample_of(a);
      const Frequency f = freq_of(a);
      TypedStatement out = statement(
          Term::abstraction(x.subject, a.subject), OutputType::arrow(output_of(x), output_of(a)),
          Annotation::tagged(x.annotation.value, Annotation::frequency(f.successes, f.trials)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
    case LogicalRule::EArrow: {
      require_operands(s, operands, 2);
      const TypedStatement& d = s.items[operands[0]];
      const TypedStatement& u = s.items[operands[1]];
      const TypedStatement& x = require_side(side);
      const OutputType& o = output_of(d);
      if (d.subject.kind != Term::Kind::Abstraction || o.kind != OutputType::Kind::Arrow ||
          d.annotation.kind != Annotation::Kind::ArrowTagged) {
        throw Error(ErrorKind::ShapeError, "E-> needs [x_u]t[n] : (alpha -> beta) [a] f");
      }
      auto xv = as_variable(x.subject);
      if (!xv || *d.subject.left != x.subject || output_of(x) != *o.left) {
        throw Error(ErrorKind::ShapeError, "E-> premise must be the bound variable");
      }
      if (u.subject.kind != Term::Kind::Name || !xv->index || *xv->index != u.subject.name) {
        throw Error(ErrorKind::MissingDesignatedVariable,
                    "bound variable is not designated to " + syntax::pretty_print(u.subject));
      }
      if (x.annotation.kind != Annotation::Kind::Theoretical ||
          x.annotation.value != d.annotation.value) {
        throw Error(ErrorKind::ShapeError, "premise value differs from the arrow tag");
      }
      const std::int64_t n = sample_of(*d.subject.right);
      if (sample_of(u) != n) throw Error(ErrorKind::ShapeError, "E-> needs equal sample sizes");
      if (output_of(u) != *o.left) throw Error(ErrorKind::ShapeError, "E-> argument output differs");
      Term applied = Term::application(*d.subject.right, statement(u.subject, output_of(u)));
      TypedStatement out =
          with_frequency(std::move(applied), *o.right, freq_mul(freq_of(u), freq_of(d)));
      return commit(std::move(s), name, operands, std::move(out), before);
    }
  }
  throw Error(ErrorKind::ShapeError, "unknown logical rule");
}

Frequency run_experiment(const ProcessSpec& p, std::int64_t n, const OutputType& target,
                         std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::RangeError, "n must be at least 1");
  EvalState s(seed);
  std::vector<std::size_t> indices;
  indices.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    s = step_event(std::move(s), p);
    indices.push_back(static_cast<std::size_t>(i));
  }
  s = step_sampling(std::move(s), p.name, indices, target);
  return freq_of(s.items.back());
}

nlohmann::json trace_step_json(const TraceStep& step) {
  return {{"step", step.step},
          {"rule", step.rule},
          {"consumed", step.consumed},
          {"produced", syntax::pretty_print(step.produced)},
          {"rng_before", step.rng_before},
          {"rng_after", step.rng_after}};
}

void write_trace_jsonl(std::ostream& out, const std::vector<TraceStep>& trace) {
  for (const auto& t : trace) out << trace_step_json(t).dump() << '\n';
}

}  // namespace tptnd::eval
