// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "tptnd/error.h"
#include "tptnd/eval.h"
#include "tptnd/parser.h"

namespace tptnd {
namespace {

using syntax::parse_statement;

ProcessSpec coin(const char* name, Rational heads) {
  return {name, {{OutputType::atom("H"), heads}, {OutputType::atom("T"), Rational(1) - heads}}};
}

ProcessSpec die(const char* name = "d") {
  ProcessSpec p{name, {}};
  for (int i = 1; i <= 6; ++i) p.outcomes.push_back({OutputType::atom(std::to_string(i)), Rational(1, 6)});
  return p;
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::SyntaxError;
}

EvalState with_items(std::vector<const char*> items) {
  EvalState s(1);
  for (const char* i : items) s.items.push_back(parse_statement(i));
  return s;
}

TEST(SplitMix64, ReferenceSequence) {
  // First outputs for seed 0 from the published reference implementation.
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
}

TEST(Event, DegenerateProcess) {
  ProcessSpec one{"t", {{OutputType::atom("A"), Rational(1)}}};
  EvalState s(42);
  for (int i = 0; i < 20; ++i) s = eval::step_event(std::move(s), one);
  for (const auto& item : s.items) EXPECT_EQ(*item.output, OutputType::atom("A"));
  EXPECT_EQ(s.items.back().subject.run, std::optional<std::int64_t>(20));
}

TEST(Event, RejectsBadSpecs) {
  ProcessSpec bad{"t", {{OutputType::atom("A"), Rational(1, 2)}}};
  EXPECT_EQ(kind_of([&] { eval::step_event(EvalState(1), bad); }), ErrorKind::RangeError);
  EXPECT_EQ(kind_of([&] { eval::step_event(EvalState(1), ProcessSpec{"t", {}}); }),
            ErrorKind::RangeError);
}

TEST(Event, FairCoinFrequency) {
  const Frequency f = eval::run_experiment(coin("c", Rational(1, 2)), 10000,
                                           OutputType::atom("H"), 2024);
  EXPECT_LE(std::fabs(f.value().to_double() - 0.5), 4 * std::sqrt(0.25 / 1e4));
}

TEST(Event, DieFacesWithinFourSigma) {
  EvalState s(77);
  const ProcessSpec d = die();
  const int n = 60000;
  std::map<std::string, int> counts;
  for (int i = 0; i < n; ++i) {
    s = eval::step_event(std::move(s), d);
    counts[s.items.back().output->name]++;
    s.items.clear();
  }
  const double sigma = std::sqrt((1.0 / 6) * (5.0 / 6) / n);
  for (const auto& [face, c] : counts) {
    EXPECT_LE(std::fabs(c / double(n) - 1.0 / 6), 4 * sigma) << face;
  }
}

TEST(Sampling, WorkedBatches) {
  EvalState s = with_items({"d^1 : 1", "d^2 : 1", "d^3 : 5", "d^4 : 6"});
  s = eval::step_sampling(std::move(s), "d", {0, 1, 2, 3}, OutputType::atom("1"));
  ASSERT_EQ(s.items.size(), 1u);
  EXPECT_EQ(s.items[0], parse_statement("d[4] : 1 # 2/4"));

  EvalState t = with_items({"d^1 : 3", "d^2 : 1", "d^3 : 5", "d^4 : 6"});
  t = eval::step_sampling(std::move(t), "d", {0, 1, 2, 3}, OutputType::atom("1"));
  EXPECT_EQ(t.items[0], parse_statement("d[4] : 1 # 1/4"));

  EvalState u = with_items({"c^1 : H", "c^2 : H"});
  u = eval::step_sampling(std::move(u), "c", {0, 1}, OutputType::atom("H"));
  EXPECT_EQ(u.items[0].annotation.probability(), Rational(1));
}

TEST(Sampling, Errors) {
  EvalState s = with_items({"d^1 : 1", "g^1 : 1"});
  EXPECT_EQ(kind_of([&] { eval::step_sampling(s, "d", {0, 1}, OutputType::atom("1")); }),
            ErrorKind::MixedProcess);
  EXPECT_EQ(kind_of([&] { eval::step_sampling(s, "d", {0, 5}, OutputType::atom("1")); }),
            ErrorKind::IndexError);
  EXPECT_EQ(kind_of([&] { eval::step_sampling(s, "d", {}, OutputType::atom("1")); }),
            ErrorKind::IndexError);
}

TEST(Update, PoolsCounts) {
  EvalState s = with_items({"d[4] : 1 # 2/4", "d[4] : 1 # 1/4"});
  s = eval::step_update(std::move(s), 0, 1);
  EXPECT_EQ(s.items[0], parse_statement("d[8] : 1 # 3/8"));

  EvalState u = with_items({"u[10] : 5 # 5/10", "u[20] : 5 # 3/20"});
  u = eval::step_update(std::move(u), 0, 1);
  EXPECT_EQ(u.items[0], parse_statement("u[30] : 5 # 8/30"));
  EXPECT_EQ(u.items[0].annotation.probability(), Rational(4, 15));

  EvalState same = with_items({"t[3] : A # 1/3", "t[6] : A # 2/6"});
  same = eval::step_update(std::move(same), 0, 1);
  EXPECT_EQ(same.items[0].annotation.probability(), Rational(1, 3));
}

TEST(Update, StaysBetweenOperands) {
  std::mt19937 rng(1);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng() % 40), m = 1 + static_cast<int>(rng() % 40);
    const int k = static_cast<int>(rng() % (n + 1)), j = static_cast<int>(rng() % (m + 1));
    EvalState s(0);
    s.items.push_back(statement(Term::var("t").with_sample(n), OutputType::atom("A"),
                                Annotation::frequency(k, n)));
    s.items.push_back(statement(Term::var("t").with_sample(m), OutputType::atom("A"),
                                Annotation::frequency(j, m)));
    s = eval::step_update(std::move(s), 0, 1);
    const Rational f(k, n), g(j, m), p = s.items[0].annotation.probability();
    EXPECT_GE(p, std::min(f, g));
    EXPECT_LE(p, std::max(f, g));
    EXPECT_EQ(p, Rational(k + j, n + m));
  }
}

TEST(Update, Errors) {
  EvalState s = with_items({"d[4] : 1 # 2/4", "d[4] : 2 # 1/4", "g[4] : 1 # 1/4"});
  EXPECT_EQ(kind_of([&] { eval::step_update(s, 0, 1); }), ErrorKind::TypeMismatch);
  EXPECT_EQ(kind_of([&] { eval::step_update(s, 0, 2); }), ErrorKind::ProcessMismatch);
}

TEST(Logical, SumRoundtrip) {
  EvalState s = with_items({"t[4] : A # 1/4", "t[4] : B # 1/4"});
  s = eval::step_logical(std::move(s), LogicalRule::ISum, {0, 1});
  EXPECT_EQ(s.items[0], parse_statement("t[4] : (A + B) # 2/4"));
  s = eval::step_logical(std::move(s), LogicalRule::ESumL, {0}, parse_statement("t[4] : B # 1/4"));
  EXPECT_EQ(s.items[0], parse_statement("t[4] : A # 1/4"));
}

TEST(Logical, ProductRoundtrip) {
  EvalState s = with_items({"d[18] : 1 # 10/18", "g[18] : 2 # 3/18"});
  s = eval::step_logical(std::move(s), LogicalRule::IProd, {0, 1});
  EXPECT_EQ(s.items[0], parse_statement("<d, g>[18] : (1 * 2) # 30/324"));
  s = eval::step_logical(std::move(s), LogicalRule::EProdL, {0},
                         parse_statement("snd(<d, g>)[18] : 2 # 3/18"));
  EXPECT_EQ(s.items[0].subject, Term::fst(Term::pair(Term::var("d"), Term::var("g"))).with_sample(18));
  EXPECT_EQ(s.items[0].annotation.probability(), Rational(10, 18));
}

TEST(Logical, ArrowIntroductionAndElimination) {
  EvalState s = with_items({"c2[20] : T # 9/20", "c1[20] : H # 10/20"});
  const TypedStatement x = parse_statement("x_c1 : H @ 1/2");
  s = eval::step_logical(std::move(s), LogicalRule::IArrow, {0}, x);
  EXPECT_EQ(s.items.back(), parse_statement("[x_c1]c2[20] : (H -> T) [1/2] # 9/20"));
  s = eval::step_logical(std::move(s), LogicalRule::EArrow, {1, 0}, x);
  EXPECT_EQ(s.items.back(), parse_statement("c2[20].(c1[20] : H) : T # 90/400"));
  EXPECT_EQ(s.items.back().annotation.probability(), Rational(9, 40));
}

TEST(Logical, Errors) {
  EvalState s = with_items({"t[4] : (A + B) # 1/4", "t[4] : (A * B) # 1/4"});
  EXPECT_EQ(kind_of([&] {
              eval::step_logical(s, LogicalRule::ESumL, {0}, parse_statement("t[4] : B # 2/4"));
            }),
            ErrorKind::NegativeFrequency);
  EXPECT_EQ(kind_of([&] {
              eval::step_logical(s, LogicalRule::EProdL, {1}, parse_statement("t[4] : B # 0/4"));
            }),
            ErrorKind::DivisionByZero);
  EXPECT_EQ(kind_of([&] { eval::step_logical(s, LogicalRule::ESumL, {1}, parse_statement("t[4] : B # 0/4")); }),
            ErrorKind::ShapeError);
  EXPECT_EQ(kind_of([&] { eval::step_logical(s, LogicalRule::ISum, {0}); }), ErrorKind::ShapeError);
}

TEST(Trace, DeterministicReplay) {
  const auto run = [](std::uint64_t seed) {
    EvalState s(seed);
    for (int i = 0; i < 5; ++i) s = eval::step_event(std::move(s), die());
    s = eval::step_sampling(std::move(s), "d", {0, 1, 2, 3, 4}, OutputType::atom("3"));
    std::ostringstream out;
    eval::write_trace_jsonl(out, s.trace);
    return std::pair{s.items, out.str()};
  };
  EXPECT_EQ(run(9), run(9));
  EXPECT_NE(run(9).second, run(10).second);
  const auto [items, jsonl] = run(9);
  std::istringstream lines(jsonl);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"step", "rule", "consumed", "produced", "rng_before", "rng_after"}) {
      EXPECT_TRUE(j.contains(key)) << key;
    }
    ++count;
  }
  EXPECT_EQ(count, 6);
}

TEST(RunExperiment, ConvergesForFixedSeeds) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    EXPECT_EQ(eval::run_experiment({"t", {{OutputType::atom("A"), Rational(1)}}}, 10,
                                   OutputType::atom("A"), seed),
              (Frequency{10, 10}));
    for (const Rational a : {Rational(1, 2), Rational(3, 10)}) {
      const Frequency f = eval::run_experiment(coin("c", a), 10000, OutputType::atom("H"), seed);
      EXPECT_LE(std::fabs((f.value() - a).to_double()), 0.02);
    }
  }
}

}  // namespace
}  // namespace tptnd
