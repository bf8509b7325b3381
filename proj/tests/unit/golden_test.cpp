// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "tptnd/checker.h"
#include "tptnd/parser.h"
#include "golden.h"

namespace tptnd {
namespace {

using test_support::golden_files;
using test_support::Mutant;
using test_support::mutate;
using test_support::slurp;

TEST(Golden, AllAccepted) {
  const auto files = golden_files();
  ASSERT_GE(files.size(), 10u);
  for (const auto& p : files) {
    SCOPED_TRACE(p.filename().string());
    const CheckReport r = checker::check_file(syntax::parse_file(slurp(p)));
    EXPECT_TRUE(r.accepted()) << checker::to_json(r).dump(2);
    EXPECT_GT(r.derivations, 0);
  }
}

TEST(Golden, PrettyPrintRoundTrips) {
  for (const auto& p : golden_files()) {
    SCOPED_TRACE(p.filename().string());
    const File f = syntax::parse_file(slurp(p));
    EXPECT_EQ(syntax::parse_file(syntax::pretty_print(f)), f);
  }
}

TEST(Golden, PerturbedAnnotationsAreRejected) {
  std::size_t total = 0;
  for (const auto& p : golden_files()) {
    SCOPED_TRACE(p.filename().string());
    std::vector<Mutant> mutants;
    mutate(syntax::parse_file(slurp(p)), mutants);
    total += mutants.size();
    for (const auto& m : mutants) {
      EXPECT_FALSE(checker::check_file(m.file).accepted()) << "survived: " << m.where;
    }
  }
  EXPECT_GT(total, 50u);
}

}  // namespace
}  // namespace tptnd
