// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <limits>

#include "tptnd/error.h"
#include "tptnd/rational.h"

namespace tptnd {
namespace {

TEST(Rational, ReducesAndNormalizesSign) {
  EXPECT_EQ(Rational(4, 30), Rational(2, 15));
  EXPECT_EQ(Rational(3, -6), Rational(-1, 2));
  EXPECT_EQ(Rational(0, 7).den(), 1);
}

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(Rational::parse("1/6"), Rational(1, 6));
  EXPECT_EQ(Rational::parse("3"), Rational(3));
  EXPECT_EQ(Rational::parse("0.45"), Rational(9, 20));
  EXPECT_EQ(Rational::parse("0.122794809872"), Rational(122794809872, 1000000000000));
}

TEST(Rational, RejectsMalformedText) {
  for (const char* bad : {"", "1/", "/2", "a", "0.", "1//2", "1.2.3"}) {
    EXPECT_THROW(Rational::parse(bad), Error) << bad;
  }
  try {
    Rational::parse("1/0");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
}

TEST(Rational, ArithmeticIsExact) {
  EXPECT_EQ(Rational(1, 6) + Rational(1, 6), Rational(1, 3));
  EXPECT_EQ(Rational(2, 3) * Rational(1, 6), Rational(1, 9));
  EXPECT_EQ(Rational(9, 20) * Rational(1, 2), Rational(9, 40));
  EXPECT_EQ(Rational(1) - Rational(1, 6), Rational(5, 6));
  EXPECT_EQ(Rational(1, 9) / Rational(2, 3), Rational(1, 6));
  EXPECT_THROW(Rational(1) / Rational(0), Error);
}

TEST(Rational, OrderingAndProbabilityRange) {
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_GT(Rational(-1, 3), Rational(-1, 2));
  EXPECT_TRUE(Rational(0).is_probability());
  EXPECT_TRUE(Rational(1).is_probability());
  EXPECT_FALSE(Rational(7, 6).is_probability());
  EXPECT_FALSE(Rational(-1, 6).is_probability());
}

TEST(Rational, OverflowThrowsInsteadOfWrapping) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  try {
    (void)(Rational(big) + Rational(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
  EXPECT_THROW((void)(Rational(1, big) * Rational(1, big - 1)), Error);
}

TEST(Rational, StringForm) {
  EXPECT_EQ(Rational(25, 54).str(), "25/54");
  EXPECT_EQ(Rational(4).str(), "4");
  EXPECT_DOUBLE_EQ(Rational(1, 4).to_double(), 0.25);
}

}  // namespace
}  // namespace tptnd
