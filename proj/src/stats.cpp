// Copyright 2026 The tptnd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "tptnd/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "tptnd/error.h"

namespace tptnd::stats {
namespace {

using boost::multiprecision::cpp_int;

constexpr std::int64_t kExactLimit = 64;
constexpr int kBisectionDepth = 31;
constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

void check_counts(std::int64_t k, std::int64_t n, bool allow_empty = false) {
  if (n < (allow_empty ? 0 : 1) || k < 0 || k > n) {
    throw Error(ErrorKind::RangeError, "need 0 <= k <= n and n >= 1, got k=" +
                                           std::to_string(k) + " n=" +
                                           std::to_string(n));
  }
}

void check_level(Rational level) {
  if (level <= Rational(0) || level >= Rational(1)) {
    throw Error(ErrorKind::RangeError, "level must lie in (0,1)");
  }
}

// Sum over j in [lo, hi] of C(n,j) m^j (d-m)^(n-j). Dividing by d^n gives
// the binomial mass of [lo, hi] at p = m/d.
cpp_int scaled_mass(std::int64_t lo, std::int64_t hi, std::int64_t n,
                    const cpp_int& m, const cpp_int& d) {
  cpp_int rest = d - m;
  std::vector<cpp_int> rest_pow(static_cast<std::size_t>(n + 1));
  rest_pow[0] = 1;
  for (std::int64_t j = 1; j <= n; ++j) rest_pow[j] = rest_pow[j - 1] * rest;
  cpp_int choose = 1;
  cpp_int m_pow = 1;
  cpp_int sum = 0;
  for (std::int64_t j = 0; j <= hi; ++j) {
    if (j >= lo) sum += choose * m_pow * rest_pow[n - j];
    choose = choose * (n - j) / (j + 1);
    m_pow *= m;
  }
  return sum;
}

// mass / d^n >= q1 / q2
bool mass_at_least(const cpp_int& mass, std::int64_t n, const cpp_int& d,
                   const cpp_int& q1, const cpp_int& q2) {
  return mass * q2 >= q1 * boost::multiprecision::pow(d, static_cast<unsigned>(n));
}

struct TailBound {
  cpp_int q1;
  cpp_int q2;
};

// (1 - level) / 2 as q1 / q2.
TailBound half_alpha(Rational level) {
  return {cpp_int(level.den() - level.num()), cpp_int(2) * level.den()};
}

bool exact_upper_ok(std::int64_t k, std::int64_t n, const cpp_int& m,
                    const cpp_int& d, const TailBound& b) {
  return k == 0 || mass_at_least(scaled_mass(k, n, n, m, d), n, d, b.q1, b.q2);
}

bool exact_lower_ok(std::int64_t k, std::int64_t n, const cpp_int& m,
                    const cpp_int& d, const TailBound& b) {
  return k == n || mass_at_least(scaled_mass(0, k, n, m, d), n, d, b.q1, b.q2);
}

// Bisection over p = m / 2^depth. pred(0) != pred(2^depth); returns the
// midpoint of the final bracket.
template <class Pred>
long double bisect(Pred pred) {
  const std::int64_t scale = std::int64_t{1} << kBisectionDepth;
  std::int64_t l = 0;
  std::int64_t h = scale;
  bool pred_l = pred(l);
  while (h - l > 1) {
    std::int64_t mid = l + (h - l) / 2;
    if (pred(mid) == pred_l) {
      l = mid;
    } else {
      h = mid;
    }
  }
  return (static_cast<long double>(l) + static_cast<long double>(h)) / 2 /
         static_cast<long double>(scale);
}

ProbInterval clopper_pearson_uncached(std::int64_t k, std::int64_t n,
                                      Rational level) {
  ProbInterval out{0, 1};
  const long double half = (1 - level.to_long_double()) / 2;
  if (n <= kExactLimit) {
    const TailBound b = half_alpha(level);
    const cpp_int d = cpp_int(1) << kBisectionDepth;
    if (k > 0) {
      out.lo = bisect([&](std::int64_t m) { return exact_upper_ok(k, n, m, d, b); });
    }
    if (k < n) {
      out.hi = bisect([&](std::int64_t m) { return exact_lower_ok(k, n, m, d, b); });
    }
    return out;
  }
  const long double scale = static_cast<long double>(std::int64_t{1} << kBisectionDepth);
  if (k > 0) {
    out.lo = bisect([&](std::int64_t m) { return upper_tail(k, n, m / scale) >= half; });
  }
  if (k < n) {
    out.hi = bisect([&](std::int64_t m) { return lower_tail(k, n, m / scale) >= half; });
  }
  return out;
}

long double log_pmf(std::int64_t k, std::int64_t n, long double p) {
  if (p <= 0) return k == 0 ? 0.0L : kNegInf;
  if (p >= 1) return k == n ? 0.0L : kNegInf;
  const long double kl = static_cast<long double>(k);
  const long double nl = static_cast<long double>(n);
  return std::lgamma(nl + 1) - std::lgamma(kl + 1) - std::lgamma(nl - kl + 1) +
         kl * std::log(p) + (nl - kl) * std::log1p(-p);
}

long double log_or_zero(long double weight, long double x) {
  if (weight == 0) return 0;
  if (x <= 0) return kNegInf;
  return weight * std::log(x);
}

}  // namespace

long double binom_pmf(std::int64_t k, std::int64_t n, long double p) {
  check_counts(k, n, true);
  if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::RangeError, "p outside [0,1]");
  if (n > 50) return std::exp(log_pmf(k, n, p));
  long double choose = 1;
  for (std::int64_t j = 0; j < k; ++j) {
    choose = choose * static_cast<long double>(n - j) / static_cast<long double>(j + 1);
  }
  return choose * std::pow(p, static_cast<long double>(k)) *
         std::pow(1 - p, static_cast<long double>(n - k));
}

long double upper_tail(std::int64_t k, std::int64_t n, long double p) {
  check_counts(k, n, true);
  long double sum = 0;
  for (std::int64_t j = k; j <= n; ++j) sum += binom_pmf(j, n, p);
  return std::min(sum, 1.0L);
}

long double lower_tail(std::int64_t k, std::int64_t n, long double p) {
  check_counts(k, n, true);
  long double sum = 0;
  for (std::int64_t j = 0; j <= k; ++j) sum += binom_pmf(j, n, p);
  return std::min(sum, 1.0L);
}

ProbInterval clopper_pearson(std::int64_t k, std::int64_t n, Rational level) {
  check_counts(k, n);
  check_level(level);
  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
  static std::mutex mu;
  static std::map<Key, ProbInterval> cache;
  const Key key{k, n, level.num(), level.den()};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  ProbInterval out = clopper_pearson_uncached(k, n, level);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, out);
  return out;
}

ProbInterval wald_interval(std::int64_t k, std::int64_t n, Rational level) {
  check_counts(k, n);
  check_level(level);
  boost::math::normal_distribution<long double> normal;
  const long double z = boost::math::quantile(normal, (1 + level.to_long_double()) / 2);
  const long double f = static_cast<long double>(k) / static_cast<long double>(n);
  const long double half = z * std::sqrt(f * (1 - f) / static_cast<long double>(n));
  return {std::max(0.0L, f - half), std::min(1.0L, f + half)};
}

ProbInterval acceptance_interval(const ThresholdStrategy& s, std::int64_t k,
                                 std::int64_t n) {
  switch (s.kind) {
    case ThresholdStrategy::Kind::ExactBinomial: return clopper_pearson(k, n, s.param);
    case ThresholdStrategy::Kind::NormalApprox: return wald_interval(k, n, s.param);
    case ThresholdStrategy::Kind::FixedEpsilon: {
      check_counts(k, n);
      const Rational f(k, n);
      return {std::max(0.0L, (f - s.param).to_long_double()),
              std::min(1.0L, (f + s.param).to_long_double())};
    }
  }
  throw Error(ErrorKind::StrategyError, "unknown strategy");
}

bool accepts(const ThresholdStrategy& s, Rational a, std::int64_t k,
             std::int64_t n) {
  check_counts(k, n);
  if (!a.is_probability()) throw Error(ErrorKind::RangeError, "a outside [0,1]");
  switch (s.kind) {
    case ThresholdStrategy::Kind::ExactBinomial: {
      check_level(s.param);
      if (n > kExactLimit) return clopper_pearson(k, n, s.param).contains(a.to_long_double());
      const TailBound b = half_alpha(s.param);
      const cpp_int m = a.num();
      const cpp_int d = a.den();
      return exact_upper_ok(k, n, m, d, b) && exact_lower_ok(k, n, m, d, b);
    }
    case ThresholdStrategy::Kind::NormalApprox: {
      check_level(s.param);
      boost::math::normal_distribution<long double> normal;
      const long double z = boost::math::quantile(normal, (1 + s.param.to_long_double()) / 2);
      const long double f = static_cast<long double>(k) / static_cast<long double>(n);
      const long double half = z * std::sqrt(f * (1 - f) / static_cast<long double>(n));
      return std::fabs(a.to_long_double() - f) <= half;
    }
    case ThresholdStrategy::Kind::FixedEpsilon:
      return abs(a - Rational(k, n)) <= s.param;
  }
  throw Error(ErrorKind::StrategyError, "unknown strategy");
}

std::vector<long double> bayes_posteriors(std::span<const Hypothesis> hyps,
                                          std::int64_t k, std::int64_t n) {
  check_counts(k, n, true);
  if (hyps.empty()) throw Error(ErrorKind::PriorsNotNormalized, "no hypotheses");
  Rational total(0);
  for (const auto& h : hyps) {
    if (!h.a.is_probability() || !h.prior.is_probability()) {
      throw Error(ErrorKind::RangeError, "hypothesis values must lie in [0,1]");
    }
    total += h.prior;
  }
  if (total != Rational(1)) {
    throw Error(ErrorKind::PriorsNotNormalized, "priors sum to " + total.str());
  }
  std::vector<long double> logs;
  long double best = kNegInf;
  for (const auto& h : hyps) {
    const long double a = h.a.to_long_double();
    long double l = log_or_zero(static_cast<long double>(k), a) +
                    log_or_zero(static_cast<long double>(n - k), 1 - a) +
                    log_or_zero(1, h.prior.to_long_double());
    logs.push_back(l);
    best = std::max(best, l);
  }
  if (best == kNegInf) throw Error(ErrorKind::ZeroMarginal, "all likelihoods vanish");
  long double z = 0;
  for (auto& l : logs) {
    l = std::exp(l - best);
    z += l;
  }
  for (auto& l : logs) l /= z;
  return logs;
}

long double bayes_posterior(std::span<const Hypothesis> hyps, std::size_t i,
                            std::int64_t k, std::int64_t n) {
  if (i >= hyps.size()) {
    throw Error(ErrorKind::IndexError, "hypothesis index " + std::to_string(i) +
                                           " out of range");
  }
  return bayes_posteriors(hyps, k, n)[i];
}

long double ml_log_likelihood(Rational x, std::int64_t k, std::int64_t n,
                              MlMode mode) {
  check_counts(k, n);
  const long double p = x.to_long_double();
  if (mode == MlMode::CountExponent) {
    return log_or_zero(static_cast<long double>(k), p) +
           log_or_zero(static_cast<long double>(n - k), 1 - p);
  }
  const long double e = static_cast<long double>(k) /
                        (static_cast<long double>(n) * static_cast<long double>(n));
  return log_or_zero(e, p) + log_or_zero(1 - e, 1 - p);
}

Rational ml_contract(std::span<const Rational> candidates, std::int64_t k,
                     std::int64_t n, MlMode mode) {
  if (candidates.empty()) throw Error(ErrorKind::EmptyCandidates, "no candidates");
  check_counts(k, n);
  for (const auto& c : candidates) {
    if (!c.is_probability()) throw Error(ErrorKind::RangeError, "candidate outside [0,1]");
  }
  if (mode == MlMode::CountExponent && n <= 4096) {
    // x^k (1-x)^(n-k) = num^k (den-num)^(n-k) / den^n, compared exactly.
    auto weight = [&](const Rational& x) {
      using boost::multiprecision::pow;
      cpp_int num = pow(cpp_int(x.num()), static_cast<unsigned>(k)) *
                    pow(cpp_int(x.den() - x.num()), static_cast<unsigned>(n - k));
      cpp_int den = pow(cpp_int(x.den()), static_cast<unsigned>(n));
      return std::pair<cpp_int, cpp_int>{num, den};
    };
    std::size_t best = 0;
    auto best_w = weight(candidates[0]);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      auto w = weight(candidates[i]);
      if (w.first * best_w.second > best_w.first * w.second) {
        best = i;
        best_w = std::move(w);
      }
    }
    return candidates[best];
  }
  std::size_t best = 0;
  long double best_l = ml_log_likelihood(candidates[0], k, n, mode);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    long double l = ml_log_likelihood(candidates[i], k, n, mode);
    if (l > best_l) {
      best = i;
      best_l = l;
    }
  }
  return candidates[best];
}

Rational ml_point_in_range(Rational lo, Rational hi, std::int64_t k,
                           std::int64_t n, MlMode mode) {
  check_counts(k, n);
  Rational mode_point = mode == MlMode::CountExponent ? Rational(k, n)
                                                     : Rational(k, n) / Rational(n);
  return std::clamp(mode_point, lo, hi);
}

}  // namespace tptnd::stats
