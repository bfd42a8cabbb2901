#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>

#include "pmaplab/stats.hpp"

using namespace pmaplab;

namespace {
EmpiricalSample S(std::vector<double> v) { return EmpiricalSample(std::move(v)); }
}  // namespace

TEST(Empirical, Moments) {
  const auto s = S({3, 1, 2, 4});
  EXPECT_EQ(s.values(), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_DOUBLE_EQ(s.mean(), 2.5);
  EXPECT_DOUBLE_EQ(s.variance(), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.cdf(2.0), 0.5);
  EXPECT_DOUBLE_EQ(s.cdf(0.0), 0.0);
}

TEST(KS, TwoSampleExamples) {
  EXPECT_EQ(ks_two_sample(S({1, 2, 3}), S({3, 2, 1})), 0.0);
  EXPECT_EQ(ks_two_sample(S({0, 0, 0}), S({1, 1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(ks_two_sample(S({1, 2, 3, 4}), S({1, 2, 3, 5})), 0.25);
  EXPECT_DOUBLE_EQ(ks_two_sample(S({1, 2}), S({1, 1, 2, 2})), 0.0);
  try {
    ks_two_sample(S({}), S({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySample);
  }
}

TEST(KS, OneSample) {
  // Points at the quantiles (i + 1/2) / n sit 1/(2n) from the uniform CDF.
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) v.push_back((i + 0.5) / 10.0);
  EXPECT_NEAR(ks_one_sample(S(v), [](double x) { return x; }), 0.05, 1e-15);
  EXPECT_THROW(ks_one_sample(S({}), [](double x) { return x; }), Error);
}

TEST(TV, Examples) {
  const std::vector<double> a{0.2, 0.3, 0.5}, b{0.5, 0.5}, c{0.75, 0.25}, d{1, 0}, e{0, 1};
  EXPECT_EQ(tv_finite(std::span<const double>(a), std::span<const double>(a)), 0.0);
  EXPECT_EQ(tv_finite(std::span<const double>(d), std::span<const double>(e)), 1.0);
  EXPECT_DOUBLE_EQ(tv_finite(std::span<const double>(b), std::span<const double>(c)), 0.25);
  try {
    tv_finite(std::span<const double>(a), std::span<const double>(b));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::SupportMismatch);
  }
  const std::map<std::string, double> x{{"a", 0.5}, {"b", 0.5}}, y{{"b", 0.5}, {"c", 0.5}};
  EXPECT_DOUBLE_EQ(tv_finite(x, y), 0.5);
  EXPECT_DOUBLE_EQ(tv_finite(x, x), 0.0);
}

TEST(ChiSquare, MatchesClosedForms) {
  const std::vector<double> p3{0.5, 0.25, 0.25};
  const std::vector<double> o3{60, 20, 20};
  const auto r = chi_square(o3, p3);
  // (10^2/50) + (5^2/25) * 2 = 4, two degrees of freedom: p = exp(-2)
  EXPECT_DOUBLE_EQ(r.statistic, 4.0);
  EXPECT_EQ(r.dof, 2);
  EXPECT_NEAR(r.p_value, std::exp(-2.0), 1e-12);

  const std::vector<double> p2{0.5, 0.5}, o2{55, 45};
  const auto s = chi_square(o2, p2);
  EXPECT_NEAR(s.p_value, std::erfc(std::sqrt(s.statistic / 2.0)), 1e-12);

  const std::vector<double> exact{50, 25, 25};
  EXPECT_NEAR(chi_square(exact, p3).p_value, 1.0, 1e-12);
  for (double x : {0.1, 1.0, 5.0, 30.0, 200.0})
    for (int k : {1, 3, 10, 60}) {
      // Q(k/2, x/2) for even k is a finite Poisson sum.
      if (k % 2) continue;
      double term = std::exp(-x / 2.0), sum = term;
      for (int i = 1; i < k / 2; ++i) sum += term *= (x / 2.0) / i;
      EXPECT_NEAR(detail::gamma_q(k / 2.0, x / 2.0), sum, 1e-12) << k << " " << x;
    }
  EXPECT_THROW(chi_square(std::vector<double>{1.0}, std::vector<double>{1.0}), Error);
  EXPECT_THROW(chi_square(o2, p3), Error);
}
