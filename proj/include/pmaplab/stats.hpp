#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "pmaplab/error.hpp"

namespace pmaplab {

/// Sorted sample of reals.
class EmpiricalSample {
 public:
  EmpiricalSample() = default;
  explicit EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
  }

  std::size_t count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& values() const { return values_; }

  /// Fraction of the sample <= x.
  double cdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
  }

  double mean() const {
    double acc = 0.0;
    for (double v : values_) acc += v;
    return acc / static_cast<double>(values_.size());
  }

  double variance() const {
    const double mu = mean();
    double acc = 0.0;
    for (double v : values_) acc += (v - mu) * (v - mu);
    return values_.size() > 1 ? acc / static_cast<double>(values_.size() - 1) : 0.0;
  }

 private:
  std::vector<double> values_;
};

inline double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  require(!a.empty() && !b.empty(), ErrorCode::EmptySample, "KS needs two non-empty samples");
  const auto& x = a.values();
  const auto& y = b.values();
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) t = x[i];
    else t = y[j];
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

/// One-sample KS distance against a continuous CDF.
template <class Cdf>
double ks_one_sample(const EmpiricalSample& a, Cdf&& cdf) {
  require(!a.empty(), ErrorCode::EmptySample, "KS needs a non-empty sample");
  const auto& x = a.values();
  const double n = static_cast<double>(x.size());
  double best = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    best = std::max({best, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return best;
}

inline double tv_finite(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorCode::SupportMismatch, "pmfs live on different supports");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

/// TV distance between pmfs keyed by outcome; missing keys count as mass 0.
template <class Key>
double tv_finite(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  double acc = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    acc += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.contains(k)) acc += std::abs(v);
  return 0.5 * acc;
}

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

namespace detail {

/// Regularized upper incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_pre = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 1000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-15) break;
    }
    return 1.0 - sum * std::exp(log_pre);
  }
  // Lentz continued fraction
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return std::exp(log_pre) * h;
}

}  // namespace detail

/// Pearson goodness of fit of observed counts to expected probabilities.
inline ChiSquare chi_square(std::span<const double> observed, std::span<const double> expected_prob) {
  require(observed.size() == expected_prob.size(), ErrorCode::SupportMismatch, "size mismatch");
  require(observed.size() >= 2, ErrorCode::EmptySample, "need at least two cells");
  double total = 0.0;
  for (double o : observed) total += o;
  require(total > 0.0, ErrorCode::EmptySample, "no observations");
  ChiSquare out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * expected_prob[i];
    require(e > 0.0, ErrorCode::SupportMismatch, "expected count must be positive");
    out.statistic += (observed[i] - e) * (observed[i] - e) / e;
  }
  out.dof = static_cast<int>(observed.size()) - 1;
  out.p_value = detail::gamma_q(0.5 * out.dof, 0.5 * out.statistic);
  return out;
}

}  // namespace pmaplab
