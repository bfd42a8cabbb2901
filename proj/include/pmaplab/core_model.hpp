#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pmaplab/error.hpp"

namespace pmaplab {

inline constexpr double kProbTolerance = 1e-12;

/// Euclidean norm of a (possibly unnormalized) weight vector.
inline double sigma(std::span<const double> values) {
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc);
}

/// Ranked probability vector on [n]: strictly positive, non-increasing, sums to 1.
class RankedProb {
 public:
  /// Normalizes once; rejects non-positive or non-increasing input.
  explicit RankedProb(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), ErrorCode::InvalidArgument, "empty probability vector");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      require(std::isfinite(values_[i]) && values_[i] > 0.0, ErrorCode::InvalidArgument,
              "probabilities must be positive and finite");
      if (i > 0)
        require(values_[i - 1] >= values_[i], ErrorCode::NotRanked,
                "probabilities must be non-increasing");
    }
    const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
    for (double& v : values_) v /= total;
  }

  static RankedProb uniform(int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "n must be positive");
    return RankedProb(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
  }

  int n() const { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

 private:
  std::vector<double> values_;
};

inline double sigma(const RankedProb& p) { return sigma(p.values()); }

/// Finitely many positive, non-increasing theta_i with sum of squares < 1.
class ThetaVector {
 public:
  ThetaVector() = default;

  explicit ThetaVector(std::vector<double> thetas) : thetas_(std::move(thetas)) {
    double sq = 0.0;
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
      require(std::isfinite(thetas_[i]) && thetas_[i] > 0.0, ErrorCode::InvalidArgument,
              "theta entries must be positive");
      if (i > 0)
        require(thetas_[i - 1] >= thetas_[i], ErrorCode::InvalidArgument,
                "theta entries must be non-increasing");
      sq += thetas_[i] * thetas_[i];
    }
    require(sq < 1.0, ErrorCode::DegenerateTheta, "sum of theta_i^2 must be < 1 (theta0 > 0)");
    theta0_ = std::sqrt(1.0 - sq);
  }

  std::size_t size() const { return thetas_.size(); }
  double operator[](std::size_t i) const { return thetas_[i]; }
  std::span<const double> values() const { return thetas_; }
  double theta0() const { return theta0_; }

 private:
  std::vector<double> thetas_;
  double theta0_ = 1.0;
};

enum class TailShape { Uniform };

struct FamilySpec {
  ThetaVector theta;
  TailShape tail = TailShape::Uniform;
  int n = 1;
};

/// Builds p on [n] with p_i / sigma(p) = theta_i exactly for i <= I.
///
/// The tail is uniform: p_i = s theta0 / sqrt(n - I) for i > I, with
/// s = 1 / (theta0 sqrt(n - I) + sum theta_i), which gives sigma(p) = s.
inline RankedProb make_hub_family(const FamilySpec& spec) {
  const auto hubs = spec.theta.size();
  require(spec.n >= 1, ErrorCode::InvalidArgument, "n must be positive");
  require(static_cast<std::size_t>(spec.n) > hubs, ErrorCode::DegenerateTail,
          "n must exceed the number of hubs");
  const double tail_count = static_cast<double>(spec.n) - static_cast<double>(hubs);
  const double theta0 = spec.theta.theta0();
  double hub_sum = 0.0;
  for (double t : spec.theta.values()) hub_sum += t;
  const double s = 1.0 / (theta0 * std::sqrt(tail_count) + hub_sum);
  const double tail = s * theta0 / std::sqrt(tail_count);

  std::vector<double> p(static_cast<std::size_t>(spec.n), tail);
  for (std::size_t i = 0; i < hubs; ++i) p[i] = spec.theta[i] * s;
  if (hubs > 0)
    require(p[hubs - 1] >= tail, ErrorCode::NotRanked,
            "theta_I * s falls below the tail value; family is not ranked");
  return RankedProb(std::move(p));
}

struct RegimeDiagnostics {
  double sigma = 0.0;
  std::vector<double> hub_ratios;  // p_i / sigma for i <= I
  double max_p = 0.0;
  double min_p = 0.0;
  double log_min_scaled = 0.0;     // sigma * log(1 / min p)
  std::vector<double> lambdas;
  std::vector<double> tail_mgf;    // E[exp(lambda * pbar_xi / sigma^2)], xi ~ p
};

inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid{-0.5, -0.1, 0.1, 0.5};
  return grid;
}

/// Reports the finite-n quantities behind the regime hypotheses.
/// The tail moment generating function is a finite sum, evaluated exactly.
inline RegimeDiagnostics regime_diagnostics(const RankedProb& p, int hubs,
                                            std::span<const double> lambdas = default_lambda_grid()) {
  require(hubs >= 0 && hubs <= p.n(), ErrorCode::InvalidArgument, "hub count out of range");
  RegimeDiagnostics d;
  d.sigma = sigma(p);
  for (int i = 0; i < hubs; ++i) d.hub_ratios.push_back(p[i] / d.sigma);
  d.max_p = p[0];
  d.min_p = p[static_cast<std::size_t>(p.n() - 1)];
  d.log_min_scaled = d.sigma * std::log(1.0 / d.min_p);
  const double s2 = d.sigma * d.sigma;
  for (double lambda : lambdas) {
    double acc = 0.0;
    for (int i = 0; i < p.n(); ++i) {
      const double bar = i < hubs ? 0.0 : p[i];
      acc += p[i] * std::exp(lambda * bar / s2);
    }
    d.lambdas.push_back(lambda);
    d.tail_mgf.push_back(acc);
  }
  return d;
}

}  // namespace pmaplab
