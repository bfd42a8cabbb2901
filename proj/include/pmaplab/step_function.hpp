#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pmaplab/error.hpp"

namespace pmaplab {

inline constexpr double kBoundaryTolerance = 1e-12;

/// Right-continuous piecewise-constant path on [0, total].
///
/// Step i occupies [start(i), start(i+1)) and the value at `total` is the
/// value of the last step. Optional vertex tags name the vertex visited
/// during each step; marks hold named lists of times (D, g, d, ...).
class StepFunction {
 public:
  StepFunction() : starts_{0.0} {}

  StepFunction(std::vector<double> widths, std::vector<double> values,
               std::vector<int> tags = {})
      : widths_(std::move(widths)), values_(std::move(values)), tags_(std::move(tags)) {
    require(widths_.size() == values_.size(), ErrorCode::InvalidArgument,
            "widths and values must align");
    require(tags_.empty() || tags_.size() == widths_.size(), ErrorCode::InvalidArgument,
            "tags must be absent or one per step");
    starts_.resize(widths_.size() + 1);
    starts_[0] = 0.0;
    for (std::size_t i = 0; i < widths_.size(); ++i) {
      require(widths_[i] > 0.0 && std::isfinite(widths_[i]), ErrorCode::InvalidArgument,
              "step widths must be positive");
      starts_[i + 1] = starts_[i] + widths_[i];
    }
  }

  std::size_t size() const { return widths_.size(); }
  bool empty() const { return widths_.empty(); }
  double total() const { return starts_.back(); }

  const std::vector<double>& widths() const { return widths_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& tags() const { return tags_; }
  bool has_tags() const { return !tags_.empty(); }
  double width(std::size_t i) const { return widths_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  int tag(std::size_t i) const { return tags_[i]; }
  double start(std::size_t i) const { return starts_[i]; }
  double end(std::size_t i) const { return starts_[i + 1]; }
  const std::vector<double>& starts() const { return starts_; }

  /// Index of the step containing t; a boundary belongs to the step on its right.
  std::size_t step_at(double t) const {
    require(!empty(), ErrorCode::OutOfRange, "empty step function");
    require(t >= 0.0 && t <= total() + kBoundaryTolerance, ErrorCode::OutOfRange,
            "time outside [0, total]");
    const auto it = std::upper_bound(starts_.begin(), starts_.end() - 1, t);
    const auto idx = static_cast<std::size_t>(it - starts_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, size() - 1);
  }

  double operator()(double t) const { return values_[step_at(t)]; }

  std::map<std::string, std::vector<double>> marks;

 private:
  std::vector<double> widths_;
  std::vector<double> values_;
  std::vector<int> tags_;
  std::vector<double> starts_;
};

/// Accumulates steps and produces a StepFunction.
class StepBuilder {
 public:
  void push(double width, double value, std::optional<int> tag = std::nullopt) {
    widths_.push_back(width);
    values_.push_back(value);
    if (tag) tags_.push_back(*tag);
  }

  void append(const StepFunction& f, double shift = 0.0) {
    for (std::size_t i = 0; i < f.size(); ++i)
      push(f.width(i), f.value(i) + shift,
           f.has_tags() ? std::optional<int>(f.tag(i)) : std::nullopt);
  }

  std::size_t size() const { return widths_.size(); }

  StepFunction build() && {
    if (tags_.size() != widths_.size()) tags_.clear();
    return StepFunction(std::move(widths_), std::move(values_), std::move(tags_));
  }

 private:
  std::vector<double> widths_, values_;
  std::vector<int> tags_;
};

// ---------------------------------------------------------------------------
// Distances

struct UniformMode {};
struct SpikeStrippedMode {
  double epsilon = 0.01;
};

namespace detail {

/// Union of both boundary sets, merged when closer than the tolerance.
inline std::vector<double> shared_refinement(const StepFunction& f, const StepFunction& g) {
  std::vector<double> pts(f.starts());
  pts.insert(pts.end(), g.starts().begin(), g.starts().end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> merged;
  for (double x : pts)
    if (merged.empty() || x - merged.back() > kBoundaryTolerance) merged.push_back(x);
  return merged;
}

inline double uniform_distance(const StepFunction& f, const StepFunction& g) {
  const auto pts = shared_refinement(f, g);
  double best = std::abs(f.values().back() - g.values().back());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    best = std::max(best, std::abs(f(mid) - g(mid)));
  }
  return best;
}

/// Replaces the highest-valued steps of total width <= epsilon by linear
/// interpolation between the nearest retained neighbours.
inline StepFunction strip_spikes(const StepFunction& f, double epsilon) {
  const std::size_t n = f.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.value(a) > f.value(b); });
  std::vector<bool> removed(n, false);
  double used = 0.0;
  for (std::size_t i : order) {
    if (used + f.width(i) > epsilon + kBoundaryTolerance) break;
    used += f.width(i);
    removed[i] = true;
  }
  std::vector<double> values(f.values());
  std::size_t i = 0;
  while (i < n) {
    if (!removed[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && removed[j]) ++j;
    const bool has_left = i > 0, has_right = j < n;
    if (!has_left && !has_right) break;
    const double t0 = has_left ? 0.5 * (f.start(i - 1) + f.end(i - 1)) : 0.0;
    const double t1 = has_right ? 0.5 * (f.start(j) + f.end(j)) : f.total();
    const double v0 = has_left ? f.value(i - 1) : f.value(j);
    const double v1 = has_right ? f.value(j) : f.value(i - 1);
    for (std::size_t k = i; k < j; ++k) {
      const double mid = 0.5 * (f.start(k) + f.end(k));
      const double lambda = t1 > t0 ? (mid - t0) / (t1 - t0) : 0.0;
      values[k] = v0 + lambda * (v1 - v0);
    }
    i = j;
  }
  return StepFunction(f.widths(), std::move(values), f.tags());
}

}  // namespace detail

inline double path_distance(const StepFunction& f, const StepFunction& g, UniformMode = {}) {
  require(std::abs(f.total() - g.total()) <= kBoundaryTolerance, ErrorCode::InvalidArgument,
          "paths must share the same total");
  return detail::uniform_distance(f, g);
}

/// Uniform distance once upward spikes of small total width are discounted,
/// in the spirit of the decomposition f = g + h with h >= 0 of small support.
inline double path_distance(const StepFunction& f, const StepFunction& g, SpikeStrippedMode mode) {
  const double plain = path_distance(f, g);
  const double strip_f = detail::uniform_distance(detail::strip_spikes(f, mode.epsilon), g);
  const double strip_g = detail::uniform_distance(f, detail::strip_spikes(g, mode.epsilon));
  return std::min({plain, strip_f, strip_g});
}

}  // namespace pmaplab
