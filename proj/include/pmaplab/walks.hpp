#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pmaplab/basins.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/step_function.hpp"
#include "pmaplab/structures.hpp"

namespace pmaplab {

/// Preorder of the subtree hanging from `root` with the given ordered children.
inline std::vector<int> depth_first(int root, const std::vector<std::vector<int>>& children) {
  std::vector<int> order;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& kids = children[static_cast<std::size_t>(v)];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

inline std::vector<int> depth_first(const PlaneTree& pt) { return depth_first(pt.root(), pt.children); }

namespace detail {

inline void check_weights(std::span<const double> w, int n) {
  require(w.size() == static_cast<std::size_t>(n), ErrorCode::WeightMismatch,
          "weight vector must cover every label");
  for (double x : w)
    require(x > 0.0 && std::isfinite(x), ErrorCode::WeightMismatch, "weights must be positive");
}

/// Pushes the height walk of the subtree at `root` onto `out`.
inline void push_height_walk(int root, const std::vector<std::vector<int>>& children,
                             std::span<const double> w, StepBuilder& out) {
  std::vector<std::pair<int, int>> stack{{root, 0}};
  while (!stack.empty()) {
    const auto [v, h] = stack.back();
    stack.pop_back();
    out.push(w[static_cast<std::size_t>(v)], h, v);
    const auto& kids = children[static_cast<std::size_t>(v)];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, h + 1);
  }
}

}  // namespace detail

/// Height process: step i has width w(v_i) and value ht(v_i), v the depth-first order.
inline StepFunction tree_height_walk(const PlaneTree& pt, std::span<const double> w) {
  detail::check_weights(w, pt.size());
  StepBuilder out;
  detail::push_height_walk(pt.root(), pt.children, w, out);
  return std::move(out).build();
}

struct WalkMarks {
  std::vector<double> D;   // completion time of the first i basins
  StepFunction ell;        // cyclic points visited so far
};

struct MappingWalk {
  StepFunction H;
  WalkMarks marks;
};

/// Concatenates the tree walks of T_c over cyclic points c in the linear order.
inline MappingWalk mapping_walk(const Mapping& m, const BasinDecomposition& ordered,
                                const PlaneForest& forest, std::span<const double> w) {
  const int n = m.size();
  detail::check_weights(w, n);
  require(ordered.raw.mapping == m, ErrorCode::InconsistentOrder,
          "decomposition belongs to a different mapping");
  require(forest.children.size() == static_cast<std::size_t>(n), ErrorCode::InconsistentOrder,
          "plane orders must cover every vertex");
  std::size_t listed = 0;
  for (int v = 0; v < n; ++v)
    for (int c : forest.children[static_cast<std::size_t>(v)]) {
      require(c >= 0 && c < n && !ordered.raw.is_cyclic(c) && m(c) == v,
              ErrorCode::InconsistentOrder, "plane order disagrees with the mapping");
      ++listed;
    }
  require(listed + static_cast<std::size_t>(ordered.raw.cyclic_count()) == static_cast<std::size_t>(n),
          ErrorCode::InconsistentOrder, "plane order misses tree vertices");
  require(ordered.cyclic_order.size() == static_cast<std::size_t>(ordered.raw.cyclic_count()),
          ErrorCode::InconsistentOrder, "cyclic order does not cover every cyclic point");

  StepBuilder walk;
  std::vector<std::size_t> basin_end;
  std::size_t pos = 0;
  for (const auto& cycle : ordered.cycles) {
    for (int c : cycle) {
      require(pos < ordered.cyclic_order.size() && ordered.cyclic_order[pos] == c,
              ErrorCode::InconsistentOrder, "cycles disagree with the linear order");
      ++pos;
      detail::push_height_walk(c, forest.children, w, walk);
    }
    basin_end.push_back(walk.size());
  }
  require(walk.size() == static_cast<std::size_t>(n), ErrorCode::InconsistentOrder,
          "walk does not visit every vertex once");

  MappingWalk out;
  out.H = std::move(walk).build();
  for (std::size_t e : basin_end) out.marks.D.push_back(out.H.starts()[e]);
  out.H.marks["D"] = out.marks.D;

  std::vector<double> count(out.H.size());
  double seen = 0.0;
  for (std::size_t i = 0; i < out.H.size(); ++i) {
    if (ordered.raw.is_cyclic(out.H.tag(i))) seen += 1.0;
    count[i] = seen;
  }
  out.marks.ell = StepFunction(out.H.widths(), std::move(count), out.H.tags());
  return out;
}

/// Increasing piecewise-linear map through (sum_{k<=i} w_{v_k}, i/n).
class TimeChange {
 public:
  TimeChange(std::span<const int> order, std::span<const double> w) {
    detail::check_weights(w, static_cast<int>(order.size()));
    const auto n = order.size();
    x_.resize(n + 1);
    y_.resize(n + 1);
    x_[0] = 0.0;
    y_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x_[i + 1] = x_[i] + w[static_cast<std::size_t>(order[i])];
      y_[i + 1] = static_cast<double>(i + 1) / static_cast<double>(n);
    }
  }

  double operator()(double s) const { return interpolate(x_, y_, s); }
  double inverse(double t) const { return interpolate(y_, x_, t); }
  const std::vector<double>& knots_x() const { return x_; }
  const std::vector<double>& knots_y() const { return y_; }

 private:
  static double interpolate(const std::vector<double>& from, const std::vector<double>& to, double s) {
    if (s <= from.front()) return to.front();
    if (s >= from.back()) return to.back();
    const auto it = std::upper_bound(from.begin(), from.end(), s);
    const auto k = static_cast<std::size_t>(it - from.begin());
    const double lambda = (s - from[k - 1]) / (from[k] - from[k - 1]);
    return to[k - 1] + lambda * (to[k] - to[k - 1]);
  }

  std::vector<double> x_, y_;
};

inline TimeChange time_change(std::span<const int> order, std::span<const double> w) {
  return TimeChange(order, w);
}

/// H o S_p^{-1} o S_w: re-times a walk built with weights p onto weights w.
inline StepFunction compose(const StepFunction& H, const TimeChange& S_p, const TimeChange& S_w) {
  std::vector<double> mapped(H.size() + 1);
  for (std::size_t i = 0; i <= H.size(); ++i) mapped[i] = S_w.inverse(S_p(H.starts()[i]));
  std::vector<double> widths(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) widths[i] = mapped[i + 1] - mapped[i];
  return StepFunction(std::move(widths), H.values(), H.tags());
}

}  // namespace pmaplab
