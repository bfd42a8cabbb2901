#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "pmaplab/basins.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/rng.hpp"
#include "pmaplab/step_function.hpp"
#include "pmaplab/structures.hpp"

namespace pmaplab {

/// Flat heights closer than this are the same height.
inline constexpr double kHeightTolerance = 1e-12;

/// s -> inf_{[s,u]} f for s < u and inf_{[u,s]} f for s >= u.
/// Constant on each step of f, so the result reuses f's steps and tags.
inline StepFunction pre_post_infimum(const StepFunction& f, double u) {
  require(!f.empty(), ErrorCode::OutOfRange, "empty path");
  require(u >= 0.0 && u <= f.total() + kBoundaryTolerance, ErrorCode::OutOfRange,
          "pivot outside [0, total]");
  const std::size_t k = f.step_at(u);
  std::vector<double> out(f.size());
  out[k] = f.value(k);
  for (std::size_t j = k; j-- > 0;) out[j] = std::min(out[j + 1], f.value(j));
  for (std::size_t j = k + 1; j < f.size(); ++j) out[j] = std::min(out[j - 1], f.value(j));
  return StepFunction(f.widths(), std::move(out), f.tags());
}

/// Step range [first, last) of a maximal flat interval.
struct Piece {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct ExcursionItem {
  std::vector<Piece> pieces;   // time-ordered; two pieces straddle the pivot
  std::vector<std::pair<double, double>> intervals;
  double height = 0.0;
  double length = 0.0;
  StepFunction excursion;      // f - height on the pieces, concatenated
};

/// Generalized excursions of f above a baseline, labeled by decreasing length.
struct ExcursionSet {
  std::vector<ExcursionItem> items;
  StepFunction baseline;
  double pivot = 0.0;
};

struct JoyalOutput {
  StepFunction path;
  std::vector<double> g, d;
  std::vector<double> heights;  // output order (increasing height)
  std::vector<double> lengths;
};

enum class TiePolicy { BreakByLeftEndpoint, Reject };

/// Excursions of f above an arbitrary baseline that is constant on f's steps.
inline ExcursionSet excursions_above(const StepFunction& f, const StepFunction& baseline, double u,
                                     TiePolicy ties = TiePolicy::BreakByLeftEndpoint) {
  require(baseline.size() == f.size(), ErrorCode::InvalidArgument, "baseline must share f's steps");
  struct Run {
    Piece piece;
    double height;
  };
  std::vector<Run> runs;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double b = baseline.value(j);
    if (!runs.empty() && std::abs(b - runs.back().height) <= kHeightTolerance)
      runs.back().piece.last = j + 1;
    else
      runs.push_back({{j, j + 1}, b});
  }
  std::vector<std::size_t> order(runs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return runs[a].height < runs[b].height; });

  ExcursionSet set;
  set.baseline = baseline;
  set.pivot = u;
  auto emit = [&](std::vector<std::size_t> members) {
    std::sort(members.begin(), members.end());
    ExcursionItem item;
    item.height = runs[members.front()].height;
    StepBuilder ex;
    for (std::size_t r : members) {
      const Piece& p = runs[r].piece;
      item.pieces.push_back(p);
      item.intervals.emplace_back(f.start(p.first), f.start(p.last));
      for (std::size_t j = p.first; j < p.last; ++j) {
        ex.push(f.width(j), f.value(j) - item.height,
                f.has_tags() ? std::optional<int>(f.tag(j)) : std::nullopt);
        item.length += f.width(j);
      }
    }
    item.excursion = std::move(ex).build();
    set.items.push_back(std::move(item));
  };

  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && runs[order[j]].height - runs[order[i]].height <= kHeightTolerance) ++j;
    std::vector<std::size_t> group(order.begin() + static_cast<std::ptrdiff_t>(i),
                                   order.begin() + static_cast<std::ptrdiff_t>(j));
    if (group.size() <= 2) {
      emit(group);
    } else {
      require(ties == TiePolicy::BreakByLeftEndpoint, ErrorCode::HeightTie,
              "more than two flat intervals share a height");
      std::sort(group.begin(), group.end());
      for (std::size_t r : group) emit({r});
    }
    i = j;
  }

  std::stable_sort(set.items.begin(), set.items.end(), [](const auto& a, const auto& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.intervals.front().first < b.intervals.front().first;
  });
  return set;
}

inline ExcursionSet generalized_excursions(const StepFunction& f, double u,
                                           TiePolicy ties = TiePolicy::BreakByLeftEndpoint) {
  return excursions_above(f, pre_post_infimum(f, u), u, ties);
}

/// Lays excursions end to end by increasing height (left endpoint breaks ties),
/// zero-fills the remainder and records the marks g_i, d_i.
inline JoyalOutput arrange_by_height(const ExcursionSet& set, double total) {
  std::vector<std::size_t> order(set.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = set.items[a];
    const auto& y = set.items[b];
    if (x.height != y.height) return x.height < y.height;
    return x.intervals.front().first < y.intervals.front().first;
  });
  JoyalOutput out;
  StepBuilder path;
  double acc = 0.0;
  for (std::size_t idx : order) {
    const auto& item = set.items[idx];
    out.g.push_back(acc);
    path.append(item.excursion);
    acc += item.length;
    out.d.push_back(acc);
    out.heights.push_back(item.height);
    out.lengths.push_back(item.length);
  }
  if (total - acc > kBoundaryTolerance) path.push(total - acc, 0.0, -1);
  out.path = std::move(path).build();
  // The path's own boundaries are the reference times.
  for (std::size_t i = 0, step = 0; i < order.size(); ++i) {
    const auto& item = set.items[order[i]];
    std::size_t steps = 0;
    for (const auto& p : item.pieces) steps += p.last - p.first;
    out.g[i] = out.path.start(step);
    step += steps;
    out.d[i] = out.path.start(step);
  }
  out.path.marks["g"] = out.g;
  out.path.marks["d"] = out.d;
  return out;
}

/// The Joyal functional J^u.
inline JoyalOutput joyal_functional(const StepFunction& f, double u,
                                    TiePolicy ties = TiePolicy::BreakByLeftEndpoint) {
  return arrange_by_height(generalized_excursions(f, u, ties), f.total());
}

// ---------------------------------------------------------------------------
// Doubly-rooted trees

/// Path root = c_1, ..., c_K = X_1, and for each vertex the index k of the
/// spine subtree T_{c_k} containing it once the spine edges are cut.
struct SpineData {
  std::vector<int> spine;
  std::vector<int> assignment;

  int second_root() const { return spine.back(); }
};

inline SpineData make_spine(const RootedTree& t, int x1) {
  require(x1 >= 0 && x1 < t.size(), ErrorCode::UnknownVertex, "second root out of range");
  SpineData s;
  s.spine = t.path_from_root(x1);
  s.assignment.assign(static_cast<std::size_t>(t.size()), -1);
  for (std::size_t k = 0; k < s.spine.size(); ++k)
    s.assignment[static_cast<std::size_t>(s.spine[k])] = static_cast<int>(k);
  std::vector<int> path;
  for (int v = 0; v < t.size(); ++v) {
    int x = v;
    path.clear();
    while (s.assignment[static_cast<std::size_t>(x)] < 0) {
      path.push_back(x);
      x = t.parent(x);
    }
    for (int y : path) s.assignment[static_cast<std::size_t>(y)] = s.assignment[static_cast<std::size_t>(x)];
  }
  return s;
}

/// Pre-post infimum raised by 1 while the spine and the subtree of X_1 are visited.
///
/// On the subtree of c_k the result equals ht(c_k) + 1, so the flat intervals
/// are exactly the spine subtrees T_{c_1}, ..., T_{c_K}.
inline StepFunction spine_lift(const StepFunction& H, double u, const SpineData& spine) {
  require(H.has_tags(), ErrorCode::SpineMismatch, "walk carries no vertex tags");
  require(!spine.spine.empty(), ErrorCode::SpineMismatch, "empty spine");
  const std::size_t k = H.step_at(u);
  require(H.tag(k) == spine.second_root(), ErrorCode::SpineMismatch,
          "pivot does not visit the second root");
  require(H.tag(0) == spine.spine.front(), ErrorCode::SpineMismatch, "walk does not start at the root");
  const int last = static_cast<int>(spine.spine.size()) - 1;
  StepFunction base = pre_post_infimum(H, u);
  std::vector<double> lifted(base.values());
  for (std::size_t j = 0; j < H.size(); ++j) {
    const int v = H.tag(j);
    require(v >= 0 && static_cast<std::size_t>(v) < spine.assignment.size(), ErrorCode::SpineMismatch,
            "walk visits a vertex outside the spine data");
    const int a = spine.assignment[static_cast<std::size_t>(v)];
    const bool on_spine = spine.spine[static_cast<std::size_t>(a)] == v;
    if (on_spine || a == last) lifted[j] += 1.0;
  }
  return StepFunction(H.widths(), std::move(lifted), H.tags());
}

/// Excursions of H above the spine lift, laid out by increasing height.
inline JoyalOutput joyal_tilde(const StepFunction& H, double u, const SpineData& spine,
                               TiePolicy ties = TiePolicy::BreakByLeftEndpoint) {
  return arrange_by_height(excursions_above(H, spine_lift(H, u, spine), u, ties), H.total());
}

struct JoyalMapping {
  Mapping mapping;
  BasinDecomposition order;
};

/// Tree + second root + q-sample stream -> mapping with q-biased basin order.
///
/// Spine subtrees are grouped into cycles: each fresh sample X_k (k = 2, 3, ...)
/// landing in T_{c_i} beyond the consumed prefix closes the cycle
/// c_{prev+1} -> ... -> c_i -> c_{prev+1}.
inline JoyalMapping joyal_correspondence(const RootedTree& t, int x1, std::span<const double> q,
                                         RngStream& rng) {
  const int n = t.size();
  require(q.size() == static_cast<std::size_t>(n), ErrorCode::WeightMismatch,
          "q must have one weight per vertex");
  for (double x : q) require(x > 0.0, ErrorCode::InvalidArgument, "q must charge every point");
  const SpineData spine = make_spine(t, x1);
  const int K = static_cast<int>(spine.spine.size());

  std::vector<int> image(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) image[static_cast<std::size_t>(v)] = t.parent(v);

  const Categorical draw(q);
  std::vector<int> closing;
  std::vector<std::int64_t> tau;
  int consumed = 0;
  for (std::int64_t k = 2; consumed < K; ++k) {
    const int x = draw(rng);
    const int a = spine.assignment[static_cast<std::size_t>(x)];
    if (a < consumed) continue;
    for (int i = consumed; i < a; ++i)
      image[static_cast<std::size_t>(spine.spine[static_cast<std::size_t>(i)])] =
          spine.spine[static_cast<std::size_t>(i + 1)];
    image[static_cast<std::size_t>(spine.spine[static_cast<std::size_t>(a)])] =
        spine.spine[static_cast<std::size_t>(consumed)];
    closing.push_back(spine.spine[static_cast<std::size_t>(a)]);
    tau.push_back(k);
    consumed = a + 1;
  }

  JoyalMapping out;
  out.mapping = Mapping(std::move(image));
  RawDecomposition raw = basin_decomposition(out.mapping);
  std::vector<int> basin_order;
  for (int c : closing) basin_order.push_back(raw.basin_of[static_cast<std::size_t>(c)]);
  out.order = assemble_order(std::move(raw), basin_order, closing, tau);
  return out;
}

/// Children lists of the spine subtrees, inherited from a global plane order
/// by dropping each spine vertex's spine child.
inline PlaneForest inherit_forest(const PlaneTree& pt, const SpineData& spine) {
  PlaneForest f;
  f.children = pt.children;
  for (std::size_t k = 0; k + 1 < spine.spine.size(); ++k) {
    auto& kids = f.children[static_cast<std::size_t>(spine.spine[k])];
    kids.erase(std::remove(kids.begin(), kids.end(), spine.spine[k + 1]), kids.end());
  }
  return f;
}

}  // namespace pmaplab
