#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "pmaplab/error.hpp"
#include "pmaplab/rng.hpp"
#include "pmaplab/structures.hpp"

namespace pmaplab {

/// Cycles, basins and tree components of a mapping, in no particular order.
struct RawDecomposition {
  Mapping mapping;
  std::vector<std::uint8_t> cyclic;        // 1 iff v lies on a cycle
  std::vector<std::vector<int>> cycles;    // each starts at its least vertex, follows m
  std::vector<std::vector<int>> basins;    // ascending vertex lists, aligned with cycles
  std::vector<int> basin_of;               // index into cycles / basins
  std::vector<int> tree_root;              // cyclic point c with v in T_c(m)

  int size() const { return mapping.size(); }
  bool is_cyclic(int v) const { return cyclic[static_cast<std::size_t>(v)] != 0; }
  int cyclic_count() const {
    int c = 0;
    for (auto x : cyclic) c += x;
    return c;
  }
};

inline RawDecomposition basin_decomposition(const Mapping& m) {
  const int n = m.size();
  RawDecomposition d;
  d.mapping = m;
  d.cyclic.assign(static_cast<std::size_t>(n), 0);
  d.basin_of.assign(static_cast<std::size_t>(n), -1);
  d.tree_root.assign(static_cast<std::size_t>(n), -1);

  // 0 = unseen, 1 = on current walk, 2 = done
  std::vector<std::uint8_t> state(static_cast<std::size_t>(n), 0);
  std::vector<int> walk;
  for (int start = 0; start < n; ++start) {
    if (state[static_cast<std::size_t>(start)] != 0) continue;
    walk.clear();
    int x = start;
    while (state[static_cast<std::size_t>(x)] == 0) {
      state[static_cast<std::size_t>(x)] = 1;
      walk.push_back(x);
      x = m(x);
    }
    if (state[static_cast<std::size_t>(x)] == 1) {
      std::vector<int> cycle;
      int y = x;
      do {
        d.cyclic[static_cast<std::size_t>(y)] = 1;
        cycle.push_back(y);
        y = m(y);
      } while (y != x);
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      d.cycles.push_back(std::move(cycle));
    }
    for (int y : walk) state[static_cast<std::size_t>(y)] = 2;
  }
  std::sort(d.cycles.begin(), d.cycles.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t j = 0; j < d.cycles.size(); ++j)
    for (int c : d.cycles[j]) {
      d.basin_of[static_cast<std::size_t>(c)] = static_cast<int>(j);
      d.tree_root[static_cast<std::size_t>(c)] = c;
    }
  std::vector<int> path;
  for (int v = 0; v < n; ++v) {
    int x = v;
    path.clear();
    while (d.tree_root[static_cast<std::size_t>(x)] < 0) {
      path.push_back(x);
      x = m(x);
    }
    for (int y : path) {
      d.tree_root[static_cast<std::size_t>(y)] = d.tree_root[static_cast<std::size_t>(x)];
      d.basin_of[static_cast<std::size_t>(y)] = d.basin_of[static_cast<std::size_t>(x)];
    }
  }
  d.basins.resize(d.cycles.size());
  for (int v = 0; v < n; ++v) d.basins[static_cast<std::size_t>(d.basin_of[static_cast<std::size_t>(v)])].push_back(v);
  return d;
}

/// Basins and cyclic points in q-biased order.
struct BasinDecomposition {
  RawDecomposition raw;
  std::vector<std::vector<int>> cycles;    // j-th cycle listed m(c_j), m^2(c_j), ..., c_j
  std::vector<std::vector<int>> basins;    // j-th basin (ascending vertices)
  std::vector<int> selected;               // c_j
  std::vector<int> cyclic_order;           // global linear order on cyclic points
  std::vector<std::int64_t> tau;           // sample indices tau_j (first sample is X_2)

  int basin_count() const { return static_cast<int>(basins.size()); }
};

/// Assembles the ordered view once the basin order and the selected cyclic
/// points are known. Shared by the sampling procedure and the Joyal map.
inline BasinDecomposition assemble_order(RawDecomposition raw, std::span<const int> basin_order,
                                         std::span<const int> selected,
                                         std::span<const std::int64_t> tau) {
  BasinDecomposition out;
  for (std::size_t j = 0; j < basin_order.size(); ++j) {
    const int c = selected[j];
    std::vector<int> cycle;
    int x = raw.mapping(c);
    cycle.push_back(x);
    while (x != c) {
      x = raw.mapping(x);
      cycle.push_back(x);
    }
    out.cyclic_order.insert(out.cyclic_order.end(), cycle.begin(), cycle.end());
    out.cycles.push_back(std::move(cycle));
    out.basins.push_back(raw.basins[static_cast<std::size_t>(basin_order[j])]);
  }
  out.selected.assign(selected.begin(), selected.end());
  out.tau.assign(tau.begin(), tau.end());
  out.raw = std::move(raw);
  return out;
}

/// Orders basins by the first i.i.d. q-sample X_2, X_3, ... that lands in each.
/// Draws are lazy and counted, so tau_j is the exact sample index.
inline BasinDecomposition q_biased_order(const RawDecomposition& raw, std::span<const double> q,
                                         RngStream& rng) {
  const int n = raw.size();
  require(q.size() == static_cast<std::size_t>(n), ErrorCode::WeightMismatch,
          "q must have one weight per vertex");
  for (double x : q) require(x > 0.0, ErrorCode::InvalidArgument, "q must charge every point");
  const Categorical draw(q);
  const std::size_t basin_total = raw.basins.size();
  std::vector<std::uint8_t> seen(basin_total, 0);
  std::vector<int> order, selected;
  std::vector<std::int64_t> tau;
  std::size_t covered = 0;
  for (std::int64_t k = 2; covered < basin_total; ++k) {
    const int x = draw(rng);
    const int b = raw.basin_of[static_cast<std::size_t>(x)];
    if (seen[static_cast<std::size_t>(b)]) continue;
    seen[static_cast<std::size_t>(b)] = 1;
    ++covered;
    order.push_back(b);
    selected.push_back(raw.tree_root[static_cast<std::size_t>(x)]);
    tau.push_back(k);
  }
  return assemble_order(raw, order, selected, tau);
}

/// |C(m)| without building the full decomposition.
inline int count_cyclic(const Mapping& m) {
  const int n = m.size();
  std::vector<int> mark(static_cast<std::size_t>(n), -1);  // start vertex of the walk that reached v
  int cyclic = 0;
  for (int s = 0; s < n; ++s) {
    int v = s;
    while (mark[static_cast<std::size_t>(v)] < 0) {
      mark[static_cast<std::size_t>(v)] = s;
      v = m(v);
    }
    if (mark[static_cast<std::size_t>(v)] != s) continue;
    const int entry = v;
    do {
      ++cyclic;
      v = m(v);
    } while (v != entry);
  }
  return cyclic;
}

/// Ordered children lists for the forest of tree components T_c(m):
/// children[v] holds the non-cyclic preimages of v.
struct PlaneForest {
  std::vector<std::vector<int>> children;
};

inline PlaneForest forest_children(const RawDecomposition& raw) {
  PlaneForest f;
  f.children.resize(static_cast<std::size_t>(raw.size()));
  for (int v = 0; v < raw.size(); ++v)
    if (!raw.is_cyclic(v)) f.children[static_cast<std::size_t>(raw.mapping(v))].push_back(v);
  return f;
}

inline PlaneForest randomize_forest_order(const RawDecomposition& raw, RngStream& rng) {
  PlaneForest f = forest_children(raw);
  for (auto& list : f.children) std::shuffle(list.begin(), list.end(), rng);
  return f;
}

}  // namespace pmaplab
