#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "pmaplab/core_model.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/rng.hpp"

// Vertices are 0-based throughout the library; JSON I/O shifts to 1-based labels.

namespace pmaplab {

inline constexpr int kNoParent = -1;
inline constexpr int kMaxEnumerationN = 7;

struct Mapping {
  std::vector<int> image;

  Mapping() = default;
  explicit Mapping(std::vector<int> img) : image(std::move(img)) {
    const int n = size();
    for (int v : image)
      require(v >= 0 && v < n, ErrorCode::InvalidArgument, "mapping image out of range");
  }

  int size() const { return static_cast<int>(image.size()); }
  int operator()(int v) const { return image[static_cast<std::size_t>(v)]; }
  friend bool operator==(const Mapping&, const Mapping&) = default;
};

/// Rooted labeled tree stored as a parent array.
class RootedTree {
 public:
  RootedTree() = default;

  RootedTree(int root, std::vector<int> parent) : root_(root), parent_(std::move(parent)) {
    const int n = size();
    require(n >= 1, ErrorCode::InvalidArgument, "tree must have a vertex");
    require(root_ >= 0 && root_ < n, ErrorCode::InvalidArgument, "root out of range");
    require(parent_[static_cast<std::size_t>(root_)] == kNoParent, ErrorCode::InvalidArgument,
            "root must carry the no-parent sentinel");
    child_count_.assign(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
      if (v == root_) continue;
      const int p = parent_[static_cast<std::size_t>(v)];
      require(p >= 0 && p < n && p != v, ErrorCode::InvalidArgument, "bad parent entry");
      ++child_count_[static_cast<std::size_t>(p)];
    }
    // Every vertex must reach the root; colour-marking walk keeps this linear.
    std::vector<std::uint8_t> state(static_cast<std::size_t>(n), 0);
    state[static_cast<std::size_t>(root_)] = 2;
    std::vector<int> path;
    for (int v = 0; v < n; ++v) {
      int x = v;
      path.clear();
      while (state[static_cast<std::size_t>(x)] == 0) {
        state[static_cast<std::size_t>(x)] = 1;
        path.push_back(x);
        x = parent_[static_cast<std::size_t>(x)];
      }
      require(state[static_cast<std::size_t>(x)] == 2, ErrorCode::InvalidArgument,
              "parent array contains a cycle");
      for (int y : path) state[static_cast<std::size_t>(y)] = 2;
    }
  }

  int size() const { return static_cast<int>(parent_.size()); }
  int root() const { return root_; }
  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& parents() const { return parent_; }
  int child_count(int v) const { return child_count_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& child_counts() const { return child_count_; }

  /// Children of every vertex, ascending by label.
  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> out(parent_.size());
    for (int v = 0; v < size(); ++v)
      if (v != root_) out[static_cast<std::size_t>(parent(v))].push_back(v);
    return out;
  }

  /// Edge distance from the root to every vertex.
  std::vector<int> depths() const {
    std::vector<int> depth(parent_.size(), -1);
    depth[static_cast<std::size_t>(root_)] = 0;
    std::vector<int> path;
    for (int v = 0; v < size(); ++v) {
      int x = v;
      path.clear();
      while (depth[static_cast<std::size_t>(x)] < 0) {
        path.push_back(x);
        x = parent(x);
      }
      int d = depth[static_cast<std::size_t>(x)];
      for (auto it = path.rbegin(); it != path.rend(); ++it) depth[static_cast<std::size_t>(*it)] = ++d;
    }
    return depth;
  }

  /// Vertices from the root down to v inclusive.
  std::vector<int> path_from_root(int v) const {
    std::vector<int> path;
    for (int x = v; x != kNoParent; x = parent(x)) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
  }

  friend bool operator==(const RootedTree& a, const RootedTree& b) {
    return a.root_ == b.root_ && a.parent_ == b.parent_;
  }

 private:
  int root_ = 0;
  std::vector<int> parent_;
  std::vector<int> child_count_;
};

/// A rooted tree with an ordered children list per vertex.
struct PlaneTree {
  RootedTree tree;
  std::vector<std::vector<int>> children;

  PlaneTree() = default;
  PlaneTree(RootedTree t, std::vector<std::vector<int>> ordered)
      : tree(std::move(t)), children(std::move(ordered)) {
    require(children.size() == static_cast<std::size_t>(tree.size()), ErrorCode::InvalidArgument,
            "children lists must cover every vertex");
    std::size_t total = 0;
    for (int v = 0; v < tree.size(); ++v) {
      for (int c : children[static_cast<std::size_t>(v)])
        require(c >= 0 && c < tree.size() && tree.parent(c) == v, ErrorCode::InvalidArgument,
                "children lists disagree with parent array");
      total += children[static_cast<std::size_t>(v)].size();
    }
    require(total + 1 == static_cast<std::size_t>(tree.size()), ErrorCode::InvalidArgument,
            "children lists must partition the parent relation");
  }

  int size() const { return tree.size(); }
  int root() const { return tree.root(); }
};

// ---------------------------------------------------------------------------
// p-mappings

inline Mapping sample_p_mapping(const RankedProb& p, RngStream& rng) {
  const Categorical draw(p.values());
  std::vector<int> image(static_cast<std::size_t>(p.n()));
  for (auto& x : image) x = draw(rng);
  return Mapping(std::move(image));
}

inline double mapping_probability(const RankedProb& p, const Mapping& m) {
  require(m.size() == p.n(), ErrorCode::InvalidArgument, "mapping size differs from p");
  double prob = 1.0;
  for (int target : m.image) prob *= p[static_cast<std::size_t>(target)];
  return prob;
}

// ---------------------------------------------------------------------------
// Parent codes: a bijection [n]^{n-1} <-> rooted labeled trees on [n] in which
// label i occurs exactly c_i(t) times. Encoding repeatedly removes the largest
// leaf and records its parent; the last entry is the root.

inline std::vector<int> encode_tree(const RootedTree& t) {
  const int n = t.size();
  std::vector<int> remaining = t.child_counts();
  std::priority_queue<int> leaves;
  for (int v = 0; v < n; ++v)
    if (v != t.root() && remaining[static_cast<std::size_t>(v)] == 0) leaves.push(v);
  std::vector<int> code;
  code.reserve(static_cast<std::size_t>(std::max(0, n - 1)));
  while (!leaves.empty()) {
    const int leaf = leaves.top();
    leaves.pop();
    const int par = t.parent(leaf);
    code.push_back(par);
    if (--remaining[static_cast<std::size_t>(par)] == 0 && par != t.root()) leaves.push(par);
  }
  return code;
}

inline RootedTree decode_tree(std::span<const int> code, int n) {
  require(n >= 1, ErrorCode::MalformedCode, "n must be positive");
  require(code.size() + 1 == static_cast<std::size_t>(n), ErrorCode::MalformedCode,
          "code length must be n - 1");
  std::vector<int> remaining(static_cast<std::size_t>(n), 0);
  for (int a : code) {
    require(a >= 0 && a < n, ErrorCode::MalformedCode, "code entry out of range");
    ++remaining[static_cast<std::size_t>(a)];
  }
  std::priority_queue<int> leaves;
  for (int v = 0; v < n; ++v)
    if (remaining[static_cast<std::size_t>(v)] == 0) leaves.push(v);
  std::vector<int> parent(static_cast<std::size_t>(n), kNoParent);
  for (int a : code) {
    const int leaf = leaves.top();
    leaves.pop();
    parent[static_cast<std::size_t>(leaf)] = a;
    if (--remaining[static_cast<std::size_t>(a)] == 0) leaves.push(a);
  }
  const int root = code.empty() ? 0 : code.back();
  return RootedTree(root, std::move(parent));
}

/// P(T = t) = prod_i p_i^{c_i(t)}.
inline double tree_probability(const RankedProb& p, const RootedTree& t) {
  require(t.size() == p.n(), ErrorCode::InvalidArgument, "tree size differs from p");
  double prob = 1.0;
  for (int v = 0; v < t.size(); ++v)
    for (int k = 0; k < t.child_count(v); ++k) prob *= p[static_cast<std::size_t>(v)];
  return prob;
}

inline RootedTree sample_p_tree(const RankedProb& p, RngStream& rng) {
  const Categorical draw(p.values());
  std::vector<int> code(static_cast<std::size_t>(p.n() - 1));
  for (auto& x : code) x = draw(rng);
  return decode_tree(code, p.n());
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration (exact oracles)

enum class StructureKind { Tree, Mapping };

/// Visits every word of [n]^length in lexicographic order.
inline void for_each_word(int n, int length, const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> word(static_cast<std::size_t>(length), 0);
  while (true) {
    visit(word);
    int pos = length - 1;
    while (pos >= 0 && word[static_cast<std::size_t>(pos)] == n - 1) word[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) return;
    ++word[static_cast<std::size_t>(pos)];
  }
}

inline void check_enumerable(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be positive");
  require(n <= kMaxEnumerationN, ErrorCode::TooLarge, "enumeration limited to n <= 7");
}

inline void enumerate_trees(int n, const std::function<void(const RootedTree&)>& visit) {
  check_enumerable(n);
  for_each_word(n, n - 1, [&](std::span<const int> code) { visit(decode_tree(code, n)); });
}

inline void enumerate_mappings(int n, const std::function<void(const Mapping&)>& visit) {
  check_enumerable(n);
  for_each_word(n, n, [&](std::span<const int> img) {
    visit(Mapping(std::vector<int>(img.begin(), img.end())));
  });
}

/// Number of structures enumerate_* would yield.
inline std::uint64_t count_structures(int n, StructureKind kind) {
  check_enumerable(n);
  std::uint64_t count = 1;
  const int length = kind == StructureKind::Tree ? n - 1 : n;
  for (int i = 0; i < length; ++i) count *= static_cast<std::uint64_t>(n);
  return count;
}

// ---------------------------------------------------------------------------

/// Uniformly permutes each children list independently.
inline PlaneTree randomize_plane_order(const RootedTree& t, RngStream& rng) {
  auto kids = t.children();
  for (auto& list : kids) std::shuffle(list.begin(), list.end(), rng);
  return PlaneTree(t, std::move(kids));
}

}  // namespace pmaplab
