#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pmaplab/core_model.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/rng.hpp"
#include "pmaplab/structures.hpp"

namespace pmaplab {

struct EdgeNode {
  std::string label;  // "root", "k+" for leaves, "i" for hubs, "" for plain branch points
  int parent = kNoParent;
  double length = 0.0;  // length of the edge to the parent
};

/// Rooted tree with positive real edge lengths; node 0 is the root.
class EdgeTree {
 public:
  EdgeTree() { nodes_.push_back({"root", kNoParent, 0.0}); }

  int add_node(int parent, double length, std::string label = {}) {
    require(parent >= 0 && parent < size(), ErrorCode::UnknownVertex, "parent node does not exist");
    require(length > 0.0, ErrorCode::InvalidArgument, "edge lengths must be positive");
    nodes_.push_back({std::move(label), parent, length});
    return size() - 1;
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }
  const EdgeNode& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
  EdgeNode& node(int v) { return nodes_[static_cast<std::size_t>(v)]; }
  const std::vector<EdgeNode>& nodes() const { return nodes_; }

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> out(nodes_.size());
    for (int v = 1; v < size(); ++v) out[static_cast<std::size_t>(node(v).parent)].push_back(v);
    return out;
  }

  /// Root-to-node distance; parents always precede children.
  std::vector<double> heights() const {
    std::vector<double> h(nodes_.size(), 0.0);
    for (int v = 1; v < size(); ++v) h[static_cast<std::size_t>(v)] = h[static_cast<std::size_t>(node(v).parent)] + node(v).length;
    return h;
  }

  double total_length() const {
    double acc = 0.0;
    for (const auto& n : nodes_) acc += n.length;
    return acc;
  }

  /// Node whose comma-separated label list contains `label`, or -1.
  int find_label(const std::string& label) const {
    for (int v = 0; v < size(); ++v) {
      const std::string& l = node(v).label;
      std::size_t pos = 0;
      while (pos <= l.size()) {
        const std::size_t next = std::min(l.find(',', pos), l.size());
        if (l.compare(pos, next - pos, label) == 0 && next - pos == label.size()) return v;
        pos = next + 1;
      }
    }
    return -1;
  }

  std::vector<int> leaves() const {
    std::vector<int> count(nodes_.size(), 0);
    for (int v = 1; v < size(); ++v) ++count[static_cast<std::size_t>(node(v).parent)];
    std::vector<int> out;
    for (int v = 1; v < size(); ++v)
      if (count[static_cast<std::size_t>(v)] == 0) out.push_back(v);
    return out;
  }

 private:
  std::vector<EdgeNode> nodes_;
};

inline double distance_to_label(const EdgeTree& t, const std::string& label) {
  const int v = t.find_label(label);
  require(v >= 0, ErrorCode::UnknownVertex, "no node labeled " + label);
  return t.heights()[static_cast<std::size_t>(v)];
}

// ---------------------------------------------------------------------------
// Stick-breaking

/// Cutpoints, joinpoints and the assembled tree of a stick-breaking run.
/// Segment k (1-based) covers (eta_{k-1}, eta_k] and, for k >= 2, hangs from
/// the joinpoint eta*_{k-1}.
struct StickBreak {
  std::vector<double> eta;        // eta_1 < ... < eta_J
  std::vector<double> joinpoint;  // eta*_1, ..., eta*_{J-1}
  std::vector<int> join_hub;      // hub index (1-based) when the joinpoint is xi_{i,1}, else 0
  std::vector<double> hub_first;  // xi_{i,1}
  EdgeTree tree;

  /// 1-based index of the segment holding position x > 0.
  int segment_of(double x) const {
    const auto it = std::lower_bound(eta.begin(), eta.end(), x);
    return static_cast<int>(it - eta.begin()) + 1;
  }
};

namespace detail {

/// Assembles T_J from cutpoints and joinpoints.
inline EdgeTree assemble_stick_tree(const StickBreak& sb) {
  const auto J = sb.eta.size();
  std::vector<std::vector<double>> stops(J + 1);
  for (double y : sb.joinpoint) {
    const int seg = sb.segment_of(y);
    stops[static_cast<std::size_t>(seg)].push_back(y);
  }
  std::map<double, std::string> hub_label;
  for (std::size_t k = 0; k < sb.joinpoint.size(); ++k)
    if (sb.join_hub[k] > 0) hub_label[sb.joinpoint[k]] = std::to_string(sb.join_hub[k]);

  EdgeTree tree;
  std::map<double, int> node_at;
  for (std::size_t k = 1; k <= J; ++k) {
    auto& s = stops[k];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    int prev_node = k == 1 ? tree.root() : node_at.at(sb.joinpoint[k - 2]);
    double prev_pos = k == 1 ? 0.0 : sb.eta[k - 2];
    for (double y : s) {
      if (y >= sb.eta[k - 1]) continue;
      const auto lab = hub_label.find(y);
      prev_node = tree.add_node(prev_node, y - prev_pos, lab == hub_label.end() ? "" : lab->second);
      node_at[y] = prev_node;
      prev_pos = y;
    }
    tree.add_node(prev_node, sb.eta[k - 1] - prev_pos, std::to_string(k) + "+");
  }
  return tree;
}

}  // namespace detail

/// Runs the stick-breaking construction up to J leaves.
///
/// The octant process is generated in increasing U order: its U-marginal has
/// intensity theta0^2 u, so U_k = sqrt(2 Gamma_k) / theta0 with Gamma_k the
/// arrival times of a unit Poisson process, and V_k is uniform on (0, U_k).
/// Hub i contributes cutpoints xi_{i,j} (j >= 2) joined at xi_{i,1}.
inline StickBreak stick_break_run(const ThetaVector& theta, int J, RngStream& rng) {
  require(J >= 1, ErrorCode::InvalidArgument, "need at least one leaf");
  const double theta0 = theta.theta0();
  require(theta0 > 0.0, ErrorCode::DegenerateTheta, "theta0 must be positive");

  StickBreak sb;
  double gamma = rng.exponential(1.0);
  auto octant_next = [&] { return std::sqrt(2.0 * gamma) / theta0; };
  std::vector<double> hub_next;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double first = rng.exponential(theta[i]);
    sb.hub_first.push_back(first);
    hub_next.push_back(first + rng.exponential(theta[i]));
  }
  while (sb.eta.size() < static_cast<std::size_t>(J)) {
    double best = octant_next();
    int source = -1;
    for (std::size_t i = 0; i < hub_next.size(); ++i)
      if (hub_next[i] < best) {
        best = hub_next[i];
        source = static_cast<int>(i);
      }
    double join;
    if (source < 0) {
      join = rng.uniform_open() * best;
      gamma += rng.exponential(1.0);
    } else {
      join = sb.hub_first[static_cast<std::size_t>(source)];
      hub_next[static_cast<std::size_t>(source)] += rng.exponential(theta[static_cast<std::size_t>(source)]);
    }
    sb.eta.push_back(best);
    if (sb.eta.size() < static_cast<std::size_t>(J)) {
      sb.joinpoint.push_back(join);
      sb.join_hub.push_back(source < 0 ? 0 : source + 1);
    }
  }
  sb.tree = detail::assemble_stick_tree(sb);
  return sb;
}

inline EdgeTree stick_break(const ThetaVector& theta, int J, RngStream& rng) {
  return stick_break_run(theta, J, rng).tree;
}

// ---------------------------------------------------------------------------
// Reduction, rescaling, shapes

/// Subtree spanned by the root and `targets`, with chains of unlabeled
/// degree-2 nodes contracted into single edges of summed length.
inline EdgeTree span_reduce(const EdgeTree& t, std::span<const int> targets) {
  require(!targets.empty(), ErrorCode::InvalidArgument, "need at least one target");
  std::vector<char> needed(static_cast<std::size_t>(t.size()), 0), is_target(static_cast<std::size_t>(t.size()), 0);
  for (int v : targets) {
    require(v >= 0 && v < t.size(), ErrorCode::UnknownVertex, "target is not a node");
    is_target[static_cast<std::size_t>(v)] = 1;
    for (int x = v; x != kNoParent && !needed[static_cast<std::size_t>(x)]; x = t.node(x).parent)
      needed[static_cast<std::size_t>(x)] = 1;
  }
  std::vector<int> needed_children(static_cast<std::size_t>(t.size()), 0);
  for (int v = 1; v < t.size(); ++v)
    if (needed[static_cast<std::size_t>(v)]) ++needed_children[static_cast<std::size_t>(t.node(v).parent)];

  EdgeTree out;
  out.node(out.root()).label = t.node(t.root()).label;
  std::vector<int> image(static_cast<std::size_t>(t.size()), -1);
  image[static_cast<std::size_t>(t.root())] = out.root();
  std::vector<double> up(static_cast<std::size_t>(t.size()), 0.0);   // length back to the last kept ancestor
  std::vector<int> anchor(static_cast<std::size_t>(t.size()), t.root());
  for (int v = 1; v < t.size(); ++v) {  // parents precede children
    if (!needed[static_cast<std::size_t>(v)]) continue;
    const int p = t.node(v).parent;
    const bool p_kept = image[static_cast<std::size_t>(p)] >= 0;
    const double run = (p_kept ? 0.0 : up[static_cast<std::size_t>(p)]) + t.node(v).length;
    const int base = p_kept ? p : anchor[static_cast<std::size_t>(p)];
    const bool keep = is_target[static_cast<std::size_t>(v)] || needed_children[static_cast<std::size_t>(v)] >= 2;
    if (keep) {
      image[static_cast<std::size_t>(v)] = out.add_node(image[static_cast<std::size_t>(base)], run, t.node(v).label);
    } else {
      up[static_cast<std::size_t>(v)] = run;
      anchor[static_cast<std::size_t>(v)] = base;
    }
  }
  return out;
}

/// Discrete version: unit edges, so contracted lengths count deleted nodes plus one.
/// Targets are labeled "1+", "2+", ... in the given order.
inline EdgeTree span_reduce(const RootedTree& t, std::span<const int> targets) {
  require(!targets.empty(), ErrorCode::InvalidArgument, "need at least one target");
  // Relabel so parents precede children (BFS order from the root).
  const auto kids = t.children();
  std::vector<int> order{t.root()};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : kids[static_cast<std::size_t>(order[i])]) order.push_back(c);
  std::vector<int> position(static_cast<std::size_t>(t.size()));
  for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

  EdgeTree unit;
  for (std::size_t i = 1; i < order.size(); ++i)
    unit.add_node(position[static_cast<std::size_t>(t.parent(order[i]))], 1.0);
  std::vector<int> mapped;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const int v = targets[j];
    require(v >= 0 && v < t.size(), ErrorCode::UnknownVertex, "target is not a vertex");
    const int node = position[static_cast<std::size_t>(v)];
    std::string& label = unit.node(node).label;
    const std::string tag = std::to_string(j + 1) + "+";
    label = label.empty() ? tag : label + "," + tag;
    mapped.push_back(node);
  }
  return span_reduce(unit, mapped);
}

inline EdgeTree rescale(double a, const EdgeTree& t) {
  require(a > 0.0 && std::isfinite(a), ErrorCode::NonpositiveScale, "scale must be positive");
  EdgeTree out = t;
  for (int v = 1; v < out.size(); ++v) out.node(v).length *= a;
  return out;
}

/// Canonical code of the rooted shape: labels kept, internal ids and lengths ignored.
inline std::string shape_signature(const EdgeTree& t) {
  const auto kids = t.children();
  std::vector<std::string> code(static_cast<std::size_t>(t.size()));
  for (int v = t.size() - 1; v >= 0; --v) {  // children have larger ids
    std::vector<std::string> parts;
    for (int c : kids[static_cast<std::size_t>(v)]) parts.push_back(std::move(code[static_cast<std::size_t>(c)]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(" + t.node(v).label;
    for (auto& p : parts) s += p;
    s += ")";
    code[static_cast<std::size_t>(v)] = std::move(s);
  }
  return code[0];
}

// ---------------------------------------------------------------------------
// Basin statistics read off the spine [[root, 1+]]

struct JuncStats {
  std::vector<double> masses;      // share of the J leaves with junc in ]]c_{j-1}, c_j]]
  std::vector<double> increments;  // ht(c_j) - ht(c_{j-1})
  std::vector<double> c;           // heights of c_1, c_2, ...
  std::vector<int> selecting_leaf; // k_j (1-based leaf index)
};

/// Height of junc(k+), the branchpoint of leaf k+ off the segment [0, eta_1]
/// (which is the path from the root to 1+). Index 0 holds leaf 1+ itself.
inline std::vector<double> junc_heights(const StickBreak& sb) {
  const auto J = sb.eta.size();
  std::vector<double> junc(J);
  junc[0] = sb.eta[0];
  for (std::size_t k = 2; k <= J; ++k) {
    const double attach = sb.joinpoint[k - 2];
    const int host = sb.segment_of(attach);
    junc[k - 1] = host == 1 ? attach : junc[static_cast<std::size_t>(host - 1)];
  }
  return junc;
}

inline JuncStats icrt_junc_stats(const ThetaVector& theta, int J, int k_basins, RngStream& rng) {
  require(J >= 2, ErrorCode::InvalidArgument, "need at least two leaves");
  const StickBreak sb = stick_break_run(theta, J, rng);
  const auto junc = junc_heights(sb);
  JuncStats out;
  double prev = 0.0;
  for (int j = 0; j < k_basins; ++j) {
    int pick = -1;
    for (int k = 2; k <= J; ++k)
      if (junc[static_cast<std::size_t>(k - 1)] > prev) {
        pick = k;
        break;
      }
    if (pick < 0) break;
    const double cj = junc[static_cast<std::size_t>(pick - 1)];
    int count = 0;
    for (int k = 2; k <= J; ++k) {
      const double x = junc[static_cast<std::size_t>(k - 1)];
      if (x > prev && x <= cj) ++count;
    }
    out.masses.push_back(static_cast<double>(count) / J);
    out.increments.push_back(cj - prev);
    out.c.push_back(cj);
    out.selecting_leaf.push_back(pick);
    prev = cj;
  }
  return out;
}

}  // namespace pmaplab
