#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmaplab/basins.hpp"
#include "pmaplab/harness.hpp"
#include "pmaplab/icrt.hpp"
#include "pmaplab/joyal.hpp"
#include "pmaplab/limit_process.hpp"
#include "pmaplab/stats.hpp"
#include "pmaplab/structures.hpp"
#include "pmaplab/walks.hpp"

namespace pmaplab {

/// (0.4, 0.3, 0.2, 0.1) cut to n entries, or extended by halving the last
/// entry, then renormalized.
inline RankedProb reference_probabilities(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be positive");
  std::vector<double> v{0.4, 0.3, 0.2, 0.1};
  v.resize(std::min<std::size_t>(v.size(), static_cast<std::size_t>(n)));
  while (v.size() < static_cast<std::size_t>(n)) v.push_back(v.back() / 2.0);
  return RankedProb(std::move(v));
}

// ---------------------------------------------------------------------------
// Exact oracles

struct BijectionCheck {
  std::uint64_t codes = 0;
  std::uint64_t round_trips = 0;
  std::uint64_t distinct = 0;
  std::uint64_t occurrence_ok = 0;
  double cayley_sum = 0.0;
};

inline BijectionCheck check_tree_bijection(int n, const RankedProb& p) {
  check_enumerable(n);
  require(p.n() == n, ErrorCode::InvalidArgument, "p must live on [n]");
  BijectionCheck out;
  std::set<std::pair<int, std::vector<int>>> seen;
  for_each_word(n, n - 1, [&](std::span<const int> code) {
    const RootedTree t = decode_tree(code, n);
    ++out.codes;
    const auto again = encode_tree(t);
    if (std::equal(again.begin(), again.end(), code.begin(), code.end())) ++out.round_trips;
    seen.insert({t.root(), t.parents()});
    std::vector<int> occ(static_cast<std::size_t>(n), 0);
    for (int a : code) ++occ[static_cast<std::size_t>(a)];
    if (occ == t.child_counts()) ++out.occurrence_ok;
    out.cayley_sum += tree_probability(p, t);
  });
  out.distinct = seen.size();
  return out;
}

/// Exact law of |C(M)| for the p-mapping, indexed 0..n.
inline std::vector<double> cyclic_count_law(const RankedProb& p) {
  std::vector<double> law(static_cast<std::size_t>(p.n()) + 1, 0.0);
  enumerate_mappings(p.n(), [&](const Mapping& m) {
    law[static_cast<std::size_t>(count_cyclic(m))] += mapping_probability(p, m);
  });
  return law;
}

/// Exact law of 1 + ht(xi) for a p-tree and an independent xi ~ p, indexed 0..n.
inline std::vector<double> one_plus_height_law(const RankedProb& p) {
  std::vector<double> law(static_cast<std::size_t>(p.n()) + 1, 0.0);
  enumerate_trees(p.n(), [&](const RootedTree& t) {
    const double pt = tree_probability(p, t);
    const auto depth = t.depths();
    for (int v = 0; v < p.n(); ++v)
      law[static_cast<std::size_t>(depth[static_cast<std::size_t>(v)] + 1)] += pt * p[static_cast<std::size_t>(v)];
  });
  return law;
}

// ---------------------------------------------------------------------------
// Pathwise Joyal coupling

struct PathComparison {
  bool same_size = false;
  double width_error = 0.0;
  double boundary_error = 0.0;
  double value_error = 0.0;

  bool equal(double tol = kBoundaryTolerance) const {
    return same_size && width_error <= tol && boundary_error <= tol && value_error == 0.0;
  }
};

/// Compares a with b + shift step by step.
inline PathComparison compare_paths(const StepFunction& a, const StepFunction& b, double shift = 0.0) {
  PathComparison c;
  c.same_size = a.size() == b.size();
  if (!c.same_size) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.width_error = std::max(c.width_error, std::abs(a.width(i) - b.width(i)));
    c.boundary_error = std::max(c.boundary_error, std::abs(a.start(i) - b.start(i)));
    c.value_error = std::max(c.value_error, std::abs(a.value(i) - (b.value(i) + shift)));
  }
  return c;
}

struct LemjInstance {
  RootedTree tree;
  PlaneTree plane;
  int x1 = 0;
  double u = 0.0;
  JoyalOutput tilde;
  JoyalMapping joyal;
  BasinDecomposition ordered;  // q-biased order of the Joyal mapping from the same q stream
  MappingWalk walk;
  bool pivot_ok = false;       // the w-walk visits X_1 at time u
  bool order_ok = false;       // both q-stream readings give the same cyclic order
  PathComparison comparison;   // tilde vs walk - 1
};

/// One coupled instance: p-tree with random plane order, U uniform, X_1 the
/// vertex visited at time U in the p-weighted walk and u = S_w^{-1}(S_p(U)).
/// The q stream is replayed for the Joyal grouping and the basin order.
inline LemjInstance lemj_instance(const RankedProb& p, std::span<const double> q, std::span<const double> w,
                                  RngStream& rng, const RngStream& q_stream) {
  LemjInstance inst;
  inst.tree = sample_p_tree(p, rng);
  inst.plane = randomize_plane_order(inst.tree, rng);
  const double U = rng.uniform();
  const StepFunction Hp = tree_height_walk(inst.plane, p.values());
  inst.x1 = Hp.tag(Hp.step_at(U));
  const auto order = depth_first(inst.plane);
  inst.u = time_change(order, w).inverse(time_change(order, p.values())(U));
  const StepFunction Hw = tree_height_walk(inst.plane, w);
  inst.pivot_ok = Hw.tag(Hw.step_at(inst.u)) == inst.x1;
  if (!inst.pivot_ok) {
    // Rounding put u on a neighbouring step; pin it inside X_1's step.
    for (std::size_t i = 0; i < Hw.size(); ++i)
      if (Hw.tag(i) == inst.x1) inst.u = Hw.start(i) + 0.5 * Hw.width(i);
  }
  const SpineData spine = make_spine(inst.tree, inst.x1);
  inst.tilde = joyal_tilde(Hw, inst.u, spine);

  RngStream qa = q_stream, qb = q_stream;
  inst.joyal = joyal_correspondence(inst.tree, inst.x1, q, qa);
  inst.ordered = q_biased_order(basin_decomposition(inst.joyal.mapping), q, qb);
  inst.order_ok = inst.ordered.cyclic_order == inst.joyal.order.cyclic_order &&
                  inst.ordered.tau == inst.joyal.order.tau;
  inst.walk = mapping_walk(inst.joyal.mapping, inst.ordered, inherit_forest(inst.plane, spine), w);
  inst.comparison = compare_paths(inst.tilde.path, inst.walk.H, -1.0);
  return inst;
}

/// Mapping as an integer in base n.
inline std::uint64_t mapping_code(const Mapping& m) {
  std::uint64_t code = 0;
  for (int i = m.size() - 1; i >= 0; --i) code = code * static_cast<std::uint64_t>(m.size()) + static_cast<std::uint64_t>(m(i));
  return code;
}

// ---------------------------------------------------------------------------
// Experiment catalog

namespace experiments {

inline constexpr std::uint64_t kDiscrete = 1;
inline constexpr std::uint64_t kReference = 2;
inline constexpr std::uint64_t kLimit = 3;
inline constexpr std::uint64_t kTree = 4;
inline constexpr std::uint64_t kQueue = 5;

inline Report bijection(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.p.empty() ? reference_probabilities(cfg.n) : cfg.probabilities();
  const auto b = check_tree_bijection(cfg.n, p);
  r.criteria.push_back(equals("round_trips", static_cast<double>(b.round_trips), static_cast<double>(b.codes)));
  r.criteria.push_back(equals("distinct_trees", static_cast<double>(b.distinct), static_cast<double>(b.codes)));
  r.criteria.push_back(equals("occurrence_counts", static_cast<double>(b.occurrence_ok), static_cast<double>(b.codes)));
  r.criteria.push_back(at_most("cayley_error", std::abs(b.cayley_sum - 1.0), 1e-10));
  r.rows = {{0, "codes", static_cast<double>(b.codes)},
            {0, "round_trips", static_cast<double>(b.round_trips)},
            {0, "distinct_trees", static_cast<double>(b.distinct)},
            {0, "cayley_sum", b.cayley_sum}};
  return r;
}

inline Report cyclic_identity(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const auto lhs = cyclic_count_law(p);
  const auto rhs = one_plus_height_law(p);
  r.criteria.push_back(at_most("tv_cyclic_vs_height", tv_finite(lhs, rhs), 1e-10));
  for (std::size_t k = 1; k < lhs.size(); ++k) {
    r.rows.push_back({static_cast<std::int64_t>(k), "p_cyclic_count", lhs[k]});
    r.rows.push_back({static_cast<std::int64_t>(k), "p_one_plus_height", rhs[k]});
  }
  return r;
}

inline Report joyal_pathwise(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const auto q = resolve_weights(cfg.q, p);
  const auto w = resolve_weights(cfg.w, p);
  const Columns c = collect(cfg, {"match", "width_error", "order_match"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    const RngStream qs = replication_stream(cfg.seed, kQueue, rep);
    const auto inst = lemj_instance(p, q, w, rng, qs);
    return std::vector<double>{inst.comparison.equal() ? 1.0 : 0.0,
                               inst.comparison.same_size ? inst.comparison.width_error : 1.0,
                               inst.order_ok ? 1.0 : 0.0};
  });
  double matches = 0.0, orders = 0.0, width = 0.0;
  for (std::size_t i = 0; i < c["match"].size(); ++i) {
    matches += c["match"][i];
    orders += c["order_match"][i];
    width = std::max(width, c["width_error"][i]);
  }
  r.criteria.push_back(equals("pathwise_matches", matches, cfg.replications));
  r.criteria.push_back(equals("order_matches", orders, cfg.replications));
  r.criteria.push_back(at_most("max_width_error", width, kBoundaryTolerance));
  c.append_rows(r.rows);
  return r;
}

inline Report joyal_pushforward(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  check_enumerable(p.n());
  const auto q = resolve_weights(cfg.q, p);
  const Categorical pick(p.values());
  const Columns c = collect(cfg, {"mapping_code"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    const RootedTree t = sample_p_tree(p, rng);
    const int x1 = pick(rng);
    const auto jm = joyal_correspondence(t, x1, q, rng);
    return std::vector<double>{static_cast<double>(mapping_code(jm.mapping))};
  });
  std::map<std::uint64_t, double> counts, empirical, exact;
  for (double code : c["mapping_code"]) counts[static_cast<std::uint64_t>(code)] += 1.0;
  for (const auto& [code, k] : counts) empirical[code] = k / cfg.replications;
  std::vector<double> observed, expected;
  enumerate_mappings(p.n(), [&](const Mapping& m) {
    const auto code = mapping_code(m);
    exact[code] = mapping_probability(p, m);
    observed.push_back(counts.contains(code) ? counts[code] : 0.0);
    expected.push_back(exact[code]);
  });
  r.criteria.push_back(at_most("tv_joyal_vs_exact", tv_finite(empirical, exact), 0.01));
  r.summary["chi_square_p_value"] = chi_square(observed, expected).p_value;
  c.append_rows(r.rows);
  return r;
}

/// First-basin p-mass and sigma |cyc_1| of the p-mapping with q-biased order.
inline std::pair<double, double> first_basin(const RankedProb& p, std::span<const double> q, RngStream& rng) {
  const Mapping m = sample_p_mapping(p, rng);
  const auto ordered = q_biased_order(basin_decomposition(m), q, rng);
  double mass = 0.0;
  for (int v : ordered.basins.front()) mass += p[static_cast<std::size_t>(v)];
  return {mass, sigma(p) * static_cast<double>(ordered.cycles.front().size())};
}

inline Report basin_statistics(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const ThetaVector theta = cfg.theta_vector();
  const auto q = resolve_weights(cfg.q, p);
  const Columns c = collect(cfg, {"first_basin_mass", "sigma_cycle_1", "junc_mass_1", "junc_height_1"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    const auto [mass, cyc] = first_basin(p, q, rng);
    RngStream tree_rng = replication_stream(cfg.seed, kTree, rep);
    const auto j = icrt_junc_stats(theta, cfg.leaves, 1, tree_rng);
    return std::vector<double>{mass, cyc, j.masses.at(0), j.c.at(0)};
  });
  const EmpiricalSample mass(c["first_basin_mass"]), junc_mass(c["junc_mass_1"]);
  const EmpiricalSample cyc(c["sigma_cycle_1"]), junc_height(c["junc_height_1"]);
  r.criteria.push_back(at_most("ks_mass_vs_junc", ks_two_sample(mass, junc_mass), 0.06));
  r.criteria.push_back(at_most("ks_cycle_vs_junc_height", ks_two_sample(cyc, junc_height), 0.06));
  r.summary["mean_first_basin_mass"] = mass.mean();
  r.summary["mean_junc_mass_1"] = junc_mass.mean();
  r.summary["mean_sigma_cycle_1"] = cyc.mean();
  r.summary["mean_junc_height_1"] = junc_height.mean();
  c.append_rows(r.rows);
  return r;
}

/// First cutpoint of the stick-breaking construction: root to 1+ distance.
inline double eta_one(const ThetaVector& theta, RngStream& rng) { return stick_break_run(theta, 1, rng).eta[0]; }

inline Report cyclic_scaling(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const ThetaVector theta = cfg.theta_vector();
  const double s = sigma(p);
  const Columns c = collect(cfg, {"sigma_cyclic", "eta_1"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    RngStream ref = replication_stream(cfg.seed, kTree, rep);
    const Mapping m = sample_p_mapping(p, rng);
    return std::vector<double>{s * count_cyclic(m), eta_one(theta, ref)};
  });
  const EmpiricalSample a(c["sigma_cyclic"]), b(c["eta_1"]);
  r.criteria.push_back(at_most("ks_cyclic_vs_eta1", ks_two_sample(a, b), 0.05));
  r.summary["mean_sigma_cyclic"] = a.mean();
  r.summary["mean_eta_1"] = b.mean();
  c.append_rows(r.rows);
  return r;
}

inline Report marginal(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const ThetaVector theta = cfg.theta_vector();
  const double s = sigma(p);
  const Categorical pick(p.values());
  const Columns c = collect(cfg, {"sigma_depth", "eta_1"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    RngStream ref = replication_stream(cfg.seed, kTree, rep);
    const RootedTree t = sample_p_tree(p, rng);
    const int xi = pick(rng);
    const EdgeTree reduced = rescale(s, span_reduce(t, std::vector<int>{xi}));
    return std::vector<double>{distance_to_label(reduced, "1+"), eta_one(theta, ref)};
  });
  const EmpiricalSample a(c["sigma_depth"]), b(c["eta_1"]);
  r.criteria.push_back(at_most("ks_depth_vs_eta1", ks_two_sample(a, b), 0.05));
  r.summary["mean_sigma_depth"] = a.mean();
  r.summary["mean_eta_1"] = b.mean();
  c.append_rows(r.rows);
  return r;
}

/// D_1 from the limit pipeline: H, Z = J^U(H), then the first D mark.
inline double limit_first_mark(const ThetaVector& theta, int m, RngStream& rng) {
  const auto ex = exploration(theta, m, rng);
  const auto z = limit_Z(ex.H, rng);
  return marks_D(z.z.d, rng, 1).at(0);
}

inline Report basin_masses(const ExperimentConfig& cfg) {
  Report r;
  const RankedProb p = cfg.probabilities();
  const ThetaVector theta = cfg.theta_vector();
  const auto q = resolve_weights(cfg.q, p);
  const int m = 1 << cfg.grid_log2;
  const Columns c = collect(cfg, {"first_basin_mass", "limit_D1", "junc_mass_1"}, [&](int rep) {
    RngStream rng = replication_stream(cfg.seed, kDiscrete, rep);
    RngStream lim = replication_stream(cfg.seed, kLimit, rep);
    RngStream tree_rng = replication_stream(cfg.seed, kTree, rep);
    const double mass = first_basin(p, q, rng).first;
    const double d1 = limit_first_mark(theta, m, lim);
    const double junc = icrt_junc_stats(theta, cfg.leaves, 1, tree_rng).masses.at(0);
    return std::vector<double>{mass, d1, junc};
  });
  const EmpiricalSample a(c["first_basin_mass"]), b(c["limit_D1"]), j(c["junc_mass_1"]);
  r.criteria.push_back(at_most("ks_mass_vs_D1", ks_two_sample(a, b), 0.06));
  r.criteria.push_back(at_most("ks_mass_vs_junc", ks_two_sample(a, j), 0.06));
  r.criteria.push_back(at_most("ks_D1_vs_junc", ks_two_sample(b, j), 0.06));
  r.summary["mean_first_basin_mass"] = a.mean();
  r.summary["mean_limit_D1"] = b.mean();
  r.summary["mean_junc_mass_1"] = j.mean();
  c.append_rows(r.rows);
  return r;
}

}  // namespace experiments

inline Report run_experiment(const ExperimentConfig& cfg, bool write_output = true) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    if (cfg.experiment == "E1") r = experiments::bijection(cfg);
    else if (cfg.experiment == "E2") r = experiments::cyclic_identity(cfg);
    else if (cfg.experiment == "E3")
      r = cfg.mode == "pushforward" ? experiments::joyal_pushforward(cfg) : experiments::joyal_pathwise(cfg);
    else if (cfg.experiment == "E4") r = experiments::basin_statistics(cfg);
    else if (cfg.experiment == "E5") r = experiments::cyclic_scaling(cfg);
    else if (cfg.experiment == "E6") r = experiments::marginal(cfg);
    else if (cfg.experiment == "E7") r = experiments::basin_masses(cfg);
    else fail(ErrorCode::ConfigError, "unknown experiment " + cfg.experiment);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError || e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, std::string("experiment rejected its parameters: ") + e.what());
  }
  r.experiment = cfg.experiment;
  r.seconds = elapsed_seconds(start);
  if (write_output && !cfg.output.empty()) write_text_file(cfg.output, r.csv());
  return r;
}

}  // namespace pmaplab
