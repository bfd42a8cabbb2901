#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmaplab/experiments.hpp"

namespace pmaplab {

struct CheckResult {
  std::string name;
  bool passed = true;
  int instances = 0;
  std::string detail;
};

using CheckList = std::vector<CheckResult>;

inline bool all_passed(const CheckList& list) {
  return std::all_of(list.begin(), list.end(), [](const CheckResult& c) { return c.passed; });
}

/// Runs body(rng, i) for i < instances on stream (seed, id, i); the first
/// non-empty message is a failure.
template <class F>
CheckResult property(std::string name, std::uint64_t seed, std::uint64_t id, int instances, F&& body) {
  CheckResult r{std::move(name), true, 0, {}};
  for (int i = 0; i < instances; ++i) {
    RngStream rng = replication_stream(seed, 100 + id, i);
    ++r.instances;
    std::optional<std::string> msg;
    try {
      msg = body(rng, i);
    } catch (const std::exception& e) {
      msg = std::string("threw ") + e.what();
    }
    if (msg) {
      r.passed = false;
      r.detail = "instance " + std::to_string(i) + ": " + *msg;
      break;
    }
  }
  return r;
}

namespace gen {

inline RankedProb prob(int n, RngStream& rng) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = 0.05 + rng.uniform();
  std::sort(v.begin(), v.end(), std::greater<>());
  return RankedProb(std::move(v));
}

inline std::vector<double> theta(RngStream& rng, int max_hubs = 3) {
  std::vector<double> t(rng.below(static_cast<std::size_t>(max_hubs) + 1));
  for (double& x : t) x = 0.05 + 0.5 * rng.uniform();
  std::sort(t.begin(), t.end(), std::greater<>());
  double sq = 0.0;
  for (double x : t) sq += x * x;
  if (sq >= 0.9)
    for (double& x : t) x *= std::sqrt(0.9 / sq);
  return t;
}

inline int between(RngStream& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::size_t>(hi - lo + 1))); }

/// Random path with positive widths summing to 1 and small integer values.
inline StepFunction path(RngStream& rng, int steps, int levels = 5) {
  std::vector<double> w(static_cast<std::size_t>(steps)), v(static_cast<std::size_t>(steps));
  double total = 0.0;
  for (double& x : w) total += (x = 0.1 + rng.uniform());
  for (double& x : w) x /= total;
  for (double& x : v) x = static_cast<double>(rng.below(static_cast<std::size_t>(levels)));
  return StepFunction(std::move(w), std::move(v));
}

}  // namespace gen

inline std::optional<std::string> fail_if(bool bad, const std::string& what) {
  if (bad) return what;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Suites

inline CheckList bijection_suite(int max_n = 5) {
  CheckList out;
  for (int n = 2; n <= max_n; ++n) {
    const auto b = check_tree_bijection(n, reference_probabilities(n));
    CheckResult r{"bijection n=" + std::to_string(n), true, 1, {}};
    r.passed = b.round_trips == b.codes && b.distinct == b.codes && b.occurrence_ok == b.codes &&
               std::abs(b.cayley_sum - 1.0) <= 1e-10;
    r.detail = std::to_string(b.round_trips) + "/" + std::to_string(b.codes) + " round trips, cayley sum " +
               std::to_string(b.cayley_sum);
    out.push_back(r);
  }
  return out;
}

inline ExperimentConfig lemj_config(std::uint64_t seed, int instances, int n = 50) {
  ExperimentConfig cfg;
  cfg.experiment = "E3";
  cfg.n = n;
  cfg.theta = {0.5};
  cfg.q = {WeightKind::Uniform, {}};
  cfg.w = {WeightKind::Uniform, {}};
  cfg.seed = seed;
  cfg.replications = instances;
  return cfg;
}

inline ExperimentConfig pushforward_config(std::uint64_t seed, int draws) {
  ExperimentConfig cfg;
  cfg.experiment = "E3";
  cfg.mode = "pushforward";
  cfg.n = 4;
  cfg.p = {0.4, 0.3, 0.2, 0.1};
  cfg.q = {WeightKind::Uniform, {}};
  cfg.seed = seed;
  cfg.replications = draws;
  return cfg;
}

inline CheckResult from_report(const std::string& name, const Report& r) {
  CheckResult c{name, r.passed(), 1, {}};
  for (const auto& k : r.criteria) {
    if (!c.detail.empty()) c.detail += ", ";
    c.detail += k.name + "=" + std::to_string(k.value) + (k.pass ? "" : " (FAIL)");
  }
  return c;
}

inline CheckList lemj_suite(std::uint64_t seed, int instances = 1000) {
  CheckList out;
  auto cfg = lemj_config(seed, instances);
  out.push_back(from_report("lemj pathwise, w uniform", run_experiment(cfg, false)));
  cfg.w = {WeightKind::P, {}};
  cfg.seed = seed + 1;
  out.push_back(from_report("lemj pathwise, w = p", run_experiment(cfg, false)));
  return out;
}

inline CheckList joyal_suite(std::uint64_t seed, int draws = 1000000) {
  return {from_report("joyal pushforward n=4", run_experiment(pushforward_config(seed, draws), false))};
}

namespace props {

inline CheckList core(std::uint64_t seed, int N) {
  CheckList out;
  out.push_back(property("hub family sigma, sum and ratios", seed, 1, N, [](RngStream& rng, int) {
    const auto t = gen::theta(rng);
    const int n = static_cast<int>(t.size()) + gen::between(rng, 1, 3000);
    RankedProb p = RankedProb::uniform(1);
    try {
      p = make_hub_family({ThetaVector(t), TailShape::Uniform, n});
    } catch (const Error& e) {
      return fail_if(e.code() != ErrorCode::NotRanked, e.what());
    }
    const ThetaVector th(t);
    double s = th.theta0() * std::sqrt(static_cast<double>(n - static_cast<int>(t.size())));
    for (double x : t) s += x;
    s = 1.0 / s;
    double sum = 0.0;
    for (double x : p.values()) sum += x;
    if (std::abs(sigma(p) - s) > 1e-12) return fail_if(true, "sigma differs from s");
    if (std::abs(sum - 1.0) > 1e-12) return fail_if(true, "sum differs from 1");
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::abs(p[i] / sigma(p) - t[i]) > 1e-12) return fail_if(true, "hub ratio differs from theta");
    return std::optional<std::string>{};
  }));
  out.push_back(property("sigma permutation invariant and homogeneous", seed, 2, N, [](RngStream& rng, int) {
    std::vector<double> v(static_cast<std::size_t>(gen::between(rng, 1, 40)));
    for (double& x : v) x = rng.uniform();
    const double base = sigma(v);
    std::shuffle(v.begin(), v.end(), rng);
    const double c = 0.1 + 10.0 * rng.uniform();
    std::vector<double> scaled(v);
    for (double& x : scaled) x *= c;
    return fail_if(std::abs(sigma(v) - base) > 1e-14 * (1.0 + base) ||
                       std::abs(sigma(scaled) - c * base) > 1e-13 * (1.0 + c * base),
                   "sigma not invariant");
  }));
  out.push_back(property("hub family max decreases as n doubles", seed, 3, N, [](RngStream& rng, int) {
    const auto t = gen::theta(rng);
    const int n = static_cast<int>(t.size()) + gen::between(rng, 50, 2000);
    try {
      const auto a = make_hub_family({ThetaVector(t), TailShape::Uniform, n});
      const auto b = make_hub_family({ThetaVector(t), TailShape::Uniform, 2 * n});
      return fail_if(!(b[0] < a[0]), "max p did not decrease");
    } catch (const Error& e) {
      return fail_if(e.code() != ErrorCode::NotRanked, e.what());
    }
  }));
  return out;
}

inline CheckList structures(std::uint64_t seed, int N) {
  CheckList out;
  for (const auto& c : bijection_suite(5)) out.push_back(c);
  out.push_back(property("cayley identity for random p", seed, 10, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 5), rng);
    double total = 0.0;
    enumerate_trees(p.n(), [&](const RootedTree& t) { total += tree_probability(p, t); });
    return fail_if(std::abs(total - 1.0) > 1e-10, "tree law does not sum to 1");
  }));
  out.push_back(property("iterating m reaches the basin's cycle", seed, 11, 1, [](RngStream&, int) {
    std::optional<std::string> bad;
    for (int n = 1; n <= 5 && !bad; ++n)
      enumerate_mappings(n, [&](const Mapping& m) {
        const auto d = basin_decomposition(m);
        for (int v = 0; v < n; ++v) {
          int x = v;
          for (int k = 0; k < n; ++k) x = m(x);
          const auto& cyc = d.cycles[static_cast<std::size_t>(d.basin_of[static_cast<std::size_t>(v)])];
          if (std::find(cyc.begin(), cyc.end(), x) == cyc.end()) bad = "vertex escaped its basin";
        }
      });
    return bad;
  }));
  out.push_back(property("basins partition and cycle order", seed, 12, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 60), rng);
    const Mapping m = sample_p_mapping(p, rng);
    const auto d = q_biased_order(basin_decomposition(m), p.values(), rng);
    std::vector<int> seen(static_cast<std::size_t>(m.size()), 0);
    for (const auto& b : d.basins)
      for (int v : b) ++seen[static_cast<std::size_t>(v)];
    if (std::any_of(seen.begin(), seen.end(), [](int k) { return k != 1; })) return fail_if(true, "not a partition");
    if (static_cast<int>(std::count_if(d.raw.cyclic.begin(), d.raw.cyclic.end(), [](auto c) { return c; })) !=
        count_cyclic(m))
      return fail_if(true, "count_cyclic disagrees");
    for (std::size_t j = 0; j < d.cycles.size(); ++j) {
      const auto& cyc = d.cycles[j];
      if (cyc.back() != d.selected[j]) return fail_if(true, "cycle does not end at c_j");
      for (std::size_t k = 0; k < cyc.size(); ++k)
        if (cyc[k] != m(k == 0 ? d.selected[j] : cyc[k - 1])) return fail_if(true, "cycle order is not m(c), m^2(c), ...");
      const auto& b = d.basins[j];
      if (std::find(b.begin(), b.end(), d.selected[j]) == b.end()) return fail_if(true, "c_j outside its basin");
    }
    for (std::size_t j = 1; j < d.tau.size(); ++j)
      if (d.tau[j] <= d.tau[j - 1]) return fail_if(true, "tau not increasing");
    return std::optional<std::string>{};
  }));
  out.push_back(property("one basin gives a deterministic order", seed, 13, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 30), rng);
    const RootedTree t = sample_p_tree(p, rng);
    std::vector<int> img(t.parents());
    img[static_cast<std::size_t>(t.root())] = t.root();
    const auto d = q_biased_order(basin_decomposition(Mapping(img)), p.values(), rng);
    return fail_if(d.basin_count() != 1 || d.tau.front() != 2 || d.selected.front() != t.root(),
                   "single basin order not deterministic");
  }));
  out.push_back(property("first basin law is q(B) (chi-square)", seed, 14, 1, [N](RngStream& rng, int) {
    const Mapping m({0, 0, 2, 3, 3, 1});  // basins {0,1,5}, {2}, {3,4}
    const auto raw = basin_decomposition(m);
    const std::vector<double> q{0.3, 0.1, 0.25, 0.05, 0.2, 0.1};
    std::vector<double> counts(raw.basins.size(), 0.0), expected(raw.basins.size(), 0.0);
    for (int v = 0; v < 6; ++v) expected[static_cast<std::size_t>(raw.basin_of[static_cast<std::size_t>(v)])] += q[static_cast<std::size_t>(v)];
    const int draws = 20 * N;
    for (int i = 0; i < draws; ++i) {
      const auto d = q_biased_order(raw, q, rng);
      const int first = raw.basin_of[static_cast<std::size_t>(d.selected.front())];
      counts[static_cast<std::size_t>(first)] += 1.0;
    }
    const auto chi = chi_square(counts, expected);
    return fail_if(chi.p_value < 1e-4, "chi-square p-value " + std::to_string(chi.p_value));
  }));
  return out;
}

inline CheckList walks(std::uint64_t seed, int N) {
  CheckList out;
  out.push_back(property("tree walk widths, tags and +1 increments", seed, 20, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 60), rng);
    const PlaneTree pt = randomize_plane_order(sample_p_tree(p, rng), rng);
    const auto H = tree_height_walk(pt, p.values());
    if (std::abs(H.total() - 1.0) > 1e-12) return fail_if(true, "widths do not sum to 1");
    const auto depth = pt.tree.depths();
    for (std::size_t i = 0; i < H.size(); ++i) {
      if (H.value(i) != depth[static_cast<std::size_t>(H.tag(i))]) return fail_if(true, "value is not the height");
      if (i > 0 && H.value(i) > H.value(i - 1) + 1.0) return fail_if(true, "height rose by more than 1");
    }
    return std::optional<std::string>{};
  }));
  out.push_back(property("mapping walk zeros, ell and D marks", seed, 21, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 60), rng);
    const Mapping m = sample_p_mapping(p, rng);
    const auto raw = basin_decomposition(m);
    const auto ordered = q_biased_order(raw, p.values(), rng);
    const auto mw = mapping_walk(m, ordered, randomize_forest_order(raw, rng), p.values());
    const auto& H = mw.H;
    if (std::abs(H.total() - 1.0) > 1e-12) return fail_if(true, "widths do not sum to 1");
    for (std::size_t i = 0; i < H.size(); ++i) {
      if ((H.value(i) == 0.0) != raw.is_cyclic(H.tag(i))) return fail_if(true, "zero iff cyclic fails");
      if (i > 0 && mw.marks.ell.value(i) < mw.marks.ell.value(i - 1)) return fail_if(true, "ell decreased");
    }
    if (mw.marks.ell.values().back() != raw.cyclic_count()) return fail_if(true, "ell does not end at |C|");
    const auto& D = mw.marks.D;
    if (D.size() != ordered.basins.size()) return fail_if(true, "D count differs from basin count");
    if (std::abs(D.back() - H.total()) > 1e-12) return fail_if(true, "last D is not the total");
    double prev = 0.0;
    for (std::size_t j = 0; j < D.size(); ++j) {
      double mass = 0.0;
      for (int v : ordered.basins[j]) mass += p[static_cast<std::size_t>(v)];
      if (std::abs(D[j] - prev - mass) > 1e-12) return fail_if(true, "D increment is not the basin mass");
      prev = D[j];
    }
    return std::optional<std::string>{};
  }));
  out.push_back(property("time change composition", seed, 22, N, [](RngStream& rng, int) {
    const RankedProb p = gen::prob(gen::between(rng, 1, 40), rng);
    const PlaneTree pt = randomize_plane_order(sample_p_tree(p, rng), rng);
    std::vector<double> w(static_cast<std::size_t>(p.n()));
    double total = 0.0;
    for (double& x : w) total += (x = 0.01 + rng.uniform());
    for (double& x : w) x /= total;
    const auto order = depth_first(pt);
    const auto composed = compose(tree_height_walk(pt, p.values()), time_change(order, p.values()), time_change(order, w));
    return fail_if(!compare_paths(composed, tree_height_walk(pt, w)).equal(), "composition differs from direct walk");
  }));
  return out;
}

inline CheckList joyal(std::uint64_t seed, int N) {
  CheckList out;
  out.push_back(property("pre-post infimum shape", seed, 30, N, [](RngStream& rng, int) {
    const auto f = gen::path(rng, gen::between(rng, 1, 30));
    const double u = rng.uniform();
    const auto b = pre_post_infimum(f, u);
    const std::size_t k = f.step_at(u);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (b.value(i) > f.value(i)) return fail_if(true, "infimum above f");
      if (i > 0 && i <= k && b.value(i) < b.value(i - 1)) return fail_if(true, "pre part decreases");
      if (i > k && b.value(i) > b.value(i - 1)) return fail_if(true, "post part increases");
    }
    return std::optional<std::string>{};
  }));
  out.push_back(property("excursion lengths, marks and value multiset", seed, 31, N, [](RngStream& rng, int) {
    const auto f = gen::path(rng, gen::between(rng, 1, 30));
    const double u = rng.uniform();
    const auto set = generalized_excursions(f, u);
    double total = 0.0;
    for (const auto& item : set.items) {
      total += item.length;
      if (item.pieces.size() == 2) {
        if (!(item.intervals[0].second <= u && u < item.intervals[1].first + 1e-12) &&
            !(item.intervals[0].second < u + 1e-12))
          return fail_if(true, "two-piece item does not straddle u");
      }
    }
    if (std::abs(total - f.total()) > 1e-12) return fail_if(true, "lengths do not cover the path");
    for (std::size_t i = 1; i < set.items.size(); ++i)
      if (set.items[i].length > set.items[i - 1].length) return fail_if(true, "items not by decreasing length");
    const auto z = arrange_by_height(set, f.total());
    for (std::size_t i = 0; i < z.g.size(); ++i) {
      if (std::abs(z.d[i] - z.g[i] - z.lengths[i]) > 1e-12) return fail_if(true, "d - g != l");
      double below = 0.0;
      for (std::size_t j = 0; j < z.heights.size(); ++j)
        if (z.heights[j] < z.heights[i]) below += z.lengths[j];
      if (std::abs(z.g[i] - below) > 1e-12) return fail_if(true, "g is not the mass below");
      if (i > 0 && z.heights[i] <= z.heights[i - 1]) return fail_if(true, "heights not increasing");
    }
    std::vector<std::pair<double, double>> before, after;
    const auto& base = set.baseline;
    for (std::size_t j = 0; j < f.size(); ++j) before.emplace_back(f.value(j) - base.value(j), f.width(j));
    for (std::size_t j = 0; j < z.path.size(); ++j) after.emplace_back(z.path.value(j), z.path.width(j));
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    return fail_if(before != after, "value multiset changed");
  }));
  out.push_back(property("pre-pivot excursions end at their floor", seed, 32, N, [](RngStream& rng, int) {
    const auto f = gen::path(rng, gen::between(rng, 1, 30));
    const double u = rng.uniform();
    const auto set = generalized_excursions(f, u);
    const std::size_t k = f.step_at(u);
    for (const auto& item : set.items) {
      if (item.pieces.size() != 1 || item.pieces[0].last > k) continue;
      if (item.excursion.values().back() != 0.0) return fail_if(true, "pre excursion does not end at 0");
    }
    return std::optional<std::string>{};
  }));
  out.push_back(property("lemj pathwise identity, n <= 50", seed, 33, N, [](RngStream& rng, int) {
    const int n = gen::between(rng, 1, 50);
    const RankedProb p = gen::prob(n, rng);
    std::vector<double> q = gen::prob(n, rng).vector();
    std::shuffle(q.begin(), q.end(), rng);
    std::vector<double> w = gen::prob(n, rng).vector();
    std::shuffle(w.begin(), w.end(), rng);
    const RngStream qs(rng(), 0);
    const auto inst = lemj_instance(p, q, w, rng, qs);
    return fail_if(!inst.comparison.equal() || !inst.order_ok, "joyal tilde differs from the mapping walk minus 1");
  }));
  out.push_back(property("joyal pushforward n=3 (TV <= 0.01)", seed, 34, 1, [N](RngStream& rng, int) {
    const RankedProb p({0.5, 0.3, 0.2});
    const std::vector<double> q{0.2, 0.3, 0.5};
    const Categorical pick(p.values());
    std::map<std::uint64_t, double> emp, exact;
    const int draws = 200 * N;
    for (int i = 0; i < draws; ++i) {
      const auto t = sample_p_tree(p, rng);
      emp[mapping_code(joyal_correspondence(t, pick(rng), q, rng).mapping)] += 1.0 / draws;
    }
    enumerate_mappings(3, [&](const Mapping& m) { exact[mapping_code(m)] = mapping_probability(p, m); });
    const double tv = tv_finite(emp, exact);
    return fail_if(tv > 0.01, "TV " + std::to_string(tv));
  }));
  return out;
}

inline CheckList limit(std::uint64_t seed, int N) {
  CheckList out;
  constexpr int m = 1 << 10;
  out.push_back(property("vervaat, reflections and exploration", seed, 40, N, [](RngStream& rng, int) {
    const ThetaVector theta(gen::theta(rng));
    const auto ex = exploration(theta, m, rng);
    const auto& X = ex.X.values;
    if (X.front() != 0.0 || std::abs(X.back()) > 1e-9) return fail_if(true, "vervaat endpoints not 0");
    if (*std::min_element(X.begin(), X.end()) < -1e-9) return fail_if(true, "vervaat path negative");
    const auto refl = jump_reflections(ex.X);
    for (double y : refl.Y.values)
      if (y < -1e-9) return fail_if(true, "Y negative");
    for (const auto& j : ex.X.jumps) {
      const auto t = static_cast<std::size_t>(j.index);
      if (t < refl.Y.values.size() && std::abs(refl.Y.values[t] - refl.Y.values[t - 1]) > 1e-9)
        return fail_if(true, "Y jumps at a jump time");
    }
    const auto& H = ex.H.values;
    if (std::abs(H.front()) > 1e-9 || std::abs(H.back()) > 1e-9) return fail_if(true, "H endpoints not 0");
    if (*std::min_element(H.begin(), H.end()) < -1e-9) return fail_if(true, "H negative");
    return std::optional<std::string>{};
  }));
  out.push_back(property("Z widths, local time and D marks", seed, 41, N, [](RngStream& rng, int) {
    const ThetaVector theta(gen::theta(rng));
    const auto ex = exploration(theta, m, rng);
    const auto z = limit_Z(ex.H, rng).z;
    if (std::abs(z.path.total() - 1.0) > 1e-12) return fail_if(true, "Z width is not 1");
    double covered = 0.0;
    for (double l : z.lengths) covered += l;
    if (std::abs(covered - 1.0) > 1e-9) return fail_if(true, "excursion lengths do not sum to 1");
    const auto L = local_time(z);
    for (std::size_t i = 1; i < L.size(); ++i)
      if (L.value(i) < L.value(i - 1)) return fail_if(true, "L decreased");
    for (std::size_t i = 0; i < z.g.size(); ++i) {
      const double mid = 0.5 * (z.g[i] + z.d[i]);
      if (L(mid) != z.heights[i] || L(z.g[i] + 0.25 * (z.d[i] - z.g[i])) != z.heights[i])
        return fail_if(true, "L not constant on an excursion");
    }
    const auto D = marks_D(z.d, rng, 8);
    for (std::size_t i = 0; i < D.size(); ++i) {
      if (i > 0 && D[i] <= D[i - 1]) return fail_if(true, "D not increasing");
      if (D[i] != 1.0 && std::find(z.d.begin(), z.d.end(), D[i]) == z.d.end()) return fail_if(true, "D outside d list");
    }
    if (D.size() < 8 && D.back() != 1.0 && std::abs(D.back() - 1.0) > 1e-12)
      return fail_if(true, "D stopped early");
    return std::optional<std::string>{};
  }));
  return out;
}

/// Law of max H for theta0 = 1 against twice the range of an independent
/// bridge (the maximum of its Vervaat transform).
inline CheckResult brownian_max_check(std::uint64_t seed, int reps = 10000, int grid_log2 = kDefaultGridLog2) {
  const int m = 1 << grid_log2;
  const ThetaVector brownian(std::vector<double>{});
  std::vector<double> a(static_cast<std::size_t>(reps)), b(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    RngStream x = replication_stream(seed, 150, r), y = replication_stream(seed, 151, r);
    const auto H = exploration(brownian, m, x).H.values;
    a[static_cast<std::size_t>(r)] = *std::max_element(H.begin(), H.end());
    const auto bridge = brownian_bridge(m, y).values;
    const auto [lo, hi] = std::minmax_element(bridge.begin(), bridge.end());
    b[static_cast<std::size_t>(r)] = 2.0 * (*hi - *lo);
  }
  const double ks = ks_two_sample(EmpiricalSample(a), EmpiricalSample(b));
  return {"max H matches twice the bridge range (KS <= 0.02)", ks <= 0.02, reps, "KS " + std::to_string(ks)};
}

inline CheckList icrt(std::uint64_t seed, int N) {
  CheckList out;
  out.push_back(property("stick-breaking leaves, hubs and total length", seed, 50, N, [](RngStream& rng, int) {
    const ThetaVector theta(gen::theta(rng));
    const int J = gen::between(rng, 1, 200);
    const auto sb = stick_break_run(theta, J, rng);
    const auto& t = sb.tree;
    const auto leaves = t.leaves();
    if (static_cast<int>(leaves.size()) != J) return fail_if(true, "leaf count differs from J");
    for (int k = 1; k <= J; ++k)
      if (t.find_label(std::to_string(k) + "+") < 0) return fail_if(true, "missing leaf label");
    for (std::size_t i = 1; i <= theta.size(); ++i) {
      int count = 0;
      for (const auto& node : t.nodes()) count += node.label == std::to_string(i);
      if (count > 1) return fail_if(true, "hub appears twice");
    }
    if (std::abs(t.total_length() - sb.eta.back()) > 1e-9 * sb.eta.back()) return fail_if(true, "total length is not eta_J");
    for (std::size_t k = 1; k < sb.eta.size(); ++k)
      if (!(sb.eta[k] > sb.eta[k - 1])) return fail_if(true, "cutpoints not increasing");
    for (std::size_t k = 0; k < sb.joinpoint.size(); ++k)
      if (!(sb.joinpoint[k] > 0.0 && sb.joinpoint[k] < sb.eta[k + 1])) return fail_if(true, "joinpoint misplaced");
    return std::optional<std::string>{};
  }));
  out.push_back(property("span of all leaves keeps leaf distances", seed, 51, N, [](RngStream& rng, int) {
    const ThetaVector theta(gen::theta(rng));
    const auto t = stick_break(theta, gen::between(rng, 1, 60), rng);
    const auto leaves = t.leaves();
    const auto r = span_reduce(t, leaves);
    const auto ht = t.heights(), hr = r.heights();
    for (int v : leaves) {
      const int w = r.find_label(t.node(v).label);
      if (w < 0) return fail_if(true, "leaf lost");
      if (std::abs(ht[static_cast<std::size_t>(v)] - hr[static_cast<std::size_t>(w)]) > 1e-9) return fail_if(true, "distance changed");
    }
    if (r.leaves().size() != leaves.size()) return fail_if(true, "leaf set changed");
    const auto kids = r.children();
    for (int v = 1; v < r.size(); ++v)
      if (kids[static_cast<std::size_t>(v)].size() == 1 && r.node(v).label.empty()) return fail_if(true, "degree-2 node kept");
    return std::optional<std::string>{};
  }));
  out.push_back(property("junc lies on the path to 1+", seed, 52, N, [](RngStream& rng, int) {
    const ThetaVector theta(gen::theta(rng));
    const auto sb = stick_break_run(theta, gen::between(rng, 2, 200), rng);
    const auto junc = junc_heights(sb);
    const auto& t = sb.tree;
    const auto h = t.heights();
    std::vector<double> path_heights;
    for (int v = t.find_label("1+"); v != kNoParent; v = t.node(v).parent) path_heights.push_back(h[static_cast<std::size_t>(v)]);
    for (std::size_t k = 1; k < junc.size(); ++k) {
      const bool on_path = std::any_of(path_heights.begin(), path_heights.end(),
                                       [&](double x) { return std::abs(x - junc[k]) <= 1e-12 * (1.0 + x); });
      if (!on_path || junc[k] > sb.eta[0]) return fail_if(true, "junc off the spine");
    }
    return std::optional<std::string>{};
  }));
  out.push_back(property("rescale composes", seed, 53, N, [](RngStream& rng, int) {
    const auto t = stick_break(ThetaVector(gen::theta(rng)), gen::between(rng, 1, 30), rng);
    const double a = 0.01 + 5.0 * rng.uniform(), b = 0.01 + 5.0 * rng.uniform();
    const auto x = rescale(a, rescale(b, t)), y = rescale(a * b, t);
    for (int v = 1; v < t.size(); ++v)
      if (std::abs(x.node(v).length - y.node(v).length) > 4e-16 * y.node(v).length)
        return fail_if(true, "lengths differ beyond rounding");
    return fail_if(shape_signature(x) != shape_signature(t), "rescale changed the shape");
  }));
  return out;
}

inline CheckList harness(std::uint64_t seed, int N) {
  CheckList out;
  out.push_back(property("streams reproduce and separate", seed, 60, N, [](RngStream& rng, int) {
    const std::uint64_t s = rng(), k = rng() >> 20;
    RngStream a(s, k), b(s, k), c(s, k + 1);
    bool same = true, differ = false;
    for (int i = 0; i < 8; ++i) {
      const auto x = a(), y = b(), z = c();
      same = same && x == y;
      differ = differ || x != z;
    }
    return fail_if(!same || !differ, "stream contract broken");
  }));
  out.push_back(property("ks and tv ranges", seed, 61, N, [](RngStream& rng, int) {
    std::vector<double> x(static_cast<std::size_t>(gen::between(rng, 1, 50))), y(static_cast<std::size_t>(gen::between(rng, 1, 50)));
    for (double& v : x) v = std::floor(10.0 * rng.uniform());
    for (double& v : y) v = std::floor(10.0 * rng.uniform());
    const EmpiricalSample a(x), b(y);
    const double k1 = ks_two_sample(a, b), k2 = ks_two_sample(b, a);
    const auto p = gen::prob(5, rng), q = gen::prob(5, rng);
    const double tv = tv_finite(p.values(), q.values());
    return fail_if(k1 != k2 || k1 < 0.0 || k1 > 1.0 || ks_two_sample(a, a) != 0.0 || tv < 0.0 || tv > 1.0,
                   "statistic out of range");
  }));
  out.push_back(property("reports independent of worker count", seed, 62, 1, [](RngStream& rng, int) {
    ExperimentConfig cfg;
    cfg.experiment = "E5";
    cfg.n = 300;
    cfg.seed = rng();
    cfg.replications = 40;
    const auto a = run_experiment(cfg, false);
    cfg.workers = 3;
    const auto b = run_experiment(cfg, false);
    const auto c = run_experiment(cfg, false);
    if (a.csv() != b.csv() || b.csv() != c.csv()) return fail_if(true, "csv differs between runs");
    return fail_if(a.rows.size() != 40u * 2u, "row count is not replications x statistics");
  }));
  return out;
}

}  // namespace props

inline CheckList invariants_suite(std::uint64_t seed, int instances = 1000) {
  CheckList out;
  for (auto part : {props::core, props::structures, props::walks, props::joyal, props::limit, props::icrt, props::harness})
    for (auto& c : part(seed, instances)) out.push_back(std::move(c));
  out.push_back(props::brownian_max_check(seed));
  return out;
}

inline CheckList run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "bijection") return bijection_suite();
  if (name == "lemj") return lemj_suite(seed);
  if (name == "joyal") return joyal_suite(seed);
  if (name == "invariants") return invariants_suite(seed);
  fail(ErrorCode::ConfigError, "unknown suite " + name);
}

}  // namespace pmaplab
