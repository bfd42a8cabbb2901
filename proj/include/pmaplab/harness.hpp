#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pmaplab/core_model.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/io.hpp"
#include "pmaplab/limit_process.hpp"
#include "pmaplab/rng.hpp"

namespace pmaplab {

enum class WeightKind { Uniform, P, Explicit };

struct WeightSpec {
  WeightKind kind = WeightKind::Uniform;
  std::vector<double> values;
};

inline std::vector<double> resolve_weights(const WeightSpec& spec, const RankedProb& p) {
  const auto n = static_cast<std::size_t>(p.n());
  switch (spec.kind) {
    case WeightKind::Uniform: return std::vector<double>(n, 1.0 / static_cast<double>(n));
    case WeightKind::P: return p.vector();
    case WeightKind::Explicit: break;
  }
  require(spec.values.size() == n, ErrorCode::ConfigError, "explicit weights need one entry per vertex");
  double total = 0.0;
  for (double x : spec.values) {
    require(x > 0.0, ErrorCode::ConfigError, "weights must be positive");
    total += x;
  }
  std::vector<double> out(spec.values);
  for (double& x : out) x /= total;
  return out;
}

struct ExperimentConfig {
  std::string experiment;
  int n = 4;
  std::vector<double> theta;
  std::vector<double> p;  // explicit law; otherwise the hub family of (theta, n)
  WeightSpec q;
  WeightSpec w{WeightKind::P, {}};
  std::uint64_t seed = 1;
  int replications = 1;
  int grid_log2 = kDefaultGridLog2;
  std::string output;
  int workers = 1;
  int leaves = 2000;
  std::string mode = "pathwise";  // E3 only: pathwise | pushforward

  RankedProb probabilities() const {
    if (!p.empty()) {
      require(p.size() == static_cast<std::size_t>(n), ErrorCode::ConfigError, "p must have n entries");
      return RankedProb(p);
    }
    return make_hub_family({ThetaVector(theta), TailShape::Uniform, n});
  }
  ThetaVector theta_vector() const { return ThetaVector(theta); }
};

namespace detail {

inline WeightSpec weight_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "uniform") return {WeightKind::Uniform, {}};
    if (s == "p") return {WeightKind::P, {}};
    fail(ErrorCode::ConfigError, "weights must be \"uniform\", \"p\" or an array");
  }
  require(j.is_array(), ErrorCode::ConfigError, "weights must be \"uniform\", \"p\" or an array");
  return {WeightKind::Explicit, j.get<std::vector<double>>()};
}

inline json weight_to_json(const WeightSpec& w) {
  switch (w.kind) {
    case WeightKind::Uniform: return "uniform";
    case WeightKind::P: return "p";
    case WeightKind::Explicit: break;
  }
  return w.values;
}

}  // namespace detail

inline const std::set<std::string>& experiment_ids() {
  static const std::set<std::string> ids{"E1", "E2", "E3", "E4", "E5", "E6", "E7"};
  return ids;
}

inline ExperimentConfig config_from_json(const json& j) {
  require(j.is_object(), ErrorCode::ConfigError, "config must be a JSON object");
  static const std::set<std::string> known{"experiment", "n", "theta", "p", "q", "w", "seed", "replications",
                                           "grid_log2", "output", "workers", "leaves", "mode"};
  for (const auto& [key, _] : j.items())
    require(known.contains(key), ErrorCode::ConfigError, "unknown config key " + key);
  ExperimentConfig c;
  detail::parse_or_throw([&] {
    c.experiment = j.at("experiment").get<std::string>();
    c.n = j.value("n", c.n);
    c.theta = j.value("theta", c.theta);
    c.p = j.value("p", c.p);
    if (j.contains("q")) c.q = detail::weight_from_json(j.at("q"));
    if (j.contains("w")) c.w = detail::weight_from_json(j.at("w"));
    c.seed = j.value("seed", c.seed);
    c.replications = j.value("replications", c.replications);
    c.grid_log2 = j.value("grid_log2", c.grid_log2);
    c.output = j.value("output", c.output);
    c.workers = j.value("workers", c.workers);
    c.leaves = j.value("leaves", c.leaves);
    c.mode = j.value("mode", c.mode);
    return 0;
  });
  require(experiment_ids().contains(c.experiment), ErrorCode::ConfigError, "unknown experiment " + c.experiment);
  require(c.n >= 1, ErrorCode::ConfigError, "n must be positive");
  require(c.replications >= 1, ErrorCode::ConfigError, "replications must be at least 1");
  require(c.grid_log2 >= 8 && c.grid_log2 <= 20, ErrorCode::ConfigError, "grid_log2 must lie in [8, 20]");
  require(c.workers >= 1, ErrorCode::ConfigError, "workers must be at least 1");
  require(c.leaves >= 2, ErrorCode::ConfigError, "leaves must be at least 2");
  require(c.mode == "pathwise" || c.mode == "pushforward", ErrorCode::ConfigError, "mode must be pathwise or pushforward");
  try {
    (void)c.probabilities();
    (void)c.theta_vector();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("invalid parameters: ") + e.what());
  }
  return c;
}

inline json config_to_json(const ExperimentConfig& c) {
  json j{{"experiment", c.experiment}, {"n", c.n}, {"theta", c.theta}, {"q", detail::weight_to_json(c.q)},
         {"w", detail::weight_to_json(c.w)}, {"seed", c.seed}, {"replications", c.replications},
         {"grid_log2", c.grid_log2}, {"output", c.output}, {"workers", c.workers}, {"leaves", c.leaves},
         {"mode", c.mode}};
  if (!c.p.empty()) j["p"] = c.p;
  return j;
}

// ---------------------------------------------------------------------------
// Reports

struct Criterion {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline Criterion at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

inline Criterion equals(std::string name, double value, double expected) {
  return {std::move(name), value, expected, value == expected};
}

struct CsvRow {
  std::int64_t rep = 0;
  std::string statistic;
  double value = 0.0;
};

struct Report {
  std::string experiment;
  std::vector<Criterion> criteria;
  std::vector<CsvRow> rows;
  std::map<std::string, double> summary;  // descriptive numbers, not judged
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }

  std::string csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "rep,statistic,value\n";
    for (const auto& r : rows) out << r.rep << ',' << r.statistic << ',' << r.value << '\n';
    return out.str();
  }

  json to_json() const {
    json crit = json::array();
    for (const auto& c : criteria)
      crit.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
    return json{{"experiment", experiment}, {"pass", passed()}, {"criteria", crit},
                {"summary", summary}, {"rows", rows.size()}, {"seconds", seconds}};
  }
};

// ---------------------------------------------------------------------------
// Replication driver

/// Stream for replication `rep` of an experiment component; components keep
/// the discrete, limit and tree samplers on disjoint streams.
inline RngStream replication_stream(std::uint64_t seed, std::uint64_t component, std::int64_t rep) {
  return RngStream(seed, (component << 40) + static_cast<std::uint64_t>(rep));
}

/// Runs fn(r) for r in [0, reps) on `workers` threads; results are stored by
/// index, so the output does not depend on scheduling.
template <class F>
auto replicate(int reps, int workers, F&& fn) -> std::vector<decltype(fn(0))> {
  using Result = decltype(fn(0));
  std::vector<Result> out(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    for (int r = next++; r < reps; r = next++) {
      try {
        out[static_cast<std::size_t>(r)] = fn(r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = reps;
      }
    }
  };
  const int threads = std::min(workers, reps);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Per-replication statistics laid out as named columns.
struct Columns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // values[k][r]

  const std::vector<double>& operator[](const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return values[k];
    fail(ErrorCode::InvalidArgument, "no statistic " + name);
  }

  void append_rows(std::vector<CsvRow>& rows) const {
    if (values.empty()) return;
    for (std::size_t r = 0; r < values[0].size(); ++r)
      for (std::size_t k = 0; k < names.size(); ++k)
        rows.push_back({static_cast<std::int64_t>(r), names[k], values[k][r]});
  }
};

template <class F>
Columns collect(const ExperimentConfig& cfg, std::vector<std::string> names, F&& fn) {
  const auto per_rep = replicate(cfg.replications, cfg.workers, std::forward<F>(fn));
  Columns c;
  c.names = std::move(names);
  c.values.assign(c.names.size(), std::vector<double>(per_rep.size()));
  for (std::size_t r = 0; r < per_rep.size(); ++r) {
    require(per_rep[r].size() == c.names.size(), ErrorCode::InvalidArgument, "statistic count mismatch");
    for (std::size_t k = 0; k < c.names.size(); ++k) c.values[k][r] = per_rep[r][k];
  }
  return c;
}

inline double elapsed_seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace pmaplab
