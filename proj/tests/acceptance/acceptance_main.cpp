#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "pmaplab/pmaplab.hpp"

using namespace pmaplab;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void describe(Outcome& o, const Report& r, const std::string& prefix = {}) {
  o.pass = o.pass && r.passed();
  for (const auto& c : r.criteria) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.6g (limit %.6g)%s", o.detail.empty() ? "" : "; ", (prefix + c.name).c_str(),
                  c.value, c.threshold, c.pass ? "" : " FAILED");
    o.detail += buf;
  }
}

ExperimentConfig base(const std::string& id, int n, std::vector<double> theta, int reps) {
  ExperimentConfig c;
  c.experiment = id;
  c.n = n;
  c.theta = std::move(theta);
  c.replications = reps;
  c.seed = kSeed;
  c.workers = workers();
  return c;
}

Outcome a1() {
  Outcome o;
  for (int n = 2; n <= 5; ++n) describe(o, run_experiment(base("E1", n, {}, 1), false), "n" + std::to_string(n) + ".");
  return o;
}

Outcome a2() {
  Outcome o;
  for (int n = 3; n <= 5; ++n) {
    auto c = base("E2", n, {}, 1);
    c.p = reference_probabilities(n).vector();
    describe(o, run_experiment(c, false), "n" + std::to_string(n) + ".");
  }
  return o;
}

Outcome a3() {
  Outcome o;
  auto c = lemj_config(kSeed, 1000);
  c.workers = workers();
  describe(o, run_experiment(c, false));
  return o;
}

Outcome a4() {
  Outcome o;
  auto c = pushforward_config(kSeed, 1000000);
  c.workers = workers();
  const auto r = run_experiment(c, false);
  describe(o, r);
  o.detail += "; chi-square p=" + std::to_string(r.summary.at("chi_square_p_value"));
  return o;
}

Outcome a5() {
  Outcome o;
  describe(o, run_experiment(base("E5", 10000, {}, 10000), false));
  return o;
}

Outcome a6() {
  Outcome o;
  describe(o, run_experiment(base("E6", 5000, {0.6}, 10000), false));
  return o;
}

Outcome a7() {
  Outcome o;
  auto c = base("E7", 3000, {0.5}, 5000);
  c.w = {WeightKind::P, {}};
  c.q = {WeightKind::Uniform, {}};
  c.grid_log2 = 14;
  c.leaves = 2000;
  describe(o, run_experiment(c, false));
  return o;
}

Outcome a8() {
  Outcome o;
  const auto results = invariants_suite(kSeed, 1000);
  int failed = 0;
  for (const auto& r : results) {
    if (r.passed) continue;
    ++failed;
    o.detail += (o.detail.empty() ? "" : "; ") + r.name + (r.detail.empty() ? "" : " [" + r.detail + "]");
  }
  o.pass = failed == 0;
  o.detail = std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" + std::to_string(results.size()) +
             " properties green" + (o.detail.empty() ? "" : ": " + o.detail);
  return o;
}

struct Stage {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Stage> all{
      {"A1", "bijection and Cayley sum", 1.0, a1},
      {"A2", "cyclic points vs one plus height", 10.0, a2},
      {"A3", "pathwise Joyal identity", 30.0, a3},
      {"A4", "Joyal pushforward law", 60.0, a4},
      {"A5", "cyclic count scaling", 300.0, a5},
      {"A6", "marginal convergence", 300.0, a6},
      {"A7", "basin masses and limit marks", 600.0, a7},
      {"A8", "invariant suite", 120.0, a8},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = elapsed_seconds(start);
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %s %s: %s; %.2fs (budget %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                c.budget_seconds, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
