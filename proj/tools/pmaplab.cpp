#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmaplab/pmaplab.hpp"

using namespace pmaplab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::vector<double> parse_theta(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::stringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, "cannot parse theta entry '" + token + "'");
    }
  }
  return out;
}

WeightSpec parse_weight(const std::string& text) {
  if (text == "uniform") return {WeightKind::Uniform, {}};
  if (text == "p") return {WeightKind::P, {}};
  return {WeightKind::Explicit, parse_theta(text)};
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text;
  else write_text_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random p-mappings, p-trees and their continuum limits"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a catalogued experiment from a JSON config");
  experiment->add_option("config", config_path, "Config file")->required();
  experiment->add_option("--workers", workers, "Override the worker count");

  int n = 10, count = 1, leaves = 10, grid_log2 = kDefaultGridLog2, reps = 100;
  std::string theta_text, out, in_path, w_text = "uniform", q_text = "uniform", suite;
  std::uint64_t seed = 1;

  auto* sample_tree = app.add_subcommand("sample-tree", "Sample p-trees");
  auto* sample_mapping = app.add_subcommand("sample-mapping", "Sample p-mappings");
  for (auto* cmd : {sample_tree, sample_mapping}) {
    cmd->add_option("--n", n, "Number of vertices")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--theta", theta_text, "Hub weights, comma separated");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--count", count, "Number of samples")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "Output JSON file (stdout if omitted)");
  }

  auto* walk = app.add_subcommand("walk", "Mapping walk of a mapping read from JSON");
  walk->add_option("--in", in_path, "Mapping JSON (1-based image array)")->required();
  walk->add_option("--theta", theta_text, "Hub weights defining p");
  walk->add_option("--w", w_text, "Weights: uniform, p or a comma list");
  walk->add_option("--q", q_text, "Basin ordering law: uniform, p or a comma list");
  walk->add_option("--seed", seed, "Master seed");
  walk->add_option("--out", out, "Output JSON file");

  auto* limit = app.add_subcommand("limit", "Replicate the limit pipeline and write statistics");
  limit->add_option("--theta", theta_text, "Hub weights");
  limit->add_option("--grid-log2", grid_log2, "Grid resolution exponent")->check(CLI::Range(8, 20));
  limit->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber);
  limit->add_option("--seed", seed, "Master seed");
  limit->add_option("--out", out, "Output CSV file");

  auto* icrt = app.add_subcommand("icrt", "Stick-breaking tree with J leaves");
  icrt->add_option("--theta", theta_text, "Hub weights");
  icrt->add_option("--leaves", leaves, "Number of leaves J")->check(CLI::PositiveNumber);
  icrt->add_option("--seed", seed, "Master seed");
  icrt->add_option("--out", out, "Output JSON file");

  auto* check = app.add_subcommand("check", "Run a verification suite");
  check->add_option("--suite", suite, "bijection | lemj | joyal | invariants")
      ->required()
      ->check(CLI::IsMember({"bijection", "lemj", "joyal", "invariants"}));
  check->add_option("--seed", seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*experiment) {
      ExperimentConfig cfg = config_from_json(read_json_file(config_path));
      if (workers > 0) cfg.workers = workers;
      const Report report = run_experiment(cfg);
      std::cout << report.to_json().dump(2) << '\n';
      return report.passed() ? kExitPass : kExitFail;
    }
    if (*sample_tree || *sample_mapping) {
      const RankedProb p = make_hub_family({ThetaVector(parse_theta(theta_text)), TailShape::Uniform, n});
      json samples = json::array();
      for (int k = 0; k < count; ++k) {
        RngStream rng = replication_stream(seed, 1, k);
        if (*sample_tree) samples.push_back(sample_p_tree(p, rng));
        else samples.push_back(sample_p_mapping(p, rng));
      }
      emit(out, samples.dump(2) + "\n");
      return kExitPass;
    }
    if (*walk) {
      const Mapping m = mapping_from_json(read_json_file(in_path));
      const RankedProb p = make_hub_family({ThetaVector(parse_theta(theta_text)), TailShape::Uniform, m.size()});
      const auto w = resolve_weights(parse_weight(w_text), p);
      const auto q = resolve_weights(parse_weight(q_text), p);
      RngStream rng = replication_stream(seed, 1, 0);
      const auto raw = basin_decomposition(m);
      const auto ordered = q_biased_order(raw, q, rng);
      const auto mw = mapping_walk(m, ordered, randomize_forest_order(raw, rng), w);
      json cycles = json::array();
      for (const auto& c : ordered.cycles) {
        std::vector<int> labels;
        for (int v : c) labels.push_back(v + 1);
        cycles.push_back(labels);
      }
      const json result{{"H", mw.H}, {"ell", mw.marks.ell}, {"D", mw.marks.D}, {"cycles", cycles}, {"tau", ordered.tau}};
      emit(out, result.dump(2) + "\n");
      return kExitPass;
    }
    if (*limit) {
      const ThetaVector theta(parse_theta(theta_text));
      const int m = 1 << grid_log2;
      std::ostringstream csv;
      csv.precision(17);
      csv << "rep,statistic,value\n";
      for (int r = 0; r < reps; ++r) {
        RngStream rng = replication_stream(seed, 3, r);
        const auto ex = exploration(theta, m, rng);
        const auto z = limit_Z(ex.H, rng);
        const double d1 = marks_D(z.z.d, rng, 1).at(0);
        const double hmax = *std::max_element(ex.H.values.begin(), ex.H.values.end());
        csv << r << ",max_H," << hmax << '\n'
            << r << ",s_min," << ex.s_min << '\n'
            << r << ",U," << z.U << '\n'
            << r << ",D1," << d1 << '\n';
      }
      emit(out, csv.str());
      return kExitPass;
    }
    if (*icrt) {
      RngStream rng = replication_stream(seed, 4, 0);
      const json tree = stick_break(ThetaVector(parse_theta(theta_text)), leaves, rng);
      emit(out, tree.dump(2) + "\n");
      return kExitPass;
    }
    if (*check) {
      const auto results = run_suite(suite, seed);
      for (const auto& r : results)
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  [" + r.detail + "]") << '\n';
      return all_passed(results) ? kExitPass : kExitFail;
    }
  } catch (const Error& e) {
    // Every library error here traces back to the arguments or input files.
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  return kExitPass;
}
