#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmaplab/core_model.hpp"
#include "pmaplab/error.hpp"
#include "pmaplab/icrt.hpp"
#include "pmaplab/joyal.hpp"
#include "pmaplab/limit_process.hpp"
#include "pmaplab/step_function.hpp"
#include "pmaplab/structures.hpp"

// Files use 1-based vertex labels; 0 stands for "no vertex".

namespace pmaplab {

using json = nlohmann::json;

namespace detail {

template <class F>
auto parse_or_throw(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad json: ") + e.what());
  }
}

inline int to_label(int v) { return v < 0 ? 0 : v + 1; }
inline int from_label(int v) { return v - 1; }

}  // namespace detail

inline void to_json(json& j, const ThetaVector& t) { j = std::vector<double>(t.values().begin(), t.values().end()); }

inline void to_json(json& j, const FamilySpec& s) {
  j = json{{"theta", s.theta}, {"n", s.n}, {"tail", "uniform"}};
}

inline FamilySpec family_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    const std::string tail = j.value("tail", std::string("uniform"));
    require(tail == "uniform", ErrorCode::ConfigError, "unsupported tail shape " + tail);
    return FamilySpec{ThetaVector(j.at("theta").get<std::vector<double>>()), TailShape::Uniform,
                      j.at("n").get<int>()};
  });
}

inline void to_json(json& j, const Mapping& m) {
  std::vector<int> img;
  for (int v : m.image) img.push_back(detail::to_label(v));
  j = img;
}

inline Mapping mapping_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    std::vector<int> img;
    for (int v : j.get<std::vector<int>>()) img.push_back(detail::from_label(v));
    return Mapping(std::move(img));
  });
}

inline void to_json(json& j, const RootedTree& t) {
  std::vector<int> parent;
  for (int p : t.parents()) parent.push_back(detail::to_label(p));
  j = json{{"root", detail::to_label(t.root())}, {"parent", parent}};
}

inline RootedTree tree_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    std::vector<int> parent;
    for (int p : j.at("parent").get<std::vector<int>>()) parent.push_back(detail::from_label(p));
    return RootedTree(detail::from_label(j.at("root").get<int>()), std::move(parent));
  });
}

inline void to_json(json& j, const StepFunction& f) {
  j = json{{"widths", f.widths()}, {"values", f.values()}};
  if (f.has_tags()) {
    std::vector<int> tags;
    for (int t : f.tags()) tags.push_back(detail::to_label(t));
    j["tags"] = tags;
  }
  j["marks"] = f.marks;
}

inline StepFunction step_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    std::vector<int> tags;
    if (j.contains("tags"))
      for (int t : j.at("tags").get<std::vector<int>>()) tags.push_back(detail::from_label(t));
    StepFunction f(j.at("widths").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
                   std::move(tags));
    if (j.contains("marks")) f.marks = j.at("marks").get<std::map<std::string, std::vector<double>>>();
    return f;
  });
}

inline void to_json(json& j, const ExcursionSet& s) {
  json items = json::array();
  for (const auto& it : s.items) {
    json intervals = json::array();
    for (const auto& [a, b] : it.intervals) intervals.push_back({a, b});
    items.push_back({{"intervals", intervals}, {"height", it.height}, {"length", it.length},
                     {"excursion", it.excursion}});
  }
  j = json{{"items", items}, {"baseline", s.baseline}, {"pivot", s.pivot}};
}

inline void to_json(json& j, const JoyalOutput& z) {
  j = json{{"path", z.path}, {"g", z.g}, {"d", z.d}, {"heights", z.heights}, {"lengths", z.lengths}};
}

inline void to_json(json& j, const GridPath& g) {
  json jumps = json::array();
  for (const auto& jump : g.jumps) jumps.push_back({jump.index, jump.size});
  j = json{{"m", g.m}, {"values", g.values}, {"jumps", jumps}};
}

inline GridPath grid_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    GridPath g;
    g.m = j.at("m").get<int>();
    g.values = j.at("values").get<std::vector<double>>();
    require(g.values.size() == static_cast<std::size_t>(g.m) + 1, ErrorCode::ConfigError,
            "grid path needs m + 1 values");
    if (j.contains("jumps"))
      for (const auto& e : j.at("jumps")) g.jumps.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
    return g;
  });
}

inline void to_json(json& j, const EdgeTree& t) {
  json nodes = json::array(), edges = json::array();
  for (int v = 0; v < t.size(); ++v) {
    nodes.push_back({{"id", v}, {"label", t.node(v).label}});
    if (v != t.root()) edges.push_back({t.node(v).parent, v, t.node(v).length});
  }
  j = json{{"nodes", nodes}, {"edges", edges}};
}

inline EdgeTree edge_tree_from_json(const json& j) {
  return detail::parse_or_throw([&] {
    const auto& nodes = j.at("nodes");
    const std::size_t count = nodes.size();
    std::vector<std::string> label(count);
    for (const auto& n : nodes) {
      const auto id = n.at("id").get<std::size_t>();
      require(id < count, ErrorCode::ConfigError, "node id out of range");
      label[id] = n.value("label", std::string());
    }
    std::vector<int> parent(count, kNoParent);
    std::vector<double> length(count, 0.0);
    for (const auto& e : j.at("edges")) {
      const auto child = e.at(1).get<std::size_t>();
      require(child < count && child > 0, ErrorCode::ConfigError, "edge child out of range");
      parent[child] = e.at(0).get<int>();
      length[child] = e.at(2).get<double>();
    }
    EdgeTree t;
    t.node(0).label = label[0];
    for (std::size_t v = 1; v < count; ++v) {
      require(parent[v] >= 0 && static_cast<std::size_t>(parent[v]) < v, ErrorCode::ConfigError,
              "edge tree nodes must list parents first");
      t.add_node(parent[v], length[v], label[v]);
    }
    return t;
  });
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
  return detail::parse_or_throw([&] { return json::parse(in); });
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path);
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace pmaplab
