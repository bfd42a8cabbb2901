#include <gtest/gtest.h>

#include <cstdio>
#include <algorithm>
#include <filesystem>

#include "pmaplab/io.hpp"

using namespace pmaplab;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Json, MappingUsesOneBasedLabels) {
  const Mapping m({1, 1, 0});
  const json j = m;
  EXPECT_EQ(j, json::parse("[2, 2, 1]"));
  EXPECT_EQ(mapping_from_json(j), m);
  EXPECT_EQ(code_of([] { mapping_from_json(json::parse("[1, 4]")); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { mapping_from_json(json::parse("{\"a\": 1}")); }), ErrorCode::ConfigError);
}

TEST(Json, TreeRoundTrip) {
  const RootedTree t(2, {2, 0, kNoParent, 2});
  const json j = t;
  EXPECT_EQ(j.at("root"), 3);
  EXPECT_EQ(j.at("parent"), json::parse("[3, 1, 0, 3]"));
  EXPECT_EQ(tree_from_json(j), t);
  EXPECT_EQ(code_of([] { tree_from_json(json::parse("{\"root\": 1}")); }), ErrorCode::ConfigError);
}

TEST(Json, StepFunctionRoundTrip) {
  StepFunction f({0.25, 0.75}, {1.0, 0.0}, {3, 0});
  f.marks["D"] = {0.25, 1.0};
  const json j = f;
  const auto g = step_from_json(j);
  EXPECT_EQ(g.widths(), f.widths());
  EXPECT_EQ(g.values(), f.values());
  EXPECT_EQ(g.tags(), f.tags());
  EXPECT_EQ(g.marks, f.marks);
  const auto plain = step_from_json(json::parse(R"({"widths": [1], "values": [2]})"));
  EXPECT_FALSE(plain.has_tags());
  EXPECT_EQ(code_of([] { step_from_json(json::parse(R"({"widths": [1], "values": "x"})")); }),
            ErrorCode::ConfigError);
}

TEST(Json, GridAndFamily) {
  GridPath g;
  g.m = 2;
  g.values = {0, 0.5, 0};
  g.jumps = {{1, 0.3}};
  const auto h = grid_from_json(json(g));
  EXPECT_EQ(h.m, 2);
  EXPECT_EQ(h.values, g.values);
  ASSERT_EQ(h.jumps.size(), 1u);
  EXPECT_EQ(h.jumps[0].index, 1);
  EXPECT_EQ(h.jumps[0].size, 0.3);
  EXPECT_EQ(code_of([] { grid_from_json(json::parse(R"({"m": 3, "values": [0, 0]})")); }), ErrorCode::ConfigError);

  const FamilySpec s{ThetaVector(std::vector<double>{0.5, 0.2}), TailShape::Uniform, 9};
  const auto back = family_from_json(json(s));
  EXPECT_EQ(back.n, 9);
  EXPECT_TRUE(std::ranges::equal(back.theta.values(), s.theta.values()));
  EXPECT_EQ(code_of([] { family_from_json(json::parse(R"({"theta": [], "n": 3, "tail": "geometric"})")); }),
            ErrorCode::ConfigError);
}

TEST(Json, EdgeTreeRoundTrip) {
  EdgeTree t;
  const int a = t.add_node(0, 1.5, "1");
  t.add_node(a, 0.5, "1+");
  t.add_node(0, 2.0, "2+");
  const auto back = edge_tree_from_json(json(t));
  ASSERT_EQ(back.size(), t.size());
  for (int v = 0; v < t.size(); ++v) {
    EXPECT_EQ(back.node(v).label, t.node(v).label);
    EXPECT_EQ(back.node(v).parent, t.node(v).parent);
    EXPECT_EQ(back.node(v).length, t.node(v).length);
  }
  EXPECT_EQ(code_of([] { edge_tree_from_json(json::parse(R"({"nodes": [{"id": 0}, {"id": 1}], "edges": [[1, 1, 1.0]]})")); }),
            ErrorCode::ConfigError);
}

TEST(Files, ReadWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "pmaplab_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "x.json").string();
  write_json_file(path, json{{"a", 1}});
  EXPECT_EQ(read_json_file(path).at("a"), 1);
  write_text_file(path, "{ not json");
  EXPECT_EQ(code_of([&] { read_json_file(path); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([&] { read_json_file((dir / "missing.json").string()); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([&] { write_text_file((dir / "no" / "such" / "file").string(), "x"); }), ErrorCode::IoError);
  std::filesystem::remove_all(dir);
}
