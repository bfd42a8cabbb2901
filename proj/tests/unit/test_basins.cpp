#include <gtest/gtest.h>

#include <cmath>

#include "pmaplab/basins.hpp"

using namespace pmaplab;

TEST(Basins, PathIntoFixedPoint) {
  const auto d = basin_decomposition(Mapping({0, 0, 1}));
  ASSERT_EQ(d.cycles.size(), 1u);
  EXPECT_EQ(d.cycles[0], std::vector<int>{0});
  EXPECT_EQ(d.basins[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(d.tree_root, (std::vector<int>{0, 0, 0}));
  const auto f = forest_children(d);
  EXPECT_EQ(f.children[0], std::vector<int>{1});
  EXPECT_EQ(f.children[1], std::vector<int>{2});
}

TEST(Basins, Identity) {
  const auto d = basin_decomposition(Mapping({0, 1, 2}));
  EXPECT_EQ(d.cycles.size(), 3u);
  for (int v = 0; v < 3; ++v) {
    EXPECT_EQ(d.basins[static_cast<std::size_t>(v)], std::vector<int>{v});
    EXPECT_TRUE(d.is_cyclic(v));
  }
}

TEST(Basins, TwoCycle) {
  const auto d = basin_decomposition(Mapping({1, 0}));
  ASSERT_EQ(d.cycles.size(), 1u);
  EXPECT_EQ(d.cycles[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(d.tree_root, (std::vector<int>{0, 1}));
  EXPECT_EQ(d.cyclic_count(), 2);
}

TEST(Basins, CountCyclicAgreesOnEnumeration) {
  for (int n = 1; n <= 5; ++n)
    enumerate_mappings(n, [&](const Mapping& m) { ASSERT_EQ(count_cyclic(m), basin_decomposition(m).cyclic_count()); });
}

TEST(QOrder, SingleBasin) {
  RngStream rng(1, 0);
  const auto d = q_biased_order(basin_decomposition(Mapping({0, 0, 1})), std::vector<double>{0.2, 0.3, 0.5}, rng);
  EXPECT_EQ(d.tau, std::vector<std::int64_t>{2});
  EXPECT_EQ(d.basin_count(), 1);
  EXPECT_EQ(d.cyclic_order, std::vector<int>{0});
}

TEST(QOrder, FirstSampleLaw) {
  // Basins {0} and {1}; q puts 0.9 on vertex 0.
  const auto raw = basin_decomposition(Mapping({0, 1}));
  const std::vector<double> q{0.9, 0.1};
  RngStream rng(1, 1);
  const int N = 100000;
  int heavy = 0;
  for (int i = 0; i < N; ++i) heavy += q_biased_order(raw, q, rng).basins.front() == std::vector<int>{0};
  EXPECT_NEAR(heavy / double(N), 0.9, 4 * std::sqrt(0.09 / N));
}

TEST(QOrder, WithinCycleOrder) {
  // 2-cycle (0 1); a sample landing on vertex 2 (tree of 1) selects c = 1.
  const auto raw = basin_decomposition(Mapping({1, 0, 1}));
  RngStream rng(1, 2);
  for (int i = 0; i < 200; ++i) {
    const auto d = q_biased_order(raw, std::vector<double>{0.2, 0.3, 0.5}, rng);
    const int c = d.selected.front();
    EXPECT_EQ(d.cycles.front().back(), c);
    EXPECT_EQ(d.cycles.front().front(), raw.mapping(c));
  }
}

TEST(QOrder, TauCountsEveryDraw) {
  const auto raw = basin_decomposition(Mapping({0, 1, 2, 3}));
  RngStream rng(2, 0);
  const auto d = q_biased_order(raw, std::vector<double>(4, 0.25), rng);
  EXPECT_EQ(d.tau.front(), 2);
  EXPECT_GE(d.tau.back(), 5);  // four basins need at least X_2, ..., X_5
  for (std::size_t j = 1; j < d.tau.size(); ++j) EXPECT_GT(d.tau[j], d.tau[j - 1]);
}

TEST(QOrder, RejectsBadQ) {
  RngStream rng(1, 3);
  const auto raw = basin_decomposition(Mapping({0, 1}));
  EXPECT_THROW(q_biased_order(raw, std::vector<double>{1.0, 0.0}, rng), Error);
  EXPECT_THROW(q_biased_order(raw, std::vector<double>{1.0}, rng), Error);
}
