#include <gtest/gtest.h>

#include <cmath>

#include "pmaplab/limit_process.hpp"
#include "pmaplab/stats.hpp"

using namespace pmaplab;

namespace {

GridPath grid(std::vector<double> v, std::vector<GridJump> jumps = {}) {
  GridPath g;
  g.m = static_cast<int>(v.size()) - 1;
  g.values = std::move(v);
  g.jumps = std::move(jumps);
  return g;
}

void expect_near_values(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-12) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

// P(range of a Brownian bridge <= x), the Kuiper law.
double bridge_range_cdf(double x) {
  if (x <= 0.0) return 0.0;
  double tail = 0.0;
  for (int k = 1; k < 100; ++k) tail += 2.0 * (4.0 * k * k * x * x - 1.0) * std::exp(-2.0 * k * k * x * x);
  return 1.0 - tail;
}

}  // namespace

TEST(Bridge, EndpointsAndMoments) {
  RngStream rng(1, 0);
  const int m = 256, N = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int r = 0; r < N; ++r) {
    const auto b = brownian_bridge(m, rng);
    ASSERT_EQ(b.values.front(), 0.0);
    ASSERT_EQ(b.values.back(), 0.0);
    const double x = b.values[static_cast<std::size_t>(m / 2)];
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / N, 0.0, 5 * 0.5 / std::sqrt(N));
  EXPECT_NEAR(s2 / N, 0.25, 5 * 0.25 * std::sqrt(2.0 / N));
}

TEST(Bridge, Exchangeable) {
  RngStream a(2, 0), b(2, 0);
  const auto x = bridge_exchangeable(ThetaVector(), 64, a);
  const auto y = brownian_bridge(64, b);
  expect_near_values(x.values, y.values, 0.0);
  EXPECT_TRUE(x.jumps.empty());

  RngStream rng(2, 1);
  const ThetaVector t({0.6});
  const int N = 20000;
  double mean = 0.0;
  for (int r = 0; r < N; ++r) {
    const auto z = bridge_exchangeable(t, 128, rng);
    ASSERT_EQ(z.values.back(), 0.0);
    ASSERT_EQ(z.jumps.size(), 1u);
    mean += z.values[64] / N;
  }
  EXPECT_NEAR(mean, 0.0, 5 * 0.5 / std::sqrt(N));
}

TEST(Vervaat, Examples) {
  const auto v = vervaat(grid({0, 0.5, -0.5, 0.25, 0}));
  expect_near_values(v.path.values, {0, 0.75, 0.5, 1.0, 0});
  EXPECT_DOUBLE_EQ(v.s_min, 0.5);
  const auto same = vervaat(grid({0, 1, 2, 0.5, 0}));
  expect_near_values(same.path.values, {0, 1, 2, 0.5, 0});
  EXPECT_EQ(same.argmin, 0);
  const auto zero = vervaat(grid({0, 0, 0, 0}));
  expect_near_values(zero.path.values, {0, 0, 0, 0});
  EXPECT_EQ(zero.argmin, 0);
  try {
    vervaat(grid({0, 1, 0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonBridge);
  }
}

TEST(Vervaat, ShiftsJumps) {
  const auto v = vervaat(grid({0, 0.5, -0.5, 0.25, 0}, {{3, 0.1}, {2, 0.1}}));
  ASSERT_EQ(v.path.jumps.size(), 2u);
  EXPECT_EQ(v.path.jumps[0].index, 1);
  EXPECT_EQ(v.path.jumps[1].index, 4);  // a jump at the minimum moves to the end
}

TEST(Reflection, Examples) {
  const auto none = jump_reflections(grid({0, 1, 0.5, 0}));
  expect_near_values(none.Y.values, {0, 1, 0.5, 0}, 0.0);

  const auto toy = jump_reflections(grid({0, 0.5, 1.5, 0.8, 0.4, 0}, {{2, 1.0}}));
  ASSERT_EQ(toy.reflections.size(), 1u);
  const auto& r = toy.reflections[0];
  EXPECT_EQ(r.t, 2);
  EXPECT_EQ(r.T, 4);
  EXPECT_TRUE(r.absorbed);
  // X(T) = .4 undershoots the level .5; R stays at 0 there.
  expect_near_values(r.R, {1.0, 0.3, 0.0});
  expect_near_values(toy.Y.values, {0, 0.5, 0.5, 0.5, 0.4, 0});
  EXPECT_NEAR(toy.Y.values[2], toy.Y.values[1], 1e-12);

  const auto quick = jump_reflections(grid({0, 0.5, 1.0, 0.3, 0}, {{2, 0.5}}));
  EXPECT_EQ(quick.reflections[0].T, 3);
  expect_near_values(quick.reflections[0].R, {0.5, 0.0});

  // A jump smaller than the grid drop is absorbed at once; Y stays continuous.
  const auto at_once = jump_reflections(grid({0, 0.5, 0.45, 0.2, 0}, {{2, 0.05}}));
  EXPECT_EQ(at_once.reflections[0].T, 2);
  expect_near_values(at_once.Y.values, {0, 0.5, 0.5, 0.2, 0});

  // Two jumps on one grid point are removed once.
  const auto twin = jump_reflections(grid({0, 0.5, 1.5, 0.4, 0}, {{2, 0.6}, {2, 0.4}}));
  expect_near_values(twin.Y.values, {0, 0.5, 0.5, 0.4, 0});

  // An inner jump does not move the infimum of the enclosing window.
  const auto nested = jump_reflections(grid({0, 0.2, 1.2, 1.0, 1.05, 0.9, 0.1, 0}, {{2, 1.0}, {4, 0.1}}));
  expect_near_values(nested.reflections[0].R, {1.0, 0.8, 0.8, 0.7, 0.0});
  EXPECT_NEAR(nested.Y.values[4], nested.Y.values[3], 1e-12);
  EXPECT_NEAR(nested.Y.values[2], nested.Y.values[1], 1e-12);

  const auto stuck = jump_reflections(grid({0, 0.1, 1.0, 0.9, 0.5}, {{2, 0.9}}));
  EXPECT_FALSE(stuck.reflections[0].absorbed);
  EXPECT_EQ(stuck.reflections[0].T, 4);
}

TEST(Exploration, BrownianCaseIsTwiceVervaat) {
  RngStream a(3, 0), b(3, 0);
  const auto ex = exploration(ThetaVector(), 128, a);
  const auto v = vervaat(brownian_bridge(128, b));
  for (std::size_t k = 0; k < v.path.values.size(); ++k) EXPECT_NEAR(ex.H.values[k], 2.0 * v.path.values[k], 1e-12);
  EXPECT_THROW((void)ThetaVector(std::vector<double>{1.0}), Error);
}

TEST(Exploration, NonnegativeWithZeroEnds) {
  RngStream rng(3, 1);
  for (int r = 0; r < 200; ++r) {
    const auto ex = exploration(ThetaVector({0.5, 0.3}), 512, rng);
    EXPECT_EQ(ex.H.values.front(), 0.0);
    EXPECT_NEAR(ex.H.values.back(), 0.0, 1e-12);
    EXPECT_GE(*std::min_element(ex.H.values.begin(), ex.H.values.end()), -1e-12);
  }
}

TEST(Exploration, MaxHeightBrownian) {
  RngStream rng(4, 0);
  const int m = 1 << 14, N = 10000;
  std::vector<double> maxima;
  double mean = 0.0;
  for (int r = 0; r < N; ++r) {
    const auto ex = exploration(ThetaVector(), m, rng);
    const double mx = *std::max_element(ex.H.values.begin(), ex.H.values.end());
    maxima.push_back(mx / 2.0);
    mean += mx / N;
  }
  // 2 E[max excursion] = 2 sqrt(pi / 2); the grid maximum sits slightly below.
  EXPECT_NEAR(mean, 2.5066, 0.05);
  EXPECT_LT(ks_one_sample(EmpiricalSample(maxima), bridge_range_cdf), 0.03);
}

TEST(LimitZ, Examples) {
  const auto z0 = limit_Z(StepFunction(std::vector<double>(4, 0.25), {0, 0, 0, 0}), 0.3);
  EXPECT_EQ(z0.z.d.size(), 1u);
  EXPECT_NEAR(z0.z.lengths[0], 1.0, 1e-15);
  for (double v : z0.z.path.values()) EXPECT_EQ(v, 0.0);

  const StepFunction six(std::vector<double>(6, 1.0 / 6.0), {1, 2, 3, 2, 1, 0});
  const auto z = limit_Z(six, 0.25);
  const auto direct = joyal_functional(six, 0.25);
  EXPECT_EQ(z.z.path.values(), direct.path.values());
  EXPECT_EQ(z.z.d, direct.d);

  const auto top = limit_Z(six, 2.5 / 6.0);
  double total = 0.0;
  for (double l : top.z.lengths) total += l;
  EXPECT_NEAR(total, 1.0, 1e-12);

  RngStream rng(5, 0);
  const auto zr = limit_Z(grid_to_steps(exploration(ThetaVector({0.5}), 1024, rng).H), 0.5);
  total = 0.0;
  for (double l : zr.z.lengths) total += l;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(LocalTime, Examples) {
  const auto L0 = local_time(StepFunction({0.5, 0.5}, {0, 0}), 0.2);
  for (double v : L0.values()) EXPECT_EQ(v, 0.0);

  const StepFunction six(std::vector<double>(6, 1.0 / 6.0), {1, 2, 3, 2, 1, 0});
  const auto L = local_time(six, 0.25);
  EXPECT_EQ(L(0.1), 0.0);
  EXPECT_EQ(L(0.2), 1.0);
  EXPECT_EQ(L(0.45), 1.0);
  EXPECT_EQ(L(0.55), 2.0);
  EXPECT_EQ(L(1.0), 2.0);  // height of the pivot's excursion
}

TEST(MarksD, Examples) {
  const std::vector<double> d{0.2, 0.5, 1.0};
  EXPECT_EQ(marks_D(d, std::vector<double>{0.4}), std::vector<double>{0.5});
  EXPECT_EQ(marks_D(std::vector<double>{1.0}, std::vector<double>{0.7}), std::vector<double>{1.0});
  EXPECT_EQ(marks_D(d, std::vector<double>{1e-15}), std::vector<double>{0.2});
  // 0.2 -> threshold 0.2 + 0.5 * 0.8 = 0.6 -> 1.0 ends the sequence.
  EXPECT_EQ(marks_D(d, std::vector<double>{0.1, 0.5, 0.9}), (std::vector<double>{0.2, 1.0}));
  RngStream rng(6, 0);
  const auto D = marks_D(d, rng, 10);
  EXPECT_EQ(D.back(), 1.0);
  for (std::size_t i = 1; i < D.size(); ++i) EXPECT_GT(D[i], D[i - 1]);
}
