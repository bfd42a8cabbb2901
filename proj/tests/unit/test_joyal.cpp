#include <gtest/gtest.h>

#include <map>

#include "pmaplab/experiments.hpp"
#include "pmaplab/joyal.hpp"

using namespace pmaplab;

namespace {

const std::vector<double> sixth(6, 1.0 / 6.0);
const StepFunction six(sixth, {1, 2, 3, 2, 1, 0});

PlaneTree plane(int root, std::vector<int> parent, std::vector<std::vector<int>> kids) {
  return PlaneTree(RootedTree(root, std::move(parent)), std::move(kids));
}

void expect_values(const StepFunction& f, std::vector<double> v) {
  ASSERT_EQ(f.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(f.value(i), v[i]) << "step " << i;
}

}  // namespace

TEST(PrePost, Examples) {
  expect_values(pre_post_infimum(StepFunction({0.5, 0.5}, {3, 3}), 0.7), {3, 3});
  expect_values(pre_post_infimum(six, 0.25), {1, 2, 2, 2, 1, 0});
  // Pivot at the maximum: running minimum toward it from the left.
  expect_values(pre_post_infimum(six, 2.5 / 6.0), {1, 2, 3, 2, 1, 0});
  try {
    pre_post_infimum(six, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
  }
  EXPECT_THROW(pre_post_infimum(six, -0.1), Error);
}

TEST(Excursions, SixStepFixture) {
  const auto set = generalized_excursions(six, 0.25);
  ASSERT_EQ(set.items.size(), 3u);
  const auto& a = set.items[0];
  EXPECT_EQ(a.height, 2.0);
  EXPECT_NEAR(a.length, 0.5, 1e-15);
  expect_values(a.excursion, {0, 1, 0});
  const auto& b = set.items[1];
  EXPECT_EQ(b.height, 1.0);
  EXPECT_NEAR(b.length, 2.0 / 6.0, 1e-15);
  ASSERT_EQ(b.intervals.size(), 2u);
  EXPECT_NEAR(b.intervals[0].first, 0.0, 1e-15);
  EXPECT_NEAR(b.intervals[0].second, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(b.intervals[1].first, 4.0 / 6.0, 1e-15);
  EXPECT_NEAR(b.intervals[1].second, 5.0 / 6.0, 1e-15);
  expect_values(b.excursion, {0, 0});
  const auto& c = set.items[2];
  EXPECT_EQ(c.height, 0.0);
  EXPECT_NEAR(c.length, 1.0 / 6.0, 1e-15);
  expect_values(c.excursion, {0});
}

TEST(Excursions, ZeroAndMonotone) {
  const auto z = generalized_excursions(StepFunction({0.5, 0.5}, {0, 0}), 0.3);
  ASSERT_EQ(z.items.size(), 1u);
  EXPECT_EQ(z.items[0].height, 0.0);
  EXPECT_DOUBLE_EQ(z.items[0].length, 1.0);
  const auto inc = generalized_excursions(StepFunction(std::vector<double>(4, 0.25), {0, 1, 2, 3}), 1.0);
  ASSERT_EQ(inc.items.size(), 4u);
  for (const auto& it : inc.items) EXPECT_EQ(it.pieces.size(), 1u);
}

TEST(Joyal, SixStepFixture) {
  const auto z = joyal_functional(six, 0.25);
  ASSERT_EQ(z.d.size(), 3u);
  EXPECT_NEAR(z.d[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(z.d[1], 3.0 / 6.0, 1e-15);
  EXPECT_NEAR(z.d[2], 1.0, 1e-15);
  EXPECT_NEAR(z.g[0], 0.0, 1e-15);
  for (double t : {0.05, 0.2, 0.4, 0.6}) EXPECT_EQ(z.path(t), 0.0) << t;
  EXPECT_EQ(z.path(0.7), 1.0);
  EXPECT_EQ(z.path(0.9), 0.0);
  EXPECT_EQ(z.path.marks.at("d"), z.d);
}

TEST(Joyal, ZeroPathAndSingleExcursion) {
  const StepFunction zero({0.3, 0.7}, {0, 0});
  const auto z = joyal_functional(zero, 0.5);
  EXPECT_EQ(path_distance(z.path, zero), 0.0);
  ASSERT_EQ(z.g.size(), 1u);
  EXPECT_EQ(z.g[0], 0.0);
  EXPECT_NEAR(z.d[0], 1.0, 1e-15);
  // f above its minimum on one flat interval only: the output is that excursion shifted down.
  const StepFunction bump(std::vector<double>(4, 0.25), {2, 3, 4, 2});
  const auto zb = joyal_functional(bump, 0.9);
  expect_values(zb.path, {0, 1, 2, 0});
}

TEST(Joyal, TiePolicy) {
  const StepFunction f(std::vector<double>(5, 0.2), {0, 1, 0, 1, 0});
  const StepFunction base(std::vector<double>(5, 0.2), {0, 1, 0, 1, 0});
  try {
    excursions_above(f, base, 0.5, TiePolicy::Reject);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HeightTie);
  }
  const auto set = excursions_above(f, base, 0.5);
  const auto z = arrange_by_height(set, 1.0);
  // Three runs at 0 split by left endpoint; the two runs at 1 merge.
  ASSERT_EQ(z.heights.size(), 4u);
  EXPECT_EQ(z.heights[2], 0.0);
  EXPECT_EQ(z.heights[3], 1.0);
  EXPECT_NEAR(z.lengths[3], 0.4, 1e-15);
}

TEST(SpineLift, Examples) {
  const auto path = plane(0, {kNoParent, 0, 1}, {{1}, {2}, {}});
  const std::vector<double> third(3, 1.0 / 3.0);
  const auto H = tree_height_walk(path, third);
  expect_values(spine_lift(H, 0.9, make_spine(path.tree, 2)), {1, 2, 3});

  const auto star = plane(0, {kNoParent, 0, 0}, {{1, 2}, {}, {}});
  const auto Hs = tree_height_walk(star, third);
  expect_values(spine_lift(Hs, 0.1, make_spine(star.tree, 0)), {1, 1, 1});
  // X_1 = leaf 1: T_{c_1} = {0, 2} lifted to 1, T_{c_2} = {1} lifted to 2.
  expect_values(spine_lift(Hs, 0.5, make_spine(star.tree, 1)), {1, 2, 1});

  try {
    spine_lift(Hs, 0.9, make_spine(star.tree, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpineMismatch);
  }
  EXPECT_THROW(spine_lift(StepFunction({1.0}, {0.0}), 0.5, make_spine(star.tree, 0)), Error);
  try {
    make_spine(star.tree, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownVertex);
  }
}

TEST(SpineLift, EqualsSpineHeightPlusOne) {
  RngStream rng(9, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(30));
    const RankedProb p = RankedProb::uniform(n);
    const PlaneTree pt = randomize_plane_order(sample_p_tree(p, rng), rng);
    const auto H = tree_height_walk(pt, p.values());
    const double u = rng.uniform();
    const int x1 = H.tag(H.step_at(u));
    const SpineData spine = make_spine(pt.tree, x1);
    const auto K = spine_lift(H, u, spine);
    for (std::size_t j = 0; j < H.size(); ++j) {
      const int k = spine.assignment[static_cast<std::size_t>(H.tag(j))];
      ASSERT_EQ(K.value(j), k + 1.0);  // ht(c_k) = k along the spine
    }
  }
}

TEST(JoyalTilde, SmallTrees) {
  const auto single = plane(0, {kNoParent}, {{}});
  const auto z = joyal_tilde(tree_height_walk(single, std::vector<double>{1.0}), 0.5, make_spine(single.tree, 0));
  expect_values(z.path, {-1});

  const std::vector<double> third(3, 1.0 / 3.0);
  const auto path = plane(0, {kNoParent, 0, 1}, {{1}, {2}, {}});
  expect_values(joyal_tilde(tree_height_walk(path, third), 0.9, make_spine(path.tree, 2)).path, {-1, -1, -1});

  const auto star = plane(0, {kNoParent, 0, 0}, {{1, 2}, {}, {}});
  const auto zs = joyal_tilde(tree_height_walk(star, third), 0.5, make_spine(star.tree, 1));
  expect_values(zs.path, {-1, 0, -1});
  EXPECT_EQ(zs.heights, (std::vector<double>{1, 2}));
}

TEST(JoyalCorrespondence, Examples) {
  RngStream rng(1, 0);
  const std::vector<double> one{1.0};
  EXPECT_EQ(joyal_correspondence(RootedTree(0, {kNoParent}), 0, one, rng).mapping.image, std::vector<int>{0});

  const RootedTree star(0, {kNoParent, 0, 0});
  const std::vector<double> third(3, 1.0 / 3.0);
  const auto jr = joyal_correspondence(star, 0, third, rng);
  EXPECT_EQ(jr.mapping.image, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(jr.order.tau, std::vector<std::int64_t>{2});
}

TEST(JoyalCorrespondence, PathHittingFirstThenThird) {
  const RootedTree path(0, {kNoParent, 0, 1});
  const std::vector<double> third(3, 1.0 / 3.0);
  const Categorical draw(third);
  bool found = false;
  for (std::uint64_t seed = 0; seed < 1000 && !found; ++seed) {
    RngStream probe(seed, 0);
    if (draw(probe) != 0 || draw(probe) != 2) continue;
    found = true;
    RngStream rng(seed, 0);
    const auto jr = joyal_correspondence(path, 2, third, rng);
    EXPECT_EQ(jr.mapping.image, (std::vector<int>{0, 2, 1}));
    ASSERT_EQ(jr.order.cycles.size(), 2u);
    EXPECT_EQ(jr.order.cycles[0], std::vector<int>{0});
    EXPECT_EQ(jr.order.cycles[1], (std::vector<int>{1, 2}));
    EXPECT_EQ(jr.order.tau, (std::vector<std::int64_t>{2, 3}));
  }
  EXPECT_TRUE(found);
}

TEST(JoyalCorrespondence, CoupledPathwiseIdentity) {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(50));
    std::vector<double> pv(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (double& x : pv) x = 0.05 + rng.uniform();
    for (double& x : w) x = 0.05 + rng.uniform();
    std::sort(pv.begin(), pv.end(), std::greater<>());
    const RankedProb p(pv);
    double tw = 0.0;
    for (double x : w) tw += x;
    for (double& x : w) x /= tw;
    const std::vector<double>& q = rep % 2 ? w : p.vector();
    const auto inst = lemj_instance(p, q, rep % 3 ? w : p.vector(), rng, RngStream(rep, 99));
    ASSERT_TRUE(inst.order_ok);
    ASSERT_TRUE(inst.comparison.equal()) << "rep " << rep << " n " << n;
  }
}

TEST(JoyalCorrespondence, PushforwardIsPMapping) {
  const RankedProb p({0.5, 0.3, 0.2});
  const std::vector<double> q{0.2, 0.5, 0.3};
  const Categorical pick(p.values());
  RngStream rng(12, 0);
  std::map<std::uint64_t, double> emp, exact;
  const int N = 200000;
  for (int i = 0; i < N; ++i)
    emp[mapping_code(joyal_correspondence(sample_p_tree(p, rng), pick(rng), q, rng).mapping)] += 1.0 / N;
  enumerate_mappings(3, [&](const Mapping& m) { exact[mapping_code(m)] = mapping_probability(p, m); });
  EXPECT_LT(tv_finite(emp, exact), 0.01);
}

TEST(InheritForest, DropsSpineChildren) {
  const auto pt = plane(0, {kNoParent, 0, 0, 1}, {{2, 1}, {3}, {}, {}});
  const auto f = inherit_forest(pt, make_spine(pt.tree, 3));
  EXPECT_EQ(f.children[0], std::vector<int>{2});
  EXPECT_TRUE(f.children[1].empty());
}
