#include "featrank/rankers.hpp"

#include "featrank/mi.hpp"
#include "featrank/rng.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

namespace featrank {
namespace {

using featrank::testing::planted_logistic;
using featrank::testing::random_labels;
using featrank::testing::random_normal;

void expect_valid(const Ranking& r, int p, bool score_ordered = true) {
  ASSERT_EQ(r.order.size(), static_cast<std::size_t>(p));
  ASSERT_EQ(r.scores.size(), static_cast<std::size_t>(p));
  std::vector<int> sorted = r.order;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < p; ++j) EXPECT_EQ(sorted[static_cast<std::size_t>(j)], j);
  if (!score_ordered) return;
  for (int i = 0; i + 1 < p; ++i) {
    const int a = r.order[static_cast<std::size_t>(i)];
    const int b = r.order[static_cast<std::size_t>(i + 1)];
    const double sa = r.scores[static_cast<std::size_t>(a)];
    const double sb = r.scores[static_cast<std::size_t>(b)];
    EXPECT_TRUE(sa > sb || (sa == sb && a < b)) << "position " << i;
  }
}

std::vector<int> balanced_labels(int n, int classes) {
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = i % classes;
  return y;
}

TEST(Ranking, FromScoresTieRule) {
  const auto r = ranking_from_scores(Method::Lasso, {0.5, 0.9, 0.5, 0.0, 0.9});
  EXPECT_EQ(r.order, (IndexList{1, 4, 0, 2, 3}));
  EXPECT_EQ(r.top(2), (IndexList{1, 4}));
  EXPECT_THROW(r.top(6), InputError);
  for (double c : {0.01, 3.0, 1e6}) {
    std::vector<double> s = r.scores;
    for (auto& v : s) v *= c;
    EXPECT_EQ(ranking_from_scores(Method::Lasso, s).order, r.order);
  }
}

TEST(Aggregate, Examples) {
  const auto m = aggregate_ovr_scores({{0.9, 0.1}, {0.5, 0.3}});
  EXPECT_NEAR(m[0], 0.7, 1e-15);
  EXPECT_NEAR(m[1], 0.2, 1e-15);
  EXPECT_EQ(aggregate_ovr_scores({{0.25, 0.5}}), (std::vector<double>{0.25, 0.5}));
  const std::vector<double> v{0.1, 0.7, 0.3};
  EXPECT_EQ(aggregate_ovr_scores({v, v, v, v}), v);
  EXPECT_THROW(aggregate_ovr_scores({}), InputError);
  EXPECT_THROW(aggregate_ovr_scores({{1.0}, {1.0, 2.0}}), InputError);
}

TEST(ReliefF, HandTrace) {
  Matrix X(4, 2);
  X << 0.0, 0.0,
       0.2, 1.0,
       1.0, 0.2,
       0.8, 0.8;
  const auto r = rank_relieff(X, std::vector<int>{0, 0, 1, 1}, 1);
  EXPECT_NEAR(r.scores[0], 0.6, 1e-12);
  EXPECT_NEAR(r.scores[1], -0.6, 1e-12);
  EXPECT_EQ(r.order, (IndexList{0, 1}));
}

TEST(ReliefF, SeparatorBeatsNoise) {
  const auto y = balanced_labels(100, 2);
  Matrix X(100, 2);
  const Matrix noise = random_normal(100, 1, 31);
  for (int i = 0; i < 100; ++i) {
    X(i, 0) = y[static_cast<std::size_t>(i)];
    X(i, 1) = noise(i, 0);
  }
  const auto r = rank_relieff(X, y, 10);
  EXPECT_GT(r.scores[0], r.scores[1]);
  EXPECT_EQ(r.order.front(), 0);
  expect_valid(r, 2);
}

TEST(ReliefF, ConstantFeatures) {
  const auto r = rank_relieff(Matrix::Constant(12, 3, 2.0), balanced_labels(12, 2), 3);
  for (double s : r.scores) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(r.order, (IndexList{0, 1, 2}));
}

TEST(ReliefF, RowPermutationInvariant) {
  const auto pr = planted_logistic(60, 5, 2, 41);
  const auto base = rank_relieff(pr.X, pr.y, 5);
  std::vector<int> perm(60);
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng(3).shuffle(perm);
  Matrix Xp(60, 5);
  std::vector<int> yp(60);
  for (int i = 0; i < 60; ++i) {
    Xp.row(i) = pr.X.row(perm[static_cast<std::size_t>(i)]);
    yp[static_cast<std::size_t>(i)] = pr.y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
  }
  const auto moved = rank_relieff(Xp, yp, 5);
  EXPECT_EQ(moved.order, base.order);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(moved.scores[static_cast<std::size_t>(j)], base.scores[static_cast<std::size_t>(j)], 1e-12);
}

TEST(ReliefF, ClassTooSmall) {
  EXPECT_THROW(rank_relieff(Matrix::Ones(4, 2), std::vector<int>{0, 0, 1, 1}, 2), InputError);
  RankerSettings s;
  s.relieff.neighbors = 10;
  const auto r = rank_features(Method::ReliefF, random_normal(8, 2, 1), balanced_labels(8, 2), s, 0);
  EXPECT_EQ(r.meta.at("relieff.neighbors"), "3");
}

TEST(Mrmr, RedundancyPenalty) {
  // A is informative, A2 copies it, B is weaker but independent of A.
  const int n = 400;
  const auto flip = random_labels(n, 2, 51);
  const auto noise = random_labels(n, 4, 52);
  std::vector<int> y(static_cast<std::size_t>(n));
  Matrix X(n, 3);
  for (int i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const int a = i % 2;
    const int b = (i / 2) % 2;
    y[u] = (noise[u] == 0) ? b : a;
    X(i, 0) = a + 0.01 * flip[u];
    X(i, 1) = X(i, 0);
    X(i, 2) = b;
  }
  const auto r = rank_mrmr(X, y, 2);
  EXPECT_EQ(r.order, (IndexList{0, 2, 1}));
  expect_valid(r, 3, false);
}

TEST(Mrmr, SingleAndIdentical) {
  const auto y = balanced_labels(40, 2);
  Matrix X1(40, 1);
  for (int i = 0; i < 40; ++i) X1(i, 0) = y[static_cast<std::size_t>(i)] + 0.1 * (i % 3);
  const auto r1 = rank_mrmr(X1, y, 8);
  EXPECT_EQ(r1.order, (IndexList{0}));
  const auto xc = mi::discretize_equal_frequency(Vector(X1.col(0)), 8);
  EXPECT_NEAR(r1.scores[0], mi::mutual_information(xc, mi::from_codes(y)), 1e-15);

  Matrix X3(40, 3);
  X3 << X1, X1, X1;
  const auto r3 = rank_mrmr(X3, y, 8);
  EXPECT_EQ(r3.order, (IndexList{0, 1, 2}));
  EXPECT_LT(r3.scores[1], r3.scores[0]);
}

TEST(Mrmr, FirstIsMaxRelevance) {
  for (int seed = 0; seed < 10; ++seed) {
    const auto pr = planted_logistic(80, 6, 2, 600 + seed);
    const auto r = rank_mrmr(pr.X, pr.y, 8);
    const auto cls = mi::from_codes(pr.y);
    int best = 0;
    double top = -1.0;
    for (int j = 0; j < 6; ++j) {
      const double v = mi::mutual_information(mi::discretize_equal_frequency(Vector(pr.X.col(j)), 8), cls);
      if (v > top) {
        top = v;
        best = j;
      }
    }
    EXPECT_EQ(r.order.front(), best);
  }
}

TEST(Lasso, NullPicksLargeLambda) {
  const auto r = rank_lasso(random_normal(500, 8, 71), random_labels(500, 2, 72), {}, 9);
  const auto zeros = std::count(r.scores.begin(), r.scores.end(), 0.0);
  EXPECT_GE(zeros, 5);
  expect_valid(r, 8);
  EXPECT_GT(std::stod(r.meta.at("lasso.lambda")), 0.1 * std::stod(r.meta.at("lasso.lambda_max")));
}

TEST(Lasso, DominantFeatureAndSingle) {
  Matrix X = random_normal(300, 5, 81);
  std::vector<int> y(300);
  const auto u = random_normal(300, 1, 82);
  for (int i = 0; i < 300; ++i) y[static_cast<std::size_t>(i)] = 3.0 * X(i, 3) + u(i, 0) > 0;
  const auto r = rank_lasso(X, y, {}, 1);
  EXPECT_EQ(r.order.front(), 3);
  EXPECT_EQ(rank_lasso(X.leftCols(1), y, {}, 1).order, (IndexList{0}));
  EXPECT_THROW(rank_lasso(X, std::vector<int>(300, 1), {}, 1), InputError);
}

TEST(Lasso, DeterministicGivenSeed) {
  const auto pr = planted_logistic(150, 6, 2, 91);
  const auto a = rank_lasso(pr.X, pr.y, {}, 5);
  const auto b = rank_lasso(pr.X, pr.y, {}, 5);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.meta, b.meta);
}

Matrix one_feature_per_class(int n, std::vector<int>& y, std::uint64_t seed) {
  y = balanced_labels(n, 4);
  Matrix X = random_normal(n, 8, seed);
  for (int i = 0; i < n; ++i) X(i, 2 * y[static_cast<std::size_t>(i)]) += 3.0;
  return X;
}

TEST(SpikeSlab, InformativeAndNull) {
  Matrix X = random_normal(500, 6, 101);
  std::vector<int> y(500);
  for (int i = 0; i < 500; ++i) y[static_cast<std::size_t>(i)] = X(i, 4) > 0;
  const auto r = rank_spike_slab(X, y, {});
  EXPECT_EQ(r.order.front(), 4);
  EXPECT_GT(r.scores[4], 0.9);

  const auto null = rank_spike_slab(random_normal(500, 10, 102), random_labels(500, 2, 103), {});
  for (double s : null.scores) EXPECT_LE(s, 0.7);
  expect_valid(null, 10);
}

TEST(SpikeSlab, MulticlassOneFeaturePerClass) {
  std::vector<int> y;
  const Matrix X = one_feature_per_class(240, y, 111);
  const auto r = rank_spike_slab(X, y, {});
  std::set<int> top(r.order.begin(), r.order.begin() + 4);
  EXPECT_EQ(top, (std::set<int>{0, 2, 4, 6}));
  EXPECT_EQ(r.meta.at("multiclass"), "one_vs_rest_mean");
}

TEST(Ard, InformativeNoiseAndLargeEpsilon) {
  Matrix X = random_normal(400, 4, 121);
  const auto u = random_normal(400, 1, 122);
  std::vector<int> y(400);
  for (int i = 0; i < 400; ++i) y[static_cast<std::size_t>(i)] = 2.5 * X(i, 1) + u(i, 0) > 0;
  const auto r = rank_ard(X, y, 0.1, {});
  EXPECT_EQ(r.order.front(), 1);
  EXPECT_GT(r.scores[1], 0.99);
  EXPECT_LT(r.scores[2], r.scores[1]);

  const auto far = rank_ard(X, y, 100.0, {});
  for (double s : far.scores) EXPECT_LT(s, 1e-6);
  EXPECT_THROW(rank_ard(X, y, 0.0, {}), InputError);
}

TEST(Ard, CollinearPairFinite) {
  const auto pr = planted_logistic(120, 2, 1, 131);
  Matrix X(120, 3);
  X << pr.X.col(0), pr.X.col(0), pr.X.col(1);
  const auto r = rank_ard(X, pr.y, 0.1, {});
  for (double s : r.scores) EXPECT_TRUE(std::isfinite(s));
  expect_valid(r, 3);
}

TEST(Dispatch, AllMethodsValidOnMulticlass) {
  std::vector<int> y;
  const Matrix X = one_feature_per_class(120, y, 141);
  for (Method m : kAllMethods) {
    const auto r = rank_features(m, X, y, {}, 7);
    EXPECT_EQ(r.method, m);
    expect_valid(r, 8, m != Method::MRMR);
    std::set<int> top(r.order.begin(), r.order.begin() + 4);
    EXPECT_EQ(top, (std::set<int>{0, 2, 4, 6})) << to_string(m);
  }
}

}  // namespace
}  // namespace featrank
