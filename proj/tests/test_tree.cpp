#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "adview/error.hpp"
#include "adview/models/tree.hpp"
#include "adview/rng.hpp"
#include "adview/testkit.hpp"

namespace adview {
namespace {

Matrix column(std::vector<double> v) {
  Matrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

TEST(FitTree, DepthZeroIsAMeanStump) {
  const auto X = column({1, 2, 3, 4});
  const std::vector<double> y{1, 2, 3, 10};
  const auto t = fit_tree(X, y, {0, 1});
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_DOUBLE_EQ(t.predict_one(X.row(0)), 4.0);
}

TEST(FitTree, StepFunction) {
  const auto X = column({0, 0.25, 0.75, 1});
  const std::vector<double> y{0, 0, 1, 1};
  const auto t = fit_tree(X, y, {5, 1});
  ASSERT_EQ(t.nodes.size(), 3u);
  EXPECT_EQ(t.depth(), 1u);
  EXPECT_EQ(t.nodes[0].feature, 0);
  EXPECT_EQ(t.nodes[0].threshold, 0.5);
  EXPECT_EQ(t.predict(X), y);
}

TEST(FitTree, PureTreeReproducesTrainingTargets) {
  const auto X = column({3, 1, 4, 2});
  const std::vector<double> y{30, 10, 40, 20};
  const auto t = fit_tree(X, y, {10, 1});
  EXPECT_EQ(t.predict(X), y);
}

TEST(FitTree, TiesGoToLowestFeatureIndex) {
  Matrix X(4, 2);
  const double v[4] = {0, 1, 2, 3};
  for (std::size_t i = 0; i < 4; ++i) X(i, 0) = X(i, 1) = v[i];
  const std::vector<double> y{0, 0, 5, 5};
  const auto t = fit_tree(X, y, {1, 1});
  EXPECT_EQ(t.nodes[0].feature, 0);
}

TEST(FitTree, StopsWhenNoSplitHelps) {
  const auto X = column({1, 2, 3, 4});
  const std::vector<double> y(4, 2.5);
  EXPECT_EQ(fit_tree(X, y, {5, 1}).nodes.size(), 1u);
  Matrix constant(4, 1, 7.0);
  EXPECT_EQ(fit_tree(constant, std::vector<double>{1, 2, 3, 4}, {5, 1}).nodes.size(), 1u);
}

TEST(FitTree, RespectsDepthAndLeafSize) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto X = testkit::random_matrix(200, 3, seed);
    const auto y = testkit::random_vector(200, seed + 50);
    const TreeConfig cfg{4, 7};
    const auto t = fit_tree(X, y, cfg);
    EXPECT_LE(t.depth(), 4u);
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        EXPECT_GE(n.samples, 7u);
      } else {
        EXPECT_EQ(t.nodes[n.left].samples + t.nodes[n.right].samples, n.samples);
      }
    }
  }
}

TEST(FitTree, Errors) {
  EXPECT_THROW(fit_tree(Matrix(0, 1), std::vector<double>{}, {}), InputError);
  EXPECT_THROW(fit_tree(Matrix(2, 1), std::vector<double>{1, 2}, {3, 0}), InputError);
}

TEST(SplitMidpoint, NeverLandsOnTheUpperValue) {
  const double lo = 1.0;
  const double hi = std::nextafter(1.0, 2.0);
  EXPECT_EQ(split_midpoint(lo, hi), lo);
  EXPECT_EQ(split_midpoint(0.0, 1.0), 0.5);
}

// Root split versus the exhaustive oracle on small random datasets, with
// both continuous and heavily tied feature values.
TEST(FitTree, RootSplitMatchesBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    const std::size_t d = 1 + rng.below(2);
    const bool discrete = trial % 2 == 1;
    Matrix X(n, d);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        X(i, j) = discrete ? static_cast<double>(rng.below(4)) : rng.uniform();
      }
      y[i] = rng.uniform(-5, 5);
    }
    const auto tree = fit_tree(X, y, {3, 1});
    const auto oracle = testkit::brute_force_best_split(X, y);
    if (!oracle) {
      EXPECT_EQ(tree.nodes.size(), 1u);
      continue;
    }
    ASSERT_FALSE(tree.nodes[0].is_leaf()) << "trial " << trial;
    const double achieved = testkit::weighted_child_mse(
        X, y, static_cast<std::size_t>(tree.nodes[0].feature), tree.nodes[0].threshold);
    EXPECT_EQ(achieved, oracle->weighted_mse) << "trial " << trial;
  }
}

}  // namespace
}  // namespace adview
