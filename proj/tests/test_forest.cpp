#include <omp.h>

#include <gtest/gtest.h>

#include "adview/error.hpp"
#include "adview/models/bundle.hpp"
#include "adview/models/forest.hpp"
#include "adview/testkit.hpp"

namespace adview {
namespace {

std::vector<double> target_for(const Matrix& X, std::uint64_t seed) {
  auto noise = testkit::random_vector(X.rows(), seed, -0.1, 0.1);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    noise[i] += (X(i, 0) > 0.5 ? 3.0 : 0.0) + X(i, 1) * X(i, 2);
  }
  return noise;
}

bool same_trees(const ForestModel& a, const ForestModel& b) {
  if (a.trees.size() != b.trees.size()) return false;
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    if (a.trees[t].nodes != b.trees[t].nodes) return false;
  }
  return true;
}

TEST(FitForest, SingleFullTreeDegeneratesToFitTree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto X = testkit::random_matrix(120, 3, seed);
    const auto y = target_for(X, seed + 1);
    ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = false;
    cfg.m_try = 3;
    cfg.tree = {6, 2};
    cfg.seed = seed;
    const auto forest = fit_forest(X, y, cfg);
    const auto tree = fit_tree(X, y, cfg.tree);
    EXPECT_EQ(forest.predict(X), tree.predict(X));
  }
}

TEST(ForestModel, PredictionIsTheMeanOfTrees) {
  ForestModel f;
  f.n_features = 1;
  for (double v : {1.0, 2.0, 3.0}) {
    TreeModel t;
    t.n_features = 1;
    t.nodes.push_back(TreeNode{-1, 0.0, v, 0, 0, 1});
    f.trees.push_back(t);
  }
  f.config.n_trees = 3;
  EXPECT_EQ(f.predict_one(std::vector<double>{0.0}), 2.0);
}

TEST(FitForest, SameSeedSameForest) {
  const auto X = testkit::random_matrix(200, 4, 1);
  const auto y = target_for(X, 2);
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.seed = 99;
  const auto a = fit_forest(X, y, cfg);
  const auto b = fit_forest(X, y, cfg);
  EXPECT_TRUE(same_trees(a, b));
  cfg.seed = 100;
  EXPECT_FALSE(same_trees(a, fit_forest(X, y, cfg)));
}

TEST(FitForest, ParallelMatchesSerialReference) {
  const auto X = testkit::random_matrix(300, 5, 3);
  const auto y = target_for(X, 4);
  ForestConfig cfg;
  cfg.n_trees = 24;
  cfg.seed = 5;
  const auto serial = fit_forest_serial(X, y, cfg);
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    const auto parallel = fit_forest(X, y, cfg);
    EXPECT_TRUE(same_trees(serial, parallel)) << threads << " threads";
    EXPECT_EQ(parallel.predict(X), serial.predict_serial(X));
  }
}

TEST(FitForest, DefaultMTryAndValidation) {
  EXPECT_EQ(default_m_try(7), 2u);
  EXPECT_EQ(default_m_try(2), 1u);
  const auto X = testkit::random_matrix(20, 3, 1);
  const auto y = testkit::random_vector(20, 2);
  ForestConfig cfg;
  cfg.n_trees = 3;
  EXPECT_EQ(fit_forest(X, y, cfg).config.m_try, 1u);
  cfg.m_try = 4;
  EXPECT_THROW(fit_forest(X, y, cfg), InputError);
  cfg.m_try = 1;
  cfg.n_trees = 0;
  EXPECT_THROW(fit_forest(X, y, cfg), InputError);
  EXPECT_THROW(fit_forest(Matrix(0, 3), std::vector<double>{}, ForestConfig{}), InputError);
}

TEST(FitForest, BeatsASingleBootstrapTreeOnNoisyData) {
  const auto X = testkit::random_matrix(400, 3, 10);
  auto y = target_for(X, 11);
  const auto noise = testkit::random_vector(400, 12, -1, 1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];
  const auto Xt = testkit::random_matrix(200, 3, 13);
  const auto yt = target_for(Xt, 14);
  ForestConfig cfg;
  cfg.n_trees = 50;
  cfg.m_try = 3;
  cfg.seed = 1;
  const auto forest = fit_forest(X, y, cfg);
  cfg.n_trees = 1;
  const auto single = fit_forest(X, y, cfg);
  double e_forest = 0, e_single = 0;
  const auto pf = forest.predict(Xt), ps = single.predict(Xt);
  for (std::size_t i = 0; i < yt.size(); ++i) {
    e_forest += (pf[i] - yt[i]) * (pf[i] - yt[i]);
    e_single += (ps[i] - yt[i]) * (ps[i] - yt[i]);
  }
  EXPECT_LT(e_forest, e_single);
}

}  // namespace
}  // namespace adview
