#include <cmath>

#include <gtest/gtest.h>

#include "adview/error.hpp"
#include "adview/features.hpp"
#include "adview/models/linear.hpp"
#include "adview/testkit.hpp"

namespace adview {
namespace {

using testkit::SyntheticKind;
using testkit::SyntheticSpec;

TEST(GenerateSynthetic, DeterministicAndParseable) {
  SyntheticSpec spec;
  spec.n_rows = 300;
  spec.kind = SyntheticKind::noisy_mixed;
  spec.noise_sd = 10;
  const auto a = testkit::generate_synthetic(spec);
  EXPECT_EQ(a.rows, testkit::generate_synthetic(spec).rows);
  EXPECT_EQ(a.rows.size(), 300u);
  EXPECT_EQ(a.header, default_schema().names());
  spec.seed = 43;
  EXPECT_NE(a.rows, testkit::generate_synthetic(spec).rows);

  const auto reparsed = parse_csv(to_csv(a), default_schema(), "mem");
  EXPECT_EQ(reparsed.rows, a.rows);
  const auto encoders = fit_label_encoders(reparsed, default_schema());
  EXPECT_NO_THROW(encode_table(reparsed, default_schema(), encoders));
}

TEST(GenerateSynthetic, NoiselessLinearIsAffineInTheNumericColumns) {
  SyntheticSpec spec;
  spec.n_rows = 500;
  spec.kind = SyntheticKind::linear;
  spec.noise_sd = 0;
  const auto table = testkit::generate_synthetic(spec);
  const auto encoders = fit_label_encoders(table, default_schema());
  const auto enc = encode_table(table, default_schema(), encoders);
  for (std::size_t i = 0; i < enc.target.values.size(); ++i) {
    double expected = testkit::kLinearIntercept;
    for (std::size_t j = 0; j < 4; ++j) expected += testkit::kLinearWeights[j] * enc.features.values(i, j);
    EXPECT_NEAR(enc.target.values[i], expected, 1e-9 * std::abs(expected));
  }
  Matrix numeric(enc.features.rows(), 4);
  for (std::size_t i = 0; i < numeric.rows(); ++i)
    for (std::size_t j = 0; j < 4; ++j) numeric(i, j) = enc.features.values(i, j);
  const auto ols = fit_linear(numeric, enc.target.values);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(ols.weights[j], testkit::kLinearWeights[j], 1e-8);
}

TEST(GenerateSynthetic, KindNames) {
  EXPECT_EQ(testkit::synthetic_kind_from_string("tree_structured"), SyntheticKind::tree_structured);
  EXPECT_THROW(testkit::synthetic_kind_from_string("cubic"), InputError);
}

TEST(BruteForceSplit, HandWorkedExample) {
  Matrix X(4, 1);
  X(0, 0) = 1;
  X(1, 0) = 2;
  X(2, 0) = 3;
  X(3, 0) = 4;
  const std::vector<double> y{1, 1, 5, 7};
  const auto best = testkit::brute_force_best_split(X, y);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->feature, 0u);
  EXPECT_EQ(best->threshold, 2.5);
  // left {1,1}: 0; right {5,7}: sse 2; over 4 rows.
  EXPECT_EQ(best->weighted_mse, 0.5);
  // left {1}: 0; right {1,5,7}: sse 56/3.
  EXPECT_DOUBLE_EQ(testkit::weighted_child_mse(X, y, 0, 1.5), 56.0 / 3.0 / 4.0);
}

TEST(BruteForceSplit, NoCandidate) {
  Matrix X(3, 1, 2.0);
  EXPECT_FALSE(testkit::brute_force_best_split(X, std::vector<double>{1, 2, 3}));
  Matrix Y(2, 1);
  Y(1, 0) = 1;
  EXPECT_FALSE(testkit::brute_force_best_split(Y, std::vector<double>{1, 2}, 2));
  EXPECT_THROW(testkit::brute_force_best_split(Matrix(65, 1), std::vector<double>(65)),
               InputError);
}

TEST(FiniteDifferences, MatchClosedFormForALinearUnit) {
  // hidden = [] makes the model y_hat = w.x + b with MSE gradient
  // 2/n * sum (y_hat - y) x.
  AnnConfig cfg;
  cfg.hidden_sizes = {};
  cfg.seed = 3;
  const auto model = init_ann(2, cfg);
  const auto X = testkit::random_matrix(10, 2, 4);
  const auto y = testkit::random_vector(10, 5);
  const auto pred = model.predict(X);
  std::vector<double> expected(3, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    const double r = 2.0 * (pred[i] - y[i]) / 10.0;
    expected[0] += r * X(i, 0);
    expected[1] += r * X(i, 1);
    expected[2] += r;
  }
  const auto fd = testkit::finite_difference_gradients(model, X, y, 1e-5);
  for (std::size_t p = 0; p < 3; ++p) EXPECT_NEAR(fd[p], expected[p], 1e-8);
}

TEST(FiniteDifferences, ExactOnAQuadraticLoss) {
  // Without hidden layers the loss is quadratic in the parameters, so
  // central differences carry no truncation error even at a large step.
  AnnConfig cfg;
  cfg.hidden_sizes = {};
  cfg.seed = 1;
  const auto model = init_ann(1, cfg);
  Matrix X(3, 1);
  X(0, 0) = 0.5;
  X(1, 0) = -1;
  X(2, 0) = 2;
  const std::vector<double> y{1, 0, 3};
  const auto exact = ann_loss_gradient(model, X, y).gradient;
  const auto coarse = testkit::finite_difference_gradients(model, X, y, 0.25);
  for (std::size_t p = 0; p < exact.size(); ++p) EXPECT_NEAR(coarse[p], exact[p], 1e-12);
}

TEST(RandomHelpers, RangeAndDeterminism) {
  const auto m = testkit::random_matrix(20, 3, 7, -2, 2);
  EXPECT_EQ(m, testkit::random_matrix(20, 3, 7, -2, 2));
  for (double v : m.data()) {
    EXPECT_GE(v, -2);
    EXPECT_LT(v, 2);
  }
  EXPECT_EQ(testkit::random_vector(5, 1), testkit::random_vector(5, 1));
}

}  // namespace
}  // namespace adview
