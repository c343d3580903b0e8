#include <cmath>
#include <omp.h>
#include <sstream>

#include <gtest/gtest.h>

#include "adview/analysis.hpp"
#include "adview/error.hpp"
#include "adview/rng.hpp"
#include "adview/testkit.hpp"

namespace adview {
namespace {

TEST(Rmse, KnownValue) {
  EXPECT_DOUBLE_EQ(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}),
                   3.5355339059327378);
  EXPECT_EQ(rmse(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  EXPECT_THROW(rmse(std::vector<double>{}, std::vector<double>{}), InputError);
  EXPECT_THROW(rmse(std::vector<double>{1}, std::vector<double>{1, 2}), InputError);
}

TEST(Rmse, SymmetricAndTranslationInvariant) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    const auto p = testkit::random_vector(n, 2 * trial, -100, 100);
    const auto a = testkit::random_vector(n, 2 * trial + 1, -100, 100);
    const double r = rmse(p, a);
    EXPECT_GE(r, 0.0);
    EXPECT_EQ(r, rmse(a, p));
    const double c = rng.uniform(-10, 10);
    auto pc = p, ac = a;
    for (std::size_t i = 0; i < n; ++i) {
      pc[i] += c;
      ac[i] += c;
    }
    EXPECT_NEAR(rmse(pc, ac), r, 1e-9 * (1 + r));
  }
}

TEST(HistogramTest, TwoBins) {
  const auto h = histogram(std::vector<double>{0, 1, 2, 3}, 2, "x");
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(h.bin_edges, (std::vector<double>{0, 1.5, 3}));
  EXPECT_EQ(h.column_name, "x");
}

TEST(HistogramTest, ConstantAndNonFiniteValues) {
  const auto h = histogram(std::vector<double>{5, 5, NAN, INFINITY}, 4);
  EXPECT_EQ(h.bin_edges.front(), 4.5);
  EXPECT_EQ(h.bin_edges.back(), 5.5);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 2u);
  EXPECT_THROW(histogram(std::vector<double>{1}, 0), InputError);
}

TEST(HistogramTest, CountsSumToFiniteValuesForAnyBinCount) {
  const auto v = testkit::random_vector(1000, 3, -5, 5);
  for (std::size_t bins : {1, 2, 7, 30, 999, 5000}) {
    const auto h = histogram(v, bins);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, 1000u) << bins;
    ASSERT_EQ(h.bin_edges.size(), bins + 1);
    for (std::size_t b = 0; b < bins; ++b) EXPECT_LT(h.bin_edges[b], h.bin_edges[b + 1]);
  }
}

FeatureMatrix named(Matrix m) {
  FeatureMatrix f{std::move(m), {}};
  for (std::size_t c = 0; c < f.cols(); ++c) f.feature_names.push_back("f" + std::to_string(c));
  return f;
}

TEST(Correlation, PropertiesHold) {
  auto X = testkit::random_matrix(200, 5, 1);
  for (std::size_t i = 0; i < 200; ++i) {
    X(i, 1) = 3 * X(i, 0) + 1;
    X(i, 2) = -X(i, 0);
    X(i, 4) = 2.0;
  }
  const TargetVector y{testkit::random_vector(200, 2), "y"};
  const auto c = correlation_matrix(named(X), y);
  ASSERT_EQ(c.values.rows(), 6u);
  EXPECT_EQ(c.names.back(), "y");
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      EXPECT_EQ(c.values(i, j), c.values(j, i));
      EXPECT_LE(std::abs(c.values(i, j)), 1.0);
    }
  }
  EXPECT_NEAR(c.values(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.values(0, 2), -1.0, 1e-12);
  EXPECT_TRUE(c.zero_variance[4]);
  EXPECT_EQ(c.values(4, 4), 0.0);
  EXPECT_EQ(c.values(0, 0), 1.0);
}

TEST(Correlation, AffineInvariance) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto X = testkit::random_matrix(100, 2, rng.next());
    const TargetVector y{testkit::random_vector(100, rng.next()), "y"};
    const double base = correlation_matrix(named(X), y).values(0, 2);
    const double alpha = rng.uniform(-10, 10);
    const double beta = rng.uniform(-100, 100);
    for (std::size_t i = 0; i < 100; ++i) X(i, 0) = alpha * X(i, 0) + beta;
    const double moved = correlation_matrix(named(X), y).values(0, 2);
    EXPECT_NEAR(moved, alpha > 0 ? base : -base, 1e-12);
  }
}

TEST(Correlation, ParallelMatchesSerial) {
  const auto X = testkit::random_matrix(500, 12, 9);
  const TargetVector y{testkit::random_vector(500, 10), "y"};
  const auto serial = correlation_matrix_serial(named(X), y);
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    EXPECT_EQ(correlation_matrix(named(X), y).values, serial.values);
  }
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e300, -2.5, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(2.5), "2.5");
}

struct Split {
  FeatureMatrix train_x, test_x;
  TargetVector train_y, test_y;
};

Split step_data() {
  Split s;
  auto make = [](std::size_t n, std::uint64_t seed, FeatureMatrix& x, TargetVector& y) {
    x = named(testkit::random_matrix(n, 2, seed));
    y.name = "y";
    for (std::size_t i = 0; i < n; ++i) {
      y.values.push_back(x.values(i, 0) > 0.5 ? 10.0 : (x.values(i, 1) > 0.5 ? 4.0 : 0.0));
    }
  };
  make(300, 1, s.train_x, s.train_y);
  make(100, 2, s.test_x, s.test_y);
  return s;
}

ModelConfigs quick_configs() {
  ModelConfigs c;
  c.forest.n_trees = 10;
  c.ann.epochs = 10;
  c.svr.epochs = 100;
  return c;
}

TEST(CompareModels, ReportsEveryModel) {
  const auto s = step_data();
  const auto cmp = compare_models(s.train_x, s.train_y, s.test_x, s.test_y, quick_configs(), 5, "d");
  ASSERT_EQ(cmp.report.rows.size(), 5u);
  ASSERT_EQ(cmp.models.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(cmp.report.rows[i].kind, kAllModelKinds[i]);
    EXPECT_FALSE(cmp.report.rows[i].error.has_value());
    EXPECT_GE(cmp.report.rows[i].rmse, 0.0);
  }
  EXPECT_LT(cmp.report.rows[2].rmse, cmp.report.rows[0].rmse);
  EXPECT_EQ(cmp.report.ann_row, 4u);
  ASSERT_TRUE(cmp.report.best_ml_row.has_value());
  EXPECT_NE(*cmp.report.best_ml_row, 4u);
}

TEST(CompareModels, ReportFilesAreDeterministic) {
  const auto s = step_data();
  auto render = [&] {
    const auto cmp =
        compare_models(s.train_x, s.train_y, s.test_x, s.test_y, quick_configs(), 5, "d");
    std::ostringstream text, tsv;
    write_report_text(text, cmp.report);
    write_report_tsv(tsv, cmp.report);
    return text.str() + tsv.str();
  };
  const auto first = render();
  EXPECT_EQ(first, render());
  EXPECT_NE(first.find("Decision Tree"), std::string::npos);
  EXPECT_NE(first.find("model\trmse\ttrain_seconds\thyperparameters"), std::string::npos);
}

TEST(CompareModels, FailedFitIsRecordedNotThrown) {
  const auto s = step_data();
  auto configs = quick_configs();
  configs.ann.learning_rate = 1e12;
  configs.ann.epochs = 50;
  const auto cmp = compare_models(s.train_x, s.train_y, s.test_x, s.test_y, configs, 5);
  EXPECT_TRUE(cmp.report.rows[4].error.has_value());
  EXPECT_FALSE(cmp.models[4].has_value());
  EXPECT_FALSE(cmp.report.ann_row.has_value());
  std::ostringstream text;
  write_report_text(text, cmp.report);
  EXPECT_NE(text.str().find("error"), std::string::npos);
}

}  // namespace
}  // namespace adview
