#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adview/features.hpp"
#include "adview/models/regressor.hpp"

namespace adview {

// sqrt(mean((p - a)^2)). Throws InputError on empty or mismatched input.
double rmse(std::span<const double> predicted, std::span<const double> actual);

struct Histogram {
  std::string column_name;
  std::vector<double> bin_edges;  // k + 1, ascending
  std::vector<std::size_t> counts;
};

inline constexpr std::size_t kDefaultHistogramBins = 30;

// Equal-width bins over [min, max] of the finite values; bins are [lo, hi)
// except the last, which includes its right edge. A zero span is widened
// by 0.5 on each side.
Histogram histogram(std::span<const double> values, std::size_t bins,
                    std::string column_name = {});

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix values;
  // True for zero-variance columns; their rows and columns are 0.
  std::vector<bool> zero_variance;
};

// Pearson correlation over the feature columns plus the target (last).
// OpenMP over column pairs.
CorrelationMatrix correlation_matrix(const FeatureMatrix& features, const TargetVector& target);
CorrelationMatrix correlation_matrix_serial(const FeatureMatrix& features,
                                            const TargetVector& target);

struct EvalRow {
  ModelKind kind = ModelKind::linear;
  std::string model_name;
  double rmse = 0.0;
  double train_seconds = 0.0;
  std::string hyperparameters;
  std::optional<std::string> error;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::string dataset_name;
  std::uint64_t seed = 0;
  double split_ratio = 0.8;
  // Row indices of the minimum-RMSE machine-learning model and of the ANN.
  std::optional<std::size_t> best_ml_row;
  std::optional<std::size_t> ann_row;
};

struct Comparison {
  EvalReport report;
  // Parallel to report.rows; empty optional where the fit failed.
  std::vector<std::optional<Regressor>> models;
};

// Trains linear, SVR, tree, forest and ANN (in that order) on the training
// partition and scores each on the test partition.
Comparison compare_models(const FeatureMatrix& train_x, const TargetVector& train_y,
                          const FeatureMatrix& test_x, const TargetVector& test_y,
                          const ModelConfigs& configs, std::uint64_t seed,
                          std::string dataset_name = {});

struct ReportOptions {
  // Train timings vary run to run; leaving them out keeps report files
  // byte-stable.
  bool include_timings = false;
};

void write_report_text(std::ostream& out, const EvalReport& report, const ReportOptions& opts = {});
void write_report_tsv(std::ostream& out, const EvalReport& report, const ReportOptions& opts = {});
void write_histogram_csv(std::ostream& out, const Histogram& hist);
void write_correlation_csv(std::ostream& out, const CorrelationMatrix& corr);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace adview
