#include "adview/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "adview/error.hpp"

namespace adview {

namespace {

struct Column {
  std::vector<double> centered;
  double norm = 0.0;  // sqrt(sum of squares of centered values)
};

std::vector<Column> centered_columns(const FeatureMatrix& features, const TargetVector& target) {
  const std::size_t n = features.rows();
  if (target.values.size() != n) {
    throw InputError("correlation: target length does not match feature rows");
  }
  if (n < 2) throw InputError("correlation needs at least 2 rows");
  const std::size_t d = features.cols();
  std::vector<Column> cols(d + 1);
  for (std::size_t j = 0; j <= d; ++j) {
    auto values = j < d ? features.values.column(j) : target.values;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (auto& v : values) {
      v -= mean;
      ss += v * v;
    }
    cols[j].centered = std::move(values);
    cols[j].norm = std::sqrt(ss);
  }
  return cols;
}

double pearson(const Column& a, const Column& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.centered.size(); ++i) s += a.centered[i] * b.centered[i];
  const double r = s / (a.norm * b.norm);
  return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix prepare(const FeatureMatrix& features, const TargetVector& target,
                          const std::vector<Column>& cols) {
  CorrelationMatrix out;
  out.names = features.feature_names;
  out.names.push_back(target.name);
  const std::size_t k = cols.size();
  out.values = Matrix(k, k);
  out.zero_variance.resize(k);
  for (std::size_t j = 0; j < k; ++j) out.zero_variance[j] = !(cols[j].norm > 0.0);
  return out;
}

void fill_pair(CorrelationMatrix& out, const std::vector<Column>& cols, std::size_t i,
               std::size_t j) {
  double r = 0.0;
  if (!out.zero_variance[i] && !out.zero_variance[j]) r = i == j ? 1.0 : pearson(cols[i], cols[j]);
  out.values(i, j) = r;
  out.values(j, i) = r;
}

std::string fixed3(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

// Flattens tabs and newlines out of free text bound for a TSV cell.
std::string tsv_cell(std::string text) {
  std::replace_if(text.begin(), text.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                  ' ');
  return text;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return {buf, ptr};
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw InputError("rmse: length mismatch (" + std::to_string(predicted.size()) + " vs " +
                     std::to_string(actual.size()) + ")");
  }
  if (predicted.empty()) throw InputError("rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - actual[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(predicted.size()));
}

Histogram histogram(std::span<const double> values, std::size_t bins, std::string column_name) {
  if (bins == 0) throw InputError("histogram needs at least one bin");
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  if (!any) throw InputError("histogram of '" + column_name + "': no finite values");
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }

  Histogram h;
  h.column_name = std::move(column_name);
  h.counts.assign(bins, 0);
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) h.bin_edges[b] = lo + width * static_cast<double>(b);
  h.bin_edges[bins] = hi;

  for (double v : values) {
    if (!std::isfinite(v)) continue;
    auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
    b = std::min(b, bins - 1);
    // Keep the bin consistent with the stored edges despite rounding.
    while (b > 0 && v < h.bin_edges[b]) --b;
    while (b + 1 < bins && v >= h.bin_edges[b + 1]) ++b;
    ++h.counts[b];
  }
  return h;
}

CorrelationMatrix correlation_matrix(const FeatureMatrix& features, const TargetVector& target) {
  const auto cols = centered_columns(features, target);
  auto out = prepare(features, target, cols);
  const auto k = static_cast<std::ptrdiff_t>(cols.size());
  // Each unordered pair is computed once and mirrored.
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    for (std::ptrdiff_t j = i; j < k; ++j) {
      fill_pair(out, cols, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return out;
}

CorrelationMatrix correlation_matrix_serial(const FeatureMatrix& features,
                                            const TargetVector& target) {
  const auto cols = centered_columns(features, target);
  auto out = prepare(features, target, cols);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i; j < cols.size(); ++j) fill_pair(out, cols, i, j);
  }
  return out;
}

Comparison compare_models(const FeatureMatrix& train_x, const TargetVector& train_y,
                          const FeatureMatrix& test_x, const TargetVector& test_y,
                          const ModelConfigs& configs, std::uint64_t seed,
                          std::string dataset_name) {
  if (train_x.feature_names != test_x.feature_names) {
    throw InputError("compare_models: train and test feature names differ");
  }
  Comparison result;
  result.report.dataset_name = std::move(dataset_name);
  result.report.seed = seed;

  for (auto kind : kAllModelKinds) {
    EvalRow row;
    row.kind = kind;
    row.model_name = std::string(display_name(kind));
    std::optional<Regressor> fitted;
    const auto start = std::chrono::steady_clock::now();
    try {
      fitted = fit_model(kind, train_x.values, train_y.values, configs, seed);
      row.train_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.hyperparameters = hyperparameter_summary(*fitted);
      row.rmse = rmse(predict(*fitted, test_x.values), test_y.values);
    } catch (const Error& e) {
      row.error = e.what();
      row.rmse = std::numeric_limits<double>::quiet_NaN();
      fitted.reset();
    }
    result.report.rows.push_back(std::move(row));
    result.models.push_back(std::move(fitted));
  }

  auto& rows = result.report.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) continue;
    if (rows[i].kind == ModelKind::ann) {
      result.report.ann_row = i;
    } else if (!result.report.best_ml_row || rows[i].rmse < rows[*result.report.best_ml_row].rmse) {
      result.report.best_ml_row = i;
    }
  }
  return result;
}

void write_report_text(std::ostream& out, const EvalReport& report, const ReportOptions& opts) {
  out << "Dataset: " << report.dataset_name << "\n";
  out << "Seed: " << report.seed << "  Split: " << fixed3(report.split_ratio) << " train / "
      << fixed3(1.0 - report.split_ratio) << " test\n\n";

  std::size_t name_width = std::string_view("Techniques/Models").size();
  for (const auto& r : report.rows) name_width = std::max(name_width, r.model_name.size());

  out << std::left << std::setw(8) << "Sr. No." << std::setw(static_cast<int>(name_width) + 2)
      << "Techniques/Models" << std::setw(16) << "RMSE";
  if (opts.include_timings) out << std::setw(12) << "Train (s)";
  out << "Selected\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    std::string selected;
    if (report.best_ml_row == i) selected = "minimum-RMSE ML model";
    if (report.ann_row == i) selected = "ANN";
    out << std::setw(8) << (std::to_string(i + 1) + ".")
        << std::setw(static_cast<int>(name_width) + 2) << r.model_name << std::setw(16)
        << (r.error ? std::string("error") : fixed3(r.rmse));
    if (opts.include_timings) out << std::setw(12) << fixed3(r.train_seconds);
    out << selected << "\n";
  }
  for (const auto& r : report.rows) {
    if (r.error) out << "\n" << r.model_name << " failed: " << *r.error;
  }
  out << "\n";
}

void write_report_tsv(std::ostream& out, const EvalReport& report, const ReportOptions& opts) {
  out << "model\trmse\ttrain_seconds\thyperparameters\n";
  for (const auto& r : report.rows) {
    out << r.model_name << '\t' << (r.error ? std::string("error") : format_double(r.rmse)) << '\t'
        << (opts.include_timings ? format_double(r.train_seconds) : std::string("NA")) << '\t'
        << tsv_cell(r.error ? "error=" + *r.error : r.hyperparameters) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    out << format_double(hist.bin_edges[b]) << ',' << format_double(hist.bin_edges[b + 1]) << ','
        << hist.counts[b] << '\n';
  }
}

void write_correlation_csv(std::ostream& out, const CorrelationMatrix& corr) {
  for (const auto& name : corr.names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < corr.names.size(); ++i) {
    out << corr.names[i];
    for (std::size_t j = 0; j < corr.names.size(); ++j) out << ',' << format_double(corr.values(i, j));
    out << '\n';
  }
}

}  // namespace adview
