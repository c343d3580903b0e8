#include "adview/testkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "adview/analysis.hpp"
#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview::testkit {

namespace {

std::string iso_duration(std::int64_t seconds) {
  const auto h = seconds / 3600;
  const auto m = (seconds % 3600) / 60;
  const auto s = seconds % 60;
  std::string out = "PT";
  if (h) out += std::to_string(h) + "H";
  if (m) out += std::to_string(m) + "M";
  if (s || (!h && !m)) out += std::to_string(s) + "S";
  return out;
}

std::string iso_date(std::int64_t days_since_epoch) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{days_since_epoch}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

// Integer drawn log-uniformly from [lo, hi].
std::int64_t log_uniform(Rng& rng, double lo, double hi) {
  return static_cast<std::int64_t>(std::floor(std::exp(rng.uniform(std::log(lo), std::log(hi)))));
}

constexpr char kCategories[] = "ABCDEFGH";

}  // namespace

SyntheticKind synthetic_kind_from_string(std::string_view name) {
  if (name == "linear") return SyntheticKind::linear;
  if (name == "tree_structured") return SyntheticKind::tree_structured;
  if (name == "noisy_mixed") return SyntheticKind::noisy_mixed;
  throw InputError("unknown synthetic kind '" + std::string(name) + "'");
}

RawTable generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t d_signal = std::clamp<std::size_t>(spec.d_numeric, 1, 4);
  Rng rng(spec.seed);
  RawTable table;
  table.header = default_schema().names();
  table.source_name = "synthetic";
  table.rows.reserve(spec.n_rows);

  // 2011-01-01 .. 2018-12-31
  constexpr std::int64_t first_day = 14975;
  constexpr std::int64_t last_day = 17896;

  for (std::size_t i = 0; i < spec.n_rows; ++i) {
    const std::int64_t views = log_uniform(rng, 1e3, 1e6);
    const auto likes = static_cast<std::int64_t>(std::floor(static_cast<double>(views) *
                                                            rng.uniform(0.005, 0.05)));
    const auto dislikes =
        static_cast<std::int64_t>(std::floor(static_cast<double>(likes) * rng.uniform(0.01, 0.2)));
    const auto comment =
        static_cast<std::int64_t>(std::floor(static_cast<double>(likes) * rng.uniform(0.02, 0.3)));
    const std::int64_t published =
        first_day + static_cast<std::int64_t>(rng.below(last_day - first_day + 1));
    const std::int64_t duration = 30 + static_cast<std::int64_t>(rng.below(3600));
    const std::size_t cat = spec.include_categorical ? rng.below(8) : 0;

    const double x[4] = {static_cast<double>(views), static_cast<double>(likes),
                         static_cast<double>(dislikes), static_cast<double>(comment)};
    double signal = 0.0;
    switch (spec.kind) {
      case SyntheticKind::linear: {
        signal = kLinearIntercept;
        for (std::size_t j = 0; j < d_signal; ++j) signal += kLinearWeights[j] * x[j];
        break;
      }
      case SyntheticKind::tree_structured: {
        // views split near the log-midpoint; likes thresholds sit inside
        // each branch's likes range.
        if (views <= 30000) {
          signal = likes <= 300 ? 50.0 : 150.0;
        } else {
          signal = likes <= 9000 ? 400.0 : 900.0;
        }
        break;
      }
      case SyntheticKind::noisy_mixed: {
        signal = kLinearIntercept + 0.001 * x[0] + (likes > 5000 ? 250.0 : 0.0) +
                 20.0 * static_cast<double>(cat);
        break;
      }
    }
    // The draw happens even for zero noise so the feature stream is the same.
    const double noise = rng.normal() * spec.noise_sd;
    const double adview = signal + noise;

    char vid[32];
    std::snprintf(vid, sizeof vid, "VID_%06zu", i);
    table.rows.push_back({vid, std::to_string(views), std::to_string(likes),
                          std::to_string(dislikes), std::to_string(comment), iso_date(published),
                          iso_duration(duration), std::string(1, kCategories[cat]),
                          format_double(adview)});
  }
  return table;
}

double weighted_child_mse(const Matrix& X, std::span<const double> y, std::size_t feature,
                          double threshold) {
  double sum_l = 0.0, sum_r = 0.0;
  std::size_t n_l = 0, n_r = 0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    if (X(i, feature) <= threshold) {
      sum_l += y[i];
      ++n_l;
    } else {
      sum_r += y[i];
      ++n_r;
    }
  }
  const double mean_l = n_l ? sum_l / static_cast<double>(n_l) : 0.0;
  const double mean_r = n_r ? sum_r / static_cast<double>(n_r) : 0.0;
  double sse_l = 0.0, sse_r = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    if (X(i, feature) <= threshold) {
      sse_l += (y[i] - mean_l) * (y[i] - mean_l);
    } else {
      sse_r += (y[i] - mean_r) * (y[i] - mean_r);
    }
  }
  // n_L * mse_L + n_R * mse_R over n is the pooled SSE over n.
  return (sse_l + sse_r) / static_cast<double>(X.rows());
}

std::optional<SplitChoice> brute_force_best_split(const Matrix& X, std::span<const double> y,
                                                  std::size_t min_samples_leaf) {
  if (X.rows() > 64) throw InputError("brute_force_best_split is capped at 64 rows");
  if (X.cols() == 0) throw InputError("brute_force_best_split needs at least one feature");
  std::optional<SplitChoice> best;
  for (std::size_t f = 0; f < X.cols(); ++f) {
    auto values = X.column(f);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double lo = values[k], hi = values[k + 1];
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      std::size_t n_left = 0;
      for (std::size_t i = 0; i < X.rows(); ++i) n_left += X(i, f) <= threshold;
      if (n_left < min_samples_leaf || X.rows() - n_left < min_samples_leaf) continue;
      const double mse = weighted_child_mse(X, y, f, threshold);
      if (!best || mse < best->weighted_mse) best = SplitChoice{f, threshold, mse};
    }
  }
  return best;
}

std::vector<double> finite_difference_gradients(const AnnModel& model, const Matrix& X,
                                                std::span<const double> y, double step) {
  AnnModel probe = model;
  std::vector<double> grad(model.params.size());
  for (std::size_t p = 0; p < grad.size(); ++p) {
    const double original = probe.params[p];
    probe.params[p] = original + step;
    const double up = ann_loss(probe, X, y);
    probe.params[p] = original - step;
    const double down = ann_loss(probe, X, y);
    probe.params[p] = original;
    grad[p] = (up - down) / (2.0 * step);
  }
  return grad;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (auto& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace adview::testkit
