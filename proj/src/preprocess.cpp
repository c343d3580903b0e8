#include "adview/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {

MinMaxScaler::MinMaxScaler(std::vector<double> min, std::vector<double> max,
                           std::vector<std::string> feature_names)
    : min_(std::move(min)), max_(std::move(max)), names_(std::move(feature_names)) {
  if (min_.size() != max_.size() || min_.size() != names_.size()) {
    throw InputError("scaler: min, max and names must have equal length");
  }
  for (std::size_t j = 0; j < min_.size(); ++j) {
    if (!(min_[j] <= max_[j])) throw InputError("scaler: min exceeds max for '" + names_[j] + "'");
  }
}

MinMaxScaler MinMaxScaler::fit(const FeatureMatrix& features) {
  if (features.rows() == 0) throw InputError("cannot fit a scaler on zero rows");
  const std::size_t d = features.cols();
  std::vector<double> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) lo[j] = hi[j] = features.values(0, j);
  for (std::size_t i = 1; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], features.values(i, j));
      hi[j] = std::max(hi[j], features.values(i, j));
    }
  }
  return MinMaxScaler(std::move(lo), std::move(hi), features.feature_names);
}

void MinMaxScaler::check(const FeatureMatrix& features) const {
  if (features.cols() != size()) {
    throw InputError("scaler expects " + std::to_string(size()) + " features, got " +
                     std::to_string(features.cols()));
  }
  if (features.feature_names != names_) throw InputError("scaler feature names do not match");
}

Matrix MinMaxScaler::transform(const Matrix& values) const {
  if (values.cols() != size()) {
    throw InputError("scaler expects " + std::to_string(size()) + " features, got " +
                     std::to_string(values.cols()));
  }
  Matrix out(values.rows(), values.cols());
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      const double span = max_[j] - min_[j];
      out(i, j) = span > 0.0 ? (values(i, j) - min_[j]) / span : 0.0;
    }
  }
  return out;
}

FeatureMatrix MinMaxScaler::transform(const FeatureMatrix& features) const {
  check(features);
  return {transform(features.values), names_};
}

FeatureMatrix MinMaxScaler::inverse_transform(const FeatureMatrix& scaled) const {
  check(scaled);
  FeatureMatrix out{Matrix(scaled.rows(), scaled.cols()), names_};
  for (std::size_t i = 0; i < scaled.rows(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      out.values(i, j) = scaled.values(i, j) * (max_[j] - min_[j]) + min_[j];
    }
  }
  return out;
}

SplitResult train_test_split(std::size_t n, double ratio, std::uint64_t seed) {
  if (n < 2) throw InputError("need at least 2 rows to split, got " + std::to_string(n));
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("split ratio must lie in (0, 1)");
  const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw InputError("split ratio " + std::to_string(ratio) + " leaves an empty partition for " +
                     std::to_string(n) + " rows");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  SplitResult result;
  result.ratio = ratio;
  result.seed = seed;
  result.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  result.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return result;
}

}  // namespace adview
