#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adview/features.hpp"

namespace adview {

class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(std::vector<double> min, std::vector<double> max,
               std::vector<std::string> feature_names);

  static MinMaxScaler fit(const FeatureMatrix& features);

  // (x - min) / (max - min); constant columns map to 0. Values outside the
  // fitted range extrapolate linearly.
  FeatureMatrix transform(const FeatureMatrix& features) const;
  Matrix transform(const Matrix& values) const;
  FeatureMatrix inverse_transform(const FeatureMatrix& scaled) const;

  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  std::size_t size() const { return min_.size(); }

  friend bool operator==(const MinMaxScaler&, const MinMaxScaler&) = default;

 private:
  void check(const FeatureMatrix& features) const;

  std::vector<double> min_;
  std::vector<double> max_;
  std::vector<std::string> names_;
};

inline MinMaxScaler fit_minmax(const FeatureMatrix& features) {
  return MinMaxScaler::fit(features);
}

struct SplitResult {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  double ratio = 0.8;
  std::uint64_t seed = 0;
};

// Fisher-Yates shuffle of 0..n-1 with a seeded xoshiro256** stream; the
// first floor(ratio * n) indices are the training partition.
SplitResult train_test_split(std::size_t n, double ratio, std::uint64_t seed);

}  // namespace adview
