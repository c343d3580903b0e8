#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <span>
#include <vector>

#include "adview/dataset.hpp"
#include "adview/matrix.hpp"
#include "adview/models/ann.hpp"

namespace adview::testkit {

enum class SyntheticKind { linear, tree_structured, noisy_mixed };

SyntheticKind synthetic_kind_from_string(std::string_view name);

struct SyntheticSpec {
  std::size_t n_rows = 1000;
  SyntheticKind kind = SyntheticKind::linear;
  double noise_sd = 0.0;
  std::uint64_t seed = 42;
  // Numeric columns (views, likes, dislikes, comment; at most 4) that carry
  // the planted signal. The rest are nuisance columns.
  std::size_t d_numeric = 4;
  bool include_categorical = true;
};

// Coefficients of the planted affine rule for SyntheticKind::linear, in the
// order views, likes, dislikes, comment.
inline constexpr double kLinearWeights[4] = {0.002, 0.05, -0.4, 0.3};
inline constexpr double kLinearIntercept = 40.0;

// A table under default_schema() with realistic text forms: ISO-8601
// durations, YYYY-MM-DD dates, category letters A-H.
RawTable generate_synthetic(const SyntheticSpec& spec);

struct SplitChoice {
  std::size_t feature = 0;
  double threshold = 0.0;
  double weighted_mse = 0.0;
};

// Weighted child MSE (n_L * mse_L + n_R * mse_R) / n of one candidate,
// computed with two-pass means over the rows in their original order.
double weighted_child_mse(const Matrix& X, std::span<const double> y, std::size_t feature,
                          double threshold);

// Exhaustive search over every feature and every midpoint of consecutive
// distinct values; returns nullopt when no candidate leaves at least
// `min_samples_leaf` rows on each side. Requires X.rows() <= 64.
std::optional<SplitChoice> brute_force_best_split(const Matrix& X, std::span<const double> y,
                                                  std::size_t min_samples_leaf = 1);

// Central differences of ann_loss for every parameter.
std::vector<double> finite_difference_gradients(const AnnModel& model, const Matrix& X,
                                                std::span<const double> y, double step);

// Uniform random matrix / vector helpers for property tests.
Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                     double hi = 1.0);
std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                  double hi = 1.0);

}  // namespace adview::testkit
