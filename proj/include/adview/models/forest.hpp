#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adview/matrix.hpp"
#include "adview/models/tree.hpp"

namespace adview {

struct ForestConfig {
  std::size_t n_trees = 100;
  // 0 selects max(1, d / 3) at fit time.
  std::size_t m_try = 0;
  bool bootstrap = true;
  TreeConfig tree;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  ForestConfig config;  // m_try resolved
  std::size_t n_features = 0;

  bool fitted() const { return !trees.empty(); }
  double predict_one(std::span<const double> x) const;
  // OpenMP over rows.
  std::vector<double> predict(const Matrix& X) const;
  // Single-threaded reference.
  std::vector<double> predict_serial(const Matrix& X) const;
};

std::size_t default_m_try(std::size_t n_features);

// Per-tree seed, fixed before any scheduling.
std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index);

// Trees are grown concurrently with OpenMP. The result is bit-identical to
// fit_forest_serial for any thread count.
ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestConfig& config);
ForestModel fit_forest_serial(const Matrix& X, std::span<const double> y,
                              const ForestConfig& config);

}  // namespace adview
