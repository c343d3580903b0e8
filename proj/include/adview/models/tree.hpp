#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adview/matrix.hpp"

namespace adview {

class Rng;

struct TreeConfig {
  std::size_t max_depth = 12;
  std::size_t min_samples_leaf = 2;
};

// Flat node storage; node 0 is the root. A node is a leaf when feature < 0.
// Routing: x[feature] <= threshold goes left.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double value = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t samples = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;
  TreeConfig config;
  std::size_t n_features = 0;

  bool fitted() const { return !nodes.empty(); }
  std::size_t depth() const;
  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
};

// Midpoint between consecutive distinct sorted values; falls back to `lo`
// when rounding would put the midpoint onto `hi`.
double split_midpoint(double lo, double hi);

// CART regression tree. At each node every (feature, midpoint) candidate is
// scored by the weighted sum of child MSEs; ties go to the lowest feature
// index, then the lowest threshold.
TreeModel fit_tree(const Matrix& X, std::span<const double> y, const TreeConfig& config);

// Growth on a (possibly repeated) row sample, drawing `m_try` candidate
// features per split from `rng`. With m_try == X.cols() no draws are made.
TreeModel grow_tree(const Matrix& X, std::span<const double> y,
                    std::span<const std::size_t> sample, const TreeConfig& config,
                    std::size_t m_try, Rng* rng);

}  // namespace adview
