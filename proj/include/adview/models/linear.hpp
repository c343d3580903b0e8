#pragma once

#include <span>
#include <vector>

#include "adview/matrix.hpp"

namespace adview {

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  // Set when the Gram matrix was singular and a ridge term was added.
  bool regularized = false;
  bool fitted = false;

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
};

inline constexpr double kRidgeFallback = 1e-8;

// Ordinary least squares through the normal equations of [1 | X]. Falls
// back to a ridge term on the feature block when the Cholesky factorization
// detects a (numerically) singular Gram matrix.
LinearModel fit_linear(const Matrix& X, std::span<const double> y);

}  // namespace adview
