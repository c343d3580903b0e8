#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adview/matrix.hpp"

namespace adview {

struct SvrConfig {
  double epsilon = 0.1;
  double c = 1.0;
  double learning_rate = 1e-3;
  std::size_t epochs = 500;
  std::uint64_t seed = 0;
};

struct SvrModel {
  std::vector<double> weights;
  double intercept = 0.0;
  SvrConfig config;
  double final_objective = 0.0;
  bool fitted = false;

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
};

// 0.5 * |w|^2 + c * sum max(0, |y - (w.x + b)| - epsilon)
double svr_objective(const Matrix& X, std::span<const double> y,
                     std::span<const double> weights, double intercept,
                     double epsilon, double c);

// Linear epsilon-insensitive SVR in the primal: full-batch subgradient
// descent from w = 0, b = 0 for config.epochs steps. The intercept is not
// regularized. Throws DivergenceError on a non-finite objective.
SvrModel fit_svr(const Matrix& X, std::span<const double> y, const SvrConfig& config);

}  // namespace adview
