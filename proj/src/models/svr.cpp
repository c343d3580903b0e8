#include "adview/models/svr.hpp"

#include <cmath>

#include "adview/error.hpp"

namespace adview {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

double SvrModel::predict_one(std::span<const double> x) const { return dot(weights, x) + intercept; }

std::vector<double> SvrModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
  return out;
}

double svr_objective(const Matrix& X, std::span<const double> y, std::span<const double> weights,
                     double intercept, double epsilon, double c) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double r = y[i] - (dot(weights, X.row(i)) + intercept);
    loss += std::max(0.0, std::abs(r) - epsilon);
  }
  return 0.5 * dot(weights, weights) + c * loss;
}

SvrModel fit_svr(const Matrix& X, std::span<const double> y, const SvrConfig& config) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  if (n == 0) throw InputError("fit_svr: no training rows");
  if (y.size() != n) throw InputError("fit_svr: target length does not match rows");
  if (!(config.epsilon >= 0.0)) throw InputError("fit_svr: epsilon must be >= 0");
  if (!(config.c >= 0.0)) throw InputError("fit_svr: c must be >= 0");
  if (!(config.learning_rate > 0.0)) throw InputError("fit_svr: learning rate must be > 0");

  SvrModel model;
  model.config = config;
  model.weights.assign(d, 0.0);
  std::vector<double> grad_w(d);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Subgradient of the hinge part; residuals exactly on the tube edge
    // contribute zero.
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = X.row(i);
      const double r = y[i] - model.predict_one(x);
      const double excess = std::abs(r) - config.epsilon;
      if (excess <= 0.0) continue;
      loss += excess;
      const double s = r > 0.0 ? -1.0 : 1.0;
      grad_b += s;
      for (std::size_t j = 0; j < d; ++j) grad_w[j] += s * x[j];
    }
    const double objective = 0.5 * dot(model.weights, model.weights) + config.c * loss;
    if (!std::isfinite(objective)) {
      throw DivergenceError("svr diverged at epoch " + std::to_string(epoch));
    }
    for (std::size_t j = 0; j < d; ++j) {
      model.weights[j] -= config.learning_rate * (model.weights[j] + config.c * grad_w[j]);
    }
    model.intercept -= config.learning_rate * config.c * grad_b;
  }

  model.final_objective =
      svr_objective(X, y, model.weights, model.intercept, config.epsilon, config.c);
  if (!std::isfinite(model.final_objective)) {
    throw DivergenceError("svr diverged at epoch " + std::to_string(config.epochs));
  }
  model.fitted = true;
  return model;
}

}  // namespace adview
