#include "adview/models/linear.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "adview/error.hpp"

namespace adview {

namespace {

// Lower-triangular Cholesky factor of a symmetric p x p matrix (row-major).
// Returns nullopt when a pivot falls below `rel_tol` times its diagonal.
std::optional<std::vector<double>> cholesky(const std::vector<double>& a, std::size_t p,
                                            double rel_tol) {
  std::vector<double> l(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double pivot = a[j * p + j];
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * p + k] * l[j * p + k];
    if (!(pivot > rel_tol * std::abs(a[j * p + j])) || !(pivot > 0.0)) return std::nullopt;
    const double root = std::sqrt(pivot);
    l[j * p + j] = root;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = a[i * p + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * p + k] * l[j * p + k];
      l[i * p + j] = s / root;
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t p,
                                   std::vector<double> b) {
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * p + k] * b[k];
    b[i] /= l[i * p + i];
  }
  for (std::size_t i = p; i-- > 0;) {
    for (std::size_t k = i + 1; k < p; ++k) b[i] -= l[k * p + i] * b[k];
    b[i] /= l[i * p + i];
  }
  return b;
}

constexpr double kSingularTol = 1e-10;

}  // namespace

double LinearModel::predict_one(std::span<const double> x) const {
  double s = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * x[j];
  return s;
}

std::vector<double> LinearModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
  return out;
}

LinearModel fit_linear(const Matrix& X, std::span<const double> y) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  if (n == 0) throw InputError("fit_linear: no training rows");
  if (y.size() != n) throw InputError("fit_linear: target length does not match rows");

  // Gram matrix and right-hand side of [1 | X].
  const std::size_t p = d + 1;
  std::vector<double> gram(p * p, 0.0);
  std::vector<double> rhs(p, 0.0);
  std::vector<double> aug(p);
  for (std::size_t i = 0; i < n; ++i) {
    aug[0] = 1.0;
    auto row = X.row(i);
    std::copy(row.begin(), row.end(), aug.begin() + 1);
    for (std::size_t a = 0; a < p; ++a) {
      rhs[a] += aug[a] * y[i];
      for (std::size_t b = 0; b <= a; ++b) gram[a * p + b] += aug[a] * aug[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) gram[a * p + b] = gram[b * p + a];
  }

  LinearModel model;
  auto factor = cholesky(gram, p, kSingularTol);
  if (!factor) {
    model.regularized = true;
    for (std::size_t j = 1; j < p; ++j) gram[j * p + j] += kRidgeFallback;
    factor = cholesky(gram, p, 0.0);
    if (!factor) throw Error("fit_linear: Gram matrix is not positive definite even with ridge");
  }
  const auto beta = cholesky_solve(*factor, p, rhs);
  model.intercept = beta[0];
  model.weights.assign(beta.begin() + 1, beta.end());
  for (double w : beta) {
    if (!std::isfinite(w)) throw Error("fit_linear: non-finite coefficients");
  }
  model.fitted = true;
  return model;
}

}  // namespace adview
