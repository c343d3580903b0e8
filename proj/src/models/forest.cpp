#include "adview/models/forest.hpp"

#include <exception>
#include <numeric>

#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {

namespace {

ForestConfig resolve(const ForestConfig& config, std::size_t d) {
  ForestConfig out = config;
  if (out.m_try == 0) out.m_try = default_m_try(d);
  if (out.n_trees == 0) throw InputError("fit_forest: n_trees must be >= 1");
  if (out.m_try > d) {
    throw InputError("fit_forest: m_try " + std::to_string(out.m_try) + " exceeds " +
                     std::to_string(d) + " features");
  }
  return out;
}

TreeModel grow_member(const Matrix& X, std::span<const double> y, const ForestConfig& config,
                      std::size_t t) {
  Rng rng(tree_seed(config.seed, t));
  const std::size_t n = X.rows();
  std::vector<std::size_t> sample(n);
  if (config.bootstrap) {
    for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
  } else {
    std::iota(sample.begin(), sample.end(), std::size_t{0});
  }
  return grow_tree(X, y, sample, config.tree, config.m_try, &rng);
}

void check_inputs(const Matrix& X, std::span<const double> y) {
  if (X.rows() == 0) throw InputError("fit_forest: no training rows");
  if (y.size() != X.rows()) throw InputError("fit_forest: target length does not match rows");
}

}  // namespace

std::size_t default_m_try(std::size_t n_features) { return std::max<std::size_t>(1, n_features / 3); }

std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index) {
  return derive_seed(forest_seed, tree_index);
}

double ForestModel::predict_one(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.predict_one(x);
  return sum / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  const auto n = static_cast<std::ptrdiff_t>(X.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = predict_one(X.row(static_cast<std::size_t>(i)));
  }
  return out;
}

std::vector<double> ForestModel::predict_serial(const Matrix& X) const {
  std::vector<double> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
  return out;
}

ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestConfig& config) {
  check_inputs(X, y);
  ForestModel model;
  model.config = resolve(config, X.cols());
  model.n_features = X.cols();
  model.trees.resize(model.config.n_trees);
  std::vector<std::exception_ptr> errors(model.config.n_trees);

  const auto n_trees = static_cast<std::ptrdiff_t>(model.config.n_trees);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < n_trees; ++t) {
    const auto k = static_cast<std::size_t>(t);
    try {
      model.trees[k] = grow_member(X, y, model.config, k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return model;
}

ForestModel fit_forest_serial(const Matrix& X, std::span<const double> y,
                              const ForestConfig& config) {
  check_inputs(X, y);
  ForestModel model;
  model.config = resolve(config, X.cols());
  model.n_features = X.cols();
  model.trees.reserve(model.config.n_trees);
  for (std::size_t t = 0; t < model.config.n_trees; ++t) {
    model.trees.push_back(grow_member(X, y, model.config, t));
  }
  return model;
}

}  // namespace adview
