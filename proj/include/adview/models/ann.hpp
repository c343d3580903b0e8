#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "adview/matrix.hpp"

namespace adview {

struct AnnConfig {
  std::vector<std::size_t> hidden_sizes{64, 32};
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

// Fully connected network: ReLU hidden layers, identity output of width 1.
// Parameters live in one flat vector; layer l stores its weight matrix
// (out x in, row-major) followed by its bias vector.
struct AnnModel {
  std::vector<std::size_t> layer_sizes;
  std::vector<double> params;
  AnnConfig config;
  double final_loss = 0.0;

  bool fitted() const { return !params.empty(); }
  std::size_t n_layers() const { return layer_sizes.size() - 1; }
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& X) const;
};

std::size_t ann_parameter_count(std::span<const std::size_t> layer_sizes);

// Layer sizes (n_features, hidden..., 1) with scaled-uniform weights in
// +-sqrt(6 / (fan_in + fan_out)) and zero biases.
AnnModel init_ann(std::size_t n_features, const AnnConfig& config);

// Mean squared error over the rows of X.
double ann_loss(const AnnModel& model, const Matrix& X, std::span<const double> y);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as AnnModel::params
};

// Backpropagation of the batch mean squared error.
LossGradient ann_loss_gradient(const AnnModel& model, const Matrix& X, std::span<const double> y);

// Mini-batch gradient descent on MSE. Batches come from a seeded reshuffle
// every epoch. Throws DivergenceError naming the epoch and batch.
AnnModel fit_ann(const Matrix& X, std::span<const double> y, const AnnConfig& config);

}  // namespace adview
