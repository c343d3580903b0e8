#include "adview/models/ann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {

namespace {

// Pre-activations and activations of every layer for one sample.
struct Trace {
  std::vector<std::vector<double>> z;  // per layer, size out
  std::vector<std::vector<double>> a;  // a[0] = input, a[l + 1] = layer l output
};

void forward(const AnnModel& m, std::span<const double> x, Trace& trace) {
  const std::size_t L = m.n_layers();
  trace.z.resize(L);
  trace.a.resize(L + 1);
  trace.a[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t in = m.layer_sizes[l];
    const std::size_t out = m.layer_sizes[l + 1];
    const double* w = m.params.data() + m.weight_offset(l);
    const double* b = m.params.data() + m.bias_offset(l);
    auto& z = trace.z[l];
    auto& a = trace.a[l + 1];
    z.resize(out);
    a.resize(out);
    const auto& prev = trace.a[l];
    const bool hidden = l + 1 < L;
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      for (std::size_t i = 0; i < in; ++i) s += w[o * in + i] * prev[i];
      z[o] = s;
      a[o] = hidden ? std::max(0.0, s) : s;
    }
  }
}

void check_xy(const AnnModel& m, const Matrix& X, std::span<const double> y) {
  if (X.rows() != y.size()) throw InputError("ann: target length does not match rows");
  if (X.cols() != m.layer_sizes.front()) throw InputError("ann: feature count mismatch");
}

}  // namespace

std::size_t ann_parameter_count(std::span<const std::size_t> layer_sizes) {
  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    count += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  }
  return count;
}

std::size_t AnnModel::weight_offset(std::size_t layer) const {
  return ann_parameter_count(std::span(layer_sizes).first(layer + 1));
}

std::size_t AnnModel::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + layer_sizes[layer] * layer_sizes[layer + 1];
}

double AnnModel::predict_one(std::span<const double> x) const {
  Trace trace;
  forward(*this, x, trace);
  return trace.a.back()[0];
}

std::vector<double> AnnModel::predict(const Matrix& X) const {
  std::vector<double> out(X.rows());
  Trace trace;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    forward(*this, X.row(i), trace);
    out[i] = trace.a.back()[0];
  }
  return out;
}

AnnModel init_ann(std::size_t n_features, const AnnConfig& config) {
  if (n_features == 0) throw InputError("ann: no input features");
  AnnModel m;
  m.config = config;
  m.layer_sizes.push_back(n_features);
  for (auto h : config.hidden_sizes) {
    if (h == 0) throw InputError("ann: hidden layer of width 0");
    m.layer_sizes.push_back(h);
  }
  m.layer_sizes.push_back(1);
  m.params.assign(ann_parameter_count(m.layer_sizes), 0.0);

  Rng rng(config.seed);
  for (std::size_t l = 0; l < m.n_layers(); ++l) {
    const std::size_t in = m.layer_sizes[l];
    const std::size_t out = m.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = m.params.data() + m.weight_offset(l);
    for (std::size_t k = 0; k < in * out; ++k) w[k] = rng.uniform(-limit, limit);
  }
  return m;
}

double ann_loss(const AnnModel& model, const Matrix& X, std::span<const double> y) {
  check_xy(model, X, y);
  if (X.rows() == 0) throw InputError("ann: empty batch");
  Trace trace;
  double sum = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    forward(model, X.row(i), trace);
    const double e = trace.a.back()[0] - y[i];
    sum += e * e;
  }
  return sum / static_cast<double>(X.rows());
}

LossGradient ann_loss_gradient(const AnnModel& model, const Matrix& X, std::span<const double> y) {
  check_xy(model, X, y);
  const std::size_t n = X.rows();
  if (n == 0) throw InputError("ann: empty batch");
  const std::size_t L = model.n_layers();

  LossGradient out;
  out.gradient.assign(model.params.size(), 0.0);
  Trace trace;
  std::vector<double> delta, prev_delta;
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t s = 0; s < n; ++s) {
    forward(model, X.row(s), trace);
    const double e = trace.a.back()[0] - y[s];
    out.loss += e * e;

    delta.assign(1, 2.0 * e * inv_n);
    for (std::size_t l = L; l-- > 0;) {
      const std::size_t in = model.layer_sizes[l];
      const std::size_t width = model.layer_sizes[l + 1];
      const double* w = model.params.data() + model.weight_offset(l);
      double* gw = out.gradient.data() + model.weight_offset(l);
      double* gb = out.gradient.data() + model.bias_offset(l);
      const auto& input = trace.a[l];
      for (std::size_t o = 0; o < width; ++o) {
        gb[o] += delta[o];
        for (std::size_t i = 0; i < in; ++i) gw[o * in + i] += delta[o] * input[i];
      }
      if (l == 0) break;
      prev_delta.assign(in, 0.0);
      const auto& z_prev = trace.z[l - 1];
      for (std::size_t i = 0; i < in; ++i) {
        if (!(z_prev[i] > 0.0)) continue;
        double s_back = 0.0;
        for (std::size_t o = 0; o < width; ++o) s_back += w[o * in + i] * delta[o];
        prev_delta[i] = s_back;
      }
      delta.swap(prev_delta);
    }
  }
  out.loss *= inv_n;
  return out;
}

AnnModel fit_ann(const Matrix& X, std::span<const double> y, const AnnConfig& config) {
  const std::size_t n = X.rows();
  if (n == 0) throw InputError("fit_ann: no training rows");
  if (y.size() != n) throw InputError("fit_ann: target length does not match rows");
  if (config.batch_size == 0) throw InputError("fit_ann: batch_size must be >= 1");
  if (!(config.learning_rate >= 0.0)) throw InputError("fit_ann: learning rate must be >= 0");

  AnnModel model = init_ann(X.cols(), config);
  // Shuffles use a stream separate from initialization.
  Rng rng(derive_seed(config.seed, 1));
  const std::size_t batch = std::min(config.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> yb;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += batch, ++batch_index) {
      const std::size_t stop = std::min(n, start + batch);
      const auto idx = std::span<const std::size_t>(order).subspan(start, stop - start);
      const Matrix xb = X.select_rows(idx);
      yb.resize(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) yb[k] = y[idx[k]];

      const LossGradient lg = ann_loss_gradient(model, xb, yb);
      if (!std::isfinite(lg.loss)) {
        throw DivergenceError("ann diverged at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index));
      }
      for (std::size_t p = 0; p < model.params.size(); ++p) {
        model.params[p] -= config.learning_rate * lg.gradient[p];
      }
    }
  }
  model.final_loss = ann_loss(model, X, y);
  if (!std::isfinite(model.final_loss)) {
    throw DivergenceError("ann diverged after epoch " + std::to_string(config.epochs));
  }
  return model;
}

}  // namespace adview
