#include "adview/models/regressor.hpp"

#include <sstream>

#include "adview/analysis.hpp"
#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out = "[";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(sizes[i]);
  }
  return out + "]";
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::svr: return "svr";
    case ModelKind::tree: return "tree";
    case ModelKind::forest: return "forest";
    case ModelKind::ann: return "ann";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto kind : kAllModelKinds) {
    if (name == to_string(kind)) return kind;
  }
  throw KindError("unknown model kind '" + std::string(name) + "'");
}

std::string_view display_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear: return "Linear Regression";
    case ModelKind::svr: return "Support Vector Machine";
    case ModelKind::tree: return "Decision Tree";
    case ModelKind::forest: return "Random Forest";
    case ModelKind::ann: return "Artificial Neural Network";
  }
  return "?";
}

ModelKind kind_of(const Regressor& model) { return static_cast<ModelKind>(model.index()); }

bool is_fitted(const Regressor& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return m.fitted; },
                        [](const SvrModel& m) { return m.fitted; },
                        [](const auto& m) { return m.fitted(); },
                    },
                    model);
}

std::size_t feature_count(const Regressor& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return m.weights.size(); },
                        [](const SvrModel& m) { return m.weights.size(); },
                        [](const TreeModel& m) { return m.n_features; },
                        [](const ForestModel& m) { return m.n_features; },
                        [](const AnnModel& m) {
                          return m.layer_sizes.empty() ? std::size_t{0} : m.layer_sizes.front();
                        },
                    },
                    model);
}

std::vector<double> predict(const Regressor& model, const Matrix& X) {
  if (!is_fitted(model)) throw InputError("predict called on an unfitted model");
  const std::size_t d = feature_count(model);
  if (X.cols() != d) {
    throw InputError("model expects " + std::to_string(d) + " features, got " +
                     std::to_string(X.cols()));
  }
  return std::visit([&](const auto& m) { return m.predict(X); }, model);
}

Regressor fit_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                    const ModelConfigs& configs, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::linear:
      return fit_linear(X, y);
    case ModelKind::svr: {
      auto cfg = configs.svr;
      cfg.seed = derive_seed(seed, seed_stream::svr);
      return fit_svr(X, y, cfg);
    }
    case ModelKind::tree:
      return fit_tree(X, y, configs.tree);
    case ModelKind::forest: {
      auto cfg = configs.forest;
      cfg.seed = derive_seed(seed, seed_stream::forest);
      return fit_forest(X, y, cfg);
    }
    case ModelKind::ann: {
      auto cfg = configs.ann;
      cfg.seed = derive_seed(seed, seed_stream::ann);
      return fit_ann(X, y, cfg);
    }
  }
  throw KindError("unknown model kind");
}

std::string hyperparameter_summary(const Regressor& model) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const LinearModel& m) {
                   out << "solver=normal_equations";
                   if (m.regularized) out << " ridge=" << format_double(kRidgeFallback);
                 },
                 [&](const SvrModel& m) {
                   out << "epsilon=" << format_double(m.config.epsilon)
                       << " c=" << format_double(m.config.c)
                       << " learning_rate=" << format_double(m.config.learning_rate)
                       << " epochs=" << m.config.epochs;
                 },
                 [&](const TreeModel& m) {
                   out << "max_depth=" << m.config.max_depth
                       << " min_samples_leaf=" << m.config.min_samples_leaf;
                 },
                 [&](const ForestModel& m) {
                   out << "n_trees=" << m.config.n_trees << " m_try=" << m.config.m_try
                       << " bootstrap=" << (m.config.bootstrap ? "on" : "off")
                       << " max_depth=" << m.config.tree.max_depth
                       << " min_samples_leaf=" << m.config.tree.min_samples_leaf;
                 },
                 [&](const AnnModel& m) {
                   out << "hidden=" << join_sizes(m.config.hidden_sizes)
                       << " activation=relu learning_rate=" << format_double(m.config.learning_rate)
                       << " epochs=" << m.config.epochs << " batch_size=" << m.config.batch_size;
                 },
             },
             model);
  return out.str();
}

}  // namespace adview
