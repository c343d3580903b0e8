#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adview/matrix.hpp"
#include "adview/models/ann.hpp"
#include "adview/models/forest.hpp"
#include "adview/models/linear.hpp"
#include "adview/models/svr.hpp"
#include "adview/models/tree.hpp"

namespace adview {

enum class ModelKind { linear, svr, tree, forest, ann };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::linear, ModelKind::svr, ModelKind::tree,
                                               ModelKind::forest, ModelKind::ann};

std::string_view to_string(ModelKind kind);
// Throws KindError for anything but linear|svr|tree|forest|ann.
ModelKind model_kind_from_string(std::string_view name);
// Display name as in the comparison report ("Decision Tree", ...).
std::string_view display_name(ModelKind kind);

using Regressor = std::variant<LinearModel, SvrModel, TreeModel, ForestModel, AnnModel>;

ModelKind kind_of(const Regressor& model);
bool is_fitted(const Regressor& model);
std::size_t feature_count(const Regressor& model);

// Throws InputError on an unfitted model or a feature-count mismatch.
std::vector<double> predict(const Regressor& model, const Matrix& X);

struct ModelConfigs {
  SvrConfig svr;
  TreeConfig tree;
  ForestConfig forest;
  AnnConfig ann;
};

// Seeds for svr, forest and ann are derived from `seed`, overriding the
// seeds carried in `configs`.
Regressor fit_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                    const ModelConfigs& configs, std::uint64_t seed);

// One-line "key=value ..." description of the hyperparameters.
std::string hyperparameter_summary(const Regressor& model);

}  // namespace adview
