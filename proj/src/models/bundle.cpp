#include "adview/models/bundle.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <boost/beast/core/detail/base64.hpp>
#include <nlohmann/json.hpp>

#include "adview/error.hpp"

namespace adview {

using nlohmann::json;
namespace b64 = boost::beast::detail::base64;

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | ((v >> (8 * i)) & 0xff);
    return out;
  }
}

json tree_params(const TreeModel& tree) {
  std::vector<std::int32_t> feature;
  std::vector<double> threshold, value;
  std::vector<std::uint32_t> left, right, samples;
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    value.push_back(n.value);
    left.push_back(n.left);
    right.push_back(n.right);
    samples.push_back(n.samples);
  }
  return {{"n_features", tree.n_features}, {"feature", feature},
          {"threshold", encode_doubles(threshold)}, {"value", encode_doubles(value)},
          {"left", left}, {"right", right}, {"samples", samples}};
}

TreeModel tree_from_params(const json& p, const TreeConfig& config) {
  TreeModel tree;
  tree.config = config;
  tree.n_features = p.at("n_features").get<std::size_t>();
  const auto feature = p.at("feature").get<std::vector<std::int32_t>>();
  const auto threshold = decode_doubles(p.at("threshold").get<std::string>());
  const auto value = decode_doubles(p.at("value").get<std::string>());
  const auto left = p.at("left").get<std::vector<std::uint32_t>>();
  const auto right = p.at("right").get<std::vector<std::uint32_t>>();
  const auto samples = p.at("samples").get<std::vector<std::uint32_t>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || value.size() != n || left.size() != n ||
      right.size() != n || samples.size() != n) {
    throw CorruptionError("tree node arrays are empty or of unequal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode node{feature[i], threshold[i], value[i], left[i], right[i], samples[i]};
    if (!node.is_leaf()) {
      // Nodes are stored in preorder, so children always come later.
      if (static_cast<std::size_t>(node.feature) >= tree.n_features || node.left <= i ||
          node.right <= i || node.left >= n || node.right >= n) {
        throw CorruptionError("tree node " + std::to_string(i) + " is malformed");
      }
    }
    tree.nodes.push_back(node);
  }
  return tree;
}

json tree_hyper(const TreeConfig& c) {
  return {{"max_depth", c.max_depth}, {"min_samples_leaf", c.min_samples_leaf}};
}

TreeConfig tree_config_from(const json& h) {
  return {h.at("max_depth").get<std::size_t>(), h.at("min_samples_leaf").get<std::size_t>()};
}

struct Encoded {
  json hyper;
  json params;
};

Encoded encode_model(const Regressor& model) {
  Encoded e;
  switch (kind_of(model)) {
    case ModelKind::linear: {
      const auto& m = std::get<LinearModel>(model);
      e.hyper = {{"ridge_fallback", kRidgeFallback}};
      e.params = {{"weights", encode_doubles(m.weights)},
                  {"intercept", encode_doubles(std::span(&m.intercept, 1))},
                  {"regularized", m.regularized}};
      break;
    }
    case ModelKind::svr: {
      const auto& m = std::get<SvrModel>(model);
      e.hyper = {{"epsilon", m.config.epsilon}, {"c", m.config.c},
                 {"learning_rate", m.config.learning_rate}, {"epochs", m.config.epochs},
                 {"seed", m.config.seed}};
      e.params = {{"weights", encode_doubles(m.weights)},
                  {"intercept", encode_doubles(std::span(&m.intercept, 1))},
                  {"final_objective", encode_doubles(std::span(&m.final_objective, 1))}};
      break;
    }
    case ModelKind::tree: {
      const auto& m = std::get<TreeModel>(model);
      e.hyper = tree_hyper(m.config);
      e.params = tree_params(m);
      break;
    }
    case ModelKind::forest: {
      const auto& m = std::get<ForestModel>(model);
      e.hyper = tree_hyper(m.config.tree);
      e.hyper["n_trees"] = m.config.n_trees;
      e.hyper["m_try"] = m.config.m_try;
      e.hyper["bootstrap"] = m.config.bootstrap;
      e.hyper["seed"] = m.config.seed;
      json trees = json::array();
      for (const auto& t : m.trees) trees.push_back(tree_params(t));
      e.params = {{"n_features", m.n_features}, {"trees", std::move(trees)}};
      break;
    }
    case ModelKind::ann: {
      const auto& m = std::get<AnnModel>(model);
      e.hyper = {{"hidden_sizes", m.config.hidden_sizes}, {"activation", "relu"},
                 {"learning_rate", m.config.learning_rate}, {"epochs", m.config.epochs},
                 {"batch_size", m.config.batch_size}, {"seed", m.config.seed}};
      e.params = {{"layer_sizes", m.layer_sizes}, {"values", encode_doubles(m.params)},
                  {"final_loss", encode_doubles(std::span(&m.final_loss, 1))}};
      break;
    }
  }
  return e;
}

double single(const json& j) {
  const auto v = decode_doubles(j.get<std::string>());
  if (v.size() != 1) throw CorruptionError("expected a single encoded value");
  return v[0];
}

Regressor decode_model(ModelKind kind, const json& h, const json& p) {
  switch (kind) {
    case ModelKind::linear: {
      LinearModel m;
      m.weights = decode_doubles(p.at("weights").get<std::string>());
      m.intercept = single(p.at("intercept"));
      m.regularized = p.at("regularized").get<bool>();
      m.fitted = true;
      return m;
    }
    case ModelKind::svr: {
      SvrModel m;
      m.config.epsilon = h.at("epsilon").get<double>();
      m.config.c = h.at("c").get<double>();
      m.config.learning_rate = h.at("learning_rate").get<double>();
      m.config.epochs = h.at("epochs").get<std::size_t>();
      m.config.seed = h.at("seed").get<std::uint64_t>();
      m.weights = decode_doubles(p.at("weights").get<std::string>());
      m.intercept = single(p.at("intercept"));
      m.final_objective = single(p.at("final_objective"));
      m.fitted = true;
      return m;
    }
    case ModelKind::tree:
      return tree_from_params(p, tree_config_from(h));
    case ModelKind::forest: {
      ForestModel m;
      m.config.tree = tree_config_from(h);
      m.config.n_trees = h.at("n_trees").get<std::size_t>();
      m.config.m_try = h.at("m_try").get<std::size_t>();
      m.config.bootstrap = h.at("bootstrap").get<bool>();
      m.config.seed = h.at("seed").get<std::uint64_t>();
      m.n_features = p.at("n_features").get<std::size_t>();
      for (const auto& t : p.at("trees")) {
        m.trees.push_back(tree_from_params(t, m.config.tree));
        if (m.trees.back().n_features != m.n_features) {
          throw CorruptionError("forest member has a different feature count");
        }
      }
      if (m.trees.size() != m.config.n_trees) throw CorruptionError("forest tree count mismatch");
      return m;
    }
    case ModelKind::ann: {
      AnnModel m;
      m.config.hidden_sizes = h.at("hidden_sizes").get<std::vector<std::size_t>>();
      m.config.learning_rate = h.at("learning_rate").get<double>();
      m.config.epochs = h.at("epochs").get<std::size_t>();
      m.config.batch_size = h.at("batch_size").get<std::size_t>();
      m.config.seed = h.at("seed").get<std::uint64_t>();
      m.layer_sizes = p.at("layer_sizes").get<std::vector<std::size_t>>();
      m.params = decode_doubles(p.at("values").get<std::string>());
      m.final_loss = single(p.at("final_loss"));
      if (m.layer_sizes.size() < 2 || m.layer_sizes.back() != 1 ||
          std::find(m.layer_sizes.begin(), m.layer_sizes.end(), 0) != m.layer_sizes.end() ||
          m.params.size() != ann_parameter_count(m.layer_sizes)) {
        throw CorruptionError("ann layer sizes do not match the parameter vector");
      }
      return m;
    }
  }
  throw KindError("unknown model kind");
}

}  // namespace

std::string encode_doubles(std::span<const double> values) {
  std::string bytes(values.size() * 8, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t le = to_little_endian(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(bytes.data() + 8 * i, &le, 8);
  }
  std::string out(b64::encoded_size(bytes.size()), '\0');
  out.resize(b64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::vector<double> decode_doubles(std::string_view text) {
  if (text.size() % 4 != 0) throw CorruptionError("base64 payload has invalid length");
  std::string bytes(b64::decoded_size(text.size()), '\0');
  const auto [written, read] = b64::decode(bytes.data(), text.data(), text.size());
  // Decoding stops at the first '='; only padding may follow it.
  const auto padding = text.substr(read);
  if (padding.size() > 2 || padding.find_first_not_of('=') != std::string_view::npos) {
    throw CorruptionError("base64 payload contains invalid characters");
  }
  if (written % 8 != 0) throw CorruptionError("base64 payload is not a whole number of doubles");
  std::vector<double> out(written / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t le = 0;
    std::memcpy(&le, bytes.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(to_little_endian(le));
  }
  return out;
}

std::string bundle_to_json(const ModelBundle& bundle) {
  if (!is_fitted(bundle.model)) throw InputError("cannot save an unfitted model");
  const auto encoded = encode_model(bundle.model);

  json encoders = json::array();
  for (const auto& e : bundle.encoders) {
    encoders.push_back({{"column", e.column_name()}, {"categories", e.categories()}});
  }
  json doc = {
      {"format_version", kBundleFormatVersion},
      {"kind", to_string(kind_of(bundle.model))},
      {"hyperparameters", encoded.hyper},
      {"parameters", encoded.params},
      {"scaler",
       {{"min", encode_doubles(bundle.scaler.min())},
        {"max", encode_doubles(bundle.scaler.max())},
        {"feature_names", bundle.scaler.feature_names()}}},
      {"label_encoders", encoders},
      {"feature_names", bundle.feature_names},
      {"target_name", bundle.target_name},
      {"schema", json::parse(schema_to_json(bundle.schema))},
  };
  return doc.dump(2) + "\n";
}

ModelBundle bundle_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("model bundle is not valid JSON (truncated?): ") + e.what());
  }
  if (!doc.is_object()) throw CorruptionError("model bundle is not a JSON object");

  try {
    const auto& version = doc.at("format_version");
    if (!version.is_number_integer() || version.get<std::int64_t>() != kBundleFormatVersion) {
      throw VersionError("unsupported bundle format_version " + version.dump());
    }
    const auto kind = model_kind_from_string(doc.at("kind").get<std::string>());

    ModelBundle bundle;
    bundle.model = decode_model(kind, doc.at("hyperparameters"), doc.at("parameters"));
    const auto& s = doc.at("scaler");
    bundle.scaler = MinMaxScaler(decode_doubles(s.at("min").get<std::string>()),
                                 decode_doubles(s.at("max").get<std::string>()),
                                 s.at("feature_names").get<std::vector<std::string>>());
    for (const auto& e : doc.at("label_encoders")) {
      bundle.encoders.emplace_back(e.at("column").get<std::string>(),
                                   e.at("categories").get<std::vector<std::string>>());
    }
    bundle.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    bundle.target_name = doc.at("target_name").get<std::string>();
    bundle.schema = parse_schema_json(doc.at("schema").dump());

    if (bundle.scaler.feature_names() != bundle.feature_names ||
        feature_count(bundle.model) != bundle.feature_names.size() ||
        feature_names(bundle.schema) != bundle.feature_names) {
      throw CorruptionError("bundle feature names disagree between model, scaler and schema");
    }
    return bundle;
  } catch (const BundleError&) {
    throw;
  } catch (const json::exception& e) {
    throw CorruptionError(std::string("model bundle is missing or mistypes a field: ") + e.what());
  } catch (const Error& e) {
    throw CorruptionError(std::string("model bundle is inconsistent: ") + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  const std::string text = bundle_to_json(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write model bundle '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing model bundle '" + path + "'");
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BundleError("cannot open model bundle '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bundle_from_json(text);
}

std::vector<double> predict_bundle(const ModelBundle& bundle, const Matrix& unscaled) {
  return predict(bundle.model, bundle.scaler.transform(unscaled));
}

}  // namespace adview
