#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adview/dataset.hpp"
#include "adview/features.hpp"
#include "adview/models/regressor.hpp"
#include "adview/preprocess.hpp"

namespace adview {

inline constexpr int kBundleFormatVersion = 1;

// Everything needed to turn raw CSV rows into predictions.
struct ModelBundle {
  Regressor model;
  MinMaxScaler scaler;
  std::vector<LabelEncoder> encoders;
  std::vector<std::string> feature_names;
  std::string target_name;
  Schema schema = default_schema();
};

// JSON document; every floating-point parameter is stored as base64 of its
// little-endian IEEE-754 bytes so a reload predicts bit-identically.
std::string bundle_to_json(const ModelBundle& bundle);
// Throws VersionError, KindError or CorruptionError.
ModelBundle bundle_from_json(std::string_view text);

void save_model(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(const std::string& path);

// Raw-row prediction through the stored encoders and scaler.
std::vector<double> predict_bundle(const ModelBundle& bundle, const Matrix& unscaled);

std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(std::string_view text);

}  // namespace adview
