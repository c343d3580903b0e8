#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adview/dataset.hpp"
#include "adview/matrix.hpp"

namespace adview {

// Maps category text to 0-based codes assigned in ascending lexicographic
// order of the distinct values, so the mapping does not depend on row order.
class LabelEncoder {
 public:
  LabelEncoder() = default;
  LabelEncoder(std::string column_name, std::vector<std::string> sorted_categories);

  static LabelEncoder fit(std::string column_name, std::span<const std::string> cells);

  const std::string& column_name() const { return column_; }
  const std::vector<std::string>& categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }

  std::optional<std::int64_t> find(std::string_view value) const;
  // Throws UnknownCategoryError.
  std::int64_t encode(std::string_view value) const;

  friend bool operator==(const LabelEncoder&, const LabelEncoder&) = default;

 private:
  std::string column_;
  std::vector<std::string> categories_;
};

struct FeatureMatrix {
  Matrix values;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
};

struct TargetVector {
  std::vector<double> values;
  std::string name;
};

// Strict decimal parse: optional sign, digits, optional fraction, optional
// exponent. Rejects thousands separators, hex, inf and nan.
std::optional<double> parse_number(std::string_view text);

// "PT#H#M#S" (any nonempty subset of components, in that order) or
// "HH:MM:SS". Throws ParseError naming the cell.
std::int64_t parse_duration(std::string_view text);

// "YYYY-MM-DD" to whole days since 1970-01-01. Throws ParseError.
std::int64_t parse_date(std::string_view text);

// One encoder per categorical column of the schema, in schema order.
std::vector<LabelEncoder> fit_label_encoders(const RawTable& table, const Schema& schema);

// Names of the columns that become features, in schema order.
std::vector<std::string> feature_names(const Schema& schema);

// Encodes one row's cells (schema order) into `out`, which has one slot per
// feature column. Throws InputError naming `row_label` and the column.
void encode_row(std::span<const std::string> cells, const Schema& schema,
                std::span<const LabelEncoder> encoders, std::span<double> out,
                std::string_view row_label);

struct EncodedTable {
  FeatureMatrix features;
  TargetVector target;
};

EncodedTable encode_table(const RawTable& table, const Schema& schema,
                          std::span<const LabelEncoder> encoders);

}  // namespace adview
