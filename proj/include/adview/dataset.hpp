#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adview {

enum class ColumnKind { identifier, numeric, categorical, date, duration, target };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view name);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<std::string> missing_sentinels = default_sentinels();

  bool is_missing(std::string_view cell) const;

  static std::vector<std::string> default_sentinels() { return {"", "F", "NaN"}; }
};

// Ordered column declarations. Construction validates: names nonempty and
// unique (case-insensitively), exactly one target, and at least one column
// that can become a feature.
class Schema {
 public:
  explicit Schema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  const ColumnSpec& operator[](std::size_t i) const { return columns_[i]; }

  std::size_t target_index() const { return target_; }
  const ColumnSpec& target() const { return columns_[target_]; }

  // Case-insensitive lookup after trimming.
  std::optional<std::size_t> find(std::string_view name) const;

  std::vector<std::string> names() const;

  // Copy in which `name` is the target; the previous target becomes numeric.
  Schema with_target(std::string_view name) const;

  // Copy without the target column. Used to read prediction inputs; the
  // result is not a valid training schema and skips the one-target check.
  Schema without_target() const;

  bool has_target() const { return has_target_; }

  friend bool operator==(const Schema& a, const Schema& b);

 private:
  Schema(std::vector<ColumnSpec> columns, bool require_target);

  std::vector<ColumnSpec> columns_;
  std::size_t target_ = 0;
  bool has_target_ = false;
};

// The nine attributes of the YouTube ad-view export:
// vidid, views, likes, dislikes, comment, published, duration, category, adview.
Schema default_schema();

// Schema document (JSON): {"columns": [{"name": ..., "kind": ...,
// "missing": [...]}, ...]}. "missing" is optional.
Schema load_schema(const std::string& path);
Schema parse_schema_json(std::string_view text);
std::string schema_to_json(const Schema& schema);

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source_name;

  std::size_t row_count() const { return rows.size(); }
  friend bool operator==(const RawTable&, const RawTable&) = default;
};

// RFC 4180 reader. Cells are reordered into schema order and the stored
// header is the schema's column names.
RawTable parse_csv(std::string_view text, const Schema& schema,
                   std::string source_name = "<memory>");
RawTable parse_csv(std::istream& in, const Schema& schema,
                   std::string source_name = "<stream>");
RawTable read_csv_file(const std::string& path, const Schema& schema);

void write_csv(std::ostream& out, const RawTable& table);
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);
std::string to_csv(const RawTable& table);

struct DropResult {
  RawTable table;
  std::size_t dropped = 0;
};

DropResult drop_missing(const RawTable& table, const Schema& schema);

struct ColumnSummary {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::size_t non_missing = 0;
  std::size_t distinct = 0;
  // Only for numeric and target columns with at least one parseable value.
  std::optional<double> min;
  std::optional<double> max;
};

std::vector<ColumnSummary> summarize(const RawTable& table, const Schema& schema);

}  // namespace adview
