#include "adview/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adview/error.hpp"
#include "adview/features.hpp"

namespace adview {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fold(std::string_view s) {
  std::string out(trim(s));
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text) {
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // Overlong forms, surrogates, and values past U+10FFFF.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return i;
    }
    i += len;
  }
  return std::string_view::npos;
}

struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string cell;
  std::size_t line = 1;
  current.line = line;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted cell
  bool record_started = false;

  auto finish_cell = [&] {
    current.cells.push_back(std::move(cell));
    cell.clear();
    after_quote = false;
  };
  auto finish_record = [&] {
    if (record_started) {
      finish_cell();
      records.push_back(std::move(current));
    }
    current = Record{};
    record_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line;
        cell.push_back(ch);
      }
      continue;
    }
    if (!record_started) {
      if (ch == '\n' || ch == '\r') {
        // Blank lines between records are skipped.
        if (ch == '\n') ++line;
        continue;
      }
      record_started = true;
      current.line = line;
    }
    switch (ch) {
      case ',':
        finish_cell();
        break;
      case '"':
        if (!cell.empty() || after_quote) {
          throw ParseError("line " + std::to_string(line) + ": stray quote inside unquoted cell",
                           line);
        }
        in_quotes = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        finish_record();
        break;
      case '\n':
        finish_record();
        ++line;
        break;
      default:
        if (after_quote) {
          throw ParseError("line " + std::to_string(line) + ": text after closing quote", line);
        }
        cell.push_back(ch);
    }
  }
  if (in_quotes) {
    throw ParseError("line " + std::to_string(current.line) + ": unterminated quoted cell",
                     current.line);
  }
  finish_record();
  return records;
}

bool needs_quotes(std::string_view cell) {
  return cell.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_cell(std::ostream& out, std::string_view cell) {
  if (!needs_quotes(cell)) {
    out << cell;
    return;
  }
  out << '"';
  for (char ch : cell) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::identifier: return "identifier";
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::date: return "date";
    case ColumnKind::duration: return "duration";
    case ColumnKind::target: return "target";
  }
  return "?";
}

ColumnKind column_kind_from_string(std::string_view name) {
  const std::string key = fold(name);
  for (auto kind : {ColumnKind::identifier, ColumnKind::numeric, ColumnKind::categorical,
                    ColumnKind::date, ColumnKind::duration, ColumnKind::target}) {
    if (key == to_string(kind)) return kind;
  }
  throw SchemaError("unknown column kind '" + std::string(name) + "'");
}

bool ColumnSpec::is_missing(std::string_view cell) const {
  return std::find(missing_sentinels.begin(), missing_sentinels.end(), cell) !=
         missing_sentinels.end();
}

Schema::Schema(std::vector<ColumnSpec> columns) : Schema(std::move(columns), true) {}

Schema::Schema(std::vector<ColumnSpec> columns, bool require_target)
    : columns_(std::move(columns)) {
  std::set<std::string> seen;
  std::size_t targets = 0;
  std::size_t usable = 0;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const auto& col = columns_[i];
    if (trim(col.name).empty()) throw SchemaError("column " + std::to_string(i) + " has no name");
    if (!seen.insert(fold(col.name)).second) {
      throw SchemaError("duplicate column name '" + col.name + "'");
    }
    if (col.kind == ColumnKind::target) {
      ++targets;
      target_ = i;
    } else if (col.kind != ColumnKind::identifier) {
      ++usable;
    }
  }
  has_target_ = targets == 1;
  if (require_target && targets != 1) {
    throw SchemaError("schema needs exactly one target column, found " + std::to_string(targets));
  }
  if (usable == 0) throw SchemaError("schema has no feature columns");
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  const std::string key = fold(name);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (fold(columns_[i].name) == key) return i;
  }
  return std::nullopt;
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

Schema Schema::with_target(std::string_view name) const {
  const auto idx = find(name);
  if (!idx) throw SchemaError("target column '" + std::string(name) + "' is not in the schema");
  auto cols = columns_;
  for (auto& c : cols) {
    if (c.kind == ColumnKind::target) c.kind = ColumnKind::numeric;
  }
  cols[*idx].kind = ColumnKind::target;
  return Schema(std::move(cols));
}

Schema Schema::without_target() const {
  auto cols = columns_;
  if (has_target_) cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(target_));
  return Schema(std::move(cols), false);
}

bool operator==(const Schema& a, const Schema& b) {
  if (a.columns_.size() != b.columns_.size()) return false;
  for (std::size_t i = 0; i < a.columns_.size(); ++i) {
    const auto& x = a.columns_[i];
    const auto& y = b.columns_[i];
    if (x.name != y.name || x.kind != y.kind || x.missing_sentinels != y.missing_sentinels) {
      return false;
    }
  }
  return true;
}

Schema default_schema() {
  return Schema({
      {"vidid", ColumnKind::identifier},
      {"views", ColumnKind::numeric},
      {"likes", ColumnKind::numeric},
      {"dislikes", ColumnKind::numeric},
      {"comment", ColumnKind::numeric},
      {"published", ColumnKind::date},
      {"duration", ColumnKind::duration},
      // Category letters run A-H, so "F" is a real value here.
      {"category", ColumnKind::categorical, {"", "NaN"}},
      {"adview", ColumnKind::target},
  });
}

Schema parse_schema_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("schema document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
    throw SchemaError("schema document needs a \"columns\" array");
  }
  std::vector<ColumnSpec> cols;
  for (const auto& entry : doc["columns"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("kind") || !entry["kind"].is_string()) {
      throw SchemaError("each schema column needs string \"name\" and \"kind\"");
    }
    ColumnSpec spec;
    spec.name = entry["name"].get<std::string>();
    spec.kind = column_kind_from_string(entry["kind"].get<std::string>());
    if (entry.contains("missing")) {
      if (!entry["missing"].is_array()) throw SchemaError("\"missing\" must be an array");
      spec.missing_sentinels.clear();
      for (const auto& s : entry["missing"]) {
        if (!s.is_string()) throw SchemaError("\"missing\" entries must be strings");
        spec.missing_sentinels.push_back(s.get<std::string>());
      }
    }
    cols.push_back(std::move(spec));
  }
  return Schema(std::move(cols));
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open schema file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_schema_json(text);
}

std::string schema_to_json(const Schema& schema) {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : schema.columns()) {
    cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}, {"missing", c.missing_sentinels}});
  }
  return nlohmann::json{{"columns", cols}}.dump(2);
}

RawTable parse_csv(std::string_view text, const Schema& schema, std::string source_name) {
  if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
    throw EncodingError(source_name + ": invalid UTF-8 at byte offset " + std::to_string(bad));
  }
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  auto records = split_records(text);
  if (records.empty()) throw SchemaError(source_name + ": missing header row");

  const auto& header = records.front().cells;
  if (header.size() != schema.size()) {
    throw SchemaError(source_name + ": header has " + std::to_string(header.size()) +
                      " columns, schema declares " + std::to_string(schema.size()));
  }
  // file column -> schema column
  std::vector<std::size_t> position(header.size());
  std::vector<bool> taken(schema.size(), false);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto idx = schema.find(header[i]);
    if (!idx) throw SchemaError(source_name + ": unexpected column '" + header[i] + "'");
    if (taken[*idx]) throw SchemaError(source_name + ": duplicate column '" + header[i] + "'");
    taken[*idx] = true;
    position[i] = *idx;
  }

  RawTable table;
  table.header = schema.names();
  table.source_name = std::move(source_name);
  table.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.cells.size() != header.size()) {
      throw ParseError(table.source_name + ": line " + std::to_string(rec.line) + " has " +
                           std::to_string(rec.cells.size()) + " cells, expected " +
                           std::to_string(header.size()),
                       rec.line);
    }
    std::vector<std::string> row(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) row[position[i]] = std::move(rec.cells[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

RawTable parse_csv(std::istream& in, const Schema& schema, std::string source_name) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, schema, std::move(source_name));
}

RawTable read_csv_file(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open data file '" + path + "'");
  return parse_csv(in, schema, path);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    write_cell(out, cells[i]);
  }
  // A lone empty cell would read back as a blank line.
  if (cells.size() == 1 && cells[0].empty()) out << "\"\"";
  out << '\n';
}

void write_csv(std::ostream& out, const RawTable& table) {
  write_csv_row(out, table.header);
  for (const auto& row : table.rows) write_csv_row(out, row);
}

std::string to_csv(const RawTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

DropResult drop_missing(const RawTable& table, const Schema& schema) {
  DropResult result;
  result.table.header = table.header;
  result.table.source_name = table.source_name;
  for (const auto& row : table.rows) {
    bool missing = false;
    for (std::size_t c = 0; c < row.size() && !missing; ++c) {
      missing = schema[c].is_missing(row[c]);
    }
    if (missing) {
      ++result.dropped;
    } else {
      result.table.rows.push_back(row);
    }
  }
  return result;
}

std::vector<ColumnSummary> summarize(const RawTable& table, const Schema& schema) {
  std::vector<ColumnSummary> out;
  out.reserve(schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const auto& spec = schema[c];
    ColumnSummary s;
    s.name = spec.name;
    s.kind = spec.kind;
    std::set<std::string_view> distinct;
    const bool numeric = spec.kind == ColumnKind::numeric || spec.kind == ColumnKind::target;
    for (const auto& row : table.rows) {
      const std::string& cell = row[c];
      if (spec.is_missing(cell)) continue;
      ++s.non_missing;
      distinct.insert(cell);
      if (!numeric) continue;
      if (const auto v = parse_number(cell)) {
        s.min = s.min ? std::min(*s.min, *v) : *v;
        s.max = s.max ? std::max(*s.max, *v) : *v;
      }
    }
    s.distinct = distinct.size();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace adview
