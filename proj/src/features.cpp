#include "adview/features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>

#include "adview/error.hpp"

namespace adview {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Reads a run of digits starting at `pos`; returns false if there is none.
bool read_uint(std::string_view s, std::size_t& pos, std::int64_t& value) {
  const std::size_t start = pos;
  while (pos < s.size() && is_digit(s[pos])) ++pos;
  if (pos == start) return false;
  auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + pos, value);
  return ec == std::errc{} && ptr == s.data() + pos;
}

[[noreturn]] void bad_duration(std::string_view text) {
  throw ParseError("unrecognized duration '" + std::string(text) + "'", 0);
}

bool is_feature(ColumnKind kind) {
  return kind != ColumnKind::identifier && kind != ColumnKind::target;
}

}  // namespace

LabelEncoder::LabelEncoder(std::string column_name, std::vector<std::string> sorted_categories)
    : column_(std::move(column_name)), categories_(std::move(sorted_categories)) {
  if (!std::is_sorted(categories_.begin(), categories_.end()) ||
      std::adjacent_find(categories_.begin(), categories_.end()) != categories_.end()) {
    throw InputError("label encoder '" + column_ + "': categories must be sorted and distinct");
  }
}

LabelEncoder LabelEncoder::fit(std::string column_name, std::span<const std::string> cells) {
  if (cells.empty()) {
    throw InputError("cannot fit label encoder '" + column_name + "' on no values");
  }
  std::set<std::string> distinct(cells.begin(), cells.end());
  return LabelEncoder(std::move(column_name), {distinct.begin(), distinct.end()});
}

std::optional<std::int64_t> LabelEncoder::find(std::string_view value) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), value);
  if (it == categories_.end() || *it != value) return std::nullopt;
  return static_cast<std::int64_t>(it - categories_.begin());
}

std::int64_t LabelEncoder::encode(std::string_view value) const {
  if (auto code = find(value)) return *code;
  throw UnknownCategoryError("unknown category '" + std::string(value) + "' in column '" +
                             column_ + "'");
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < text.size() && is_digit(text[i])) ++i, ++digits;
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && is_digit(text[i])) ++i, ++digits;
  }
  if (digits == 0) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    const std::size_t exp_start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    if (i == exp_start) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;

  // from_chars rejects a leading '+'.
  std::string_view body = text;
  if (body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc{} || ptr != body.data() + body.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::int64_t parse_duration(std::string_view raw) {
  const std::string_view text = trim(raw);
  if (text.starts_with("PT")) {
    std::size_t pos = 2;
    std::int64_t total = 0;
    int last_unit = -1;  // 0 = H, 1 = M, 2 = S
    if (pos == text.size()) bad_duration(raw);
    while (pos < text.size()) {
      std::int64_t n = 0;
      if (!read_uint(text, pos, n) || pos >= text.size()) bad_duration(raw);
      int unit = 0;
      std::int64_t scale = 0;
      switch (text[pos]) {
        case 'H': unit = 0; scale = 3600; break;
        case 'M': unit = 1; scale = 60; break;
        case 'S': unit = 2; scale = 1; break;
        default: bad_duration(raw);
      }
      if (unit <= last_unit) bad_duration(raw);
      last_unit = unit;
      total += n * scale;
      ++pos;
    }
    return total;
  }

  // HH:MM:SS
  std::size_t pos = 0;
  std::int64_t h = 0, m = 0, s = 0;
  if (!read_uint(text, pos, h) || pos >= text.size() || text[pos++] != ':') bad_duration(raw);
  const std::size_t m_start = pos;
  if (!read_uint(text, pos, m) || pos - m_start != 2 || pos >= text.size() || text[pos++] != ':') {
    bad_duration(raw);
  }
  const std::size_t s_start = pos;
  if (!read_uint(text, pos, s) || pos - s_start != 2 || pos != text.size()) bad_duration(raw);
  if (m >= 60 || s >= 60) bad_duration(raw);
  return h * 3600 + m * 60 + s;
}

std::int64_t parse_date(std::string_view raw) {
  const std::string_view text = trim(raw);
  auto bad = [&]() -> ParseError {
    return ParseError("unrecognized date '" + std::string(raw) + "' (expected YYYY-MM-DD)", 0);
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  std::int64_t y = 0, mo = 0, d = 0;
  std::size_t pos = 0;
  if (!read_uint(text, pos, y) || pos != 4) throw bad();
  pos = 5;
  if (!read_uint(text, pos, mo) || pos != 7) throw bad();
  pos = 8;
  if (!read_uint(text, pos, d) || pos != 10) throw bad();

  using namespace std::chrono;
  const year_month_day ymd{year{static_cast<int>(y)}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw bad();
  return sys_days{ymd}.time_since_epoch().count();
}

std::vector<LabelEncoder> fit_label_encoders(const RawTable& table, const Schema& schema) {
  std::vector<LabelEncoder> out;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].kind != ColumnKind::categorical) continue;
    std::vector<std::string> cells;
    cells.reserve(table.rows.size());
    for (const auto& row : table.rows) cells.push_back(row[c]);
    out.push_back(LabelEncoder::fit(schema[c].name, cells));
  }
  return out;
}

std::vector<std::string> feature_names(const Schema& schema) {
  std::vector<std::string> names;
  for (const auto& col : schema.columns()) {
    if (is_feature(col.kind)) names.push_back(col.name);
  }
  return names;
}

void encode_row(std::span<const std::string> cells, const Schema& schema,
                std::span<const LabelEncoder> encoders, std::span<double> out,
                std::string_view row_label) {
  std::size_t f = 0;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    const auto& col = schema[c];
    if (!is_feature(col.kind)) continue;
    const std::string& cell = cells[c];
    auto where = [&] {
      return "row " + std::string(row_label) + ", column '" + col.name + "': ";
    };
    try {
      switch (col.kind) {
        case ColumnKind::numeric: {
          const auto v = parse_number(cell);
          if (!v) throw InputError("not a number: '" + cell + "'");
          out[f] = *v;
          break;
        }
        case ColumnKind::categorical: {
          auto enc = std::find_if(encoders.begin(), encoders.end(), [&](const LabelEncoder& e) {
            return e.column_name() == col.name;
          });
          if (enc == encoders.end()) throw InputError("no label encoder fitted");
          out[f] = static_cast<double>(enc->encode(cell));
          break;
        }
        case ColumnKind::date:
          out[f] = static_cast<double>(parse_date(cell));
          break;
        case ColumnKind::duration:
          out[f] = static_cast<double>(parse_duration(cell));
          break;
        default:
          break;
      }
    } catch (const UnknownCategoryError& e) {
      throw UnknownCategoryError(where() + e.what());
    } catch (const InputError& e) {
      throw InputError(where() + e.what());
    }
    ++f;
  }
}

EncodedTable encode_table(const RawTable& table, const Schema& schema,
                          std::span<const LabelEncoder> encoders) {
  EncodedTable result;
  result.features.feature_names = feature_names(schema);
  const std::size_t d = result.features.feature_names.size();
  const std::size_t n = table.rows.size();
  result.features.values = Matrix(n, d);
  result.target.name = schema.target().name;
  result.target.values.resize(n);
  const std::size_t t = schema.target_index();

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    // 1-based data-row label; the header is row 0.
    const std::string label = std::to_string(r + 1);
    encode_row(row, schema, encoders, result.features.values.row(r), label);
    const auto y = parse_number(row[t]);
    if (!y) {
      throw InputError("row " + label + ", column '" + schema[t].name + "': not a number: '" +
                       row[t] + "'");
    }
    result.target.values[r] = *y;
  }
  return result;
}

}  // namespace adview
