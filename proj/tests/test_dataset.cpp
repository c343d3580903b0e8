#include <sstream>

#include <gtest/gtest.h>

#include "adview/dataset.hpp"
#include "adview/error.hpp"
#include "adview/rng.hpp"

namespace adview {
namespace {

const char* kHeader = "vidid,views,likes,dislikes,comment,published,duration,category,adview\n";

TEST(DefaultSchema, HasTheNineAttributes) {
  const auto schema = default_schema();
  EXPECT_EQ(schema.size(), 9u);
  EXPECT_EQ(schema.target().name, "adview");
  EXPECT_EQ(schema[0].kind, ColumnKind::identifier);
  EXPECT_TRUE(schema[1].is_missing("F"));
  EXPECT_TRUE(schema[1].is_missing("NaN"));
  EXPECT_TRUE(schema[1].is_missing(""));
  EXPECT_FALSE(schema[*schema.find("category")].is_missing("F"));
}

TEST(Schema, RejectsInvalidDeclarations) {
  EXPECT_THROW(Schema({{"a", ColumnKind::numeric}, {"A", ColumnKind::target}}), SchemaError);
  EXPECT_THROW(Schema({{"a", ColumnKind::numeric}}), SchemaError);
  EXPECT_THROW(Schema({{"a", ColumnKind::target}, {"b", ColumnKind::target}}), SchemaError);
  EXPECT_THROW(Schema({{"id", ColumnKind::identifier}, {"y", ColumnKind::target}}), SchemaError);
  EXPECT_THROW(Schema({{" ", ColumnKind::numeric}, {"y", ColumnKind::target}}), SchemaError);
}

TEST(Schema, JsonRoundTripAndTargetOverride) {
  const auto schema = default_schema();
  EXPECT_EQ(parse_schema_json(schema_to_json(schema)), schema);
  const auto moved = schema.with_target("likes");
  EXPECT_EQ(moved.target().name, "likes");
  EXPECT_EQ(moved[*moved.find("adview")].kind, ColumnKind::numeric);
  EXPECT_THROW(schema.with_target("nope"), SchemaError);
  EXPECT_THROW(parse_schema_json("{\"columns\": [{\"name\": \"a\", \"kind\": \"weird\"}]}"),
               SchemaError);
  EXPECT_THROW(parse_schema_json("not json"), SchemaError);
}

TEST(ParseCsv, HeaderOnlyGivesEmptyTable) {
  const auto t = parse_csv(kHeader, default_schema());
  EXPECT_EQ(t.row_count(), 0u);
  EXPECT_EQ(t.header, default_schema().names());
}

TEST(ParseCsv, TwoWellFormedRows) {
  const std::string text = std::string(kHeader) +
                           "v1,100,10,1,5,2017-01-01,PT1M,A,3\n"
                           "v2,200,20,2,6,2017-01-02,PT2M,B,4\n";
  const auto t = parse_csv(text, default_schema());
  ASSERT_EQ(t.row_count(), 2u);
  for (const auto& row : t.rows) EXPECT_EQ(row.size(), 9u);
  EXPECT_EQ(t.rows[1][0], "v2");
  EXPECT_EQ(t.rows[1][8], "4");
}

TEST(ParseCsv, ArityViolationNamesTheLine) {
  const std::string text = std::string(kHeader) +
                           "v1,100,10,1,5,2017-01-01,PT1M,A,3\n"
                           "v2,200,20,2,6,2017-01-02,PT2M,B\n";
  try {
    parse_csv(text, default_schema());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseCsv, HeaderMatchIsCaseInsensitiveAndReordered) {
  const std::string text =
      " ADVIEW ,VidId,views,likes,dislikes,comment,published,duration,category\n"
      "7,v1,100,10,1,5,2017-01-01,PT1M,A\n";
  const auto t = parse_csv(text, default_schema());
  EXPECT_EQ(t.header, default_schema().names());
  EXPECT_EQ(t.rows[0][0], "v1");
  EXPECT_EQ(t.rows[0][8], "7");
}

TEST(ParseCsv, SchemaMismatchIsASchemaError) {
  EXPECT_THROW(parse_csv("a,b\n1,2\n", default_schema()), SchemaError);
  const std::string renamed =
      "vidid,views,likes,dislikes,comments,published,duration,category,adview\n";
  EXPECT_THROW(parse_csv(renamed, default_schema()), SchemaError);
  EXPECT_THROW(parse_csv("", default_schema()), SchemaError);
}

TEST(ParseCsv, InvalidUtf8IsAnEncodingError) {
  const std::string text = std::string(kHeader) + "v\xff,1,1,1,1,2017-01-01,PT1M,A,3\n";
  EXPECT_THROW(parse_csv(text, default_schema()), EncodingError);
  // Overlong encoding of '/'.
  EXPECT_THROW(parse_csv(std::string(kHeader) + "\xc0\xaf", default_schema()), EncodingError);
}

TEST(ParseCsv, Rfc4180Quoting) {
  const Schema s({{"name", ColumnKind::categorical}, {"y", ColumnKind::target}});
  const auto t = parse_csv("name,y\r\n\"a, \"\"b\"\"\nc\",1\r\n\"\",2\r\n", s);
  ASSERT_EQ(t.row_count(), 2u);
  EXPECT_EQ(t.rows[0][0], "a, \"b\"\nc");
  EXPECT_EQ(t.rows[1][0], "");
  EXPECT_THROW(parse_csv("name,y\n\"open,1\n", s), ParseError);
  EXPECT_THROW(parse_csv("name,y\nab\"c,1\n", s), ParseError);
}

TEST(ParseCsv, BomAndBlankLinesAreTolerated) {
  const Schema s({{"x", ColumnKind::numeric}, {"y", ColumnKind::target}});
  const auto t = parse_csv("\xEF\xBB\xBFx,y\n1,2\n\n3,4\n", s);
  EXPECT_EQ(t.row_count(), 2u);
}

// Random well-formed tables survive write -> parse unchanged.
TEST(ParseCsv, RoundTripProperty) {
  const Schema s({{"a", ColumnKind::categorical}, {"b", ColumnKind::numeric},
                  {"c", ColumnKind::target}});
  const std::string alphabet = "ab,\"\n\r x1\xc3\xa9";
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    RawTable t;
    t.header = s.names();
    const auto rows = rng.below(6);
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < 3; ++c) {
        std::string cell;
        const auto len = rng.below(5);
        for (std::uint64_t k = 0; k < len; ++k) {
          const auto pick = rng.below(alphabet.size() - 1);
          // Keep the two-byte UTF-8 sequence intact.
          if (alphabet[pick] == '\xc3' || alphabet[pick] == '\xa9') {
            cell += "\xc3\xa9";
          } else {
            cell += alphabet[pick];
          }
        }
        row.push_back(cell);
      }
      t.rows.push_back(row);
    }
    const auto back = parse_csv(to_csv(t), s);
    ASSERT_EQ(back.header, t.header);
    ASSERT_EQ(back.rows, t.rows) << to_csv(t);
  }
}

RawTable five_rows_with_missing_views() {
  const std::string text = std::string(kHeader) +
                           "v1,100,10,1,5,2017-01-01,PT1M,A,3\n"
                           "v2,200,20,2,6,2017-01-02,PT2M,B,4\n"
                           "v3,F,30,3,7,2017-01-03,PT3M,C,5\n"
                           "v4,400,40,4,8,2017-01-04,PT4M,F,6\n"
                           "v5,500,50,5,9,2017-01-05,PT5M,A,7\n";
  return parse_csv(text, default_schema());
}

TEST(DropMissing, NoSentinelsIsIdentity) {
  auto t = five_rows_with_missing_views();
  t.rows.erase(t.rows.begin() + 2);
  const auto [out, dropped] = drop_missing(t, default_schema());
  EXPECT_EQ(dropped, 0u);
  EXPECT_EQ(out, t);
}

TEST(DropMissing, DropsTheRowWithASentinel) {
  const auto t = five_rows_with_missing_views();
  const auto [out, dropped] = drop_missing(t, default_schema());
  EXPECT_EQ(dropped, 1u);
  ASSERT_EQ(out.row_count(), 4u);
  const std::vector<std::string> ids{"v1", "v2", "v4", "v5"};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out.rows[i][0], ids[i]);
}

TEST(DropMissing, AllRowsMissing) {
  auto t = five_rows_with_missing_views();
  for (auto& row : t.rows) row[2] = "NaN";
  const auto [out, dropped] = drop_missing(t, default_schema());
  EXPECT_EQ(out.row_count(), 0u);
  EXPECT_EQ(dropped, 5u);
}

TEST(DropMissing, IdempotentOrderPreservingAndCounted) {
  Rng rng(9);
  const std::vector<std::string> cells{"1", "2", "", "F", "NaN", "x"};
  const auto schema = default_schema();
  for (int trial = 0; trial < 100; ++trial) {
    RawTable t;
    t.header = schema.names();
    const auto n = rng.below(20);
    for (std::uint64_t r = 0; r < n; ++r) {
      std::vector<std::string> row(9);
      row[0] = "id" + std::to_string(r);
      for (std::size_t c = 1; c < 9; ++c) row[c] = cells[rng.below(cells.size())];
      t.rows.push_back(row);
    }
    const auto once = drop_missing(t, schema);
    const auto twice = drop_missing(once.table, schema);
    EXPECT_EQ(twice.table, once.table);
    EXPECT_EQ(twice.dropped, 0u);
    EXPECT_EQ(once.table.row_count() + once.dropped, t.row_count());
    // Surviving ids appear in ascending original order.
    std::size_t last = 0;
    for (const auto& row : once.table.rows) {
      const auto id = std::stoul(row[0].substr(2));
      EXPECT_TRUE(id >= last);
      last = id;
    }
  }
}

TEST(Summarize, CountsAndKindGatedExtrema) {
  const Schema s({{"x", ColumnKind::numeric}, {"c", ColumnKind::categorical},
                  {"y", ColumnKind::target}});
  RawTable t;
  t.header = s.names();
  t.rows = {{"1", "a", "0"}, {"2", "b", "0"}, {"2", "a", "0"}};
  const auto sum = summarize(t, s);
  ASSERT_EQ(sum.size(), 3u);
  EXPECT_EQ(sum[0].non_missing, 3u);
  EXPECT_EQ(sum[0].distinct, 2u);
  EXPECT_EQ(sum[0].min, 1.0);
  EXPECT_EQ(sum[0].max, 2.0);
  EXPECT_EQ(sum[1].distinct, 2u);
  EXPECT_FALSE(sum[1].min.has_value());
  EXPECT_FALSE(sum[1].max.has_value());
}

TEST(Summarize, EmptyTable) {
  const auto schema = default_schema();
  RawTable t;
  t.header = schema.names();
  for (const auto& s : summarize(t, schema)) {
    EXPECT_EQ(s.non_missing, 0u);
    EXPECT_EQ(s.distinct, 0u);
    EXPECT_FALSE(s.min.has_value());
  }
}

}  // namespace
}  // namespace adview
