#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tabmem/error.hpp"
#include "tabmem/table.hpp"

using namespace tabmem;
using fixtures::num;
using fixtures::sym;

namespace {

Schema people_schema() {
  return Schema::from_json(R"({"features":[{"name":"age","kind":"numerical"},
    {"name":"city","kind":"categorical"},{"name":"y","kind":"categorical"}],"target":"y"})");
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

std::vector<std::string> sorted_rows(const Table& t) {
  std::vector<std::string> out;
  const auto text = format_csv(t);
  std::size_t pos = text.find('\n') + 1;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("schema json moves the target out of the features") {
  const auto s = people_schema();
  CHECK(s.feature_count() == 2);
  CHECK(s.width() == 3);
  CHECK(s.target() == std::optional<std::string>("y"));
  CHECK(s.numerical() == std::vector<std::size_t>{0});
  CHECK(s.categorical() == std::vector<std::size_t>{1});
  CHECK(Schema::from_json(s.to_json()) == s);
}

TEST_CASE("schema rejects a numerical target and duplicate names") {
  CHECK(code_of([] {
          Schema::from_json(R"({"features":[{"name":"a","kind":"numerical"}],"target":"a"})");
        }) == ErrorCode::InvalidSchema);
  CHECK(code_of([] {
          Schema::from_json(
              R"({"features":[{"name":"a","kind":"numerical"},{"name":"a","kind":"categorical"}]})");
        }) == ErrorCode::InvalidSchema);
  CHECK(code_of([] { Schema::from_json(R"({"features":[{"name":"a","kind":"ordinal"}]})"); }) ==
        ErrorCode::InvalidSchema);
}

TEST_CASE("csv with three rows parses") {
  const auto t = parse_csv("age,city,y\n31,Paris,yes\n45.5,Oslo,no\n22,Paris,no\n", people_schema());
  CHECK(t.row_count() == 3);
  CHECK(std::get<double>(t.at(1, 0)) == 45.5);
  CHECK(t.label(0) == Symbol::intern("yes"));
}

TEST_CASE("csv header may list columns in any order") {
  const auto t = parse_csv("city,y,age\nParis,yes,31\n", people_schema());
  CHECK(std::get<double>(t.at(0, 0)) == 31.0);
  CHECK(std::get<Symbol>(t.at(0, 1)) == Symbol::intern("Paris"));
}

TEST_CASE("csv contract errors") {
  const auto s = people_schema();
  CHECK(code_of([&] { parse_csv("age,town,y\n1,a,b\n", s); }) == ErrorCode::MissingColumn);
  CHECK(code_of([&] { parse_csv("age,y\n1,b\n", s); }) == ErrorCode::MissingColumn);
  CHECK(code_of([&] { parse_csv("age,city,y\nabc,a,b\n", s); }) == ErrorCode::UnparsableNumeric);
  CHECK(code_of([&] { parse_csv("age,city,y\nnan,a,b\n", s); }) == ErrorCode::UnparsableNumeric);
  CHECK(code_of([&] { parse_csv("age,city,y\n,a,b\n", s); }) == ErrorCode::MissingValue);
  CHECK(code_of([&] { parse_csv("age,city,y\n1,a\n", s); }) == ErrorCode::MissingValue);
}

TEST_CASE("csv write then load gives the same table") {
  Rng rng(3);
  const auto schema = fixtures::mixed_schema(3, 2);
  const auto t = fixtures::random_table(schema, 40, rng);
  CHECK(parse_csv(format_csv(t), schema) == t);

  const auto path = std::filesystem::temp_directory_path() / "tabmem_table_roundtrip.csv";
  write_csv(t, path);
  CHECK(load_csv(path, schema) == t);
  std::filesystem::remove(path);
}

TEST_CASE("csv quotes symbols with separators and round-trips them") {
  const auto s = people_schema();
  const Table t(s, {{num(1.0), sym("Paris, France"), sym("yes")},
                    {num(2.0), sym("say \"hi\""), sym("no")},
                    {num(3.0), sym("two\nlines"), sym("no")},
                    {num(4.0), sym(""), sym(" padded ")}});
  const auto text = format_csv(t);
  CHECK(text.find("\"Paris, France\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(parse_csv(text, s) == t);
}

TEST_CASE("csv accepts CRLF line endings") {
  const auto t = parse_csv("age,city,y\r\n1,a,b\r\n2,c,d\r\n", people_schema());
  CHECK(t.row_count() == 2);
  CHECK(std::get<Symbol>(t.at(1, 2)) == Symbol::intern("d"));
}

TEST_CASE("writing an empty table is an error") {
  const Table empty(people_schema(), {});
  CHECK(code_of([&] { format_csv(empty); }) == ErrorCode::EmptyTable);
}

TEST_CASE("split 8:1:1 of ten rows") {
  Rng rng(1);
  const auto t = fixtures::random_table(fixtures::mixed_schema(2, 1), 10, rng);
  const std::vector<double> fr{0.8, 0.1, 0.1};
  const auto parts = split(t, fr, 7);
  REQUIRE(parts.size() == 3);
  CHECK(parts[0].row_count() == 8);
  CHECK(parts[1].row_count() == 1);
  CHECK(parts[2].row_count() == 1);

  auto all = Table::concat(Table::concat(parts[0], parts[1]), parts[2]);
  CHECK(sorted_rows(all) == sorted_rows(t));
  CHECK(split(t, fr, 7)[0] == parts[0]);
}

TEST_CASE("split with a single fraction keeps the multiset of rows") {
  Rng rng(2);
  const auto t = fixtures::random_table(fixtures::mixed_schema(2, 1), 25, rng);
  const std::vector<double> fr{1.0};
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto parts = split(t, fr, seed);
    REQUIRE(parts.size() == 1);
    CHECK(sorted_rows(parts[0]) == sorted_rows(t));
  }
}

TEST_CASE("split partition sizes always cover the table") {
  Rng rng(5);
  const auto t = fixtures::random_table(fixtures::mixed_schema(1, 1), 37, rng);
  const std::vector<double> fr{0.5, 0.3, 0.2};
  const auto parts = split(t, fr, 11);
  std::size_t total = 0;
  for (const auto& p : parts) total += p.row_count();
  CHECK(total == 37);
  CHECK(code_of([&] {
          const std::vector<double> bad{0.5, 0.6};
          split(t, bad, 1);
        }) == ErrorCode::BadFractions);
}
