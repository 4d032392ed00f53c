// RFC-4180 reading and writing for Table.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tabmem/error.hpp"
#include "tabmem/table.hpp"

namespace tabmem {
namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

/// Splits CSV text into records. Quoted fields may span lines; "" inside a
/// quoted field is a literal quote.
class RecordReader {
 public:
  explicit RecordReader(std::string_view text) : text_(text) {}

  bool next(std::vector<Field>& out) {
    out.clear();
    if (pos_ >= text_.size()) return false;
    Field field;
    bool in_quotes = false;
    bool field_started = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.text.push_back('"');
            ++pos_;
          } else {
            in_quotes = false;
          }
        } else {
          field.text.push_back(c);
        }
        continue;
      }
      if (c == '"' && !field_started) {
        in_quotes = true;
        field.quoted = true;
        field_started = true;
      } else if (c == ',') {
        out.push_back(std::move(field));
        field = Field{};
        field_started = false;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      } else {
        field.text.push_back(c);
        field_started = true;
      }
    }
    ++line_;
    if (in_quotes) fail(ErrorCode::IoFailure, "unterminated quoted field at line " + std::to_string(line_));
    out.push_back(std::move(field));
    return true;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

bool blank(const std::vector<Field>& rec) { return rec.size() == 1 && rec[0].text.empty() && !rec[0].quoted; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string cell_context(std::size_t row, const std::string& col) {
  return "row " + std::to_string(row) + ", column '" + col + "'";
}

void append_field(std::string& out, std::string_view text) {
  const bool needs_quotes = text.empty() || text.find_first_of(",\"\r\n") != std::string_view::npos ||
                            text.front() == ' ' || text.back() == ' ';
  if (!needs_quotes) {
    out.append(text);
    return;
  }
  out.push_back('"');
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

Table parse_csv(std::string_view text, const Schema& schema) {
  RecordReader reader(text);
  std::vector<Field> record;
  if (!reader.next(record)) fail(ErrorCode::MissingColumn, "CSV has no header row");

  const std::size_t width = schema.width();
  std::unordered_map<std::string, std::size_t> schema_col;
  for (std::size_t c = 0; c < width; ++c) schema_col.emplace(schema.column_name(c), c);

  // file column -> schema column
  std::vector<std::size_t> mapping(record.size());
  std::vector<bool> covered(width, false);
  for (std::size_t i = 0; i < record.size(); ++i) {
    auto it = schema_col.find(record[i].text);
    if (it == schema_col.end()) fail(ErrorCode::MissingColumn, "header column '" + record[i].text + "' not in schema");
    if (covered[it->second]) fail(ErrorCode::MissingColumn, "header column '" + record[i].text + "' repeated");
    covered[it->second] = true;
    mapping[i] = it->second;
  }
  for (std::size_t c = 0; c < width; ++c)
    if (!covered[c]) fail(ErrorCode::MissingColumn, "schema column '" + schema.column_name(c) + "' absent from header");

  std::vector<Cell> cells;
  std::vector<Cell> row(width);
  std::size_t data_row = 0;
  while (reader.next(record)) {
    if (blank(record)) continue;
    ++data_row;
    if (record.size() != width)
      fail(ErrorCode::MissingValue, "row " + std::to_string(data_row) + " has " + std::to_string(record.size()) +
                                        " fields, expected " + std::to_string(width));
    for (std::size_t i = 0; i < record.size(); ++i) {
      const auto col = mapping[i];
      const auto& field = record[i];
      const auto& name = schema.column_name(col);
      if (schema.column_kind(col) == FeatureKind::Numerical) {
        const auto body = trim(field.text);
        if (body.empty()) fail(ErrorCode::MissingValue, cell_context(data_row, name));
        double value = 0.0;
        const auto* first = body.data();
        if (!body.empty() && body.front() == '+') ++first;
        auto [end, ec] = std::from_chars(first, body.data() + body.size(), value);
        if (ec != std::errc() || end != body.data() + body.size() || !std::isfinite(value))
          fail(ErrorCode::UnparsableNumeric, cell_context(data_row, name) + ": '" + field.text + "'");
        row[col] = value;
      } else {
        if (field.text.empty() && !field.quoted) fail(ErrorCode::MissingValue, cell_context(data_row, name));
        row[col] = Symbol::intern(field.text);
      }
    }
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return Table::from_cells(schema, std::move(cells));
}

Table load_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), schema);
}

std::string format_csv(const Table& table) {
  require_rows(table, "output");
  const auto& schema = table.schema();
  std::string out;
  for (std::size_t c = 0; c < table.width(); ++c) {
    if (c) out.push_back(',');
    append_field(out, schema.column_name(c));
  }
  out.push_back('\n');
  char buf[64];
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.width(); ++c) {
      if (c) out.push_back(',');
      const auto& cell = table.at(r, c);
      if (is_numeric(cell)) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, as_number(cell));
        out.append(buf, end);
      } else {
        append_field(out, as_symbol(cell).text());
      }
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  const auto text = format_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace tabmem
