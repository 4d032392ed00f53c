#include "tabmem/table.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "tabmem/error.hpp"
#include "tabmem/rng.hpp"

namespace tabmem {

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::Numerical ? "numerical" : "categorical";
}

// ---------------------------------------------------------------------------
// Symbol interning

namespace {

struct SymbolPool {
  std::shared_mutex mutex;
  std::deque<std::string> texts{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> ids{{std::string_view(texts.front()), 0}};
};

SymbolPool& pool() {
  static SymbolPool p;
  return p;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  auto& p = pool();
  {
    std::shared_lock lock(p.mutex);
    if (auto it = p.ids.find(text); it != p.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(p.mutex);
  if (auto it = p.ids.find(text); it != p.ids.end()) return Symbol(it->second);
  const auto id = static_cast<std::uint32_t>(p.texts.size());
  p.texts.emplace_back(text);
  p.ids.emplace(std::string_view(p.texts.back()), id);
  return Symbol(id);
}

std::string_view Symbol::text() const {
  auto& p = pool();
  std::shared_lock lock(p.mutex);
  return p.texts[id_];
}

// ---------------------------------------------------------------------------
// Schema

Schema::Schema(std::vector<Feature> features, std::optional<std::string> target)
    : features_(std::move(features)), target_(std::move(target)) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.name.empty()) fail(ErrorCode::InvalidSchema, "feature name must be non-empty");
    if (!seen.insert(f.name).second) fail(ErrorCode::InvalidSchema, "duplicate feature name '" + f.name + "'");
    (f.kind == FeatureKind::Numerical ? numerical_ : categorical_).push_back(i);
  }
  if (target_) {
    if (target_->empty()) fail(ErrorCode::InvalidSchema, "target name must be non-empty");
    if (seen.contains(*target_)) fail(ErrorCode::InvalidSchema, "target '" + *target_ + "' duplicates a feature");
  }
}

Schema Schema::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidSchema, std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
    fail(ErrorCode::InvalidSchema, "schema needs a \"features\" array");

  std::optional<std::string> target;
  if (doc.contains("target") && !doc["target"].is_null()) {
    if (!doc["target"].is_string()) fail(ErrorCode::InvalidSchema, "\"target\" must be a string or null");
    target = doc["target"].get<std::string>();
  }

  std::vector<Feature> features;
  for (const auto& item : doc["features"]) {
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string() || !item.contains("kind") ||
        !item["kind"].is_string())
      fail(ErrorCode::InvalidSchema, "each feature needs string \"name\" and \"kind\"");
    const auto name = item["name"].get<std::string>();
    const auto kind_text = item["kind"].get<std::string>();
    FeatureKind kind;
    if (kind_text == "numerical") {
      kind = FeatureKind::Numerical;
    } else if (kind_text == "categorical") {
      kind = FeatureKind::Categorical;
    } else {
      fail(ErrorCode::InvalidSchema, "unknown kind '" + kind_text + "' for feature '" + name + "'");
    }
    if (target && name == *target) {
      if (kind != FeatureKind::Categorical)
        fail(ErrorCode::InvalidSchema, "target '" + name + "' must be categorical");
      continue;
    }
    features.push_back({name, kind});
  }
  return Schema(std::move(features), std::move(target));
}

Schema Schema::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open schema file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string Schema::to_json() const {
  nlohmann::json doc;
  doc["features"] = nlohmann::json::array();
  for (const auto& f : features_) doc["features"].push_back({{"name", f.name}, {"kind", to_string(f.kind)}});
  doc["target"] = target_ ? nlohmann::json(*target_) : nlohmann::json(nullptr);
  return doc.dump();
}

FeatureKind Schema::column_kind(std::size_t col) const {
  if (col < features_.size()) return features_[col].kind;
  if (target_ && col == features_.size()) return FeatureKind::Categorical;
  fail(ErrorCode::InvalidArgument, "column index out of range");
}

std::string Schema::column_name(std::size_t col) const {
  if (col < features_.size()) return features_[col].name;
  if (target_ && col == features_.size()) return *target_;
  fail(ErrorCode::InvalidArgument, "column index out of range");
}

// ---------------------------------------------------------------------------
// Table

namespace {

void check_cell(const Schema& schema, const Cell& cell, std::size_t row, std::size_t col) {
  const auto kind = schema.column_kind(col);
  if (kind == FeatureKind::Numerical) {
    if (!is_numeric(cell))
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(row) + ": category in numerical column '" +
                                          schema.column_name(col) + "'");
    if (!std::isfinite(as_number(cell)))
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(row) + ": non-finite value in column '" +
                                          schema.column_name(col) + "'");
  } else if (is_numeric(cell)) {
    fail(ErrorCode::SchemaMismatch, "row " + std::to_string(row) + ": number in categorical column '" +
                                        schema.column_name(col) + "'");
  }
}

}  // namespace

Table::Table(Schema schema, std::vector<std::vector<Cell>> rows) : schema_(std::move(schema)), rows_(rows.size()) {
  const auto w = schema_.width();
  cells_.reserve(rows.size() * w);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != w)
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                          " cells, expected " + std::to_string(w));
    for (std::size_t c = 0; c < w; ++c) {
      check_cell(schema_, rows[r][c], r, c);
      cells_.push_back(rows[r][c]);
    }
  }
}

Table Table::from_cells(Schema schema, std::vector<Cell> cells) {
  const auto w = schema.width();
  if (w == 0 ? !cells.empty() : cells.size() % w != 0)
    fail(ErrorCode::SchemaMismatch, "cell count is not a multiple of the row width");
  Table t;
  t.rows_ = w == 0 ? 0 : cells.size() / w;
  for (std::size_t i = 0; i < cells.size(); ++i) check_cell(schema, cells[i], i / w, i % w);
  t.schema_ = std::move(schema);
  t.cells_ = std::move(cells);
  return t;
}

Symbol Table::label(std::size_t row) const {
  if (!schema_.has_target()) fail(ErrorCode::NoTarget, "table has no target column");
  return as_symbol(at(row, schema_.target_column()));
}

std::vector<double> Table::numeric_column(std::size_t col) const {
  if (schema_.column_kind(col) != FeatureKind::Numerical)
    fail(ErrorCode::SchemaMismatch, "column '" + schema_.column_name(col) + "' is not numerical");
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = as_number(at(r, col));
  return out;
}

std::vector<Symbol> Table::symbol_column(std::size_t col) const {
  if (schema_.column_kind(col) != FeatureKind::Categorical)
    fail(ErrorCode::SchemaMismatch, "column '" + schema_.column_name(col) + "' is not categorical");
  std::vector<Symbol> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = as_symbol(at(r, col));
  return out;
}

Table Table::select(std::span<const std::size_t> indices) const {
  std::vector<Cell> cells;
  cells.reserve(indices.size() * width());
  for (auto i : indices) {
    if (i >= rows_) fail(ErrorCode::InvalidArgument, "row index out of range");
    auto r = row(i);
    cells.insert(cells.end(), r.begin(), r.end());
  }
  Table t;
  t.schema_ = schema_;
  t.cells_ = std::move(cells);
  t.rows_ = indices.size();
  return t;
}

Table Table::concat(const Table& a, const Table& b) {
  require_same_schema(a, b);
  Table t;
  t.schema_ = a.schema_;
  t.cells_ = a.cells_;
  t.cells_.insert(t.cells_.end(), b.cells_.begin(), b.cells_.end());
  t.rows_ = a.rows_ + b.rows_;
  return t;
}

void require_same_schema(const Table& a, const Table& b) {
  if (!(a.schema() == b.schema())) fail(ErrorCode::SchemaMismatch, "tables have different schemas");
}

void require_rows(const Table& t, std::string_view what) {
  if (t.empty()) fail(ErrorCode::EmptyTable, std::string(what) + " table has no rows");
}

// ---------------------------------------------------------------------------
// split

std::vector<Table> split(const Table& table, std::span<const double> fractions, std::uint64_t seed) {
  if (fractions.empty()) fail(ErrorCode::BadFractions, "no fractions given");
  double total = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0) || !std::isfinite(f)) fail(ErrorCode::BadFractions, "fractions must be positive");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::BadFractions, "fractions must sum to 1");

  const std::size_t n = table.row_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with our own index draw so the permutation is stable across standard libraries.
  Rng rng(stream_seed(seed, 0));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  std::vector<std::size_t> sizes(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    sizes[k] = static_cast<std::size_t>(std::floor(fractions[k] * static_cast<double>(n) + 1e-9));
    assigned += sizes[k];
  }
  if (assigned > n) fail(ErrorCode::BadFractions, "fractions over-allocate rows");
  sizes[0] += n - assigned;

  std::vector<Table> parts;
  std::size_t offset = 0;
  for (auto size : sizes) {
    parts.push_back(table.select(std::span(order).subspan(offset, size)));
    offset += size;
  }
  return parts;
}

}  // namespace tabmem
