#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tabmem {

enum class FeatureKind { Numerical, Categorical };

std::string_view to_string(FeatureKind kind);

/// Interned categorical value. Equality is id equality, which is exact,
/// case-sensitive string equality of the original text.
class Symbol {
 public:
  Symbol() = default;
  static Symbol intern(std::string_view text);

  std::uint32_t id() const noexcept { return id_; }
  std::string_view text() const;

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) noexcept { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// A single value: a finite double for numerical columns or a Symbol for
/// categorical ones.
using Cell = std::variant<double, Symbol>;

inline bool is_numeric(const Cell& c) { return std::holds_alternative<double>(c); }
inline double as_number(const Cell& c) { return std::get<double>(c); }
inline Symbol as_symbol(const Cell& c) { return std::get<Symbol>(c); }

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Numerical;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Ordered feature list plus an optional class-label column. The label is
/// always categorical, is stored as the last cell of each row, and is not
/// one of the M features that distances are computed over.
class Schema {
 public:
  Schema() = default;
  Schema(std::vector<Feature> features, std::optional<std::string> target);

  /// Parses {"features":[{"name":..,"kind":"numerical"|"categorical"}], "target": name|null}.
  /// A target listed among the features must be categorical and is moved out of them.
  static Schema from_json(std::string_view json_text);
  static Schema load(const std::filesystem::path& path);
  std::string to_json() const;

  const std::vector<Feature>& features() const noexcept { return features_; }
  const std::optional<std::string>& target() const noexcept { return target_; }
  bool has_target() const noexcept { return target_.has_value(); }

  /// M, the number of non-label features.
  std::size_t feature_count() const noexcept { return features_.size(); }
  /// Cells per row (features plus label when present).
  std::size_t width() const noexcept { return features_.size() + (target_ ? 1 : 0); }
  std::size_t target_column() const noexcept { return features_.size(); }

  const std::vector<std::size_t>& numerical() const noexcept { return numerical_; }
  const std::vector<std::size_t>& categorical() const noexcept { return categorical_; }

  /// Kind of column `col`, where col == feature_count() is the label.
  FeatureKind column_kind(std::size_t col) const;
  std::string column_name(std::size_t col) const;

  friend bool operator==(const Schema& a, const Schema& b) {
    return a.features_ == b.features_ && a.target_ == b.target_;
  }

 private:
  std::vector<Feature> features_;
  std::optional<std::string> target_;
  std::vector<std::size_t> numerical_;
  std::vector<std::size_t> categorical_;
};

/// Immutable row-major table of cells that all conform to a schema.
class Table {
 public:
  Table() = default;
  Table(Schema schema, std::vector<std::vector<Cell>> rows);
  /// Takes row-major cells; size must be a multiple of schema.width().
  static Table from_cells(Schema schema, std::vector<Cell> cells);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t row_count() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_ == 0; }
  std::size_t width() const noexcept { return schema_.width(); }

  std::span<const Cell> row(std::size_t i) const { return {cells_.data() + i * width(), width()}; }
  const Cell& at(std::size_t row, std::size_t col) const { return cells_[row * width() + col]; }
  Symbol label(std::size_t row) const;

  std::vector<double> numeric_column(std::size_t col) const;
  std::vector<Symbol> symbol_column(std::size_t col) const;

  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// New table with the given rows of this one, in order.
  Table select(std::span<const std::size_t> indices) const;
  /// Rows of `a` followed by rows of `b`; schemas must match.
  static Table concat(const Table& a, const Table& b);

  friend bool operator==(const Table& a, const Table& b) {
    return a.schema_ == b.schema_ && a.cells_ == b.cells_;
  }

 private:
  Schema schema_;
  std::vector<Cell> cells_;
  std::size_t rows_ = 0;
};

/// Throws SchemaMismatch unless both tables carry the same schema.
void require_same_schema(const Table& a, const Table& b);
/// Throws EmptyTable when the table has no rows.
void require_rows(const Table& t, std::string_view what);

Table load_csv(const std::filesystem::path& path, const Schema& schema);
Table parse_csv(std::string_view text, const Schema& schema);
void write_csv(const Table& table, const std::filesystem::path& path);
std::string format_csv(const Table& table);

/// Shuffled disjoint partition. Part k gets floor(fractions[k] * n) rows and
/// the remainder goes to the first part.
std::vector<Table> split(const Table& table, std::span<const double> fractions, std::uint64_t seed);

}  // namespace tabmem
