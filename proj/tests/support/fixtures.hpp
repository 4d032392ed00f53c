#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <cstdint>
#include <string>
#include <vector>

#include "tabmem/distance.hpp"
#include "tabmem/rng.hpp"
#include "tabmem/table.hpp"

namespace fixtures {

using tabmem::Cell;
using tabmem::Feature;
using tabmem::FeatureKind;
using tabmem::Schema;
using tabmem::Symbol;
using tabmem::Table;

inline Cell sym(const std::string& s) { return Symbol::intern(s); }
inline Cell num(double v) { return v; }

/// Schema with `n_num` numerical columns x0.., `n_cat` categorical c0.., and an optional label y.
inline Schema mixed_schema(std::size_t n_num, std::size_t n_cat, bool with_label = true) {
  std::vector<Feature> f;
  for (std::size_t i = 0; i < n_num; ++i) f.push_back({"x" + std::to_string(i), FeatureKind::Numerical});
  for (std::size_t i = 0; i < n_cat; ++i) f.push_back({"c" + std::to_string(i), FeatureKind::Categorical});
  return Schema(std::move(f), with_label ? std::optional<std::string>("y") : std::nullopt);
}

/// Random table; numericals ~ N(0,1) rounded to a grid to create ties,
/// categoricals over `levels` symbols, label over two classes.
inline Table random_table(const Schema& schema, std::size_t rows, tabmem::Rng& rng, std::size_t levels = 3,
                          double grid = 0.0) {
  std::vector<Cell> cells;
  cells.reserve(rows * schema.width());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < schema.feature_count(); ++c) {
      if (schema.column_kind(c) == FeatureKind::Numerical) {
        double v = tabmem::standard_normal(rng);
        if (grid > 0) v = std::round(v / grid) * grid;
        cells.push_back(v);
      } else {
        cells.push_back(sym("v" + std::to_string(tabmem::uniform_index(rng, levels))));
      }
    }
    if (schema.has_target()) cells.push_back(sym(tabmem::uniform_index(rng, 2) == 0 ? "no" : "yes"));
  }
  return Table::from_cells(schema, std::move(cells));
}

/// Reference mixed distance written straight from the definition, without
/// encoded rows or shared helpers.
inline double oracle_distance(const Table& a, std::size_t i, const Table& b, std::size_t j, double d_min,
                              double d_max) {
  const auto& s = a.schema();
  double sq = 0.0;
  double mismatches = 0.0;
  for (std::size_t c = 0; c < s.feature_count(); ++c) {
    if (s.column_kind(c) == FeatureKind::Numerical) {
      const double d = std::get<double>(a.at(i, c)) - std::get<double>(b.at(j, c));
      sq += d * d;
    } else if (std::get<Symbol>(a.at(i, c)) != std::get<Symbol>(b.at(j, c))) {
      mismatches += 1.0;
    }
  }
  double norm = 0.0;
  if (d_max > d_min) norm = std::clamp((std::sqrt(sq) - d_min) / (d_max - d_min), 0.0, 1.0);
  return (norm + mismatches) / static_cast<double>(s.feature_count());
}

struct OracleNeighbors {
  std::size_t i1, i2;
  double d1, d2;
};

/// Brute-force double loop for the two nearest train rows of every generated row.
inline std::vector<OracleNeighbors> oracle_two_nearest(const Table& gen, const Table& train) {
  const auto& s = gen.schema();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < gen.row_count(); ++i)
    for (std::size_t j = 0; j < train.row_count(); ++j) {
      double sq = 0.0;
      for (std::size_t c : s.numerical()) {
        const double d = std::get<double>(gen.at(i, c)) - std::get<double>(train.at(j, c));
        sq += d * d;
      }
      lo = std::min(lo, std::sqrt(sq));
      hi = std::max(hi, std::sqrt(sq));
    }
  std::vector<OracleNeighbors> out;
  for (std::size_t i = 0; i < gen.row_count(); ++i) {
    OracleNeighbors best{0, 0, INFINITY, INFINITY};
    for (std::size_t j = 0; j < train.row_count(); ++j) {
      const double d = oracle_distance(gen, i, train, j, lo, hi);
      if (d < best.d1) {
        best.i2 = best.i1;
        best.d2 = best.d1;
        best.i1 = j;
        best.d1 = d;
      } else if (d < best.d2) {
        best.i2 = j;
        best.d2 = d;
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Two categorical features where c1 is a function of c0, plus independent noise columns.
inline Table linked_table(std::size_t rows, tabmem::Rng& rng) {
  Schema schema({{"a", FeatureKind::Categorical},
                 {"b", FeatureKind::Categorical},
                 {"u", FeatureKind::Numerical},
                 {"w", FeatureKind::Categorical}},
                std::string("y"));
  const char* a_vals[] = {"p", "q", "r", "s"};
  const char* b_vals[] = {"P", "Q", "R", "S"};
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto k = tabmem::uniform_index(rng, 4);
    cells.push_back(sym(a_vals[k]));
    cells.push_back(sym(b_vals[k]));
    cells.push_back(tabmem::standard_normal(rng));
    cells.push_back(sym(tabmem::uniform_index(rng, 2) ? "w1" : "w0"));
    cells.push_back(sym(tabmem::uniform_index(rng, 3) == 0 ? "minor" : "major"));
  }
  return Table::from_cells(schema, std::move(cells));
}

/// True when the a/b link of linked_table holds for the row.
inline bool link_holds(std::span<const Cell> row) {
  const auto a = std::get<Symbol>(row[0]).text();
  const auto b = std::get<Symbol>(row[1]).text();
  return a.size() == 1 && b.size() == 1 && std::toupper(static_cast<unsigned char>(a[0])) == b[0];
}

/// Numerical Gaussian table with a label, for fidelity fixtures.
inline Table gaussian_table(std::size_t rows, std::size_t dims, tabmem::Rng& rng, double shift = 0.0) {
  std::vector<Feature> f;
  for (std::size_t i = 0; i < dims; ++i) f.push_back({"g" + std::to_string(i), FeatureKind::Numerical});
  f.push_back({"k", FeatureKind::Categorical});
  Schema schema(std::move(f), std::string("y"));
  std::vector<Cell> cells;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < dims; ++i) cells.push_back(tabmem::standard_normal(rng) + shift);
    cells.push_back(sym(tabmem::uniform_index(rng, 3) == 0 ? "k0" : "k1"));
    cells.push_back(sym(tabmem::uniform_index(rng, 2) ? "yes" : "no"));
  }
  return Table::from_cells(schema, std::move(cells));
}

}  // namespace fixtures
