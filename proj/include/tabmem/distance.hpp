#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabmem/table.hpp"

namespace tabmem {

/// Max-min rescaling of raw numerical Euclidean distances onto [0, 1],
/// fitted over a population of row pairs.
class DistanceNormalizer {
 public:
  /// Degenerate normalizer: maps every distance to 0.
  DistanceNormalizer() = default;
  DistanceNormalizer(double d_min, double d_max);

  double d_min() const noexcept { return d_min_; }
  double d_max() const noexcept { return d_max_; }
  bool degenerate() const noexcept { return d_max_ <= d_min_; }

  /// (d - d_min) / (d_max - d_min) clamped to [0, 1]; 0 when degenerate.
  double normalize(double raw) const noexcept;

 private:
  double d_min_ = 0.0;
  double d_max_ = 0.0;
};

/// Every pair (q, r) with q a row of `queries` and r a row of any table in
/// `references`.
struct PairPopulation {
  const Table* queries = nullptr;
  std::vector<const Table*> references;
};

struct NeighborResult {
  std::size_t nn1_index = 0;
  double nn1_distance = 0.0;
  std::size_t nn2_index = 0;
  double nn2_distance = 0.0;
};

/// Euclidean distance over the numerical features only, in original units.
double raw_numeric_distance(std::span<const Cell> a, std::span<const Cell> b, const Schema& schema);

/// (norm(raw numeric distance) + number of differing categorical features) / M.
double mixed_distance(std::span<const Cell> a, std::span<const Cell> b, const Schema& schema,
                      const DistanceNormalizer& norm);

DistanceNormalizer fit_normalizer(const PairPopulation& population);
/// Normalizer over the full generated x train cross product.
DistanceNormalizer fit_normalizer(const Table& generated, const Table& train);

/// Two nearest train rows of every generated row under the mixed distance.
/// Ties go to the lower train index.
std::vector<NeighborResult> two_nearest(const Table& generated, const Table& train, const DistanceNormalizer& norm);

/// Mixed distance from every query row to its closest reference row.
std::vector<double> closest_distances(const Table& queries, const Table& reference, const DistanceNormalizer& norm);

/// Dense encoding of a table's feature values for the inner distance loops:
/// numerical values and categorical symbol ids, each row-major.
class EncodedRows {
 public:
  explicit EncodedRows(const Table& table);

  std::size_t size() const noexcept { return rows_; }
  std::size_t numerical_width() const noexcept { return num_width_; }
  std::size_t categorical_width() const noexcept { return cat_width_; }

  std::span<const double> numbers(std::size_t row) const { return {numbers_.data() + row * num_width_, num_width_}; }
  std::span<const std::uint32_t> codes(std::size_t row) const { return {codes_.data() + row * cat_width_, cat_width_}; }

  /// Squared raw numeric distance between row i of this and row j of other.
  double squared_numeric(std::size_t i, const EncodedRows& other, std::size_t j) const noexcept;
  std::size_t mismatches(std::size_t i, const EncodedRows& other, std::size_t j) const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t num_width_ = 0;
  std::size_t cat_width_ = 0;
  std::vector<double> numbers_;
  std::vector<std::uint32_t> codes_;
};

/// Mixed distance between encoded rows; same arithmetic as mixed_distance.
double mixed_distance(const EncodedRows& a, std::size_t i, const EncodedRows& b, std::size_t j,
                      const DistanceNormalizer& norm, std::size_t feature_count);

}  // namespace tabmem
