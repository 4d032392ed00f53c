#include "tabmem/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

namespace tabmem {

DistanceNormalizer::DistanceNormalizer(double d_min, double d_max) : d_min_(d_min), d_max_(d_max) {
  if (!(d_min >= 0.0) || !(d_max >= d_min) || !std::isfinite(d_max))
    fail(ErrorCode::InvalidArgument, "normalizer needs 0 <= d_min <= d_max");
}

double DistanceNormalizer::normalize(double raw) const noexcept {
  if (degenerate()) return 0.0;
  return std::clamp((raw - d_min_) / (d_max_ - d_min_), 0.0, 1.0);
}

namespace {

void check_row(std::span<const Cell> row, const Schema& schema) {
  if (row.size() != schema.width()) fail(ErrorCode::SchemaMismatch, "row width does not match schema");
}

void require_features(const Schema& schema) {
  if (schema.feature_count() == 0) fail(ErrorCode::SchemaMismatch, "schema has no features");
}

}  // namespace

double raw_numeric_distance(std::span<const Cell> a, std::span<const Cell> b, const Schema& schema) {
  check_row(a, schema);
  check_row(b, schema);
  double sum = 0.0;
  for (auto col : schema.numerical()) {
    if (!is_numeric(a[col]) || !is_numeric(b[col])) fail(ErrorCode::SchemaMismatch, "non-numeric cell");
    const double d = as_number(a[col]) - as_number(b[col]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double mixed_distance(std::span<const Cell> a, std::span<const Cell> b, const Schema& schema,
                      const DistanceNormalizer& norm) {
  require_features(schema);
  const double numeric = norm.normalize(raw_numeric_distance(a, b, schema));
  std::size_t differing = 0;
  for (auto col : schema.categorical()) {
    if (is_numeric(a[col]) || is_numeric(b[col])) fail(ErrorCode::SchemaMismatch, "non-categorical cell");
    differing += as_symbol(a[col]) != as_symbol(b[col]);
  }
  return (numeric + static_cast<double>(differing)) / static_cast<double>(schema.feature_count());
}

// ---------------------------------------------------------------------------

EncodedRows::EncodedRows(const Table& table)
    : rows_(table.row_count()),
      num_width_(table.schema().numerical().size()),
      cat_width_(table.schema().categorical().size()) {
  numbers_.reserve(rows_ * num_width_);
  codes_.reserve(rows_ * cat_width_);
  const auto& schema = table.schema();
  for (std::size_t r = 0; r < rows_; ++r) {
    for (auto col : schema.numerical()) numbers_.push_back(as_number(table.at(r, col)));
    for (auto col : schema.categorical()) codes_.push_back(as_symbol(table.at(r, col)).id());
  }
}

double EncodedRows::squared_numeric(std::size_t i, const EncodedRows& other, std::size_t j) const noexcept {
  const double* a = numbers_.data() + i * num_width_;
  const double* b = other.numbers_.data() + j * num_width_;
  double sum = 0.0;
  for (std::size_t k = 0; k < num_width_; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

std::size_t EncodedRows::mismatches(std::size_t i, const EncodedRows& other, std::size_t j) const noexcept {
  const std::uint32_t* a = codes_.data() + i * cat_width_;
  const std::uint32_t* b = other.codes_.data() + j * cat_width_;
  std::size_t n = 0;
  for (std::size_t k = 0; k < cat_width_; ++k) n += a[k] != b[k];
  return n;
}

double mixed_distance(const EncodedRows& a, std::size_t i, const EncodedRows& b, std::size_t j,
                      const DistanceNormalizer& norm, std::size_t feature_count) {
  const double numeric = norm.normalize(std::sqrt(a.squared_numeric(i, b, j)));
  return (numeric + static_cast<double>(a.mismatches(i, b, j))) / static_cast<double>(feature_count);
}

// ---------------------------------------------------------------------------

DistanceNormalizer fit_normalizer(const PairPopulation& population) {
  if (population.queries == nullptr || population.references.empty())
    fail(ErrorCode::InvalidArgument, "pair population needs queries and at least one reference table");
  const Table& queries = *population.queries;
  require_rows(queries, "query");
  bool any_reference = false;
  for (const Table* ref : population.references) {
    require_same_schema(queries, *ref);
    any_reference = any_reference || !ref->empty();
  }
  if (!any_reference) fail(ErrorCode::EmptyTable, "reference tables have no rows");

  const EncodedRows q(queries);
  std::vector<EncodedRows> refs;
  for (const Table* ref : population.references) refs.emplace_back(*ref);

  // Extremes are taken on squared distances; sqrt is monotone so this is exact.
  std::vector<double> lo(q.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(q.size(), 0.0);
  parallel_for(q.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& ref : refs) {
        for (std::size_t j = 0; j < ref.size(); ++j) {
          const double d = q.squared_numeric(i, ref, j);
          lo[i] = std::min(lo[i], d);
          hi[i] = std::max(hi[i], d);
        }
      }
    }
  });
  const double d_min = std::sqrt(*std::min_element(lo.begin(), lo.end()));
  const double d_max = std::sqrt(*std::max_element(hi.begin(), hi.end()));
  return DistanceNormalizer(d_min, d_max);
}

DistanceNormalizer fit_normalizer(const Table& generated, const Table& train) {
  return fit_normalizer(PairPopulation{&generated, {&train}});
}

std::vector<NeighborResult> two_nearest(const Table& generated, const Table& train, const DistanceNormalizer& norm) {
  require_same_schema(generated, train);
  require_features(train.schema());
  if (train.row_count() < 2) fail(ErrorCode::TrainTooSmall, "need at least 2 training rows");
  const EncodedRows g(generated);
  const EncodedRows t(train);
  const std::size_t m = train.schema().feature_count();

  std::vector<NeighborResult> out(g.size());
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
      std::size_t i1 = 0, i2 = 0;
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double d = mixed_distance(g, i, t, j, norm, m);
        if (d < d1) {
          d2 = d1;
          i2 = i1;
          d1 = d;
          i1 = j;
        } else if (d < d2) {
          d2 = d;
          i2 = j;
        }
      }
      out[i] = {i1, d1, i2, d2};
    }
  });
  return out;
}

std::vector<double> closest_distances(const Table& queries, const Table& reference, const DistanceNormalizer& norm) {
  require_same_schema(queries, reference);
  require_features(reference.schema());
  require_rows(reference, "reference");
  const EncodedRows q(queries);
  const EncodedRows r(reference);
  const std::size_t m = reference.schema().feature_count();
  std::vector<double> out(q.size());
  parallel_for(q.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < r.size(); ++j) best = std::min(best, mixed_distance(q, i, r, j, norm, m));
      out[i] = best;
    }
  });
  return out;
}

}  // namespace tabmem
