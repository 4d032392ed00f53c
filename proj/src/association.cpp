#include "tabmem/association.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

namespace tabmem {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::LengthMismatch, "columns differ in length");
  if (a < 2) fail(ErrorCode::LengthMismatch, "columns need at least 2 values");
}

bool constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Dense codes 0..k-1 in order of first appearance.
std::vector<std::size_t> encode(std::span<const Symbol> column, std::size_t& levels) {
  std::unordered_map<std::uint32_t, std::size_t> ids;
  std::vector<std::size_t> codes(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    auto [it, inserted] = ids.emplace(column[i].id(), ids.size());
    codes[i] = it->second;
  }
  levels = ids.size();
  return codes;
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  check_lengths(a.size(), b.size());
  if (constant(a) || constant(b)) return 0.0;
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double cramers_v(const std::vector<std::vector<double>>& contingency) {
  const std::size_t rows = contingency.size();
  const std::size_t cols = rows ? contingency[0].size() : 0;
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (contingency[i].size() != cols) fail(ErrorCode::LengthMismatch, "ragged contingency table");
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = contingency[i][j];
      if (!(v >= 0.0)) fail(ErrorCode::InvalidArgument, "negative contingency count");
      row_sum[i] += v;
      col_sum[j] += v;
      n += v;
    }
  }
  const auto r = static_cast<std::size_t>(std::count_if(row_sum.begin(), row_sum.end(), [](double s) { return s > 0; }));
  const auto c = static_cast<std::size_t>(std::count_if(col_sum.begin(), col_sum.end(), [](double s) { return s > 0; }));
  const std::size_t k = std::min(r, c);
  if (k < 2) return 0.0;

  double chi2 = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_sum[i] == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_sum[j] == 0.0) continue;
      const double expected = row_sum[i] * col_sum[j] / n;
      const double diff = contingency[i][j] - expected;
      chi2 += diff * diff / expected;
    }
  }
  return std::clamp(std::sqrt(chi2 / (n * static_cast<double>(k - 1))), 0.0, 1.0);
}

double cramers_v(std::span<const Symbol> a, std::span<const Symbol> b) {
  check_lengths(a.size(), b.size());
  std::size_t ra = 0, rb = 0;
  const auto ca = encode(a, ra);
  const auto cb = encode(b, rb);
  std::vector<std::vector<double>> table(ra, std::vector<double>(rb, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) table[ca[i]][cb[i]] += 1.0;
  return cramers_v(table);
}

double eta_squared(std::span<const double> num, std::span<const Symbol> cat) {
  check_lengths(num.size(), cat.size());
  if (constant(num)) return 0.0;
  std::size_t groups = 0;
  const auto codes = encode(cat, groups);
  const double grand = mean(num);
  std::vector<double> sums(groups, 0.0);
  std::vector<double> counts(groups, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sums[codes[i]] += num[i];
    counts[codes[i]] += 1.0;
    const double d = num[i] - grand;
    total += d * d;
  }
  if (total == 0.0) return 0.0;
  double between = 0.0;
  for (std::size_t g = 0; g < groups; ++g) {
    const double d = sums[g] / counts[g] - grand;
    between += counts[g] * d * d;
  }
  return std::clamp(between / total, 0.0, 1.0);
}

AssociationMatrix association_matrix(const Table& table, EtaScale eta) {
  const auto& schema = table.schema();
  const std::size_t m = schema.feature_count();
  if (table.row_count() < 2) fail(ErrorCode::TooFewRows, "association needs at least 2 rows");

  std::vector<std::vector<double>> numbers(m);
  std::vector<std::vector<Symbol>> symbols(m);
  for (std::size_t f = 0; f < m; ++f) {
    if (schema.column_kind(f) == FeatureKind::Numerical)
      numbers[f] = table.numeric_column(f);
    else
      symbols[f] = table.symbol_column(f);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [i, j] = pairs[p];
      const bool ni = schema.column_kind(i) == FeatureKind::Numerical;
      const bool nj = schema.column_kind(j) == FeatureKind::Numerical;
      double v;
      if (ni && nj) {
        v = std::abs(pearson(numbers[i], numbers[j]));
      } else if (!ni && !nj) {
        v = cramers_v(symbols[i], symbols[j]);
      } else {
        const double e2 = ni ? eta_squared(numbers[i], symbols[j]) : eta_squared(numbers[j], symbols[i]);
        v = eta == EtaScale::Sqrt ? std::sqrt(e2) : e2;
      }
      values[p] = std::clamp(v, 0.0, 1.0);
    }
  });

  AssociationMatrix out(m);
  for (std::size_t p = 0; p < pairs.size(); ++p) out.set(pairs[p].first, pairs[p].second, values[p]);
  return out;
}

std::vector<std::size_t> FeatureClusters::assignment(std::size_t feature_count) const {
  std::vector<std::size_t> out(feature_count, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (auto f : clusters[c]) out.at(f) = c;
  return out;
}

FeatureClusters cluster_features(const AssociationMatrix& assoc, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) fail(ErrorCode::InvalidArgument, "cluster threshold must lie in [0, 1]");
  const std::size_t m = assoc.size();

  // Active clusters stay sorted by smallest member: a merge keeps the lower slot.
  std::vector<std::vector<std::size_t>> members(m);
  std::vector<std::vector<double>> linkage(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    members[i] = {i};
    for (std::size_t j = 0; j < m; ++j) linkage[i][j] = 1.0 - assoc(i, j);
  }

  while (threshold > 0.0 && members.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = linkage[0][1];
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        if (linkage[a][b] < best) {
          best = linkage[a][b];
          best_a = a;
          best_b = b;
        }
    if (best > threshold) break;

    const double na = static_cast<double>(members[best_a].size());
    const double nb = static_cast<double>(members[best_b].size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k == best_a || k == best_b) continue;
      const double d = (na * linkage[best_a][k] + nb * linkage[best_b][k]) / (na + nb);
      linkage[best_a][k] = linkage[k][best_a] = d;
    }
    auto& merged = members[best_a];
    merged.insert(merged.end(), members[best_b].begin(), members[best_b].end());
    std::sort(merged.begin(), merged.end());
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(best_b));
    linkage.erase(linkage.begin() + static_cast<std::ptrdiff_t>(best_b));
    for (auto& row : linkage) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  return FeatureClusters{std::move(members), threshold};
}

}  // namespace tabmem
