#include "tabmem/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "tabmem/association.hpp"
#include "tabmem/discriminator.hpp"
#include "tabmem/distance.hpp"
#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

namespace tabmem {
namespace {

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) fail(ErrorCode::EmptyColumn, std::string(what) + " column is empty");
}

/// Discrete codes for one column of a table, shared between real and synthetic.
std::vector<std::uint64_t> discretize(const Table& t, std::size_t col, double lo, double hi, std::size_t bins) {
  std::vector<std::uint64_t> out(t.row_count());
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    const auto& cell = t.at(r, col);
    if (!is_numeric(cell)) {
      out[r] = as_symbol(cell).id();
      continue;
    }
    std::size_t b = 0;
    if (hi > lo) {
      const double pos = (as_number(cell) - lo) / (hi - lo) * static_cast<double>(bins);
      b = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
    }
    out[r] = b;
  }
  return out;
}

double joint_tv_complement(std::span<const std::uint64_t> ra, std::span<const std::uint64_t> rb,
                           std::span<const std::uint64_t> sa, std::span<const std::uint64_t> sb) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<double, double>> freq;
  const double nr = static_cast<double>(ra.size()), ns = static_cast<double>(sa.size());
  for (std::size_t i = 0; i < ra.size(); ++i) freq[{ra[i], rb[i]}].first += 1.0 / nr;
  for (std::size_t i = 0; i < sa.size(); ++i) freq[{sa[i], sb[i]}].second += 1.0 / ns;
  double tvd = 0.0;
  for (const auto& [key, p] : freq) tvd += std::abs(p.first - p.second);
  return std::clamp(1.0 - 0.5 * tvd, 0.0, 1.0);
}

}  // namespace

double ks_complement(std::span<const double> real, std::span<const double> syn) {
  require_nonempty(real.size(), "real");
  require_nonempty(syn.size(), "synthetic");
  std::vector<double> a(real.begin(), real.end()), b(syn.begin(), syn.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double ks = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      x = a[i];
    else
      x = b[j];
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return std::clamp(1.0 - ks, 0.0, 1.0);
}

double tv_complement(std::span<const Symbol> real, std::span<const Symbol> syn) {
  require_nonempty(real.size(), "real");
  require_nonempty(syn.size(), "synthetic");
  std::unordered_map<std::uint32_t, std::pair<std::size_t, std::size_t>> counts;
  for (auto s : real) counts[s.id()].first += 1;
  for (auto s : syn) counts[s.id()].second += 1;
  const double nr = static_cast<double>(real.size()), ns = static_cast<double>(syn.size());
  double tvd = 0.0;
  for (const auto& [id, c] : counts) tvd += std::abs(static_cast<double>(c.first) / nr - static_cast<double>(c.second) / ns);
  return std::clamp(1.0 - 0.5 * tvd, 0.0, 1.0);
}

double shape_score(const Table& real, const Table& syn) {
  require_same_schema(real, syn);
  require_rows(real, "real");
  require_rows(syn, "synthetic");
  const auto& schema = real.schema();
  if (schema.width() == 0) fail(ErrorCode::SchemaMismatch, "schema has no columns");
  double total = 0.0;
  for (std::size_t c = 0; c < schema.width(); ++c) {
    if (schema.column_kind(c) == FeatureKind::Numerical)
      total += ks_complement(real.numeric_column(c), syn.numeric_column(c));
    else
      total += tv_complement(real.symbol_column(c), syn.symbol_column(c));
  }
  return total / static_cast<double>(schema.width());
}

double trend_score(const Table& real, const Table& syn, std::size_t bins) {
  require_same_schema(real, syn);
  require_rows(real, "real");
  require_rows(syn, "synthetic");
  if (bins == 0) fail(ErrorCode::InvalidArgument, "trend score needs at least one bin");
  const auto& schema = real.schema();
  const std::size_t w = schema.width();
  if (w < 2) fail(ErrorCode::InvalidArgument, "trend score needs at least 2 columns");

  std::vector<std::vector<std::uint64_t>> real_codes(w), syn_codes(w);
  std::vector<std::vector<double>> real_num(w), syn_num(w);
  for (std::size_t c = 0; c < w; ++c) {
    double lo = 0.0, hi = 0.0;
    if (schema.column_kind(c) == FeatureKind::Numerical) {
      real_num[c] = real.numeric_column(c);
      syn_num[c] = syn.numeric_column(c);
      const auto [mn, mx] = std::minmax_element(real_num[c].begin(), real_num[c].end());
      lo = *mn;
      hi = *mx;
    }
    real_codes[c] = discretize(real, c, lo, hi, bins);
    syn_codes[c] = discretize(syn, c, lo, hi, bins);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = i + 1; j < w; ++j) pairs.emplace_back(i, j);
  std::vector<double> scores(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto [i, j] = pairs[p];
      if (schema.column_kind(i) == FeatureKind::Numerical && schema.column_kind(j) == FeatureKind::Numerical) {
        // Pearson needs two values; a single-row table contributes rho = 0.
        const double rr = real.row_count() >= 2 ? pearson(real_num[i], real_num[j]) : 0.0;
        const double rs = syn.row_count() >= 2 ? pearson(syn_num[i], syn_num[j]) : 0.0;
        scores[p] = 1.0 - 0.5 * std::abs(rr - rs);
      } else {
        scores[p] = joint_tv_complement(real_codes[i], real_codes[j], syn_codes[i], syn_codes[j]);
      }
    }
  });
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

// ---------------------------------------------------------------------------

DcrCounts dcr_counts(const Table& syn, const Table& train, const Table& holdout) {
  require_same_schema(syn, train);
  require_same_schema(syn, holdout);
  require_rows(syn, "synthetic");
  require_rows(train, "train");
  require_rows(holdout, "holdout");
  const auto norm = fit_normalizer(PairPopulation{&syn, {&train, &holdout}});
  const auto to_train = closest_distances(syn, train, norm);
  const auto to_holdout = closest_distances(syn, holdout, norm);
  DcrCounts counts;
  counts.total = syn.row_count();
  for (std::size_t i = 0; i < counts.total; ++i) {
    if (to_train[i] < to_holdout[i])
      counts.closer_to_train_halves += 2;
    else if (to_train[i] == to_holdout[i])
      counts.closer_to_train_halves += 1;
  }
  return counts;
}

double dcr_probability(const Table& syn, const Table& train, const Table& holdout) {
  return dcr_counts(syn, train, holdout).probability();
}

// ---------------------------------------------------------------------------

C2stResult c2st(const Table& real, const Table& syn, std::uint64_t seed) {
  require_same_schema(real, syn);
  if (real.row_count() < 20 || syn.row_count() < 20) fail(ErrorCode::TooFewRows, "C2ST needs at least 20 rows per table");

  const Table pooled = Table::concat(real, syn);
  const std::size_t nr = real.row_count();
  std::vector<int> labels(pooled.row_count());
  for (std::size_t i = nr; i < labels.size(); ++i) labels[i] = 1;

  // Stratified 80/20: shuffle each class, first floor(0.8 n_c) rows train.
  std::vector<std::size_t> fit_rows, test_rows;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(cls));
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
    const auto cut = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(idx.size())));
    fit_rows.insert(fit_rows.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
    test_rows.insert(test_rows.end(), idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  }
  std::sort(fit_rows.begin(), fit_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  const Table fit_table = pooled.select(fit_rows);
  const Table test_table = pooled.select(test_rows);
  std::vector<int> fit_labels, test_labels;
  for (auto i : fit_rows) fit_labels.push_back(labels[i]);
  for (auto i : test_rows) test_labels.push_back(labels[i]);

  const FeatureEncoder encoder(fit_table);
  Discriminator model;
  model.fit(encoder.encode(fit_table), fit_labels);
  const auto scores = model.predict_proba(encoder.encode(test_table));

  C2stResult result;
  result.auc = roc_auc(scores, test_labels);
  result.score = std::clamp(1.0 - 2.0 * (result.auc - 0.5), 0.0, 1.0);
  result.loss_history = model.loss_history();
  return result;
}

double c2st_score(const Table& real, const Table& syn, std::uint64_t seed) { return c2st(real, syn, seed).score; }

// ---------------------------------------------------------------------------

namespace {

/// Index (within [offset, offset + n) of `rows`) of the row minimizing the
/// summed distance to the others; ties go to the lower index.
std::size_t medoid(const EncodedRows& rows, std::size_t offset, std::size_t n, const DistanceNormalizer& norm,
                   std::size_t m) {
  std::vector<double> sums(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < n; ++j) sums[i] += mixed_distance(rows, offset + i, rows, offset + j, norm, m);
  });
  return offset + static_cast<std::size_t>(std::min_element(sums.begin(), sums.end()) - sums.begin());
}

std::vector<double> distances_to(const EncodedRows& rows, std::size_t offset, std::size_t n, std::size_t center,
                                 const DistanceNormalizer& norm, std::size_t m) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = mixed_distance(rows, offset + i, rows, center, norm, m);
  return d;
}

/// Fraction of `other` inside each quantile ball of `own`.
std::vector<double> coverage_curve(std::vector<double> own, const std::vector<double>& other,
                                   const std::vector<double>& levels) {
  std::sort(own.begin(), own.end());
  std::vector<double> curve;
  for (double a : levels) {
    const auto k = static_cast<std::size_t>(std::ceil(a * static_cast<double>(own.size()) - 1e-9));
    const double radius = own[std::clamp<std::size_t>(k, 1, own.size()) - 1];
    const auto inside = std::count_if(other.begin(), other.end(), [&](double d) { return d <= radius; });
    curve.push_back(static_cast<double>(inside) / static_cast<double>(other.size()));
  }
  return curve;
}

double calibrated(const std::vector<double>& curve, const std::vector<double>& levels) {
  double dev = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) dev += std::abs(curve[k] - levels[k]);
  return std::clamp(1.0 - 2.0 * dev / static_cast<double>(levels.size()), 0.0, 1.0);
}

}  // namespace

PrecisionRecall alpha_precision_beta_recall(const Table& real, const Table& syn, std::size_t levels) {
  require_same_schema(real, syn);
  if (real.row_count() < 10 || syn.row_count() < 10) fail(ErrorCode::TooFewRows, "support estimate needs at least 10 rows per table");
  if (levels == 0) fail(ErrorCode::InvalidArgument, "need at least one level");
  const std::size_t m = real.schema().feature_count();
  if (m == 0) fail(ErrorCode::SchemaMismatch, "schema has no features");

  const Table pooled = Table::concat(real, syn);
  const auto norm = fit_normalizer(pooled, pooled);
  const EncodedRows rows(pooled);
  const std::size_t nr = real.row_count(), ns = syn.row_count();

  const std::size_t real_center = medoid(rows, 0, nr, norm, m);
  const std::size_t syn_center = medoid(rows, nr, ns, norm, m);

  PrecisionRecall out;
  for (std::size_t k = 1; k <= levels; ++k) out.levels.push_back(static_cast<double>(k) / static_cast<double>(levels));
  out.precision_curve = coverage_curve(distances_to(rows, 0, nr, real_center, norm, m),
                                       distances_to(rows, nr, ns, real_center, norm, m), out.levels);
  out.recall_curve = coverage_curve(distances_to(rows, nr, ns, syn_center, norm, m),
                                    distances_to(rows, 0, nr, syn_center, norm, m), out.levels);
  out.alpha_precision = calibrated(out.precision_curve, out.levels);
  out.beta_recall = calibrated(out.recall_curve, out.levels);
  return out;
}

// ---------------------------------------------------------------------------

Table synthesize_ood(const Table& train, Rng& rng) {
  require_rows(train, "training");
  const auto& schema = train.schema();
  const std::size_t m = schema.feature_count();
  if (m == 0) fail(ErrorCode::SchemaMismatch, "schema has no features");

  std::vector<std::vector<Symbol>> observed(m);
  for (auto f : schema.categorical()) {
    for (auto s : train.symbol_column(f))
      if (std::find(observed[f].begin(), observed[f].end(), s) == observed[f].end()) observed[f].push_back(s);
  }

  std::vector<Cell> cells(train.cells());
  for (std::size_t r = 0; r < train.row_count(); ++r) {
    const std::size_t f = uniform_index(rng, m);
    Cell& cell = cells[r * schema.width() + f];
    if (schema.column_kind(f) == FeatureKind::Numerical)
      cell = as_number(cell) * kOodScaleFactor;
    else
      cell = observed[f][uniform_index(rng, observed[f].size())];
  }
  return Table::from_cells(schema, std::move(cells));
}

FidelityReport evaluate_fidelity(const Table& real, const Table& syn, const Table* holdout, std::uint64_t seed) {
  FidelityReport report;
  report.shape_score = shape_score(real, syn);
  report.trend_score = trend_score(real, syn);
  if (holdout) report.dcr_probability = dcr_probability(syn, real, *holdout);
  const auto c = c2st(real, syn, seed);
  report.c2st_score = c.score;
  report.c2st_auc = c.auc;
  const auto pr = alpha_precision_beta_recall(real, syn);
  report.alpha_precision = pr.alpha_precision;
  report.beta_recall = pr.beta_recall;
  return report;
}

}  // namespace tabmem
