#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tabmem/rng.hpp"
#include "tabmem/table.hpp"

namespace tabmem {

/// 1 - KS statistic of the two empirical CDFs, evaluated exactly over the
/// merged order statistics.
double ks_complement(std::span<const double> real, std::span<const double> syn);

/// 1 - total variation distance between the category frequency vectors.
double tv_complement(std::span<const Symbol> real, std::span<const Symbol> syn);

/// Mean per-column KS/TV complement over every column, label included.
double shape_score(const Table& real, const Table& syn);

inline constexpr std::size_t kDefaultTrendBins = 10;

/// Mean over unordered column pairs: numerical pairs score
/// 1 - |rho_real - rho_syn| / 2; all other pairs score 1 - TVD of the joint
/// frequency tables, with numerical columns cut into `bins` equal-width bins
/// spanning the real column's range.
double trend_score(const Table& real, const Table& syn, std::size_t bins = kDefaultTrendBins);

/// Closest-record comparison. Each synthetic row scores 2 half-units when
/// its closest train row is strictly closer than its closest holdout row, 1
/// on an exact tie, and 0 otherwise.
struct DcrCounts {
  std::size_t closer_to_train_halves = 0;
  std::size_t total = 0;

  double probability() const { return 0.5 * static_cast<double>(closer_to_train_halves) / static_cast<double>(total); }
};

/// One normalizer is fitted over syn x (train ∪ holdout).
DcrCounts dcr_counts(const Table& syn, const Table& train, const Table& holdout);
double dcr_probability(const Table& syn, const Table& train, const Table& holdout);

/// Held-out ROC-AUC A of a logistic discriminator (real = 0, syn = 1) on a
/// stratified 80/20 split, mapped to clamp(1 - 2 (A - 0.5), 0, 1).
struct C2stResult {
  double auc = 0.5;
  double score = 1.0;
  std::vector<double> loss_history;
};

C2stResult c2st(const Table& real, const Table& syn, std::uint64_t seed);
double c2st_score(const Table& real, const Table& syn, std::uint64_t seed);

inline constexpr std::size_t kDefaultSupportLevels = 20;

/// Medoid-ball support estimate. For level a in {1/L, ..., 1}, the support
/// of a sample is the mixed-distance ball around its medoid whose radius is
/// the a-quantile of the sample's distances to that medoid. The curves hold
/// the fraction of the other sample inside each ball; each scalar is
/// 1 - 2 * mean_a |curve(a) - a|, clamped to [0, 1].
struct PrecisionRecall {
  double alpha_precision = 0.0;
  double beta_recall = 0.0;
  std::vector<double> levels;
  std::vector<double> precision_curve;
  std::vector<double> recall_curve;
};

PrecisionRecall alpha_precision_beta_recall(const Table& real, const Table& syn,
                                            std::size_t levels = kDefaultSupportLevels);

inline constexpr double kOodScaleFactor = 100.0;

/// Copies every row and perturbs one uniformly chosen feature: numerical
/// values are multiplied by 100, categorical values are redrawn uniformly
/// from the categories observed in that column.
Table synthesize_ood(const Table& train, Rng& rng);

struct FidelityReport {
  double shape_score = 0.0;
  double trend_score = 0.0;
  std::optional<double> dcr_probability;
  double c2st_score = 0.0;
  double c2st_auc = 0.5;
  double alpha_precision = 0.0;
  double beta_recall = 0.0;
};

/// All metrics; DCR only when a holdout is given, with `real` as the train side.
FidelityReport evaluate_fidelity(const Table& real, const Table& syn, const Table* holdout, std::uint64_t seed);

}  // namespace tabmem
