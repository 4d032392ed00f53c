#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabmem/distance.hpp"
#include "tabmem/table.hpp"

namespace tabmem {

inline constexpr double kDefaultMemorizationThreshold = 1.0 / 3.0;
inline constexpr std::size_t kDefaultHistogramBins = 50;

/// Fixed-width histogram over [0, 1]. Bins are left-closed; the last bin is
/// also right-closed so a ratio of exactly 1 lands in it.
struct RatioHistogram {
  std::vector<double> bin_left;
  std::vector<std::size_t> counts;
};

struct MemorizationReport {
  std::vector<double> ratios;
  double threshold = kDefaultMemorizationThreshold;
  double mem_ratio = 0.0;
  double mem_auc = 0.0;
  RatioHistogram histogram;
  DistanceNormalizer normalizer;
};

/// r(x) = d(x, NN1) / d(x, NN2) for every generated row, with 0/0 taken as 0.
/// The normalizer is fitted on generated x train.
std::vector<double> distance_ratios(const Table& generated, const Table& train);
std::vector<double> distance_ratios(std::span<const NeighborResult> neighbors);

/// Fraction of ratios strictly below `threshold`.
double memorization_ratio(std::span<const double> ratios, double threshold = kDefaultMemorizationThreshold);

/// Integral over tau in [0, 1] of memorization_ratio(ratios, tau), which for
/// the empirical step function is mean(1 - r).
double mem_auc(std::span<const double> ratios);

RatioHistogram ratio_histogram(std::span<const double> ratios, std::size_t bins = kDefaultHistogramBins);

MemorizationReport audit(const Table& generated, const Table& train,
                         double threshold = kDefaultMemorizationThreshold,
                         std::size_t bins = kDefaultHistogramBins);

/// Two-column CSV: bin_left,count.
std::string histogram_csv(const RatioHistogram& histogram);

}  // namespace tabmem
