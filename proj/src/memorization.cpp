#include "tabmem/memorization.hpp"

#include <charconv>
#include <cmath>

#include "tabmem/error.hpp"

namespace tabmem {

std::vector<double> distance_ratios(std::span<const NeighborResult> neighbors) {
  std::vector<double> ratios(neighbors.size());
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    const auto& n = neighbors[i];
    ratios[i] = n.nn2_distance > 0.0 ? n.nn1_distance / n.nn2_distance : 0.0;
  }
  return ratios;
}

std::vector<double> distance_ratios(const Table& generated, const Table& train) {
  require_same_schema(generated, train);
  if (train.row_count() < 2) fail(ErrorCode::TrainTooSmall, "need at least 2 training rows");
  require_rows(generated, "generated");
  const auto norm = fit_normalizer(generated, train);
  return distance_ratios(two_nearest(generated, train, norm));
}

double memorization_ratio(std::span<const double> ratios, double threshold) {
  if (ratios.empty()) fail(ErrorCode::EmptyRatios, "no ratios");
  if (!(threshold > 0.0 && threshold <= 1.0)) fail(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
  std::size_t below = 0;
  for (double r : ratios) below += r < threshold;
  return static_cast<double>(below) / static_cast<double>(ratios.size());
}

double mem_auc(std::span<const double> ratios) {
  if (ratios.empty()) fail(ErrorCode::EmptyRatios, "no ratios");
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) fail(ErrorCode::InvalidArgument, "ratio outside [0, 1]");
    sum += 1.0 - r;
  }
  return sum / static_cast<double>(ratios.size());
}

RatioHistogram ratio_histogram(std::span<const double> ratios, std::size_t bins) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  RatioHistogram h;
  h.bin_left.resize(bins);
  h.counts.assign(bins, 0);
  for (std::size_t b = 0; b < bins; ++b) h.bin_left[b] = static_cast<double>(b) / static_cast<double>(bins);
  for (double r : ratios) {
    auto b = static_cast<std::size_t>(std::floor(r * static_cast<double>(bins)));
    if (r < 0.0) b = 0;
    h.counts[std::min(b, bins - 1)] += 1;
  }
  return h;
}

MemorizationReport audit(const Table& generated, const Table& train, double threshold, std::size_t bins) {
  require_same_schema(generated, train);
  require_rows(generated, "generated");
  if (train.row_count() < 2) fail(ErrorCode::TrainTooSmall, "need at least 2 training rows");
  if (bins == 0) fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");

  MemorizationReport report;
  report.normalizer = fit_normalizer(generated, train);
  report.ratios = distance_ratios(two_nearest(generated, train, report.normalizer));
  report.threshold = threshold;
  report.mem_ratio = memorization_ratio(report.ratios, threshold);
  report.mem_auc = mem_auc(report.ratios);
  report.histogram = ratio_histogram(report.ratios, bins);
  return report;
}

std::string histogram_csv(const RatioHistogram& histogram) {
  std::string out = "bin_left,count\n";
  char buf[64];
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, histogram.bin_left[b]);
    out.append(buf, end);
    out.push_back(',');
    out += std::to_string(histogram.counts[b]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace tabmem
