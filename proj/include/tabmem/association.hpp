#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabmem/table.hpp"

namespace tabmem {

/// Sample Pearson correlation; 0 when either column is constant.
double pearson(std::span<const double> a, std::span<const double> b);

/// Cramér's V, sqrt(chi2 / (n * min(r-1, c-1))), without bias correction.
/// Empty rows/columns of the contingency table are ignored; 0 when fewer
/// than two categories remain on either side.
double cramers_v(std::span<const Symbol> a, std::span<const Symbol> b);
double cramers_v(const std::vector<std::vector<double>>& contingency);

/// Correlation ratio squared: SS_between / SS_total of `num` grouped by `cat`.
double eta_squared(std::span<const double> num, std::span<const Symbol> cat);

/// How numerical-categorical pairs enter the association matrix.
enum class EtaScale {
  Sqrt,     // sqrt(eta^2), comparable with |rho| and V
  Squared,  // eta^2 as is
};

/// Symmetric M x M matrix of association strengths in [0, 1] over the
/// non-label features, unit diagonal.
class AssociationMatrix {
 public:
  AssociationMatrix() = default;
  explicit AssociationMatrix(std::size_t size) : size_(size), values_(size * size, 0.0) {
    for (std::size_t i = 0; i < size; ++i) values_[i * size + i] = 1.0;
  }

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * size_ + j] = v;
    values_[j * size_ + i] = v;
  }

 private:
  std::size_t size_ = 0;
  std::vector<double> values_;
};

AssociationMatrix association_matrix(const Table& table, EtaScale eta = EtaScale::Sqrt);

inline constexpr double kDefaultClusterThreshold = 0.7;

/// Partition of feature indices (positions in Schema::features()). Clusters
/// are sorted by their smallest member; members are ascending.
struct FeatureClusters {
  std::vector<std::vector<std::size_t>> clusters;
  double threshold = kDefaultClusterThreshold;

  /// cluster id of every feature
  std::vector<std::size_t> assignment(std::size_t feature_count) const;
};

/// Average-linkage agglomerative clustering on dissimilarity 1 - assoc.
/// Clusters merge while their linkage is <= threshold; threshold 0 merges
/// nothing and threshold 1 merges everything. Equal linkages merge the pair
/// with the lexicographically smallest (min index, min index) first.
FeatureClusters cluster_features(const AssociationMatrix& assoc, double threshold = kDefaultClusterThreshold);

}  // namespace tabmem
