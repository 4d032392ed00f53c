#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tabmem/association.hpp"
#include "tabmem/rng.hpp"
#include "tabmem/table.hpp"

namespace tabmem {

enum class AugmentMode { CutMix, CutMixPlus, IJF };

std::string_view to_string(AugmentMode mode);
AugmentMode parse_augment_mode(std::string_view text);

struct AugmentConfig {
  AugmentMode mode = AugmentMode::CutMix;
  /// augmented rows = round(ratio * |train|)
  double ratio = 0.3;
  std::uint64_t seed = 42;
  /// CutMixPlus only.
  double cluster_threshold = kDefaultClusterThreshold;
  EtaScale eta = EtaScale::Sqrt;
};

/// Empirical class distribution; classes in order of first appearance.
struct ClassPrior {
  std::vector<Symbol> classes;
  std::vector<double> probabilities;

  std::size_t sample(Rng& rng) const;
};

ClassPrior class_prior(const Table& train);

/// One swap decision per unit (a feature for CutMix, a cluster for
/// CutMixPlus). bit 1 takes the unit from x_A, bit 0 from x_B. `lambdas`
/// holds the Bernoulli parameter(s) the bits were drawn with.
struct MixMask {
  std::vector<std::uint8_t> bits;
  std::vector<double> lambdas;
};

/// M ⊙ x_A + (1 - M) ⊙ x_B over swap units, with the label set to `label`.
std::vector<Cell> mix_rows(std::span<const Cell> xa, std::span<const Cell> xb, const MixMask& mask,
                           const std::vector<std::vector<std::size_t>>& units, const Schema& schema, Symbol label);

/// Singleton swap units, one per feature.
std::vector<std::vector<std::size_t>> feature_units(const Schema& schema);

/// Same-class donor pairs for the CutMix family. Every class with positive
/// prior mass must have at least two rows.
class DonorSampler {
 public:
  DonorSampler(const Table& train, ClassPrior prior);

  struct Donors {
    std::size_t class_index;
    std::size_t a;
    std::size_t b;
  };

  /// Class from the prior, then two distinct rows of that class uniformly.
  Donors draw(Rng& rng) const;

  const Table& train() const noexcept { return *train_; }
  const ClassPrior& prior() const noexcept { return prior_; }

 private:
  const Table* train_;
  ClassPrior prior_;
  std::vector<std::vector<std::size_t>> rows_by_class_;
};

/// Algorithm-1 sample: one lambda ~ U(0,1) per sample, per-feature bits ~ Bern(lambda).
std::vector<Cell> cutmix_once(const DonorSampler& donors, Rng& rng, MixMask* mask_out = nullptr);
std::vector<Cell> cutmix_once(const Table& train, const ClassPrior& prior, Rng& rng);

/// Algorithm-2 sample: per cluster, lambda_k ~ U(0,1) and one bit ~ Bern(lambda_k);
/// every feature of a cluster comes from the same donor.
std::vector<Cell> cutmixplus_once(const DonorSampler& donors, const FeatureClusters& clusters, Rng& rng,
                                  MixMask* mask_out = nullptr);
std::vector<Cell> cutmixplus_once(const Table& train, const ClassPrior& prior, const FeatureClusters& clusters,
                                  Rng& rng);

/// Independent-feature baseline: Gaussian (MLE mean/std) per numerical
/// column, empirical frequencies per categorical column and the label.
class IjfModel {
 public:
  explicit IjfModel(const Table& train);
  std::vector<Cell> sample(Rng& rng) const;

 private:
  struct Column {
    FeatureKind kind;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<Symbol> symbols;
    std::vector<double> cumulative;
  };
  std::vector<Column> columns_;
};

std::vector<Cell> ijf_sample(const Table& train, Rng& rng);

/// Number of rows `augment` appends.
std::size_t augmented_count(std::size_t train_rows, double ratio);

/// Original rows followed by round(ratio * |train|) augmented rows. Sample i
/// draws from its own stream derived from (seed, i).
Table augment(const Table& train, const AugmentConfig& config);

}  // namespace tabmem
