#include "tabmem/augment.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

namespace tabmem {

std::string_view to_string(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::CutMix: return "cutmix";
    case AugmentMode::CutMixPlus: return "cutmixplus";
    case AugmentMode::IJF: return "ijf";
  }
  return "cutmix";
}

AugmentMode parse_augment_mode(std::string_view text) {
  if (text == "cutmix") return AugmentMode::CutMix;
  if (text == "cutmixplus") return AugmentMode::CutMixPlus;
  if (text == "ijf") return AugmentMode::IJF;
  fail(ErrorCode::InvalidArgument, "unknown augmentation mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

std::size_t ClassPrior::sample(Rng& rng) const {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    acc += probabilities[k];
    if (u < acc) return k;
  }
  // u landed in the rounding gap above the last cumulative sum
  for (std::size_t k = probabilities.size(); k-- > 0;)
    if (probabilities[k] > 0.0) return k;
  fail(ErrorCode::InvalidArgument, "empty class prior");
}

ClassPrior class_prior(const Table& train) {
  if (!train.schema().has_target()) fail(ErrorCode::NoTarget, "class prior needs a target column");
  require_rows(train, "training");
  ClassPrior prior;
  std::unordered_map<std::uint32_t, std::size_t> index;
  std::vector<std::size_t> counts;
  for (std::size_t r = 0; r < train.row_count(); ++r) {
    const Symbol s = train.label(r);
    auto [it, inserted] = index.emplace(s.id(), prior.classes.size());
    if (inserted) {
      prior.classes.push_back(s);
      counts.push_back(0);
    }
    counts[it->second] += 1;
  }
  const double n = static_cast<double>(train.row_count());
  for (auto c : counts) prior.probabilities.push_back(static_cast<double>(c) / n);
  return prior;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> feature_units(const Schema& schema) {
  std::vector<std::vector<std::size_t>> units(schema.feature_count());
  for (std::size_t f = 0; f < units.size(); ++f) units[f] = {f};
  return units;
}

std::vector<Cell> mix_rows(std::span<const Cell> xa, std::span<const Cell> xb, const MixMask& mask,
                           const std::vector<std::vector<std::size_t>>& units, const Schema& schema, Symbol label) {
  if (xa.size() != schema.width() || xb.size() != schema.width())
    fail(ErrorCode::SchemaMismatch, "donor row width does not match schema");
  if (mask.bits.size() != units.size()) fail(ErrorCode::InvalidArgument, "mask size differs from swap unit count");
  std::vector<Cell> out(xa.begin(), xa.end());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& donor = mask.bits[u] ? xa : xb;
    for (auto f : units[u]) out[f] = donor[f];
  }
  if (schema.has_target()) out[schema.target_column()] = label;
  return out;
}

DonorSampler::DonorSampler(const Table& train, ClassPrior prior) : train_(&train), prior_(std::move(prior)) {
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t k = 0; k < prior_.classes.size(); ++k) index.emplace(prior_.classes[k].id(), k);
  rows_by_class_.resize(prior_.classes.size());
  for (std::size_t r = 0; r < train.row_count(); ++r)
    if (auto it = index.find(train.label(r).id()); it != index.end()) rows_by_class_[it->second].push_back(r);
  for (std::size_t k = 0; k < prior_.classes.size(); ++k)
    if (prior_.probabilities[k] > 0.0 && rows_by_class_[k].size() < 2)
      fail(ErrorCode::ClassTooSmall, "class '" + std::string(prior_.classes[k].text()) + "' has fewer than 2 rows");
}

DonorSampler::Donors DonorSampler::draw(Rng& rng) const {
  const std::size_t k = prior_.sample(rng);
  const auto& rows = rows_by_class_[k];
  const std::size_t a = uniform_index(rng, rows.size());
  std::size_t b = uniform_index(rng, rows.size() - 1);
  if (b >= a) ++b;
  return {k, rows[a], rows[b]};
}

std::vector<Cell> cutmix_once(const DonorSampler& donors, Rng& rng, MixMask* mask_out) {
  const auto d = donors.draw(rng);
  const Table& train = donors.train();
  MixMask mask;
  const double lambda = uniform01(rng);
  mask.lambdas = {lambda};
  mask.bits.resize(train.schema().feature_count());
  for (auto& bit : mask.bits) bit = uniform01(rng) < lambda;
  auto row = mix_rows(train.row(d.a), train.row(d.b), mask, feature_units(train.schema()), train.schema(),
                      donors.prior().classes[d.class_index]);
  if (mask_out) *mask_out = std::move(mask);
  return row;
}

std::vector<Cell> cutmix_once(const Table& train, const ClassPrior& prior, Rng& rng) {
  return cutmix_once(DonorSampler(train, prior), rng);
}

std::vector<Cell> cutmixplus_once(const DonorSampler& donors, const FeatureClusters& clusters, Rng& rng,
                                  MixMask* mask_out) {
  const auto d = donors.draw(rng);
  const Table& train = donors.train();
  MixMask mask;
  mask.bits.resize(clusters.clusters.size());
  mask.lambdas.resize(clusters.clusters.size());
  for (std::size_t k = 0; k < clusters.clusters.size(); ++k) {
    mask.lambdas[k] = uniform01(rng);
    mask.bits[k] = uniform01(rng) < mask.lambdas[k];
  }
  auto row = mix_rows(train.row(d.a), train.row(d.b), mask, clusters.clusters, train.schema(),
                      donors.prior().classes[d.class_index]);
  if (mask_out) *mask_out = std::move(mask);
  return row;
}

std::vector<Cell> cutmixplus_once(const Table& train, const ClassPrior& prior, const FeatureClusters& clusters,
                                  Rng& rng) {
  return cutmixplus_once(DonorSampler(train, prior), clusters, rng);
}

// ---------------------------------------------------------------------------

IjfModel::IjfModel(const Table& train) {
  if (train.row_count() < 2) fail(ErrorCode::TooFewRows, "IJF needs at least 2 training rows");
  const auto& schema = train.schema();
  const double n = static_cast<double>(train.row_count());
  for (std::size_t c = 0; c < schema.width(); ++c) {
    Column col;
    col.kind = schema.column_kind(c);
    if (col.kind == FeatureKind::Numerical) {
      const auto values = train.numeric_column(c);
      double sum = 0.0;
      for (double v : values) sum += v;
      col.mean = sum / n;
      double ss = 0.0;
      for (double v : values) ss += (v - col.mean) * (v - col.mean);
      col.stddev = std::sqrt(ss / n);
      if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        col.mean = values.front();
        col.stddev = 0.0;
      }
    } else {
      std::unordered_map<std::uint32_t, std::size_t> index;
      std::vector<double> counts;
      for (std::size_t r = 0; r < train.row_count(); ++r) {
        const Symbol s = as_symbol(train.at(r, c));
        auto [it, inserted] = index.emplace(s.id(), col.symbols.size());
        if (inserted) {
          col.symbols.push_back(s);
          counts.push_back(0.0);
        }
        counts[it->second] += 1.0;
      }
      double acc = 0.0;
      for (double k : counts) {
        acc += k / n;
        col.cumulative.push_back(acc);
      }
    }
    columns_.push_back(std::move(col));
  }
}

std::vector<Cell> IjfModel::sample(Rng& rng) const {
  std::vector<Cell> out;
  out.reserve(columns_.size());
  for (const auto& col : columns_) {
    if (col.kind == FeatureKind::Numerical) {
      out.emplace_back(col.stddev == 0.0 ? col.mean : col.mean + col.stddev * standard_normal(rng));
    } else {
      const double u = uniform01(rng);
      auto it = std::upper_bound(col.cumulative.begin(), col.cumulative.end(), u);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - col.cumulative.begin()), col.symbols.size() - 1);
      out.emplace_back(col.symbols[k]);
    }
  }
  return out;
}

std::vector<Cell> ijf_sample(const Table& train, Rng& rng) { return IjfModel(train).sample(rng); }

// ---------------------------------------------------------------------------

std::size_t augmented_count(std::size_t train_rows, double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) fail(ErrorCode::InvalidArgument, "augmentation ratio must be >= 0");
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(train_rows)));
}

Table augment(const Table& train, const AugmentConfig& config) {
  const std::size_t count = augmented_count(train.row_count(), config.ratio);
  require_rows(train, "training");
  if (count == 0) return train;

  const auto& schema = train.schema();
  const std::size_t width = schema.width();
  std::vector<Cell> cells(count * width);
  auto store = [&](std::size_t i, const std::vector<Cell>& row) {
    std::copy(row.begin(), row.end(), cells.begin() + static_cast<std::ptrdiff_t>(i * width));
  };

  switch (config.mode) {
    case AugmentMode::CutMix:
    case AugmentMode::CutMixPlus: {
      const DonorSampler donors(train, class_prior(train));
      FeatureClusters clusters;
      if (config.mode == AugmentMode::CutMixPlus)
        clusters = cluster_features(association_matrix(train, config.eta), config.cluster_threshold);
      parallel_for(count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          Rng rng = make_stream(config.seed, i);
          store(i, config.mode == AugmentMode::CutMix ? cutmix_once(donors, rng)
                                                      : cutmixplus_once(donors, clusters, rng));
        }
      });
      break;
    }
    case AugmentMode::IJF: {
      const IjfModel model(train);
      parallel_for(count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          Rng rng = make_stream(config.seed, i);
          store(i, model.sample(rng));
        }
      });
      break;
    }
  }
  return Table::concat(train, Table::from_cells(schema, std::move(cells)));
}

}  // namespace tabmem
