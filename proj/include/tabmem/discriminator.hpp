#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabmem/table.hpp"

namespace tabmem {

/// Row-major design matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

/// Standardizes numerical columns and one-hot encodes categorical ones
/// (including the label), with parameters fitted on one table. Categories
/// unseen at fit time encode as all zeros.
class FeatureEncoder {
 public:
  explicit FeatureEncoder(const Table& fit_on);

  std::size_t dimension() const noexcept { return dimension_; }
  Matrix encode(const Table& table) const;

 private:
  struct Column {
    FeatureKind kind;
    double mean = 0.0;
    double scale = 1.0;
    std::vector<Symbol> categories;
    std::size_t offset = 0;
  };
  std::vector<Column> columns_;
  std::size_t dimension_ = 0;
};

struct DiscriminatorConfig {
  std::size_t epochs = 500;
  double learning_rate = 0.1;
  double l2 = 1e-3;
};

/// L2-regularized logistic regression trained by full-batch gradient descent
/// from zero weights. The bias is not regularized.
class Discriminator {
 public:
  explicit Discriminator(DiscriminatorConfig config = {}) : config_(config) {}

  void fit(const Matrix& x, std::span<const int> labels);
  double predict_proba(std::span<const double> features) const;
  std::vector<double> predict_proba(const Matrix& x) const;

  /// Regularized training loss before each epoch, plus the final loss.
  const std::vector<double>& loss_history() const noexcept { return loss_history_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }

 private:
  double loss(const Matrix& x, std::span<const int> labels) const;

  DiscriminatorConfig config_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> loss_history_;
};

/// ROC-AUC by the Mann-Whitney statistic with tied scores given average rank.
/// labels: 1 positive, 0 negative; both classes must be present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace tabmem
