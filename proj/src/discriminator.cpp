#include "tabmem/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "tabmem/error.hpp"

namespace tabmem {

FeatureEncoder::FeatureEncoder(const Table& fit_on) {
  require_rows(fit_on, "encoder");
  const auto& schema = fit_on.schema();
  for (std::size_t c = 0; c < schema.width(); ++c) {
    Column col;
    col.kind = schema.column_kind(c);
    col.offset = dimension_;
    if (col.kind == FeatureKind::Numerical) {
      const auto v = fit_on.numeric_column(c);
      const double n = static_cast<double>(v.size());
      col.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
      double ss = 0.0;
      for (double x : v) ss += (x - col.mean) * (x - col.mean);
      const double sd = std::sqrt(ss / n);
      col.scale = sd > 0.0 ? sd : 1.0;
      dimension_ += 1;
    } else {
      std::unordered_map<std::uint32_t, bool> seen;
      for (auto s : fit_on.symbol_column(c))
        if (seen.emplace(s.id(), true).second) col.categories.push_back(s);
      dimension_ += col.categories.size();
    }
    columns_.push_back(std::move(col));
  }
}

Matrix FeatureEncoder::encode(const Table& table) const {
  if (table.width() != columns_.size()) fail(ErrorCode::SchemaMismatch, "table width differs from encoder");
  Matrix m{table.row_count(), dimension_, std::vector<double>(table.row_count() * dimension_, 0.0)};
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    double* out = m.data.data() + r * dimension_;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const auto& col = columns_[c];
      const auto& cell = table.at(r, c);
      if (col.kind == FeatureKind::Numerical) {
        out[col.offset] = (as_number(cell) - col.mean) / col.scale;
      } else {
        const Symbol s = as_symbol(cell);
        auto it = std::find(col.categories.begin(), col.categories.end(), s);
        if (it != col.categories.end()) out[col.offset + static_cast<std::size_t>(it - col.categories.begin())] = 1.0;
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double Discriminator::loss(const Matrix& x, std::span<const int> labels) const {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    const double z = std::inner_product(row.begin(), row.end(), weights_.begin(), bias_);
    // -log p(y | x) for y in {0, 1}
    total += labels[i] ? softplus(-z) : softplus(z);
  }
  double reg = 0.0;
  for (double w : weights_) reg += w * w;
  return total / static_cast<double>(x.rows) + 0.5 * config_.l2 * reg;
}

void Discriminator::fit(const Matrix& x, std::span<const int> labels) {
  if (x.rows == 0 || labels.size() != x.rows) fail(ErrorCode::LengthMismatch, "labels do not match design matrix");
  weights_.assign(x.cols, 0.0);
  bias_ = 0.0;
  loss_history_.clear();
  const double n = static_cast<double>(x.rows);
  std::vector<double> grad(x.cols);
  for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    loss_history_.push_back(loss(x, labels));
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      auto row = x.row(i);
      const double z = std::inner_product(row.begin(), row.end(), weights_.begin(), bias_);
      const double residual = sigmoid(z) - static_cast<double>(labels[i]);
      for (std::size_t k = 0; k < x.cols; ++k) grad[k] += residual * row[k];
      grad_bias += residual;
    }
    for (std::size_t k = 0; k < x.cols; ++k)
      weights_[k] -= config_.learning_rate * (grad[k] / n + config_.l2 * weights_[k]);
    bias_ -= config_.learning_rate * grad_bias / n;
  }
  loss_history_.push_back(loss(x, labels));
}

double Discriminator::predict_proba(std::span<const double> features) const {
  if (features.size() != weights_.size()) fail(ErrorCode::LengthMismatch, "feature vector size mismatch");
  return sigmoid(std::inner_product(features.begin(), features.end(), weights_.begin(), bias_));
}

std::vector<double> Discriminator::predict_proba(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = predict_proba(x.row(i));
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) fail(ErrorCode::LengthMismatch, "scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) fail(ErrorCode::InvalidArgument, "AUC needs both classes");
  const double np = static_cast<double>(positives), nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace tabmem
