#include "tabmem/scorelab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "tabmem/error.hpp"
#include "tabmem/parallel.hpp"

namespace tabmem {

LatentSet::LatentSet(std::size_t dim, std::vector<double> coordinates)
    : dim_(dim), count_(dim ? coordinates.size() / dim : 0), data_(std::move(coordinates)) {
  if (dim_ == 0 || data_.empty() || data_.size() % dim_ != 0)
    fail(ErrorCode::InvalidArgument, "latent set needs N >= 1 points of a positive dimension");
  for (double v : data_)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "latent coordinates must be finite");
}

LatentSet LatentSet::uniform(std::size_t count, std::size_t dim, Rng& rng) {
  std::vector<double> data(count * dim);
  for (auto& v : data) v = 2.0 * uniform01(rng) - 1.0;
  return LatentSet(dim, std::move(data));
}

double LatentSet::diameter() const {
  double best = 0.0;
  for (std::size_t a = 0; a < count_; ++a)
    for (std::size_t b = a + 1; b < count_; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double d = data_[a * dim_ + k] - data_[b * dim_ + k];
        s += d * d;
      }
      best = std::max(best, s);
    }
  return std::sqrt(best);
}

LatentSet::Nearest LatentSet::nearest(std::span<const double> z) const {
  if (z.size() != dim_) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t n = 0; n < count_; ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = data_[n * dim_ + k] - z[k];
      s += d * d;
    }
    if (s < best.distance) best = {n, s};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

// ---------------------------------------------------------------------------

SigmaSchedule SigmaSchedule::linear(double horizon) {
  return SigmaSchedule([](double t) { return t; }, horizon);
}

SigmaSchedule::SigmaSchedule(std::function<double(double)> sigma, double horizon)
    : sigma_(std::move(sigma)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
  if (sigma_(0.0) != 0.0) fail(ErrorCode::InvalidArgument, "sigma(0) must be 0");
  if (!(sigma_(horizon_) > 0.0)) fail(ErrorCode::InvalidArgument, "sigma(T) must be positive");
}

std::string_view to_string(NoiseForm form) { return form == NoiseForm::Product ? "product" : "euler-maruyama"; }

NoiseForm parse_noise_form(std::string_view text) {
  if (text == "product") return NoiseForm::Product;
  if (text == "euler-maruyama" || text == "em") return NoiseForm::EulerMaruyama;
  fail(ErrorCode::InvalidArgument, "unknown noise form '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------

std::vector<double> forward_noise(std::span<const double> z0, double t, const SigmaSchedule& schedule, Rng& rng) {
  if (!(t >= 0.0 && t <= schedule.horizon())) fail(ErrorCode::BadTime, "t must lie in [0, T]");
  const double sigma = schedule(t);
  std::vector<double> z(z0.begin(), z0.end());
  for (auto& v : z) v += sigma * standard_normal(rng);
  return z;
}

std::vector<double> softmax_weights(std::span<const double> z, double sigma, const LatentSet& latents) {
  if (!(sigma > 0.0)) fail(ErrorCode::ZeroSigma, "score is undefined at sigma = 0");
  if (z.size() != latents.dim()) fail(ErrorCode::InvalidArgument, "point dimension mismatch");
  const std::size_t n = latents.size();
  std::vector<double> logits(n);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = latents.point(i);
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double d = p[k] - z[k];
      s += d * d;
    }
    logits[i] = -s * inv;
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - peak);
    total += l;
  }
  for (auto& l : logits) l /= total;
  return logits;
}

std::vector<double> optimal_score_at_sigma(std::span<const double> z, double sigma, const LatentSet& latents) {
  const auto w = softmax_weights(z, sigma, latents);
  const double inv_var = 1.0 / (sigma * sigma);
  std::vector<double> score(z.size(), 0.0);
  for (std::size_t n = 0; n < latents.size(); ++n) {
    if (w[n] == 0.0) continue;
    const auto p = latents.point(n);
    for (std::size_t k = 0; k < z.size(); ++k) score[k] += w[n] * (p[k] - z[k]);
  }
  for (auto& v : score) v *= inv_var;
  return score;
}

std::vector<double> optimal_score(std::span<const double> z, double t, const LatentSet& latents,
                                  const SigmaSchedule& schedule) {
  return optimal_score_at_sigma(z, schedule(t), latents);
}

// ---------------------------------------------------------------------------

BackwardSample backward_sample(const LatentSet& latents, const SigmaSchedule& schedule, const SdeConfig& config,
                               Rng& rng, bool keep_trajectory) {
  if (config.steps == 0) fail(ErrorCode::InvalidArgument, "steps must be >= 1");
  const std::size_t d = latents.dim();
  const double horizon = schedule.horizon();
  const auto grid = [&](std::size_t k) {
    return horizon * static_cast<double>(k) / static_cast<double>(config.steps);
  };

  BackwardSample out;
  std::vector<double> z(d);
  const double sigma_max = schedule(horizon);
  for (auto& v : z) v = sigma_max * standard_normal(rng);
  if (keep_trajectory) {
    out.trajectory.reserve(config.steps + 1);
    out.trajectory.push_back(z);
  }

  for (std::size_t k = config.steps; k >= 2; --k) {
    const double t_hi = grid(k), t_lo = grid(k - 1);
    const double s_hi = schedule(t_hi), s_lo = schedule(t_lo);
    const double g2 = 2.0 * s_hi * (s_hi - s_lo);  // 2 sigma(t) sigma'(t) dt
    const double noise =
        config.noise == NoiseForm::Product ? std::sqrt(g2 * (t_hi - t_lo)) : std::sqrt(g2);
    const auto score = optimal_score_at_sigma(z, s_hi, latents);
    for (std::size_t i = 0; i < d; ++i) z[i] += g2 * score[i] + noise * standard_normal(rng);
    if (keep_trajectory) out.trajectory.push_back(z);
  }

  out.pre_final_point = z;
  const auto nn = latents.nearest(z);
  const auto target = latents.point(nn.index);
  out.final_point.assign(target.begin(), target.end());
  if (keep_trajectory) out.trajectory.push_back(out.final_point);
  return out;
}

double dsm_loss(const LatentSet& latents, const ScoreFunction& score, const SigmaSchedule& schedule,
                std::size_t samples, Rng& rng, double t_min) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "samples must be >= 1");
  const double horizon = schedule.horizon();
  if (!(t_min > 0.0 && t_min < horizon)) fail(ErrorCode::BadTime, "t_min must lie in (0, T)");
  const std::size_t d = latents.dim();
  double total = 0.0;
  std::vector<double> z(d), eps(d);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto n = uniform_index(rng, latents.size());
    const double t = t_min + (horizon - t_min) * uniform01(rng);
    const double sigma = schedule(t);
    const auto base = latents.point(n);
    for (std::size_t k = 0; k < d; ++k) {
      eps[k] = standard_normal(rng);
      z[k] = base[k] + sigma * eps[k];
    }
    const auto predicted = score(z, t);
    if (predicted.size() != d) fail(ErrorCode::InvalidArgument, "score function returned wrong dimension");
    double err = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double r = predicted[k] + eps[k] / sigma;
      err += r * r;
    }
    total += err;
  }
  return total / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------

ReplicationStudy replication_study(const LatentSet& latents, const SigmaSchedule& schedule, const SdeConfig& config,
                                   double tolerance, bool keep_trajectories) {
  if (config.trajectories == 0) fail(ErrorCode::InvalidArgument, "trajectories must be >= 1");
  ReplicationStudy study;
  study.diameter = latents.diameter();
  study.tolerance = tolerance;
  study.samples.resize(config.trajectories);
  parallel_for(config.trajectories, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = make_stream(config.seed, i);
      study.samples[i] = backward_sample(latents, schedule, config, rng, keep_trajectories);
    }
  });

  // A single latent has no spread; fall back to an absolute radius.
  const double radius = tolerance * (study.diameter > 0.0 ? study.diameter : 1.0);
  std::size_t replicated = 0, pre_replicated = 0;
  double final_sum = 0.0, pre_sum = 0.0;
  for (const auto& s : study.samples) {
    const double df = latents.nearest(s.final_point).distance;
    const double dp = latents.nearest(s.pre_final_point).distance;
    replicated += df <= radius;
    pre_replicated += dp <= radius;
    final_sum += df;
    pre_sum += dp;
  }
  const double n = static_cast<double>(study.samples.size());
  study.replication_fraction = static_cast<double>(replicated) / n;
  study.pre_final_replication_fraction = static_cast<double>(pre_replicated) / n;
  study.mean_final_nn_distance = final_sum / n;
  study.mean_pre_final_nn_distance = pre_sum / n;
  return study;
}

std::string trajectories_csv(const ReplicationStudy& study, const SigmaSchedule& schedule, std::size_t steps) {
  std::string out = "trajectory,step,t";
  const std::size_t d = study.samples.empty() || study.samples[0].trajectory.empty()
                            ? 0
                            : study.samples[0].trajectory[0].size();
  for (std::size_t k = 0; k < d; ++k) out += ",z" + std::to_string(k);
  out.push_back('\n');
  char buf[64];
  auto put = [&](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
  };
  for (std::size_t i = 0; i < study.samples.size(); ++i) {
    const auto& traj = study.samples[i].trajectory;
    for (std::size_t s = 0; s < traj.size(); ++s) {
      // step s holds the state at grid index steps - s
      const double t = schedule.horizon() * static_cast<double>(steps - s) / static_cast<double>(steps);
      out += std::to_string(i) + "," + std::to_string(s) + ",";
      put(t);
      for (double v : traj[s]) {
        out.push_back(',');
        put(v);
      }
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace tabmem
