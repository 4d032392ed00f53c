#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabmem/rng.hpp"

namespace tabmem {

/// N training embeddings of dimension d, row-major.
class LatentSet {
 public:
  LatentSet(std::size_t dim, std::vector<double> coordinates);
  /// N points drawn uniformly from [-1, 1]^dim.
  static LatentSet uniform(std::size_t count, std::size_t dim, Rng& rng);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t n) const { return {data_.data() + n * dim_, dim_}; }
  const std::vector<double>& coordinates() const noexcept { return data_; }

  /// Largest pairwise Euclidean distance (0 for a single point).
  double diameter() const;

  struct Nearest {
    std::size_t index;
    double distance;
  };
  /// Closest latent to z; ties go to the lower index.
  Nearest nearest(std::span<const double> z) const;

 private:
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> data_;
};

/// Noise level sigma(t) on [0, T] with sigma(0) = 0.
class SigmaSchedule {
 public:
  /// sigma(t) = t.
  static SigmaSchedule linear(double horizon = 1.0);
  SigmaSchedule(std::function<double(double)> sigma, double horizon);

  double operator()(double t) const { return sigma_(t); }
  double horizon() const noexcept { return horizon_; }

 private:
  std::function<double(double)> sigma_;
  double horizon_;
};

/// How the Gaussian increment of each backward step is scaled.
enum class NoiseForm {
  /// sqrt(2 sigma(t_hi) (sigma(t_hi) - sigma(t_lo)) (t_hi - t_lo)), the update
  /// written in the replication argument.
  Product,
  /// sqrt(2 sigma(t_hi) (sigma(t_hi) - sigma(t_lo))), standard Euler-Maruyama.
  EulerMaruyama,
};

std::string_view to_string(NoiseForm form);
NoiseForm parse_noise_form(std::string_view text);

struct SdeConfig {
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  std::size_t trajectories = 256;
  NoiseForm noise = NoiseForm::Product;
};

/// z0 + sigma(t) * eps with eps ~ N(0, I).
std::vector<double> forward_noise(std::span<const double> z0, double t, const SigmaSchedule& schedule, Rng& rng);

/// Posterior weights softmax(-|z_n - z|^2 / (2 sigma^2)) computed with log-sum-exp.
std::vector<double> softmax_weights(std::span<const double> z, double sigma, const LatentSet& latents);

/// Closed-form minimizer of the empirical denoising objective:
/// sum_n w_n (z_n - z) / sigma^2(t) with the weights above.
std::vector<double> optimal_score(std::span<const double> z, double t, const LatentSet& latents,
                                  const SigmaSchedule& schedule);
std::vector<double> optimal_score_at_sigma(std::span<const double> z, double sigma, const LatentSet& latents);

struct BackwardSample {
  std::vector<double> final_point;
  /// State just before the last step, at t = tau.
  std::vector<double> pre_final_point;
  /// States at t_n, t_{n-1}, ..., t_0 when requested.
  std::vector<std::vector<double>> trajectory;
};

/// Euler discretization of the backward SDE driven by the optimal score,
/// from z_T ~ N(0, sigma(T)^2 I) down to t = 0 on a uniform grid. The last
/// step (tau -> 0) applies the zero-noise limit, where the softmax collapses
/// onto the nearest latent and z_0 is that latent.
BackwardSample backward_sample(const LatentSet& latents, const SigmaSchedule& schedule, const SdeConfig& config,
                               Rng& rng, bool keep_trajectory = false);

using ScoreFunction = std::function<std::vector<double>(std::span<const double> z, double t)>;

/// Monte-Carlo denoising score-matching loss
/// E_{n, t, eps} |score(z_n + sigma(t) eps, t) + eps / sigma(t)|^2 with
/// t ~ U(t_min, T).
double dsm_loss(const LatentSet& latents, const ScoreFunction& score, const SigmaSchedule& schedule,
                std::size_t samples, Rng& rng, double t_min = 1e-3);

struct ReplicationStudy {
  double diameter = 0.0;
  double tolerance = 1e-2;
  /// Fraction of z_0 within tolerance * diameter of a latent.
  double replication_fraction = 0.0;
  double mean_final_nn_distance = 0.0;
  /// Same measures on z_tau, before the limit step.
  double pre_final_replication_fraction = 0.0;
  double mean_pre_final_nn_distance = 0.0;
  std::vector<BackwardSample> samples;
};

/// Runs config.trajectories independent samplers; trajectory i uses stream
/// (config.seed, i).
ReplicationStudy replication_study(const LatentSet& latents, const SigmaSchedule& schedule, const SdeConfig& config,
                                   double tolerance = 1e-2, bool keep_trajectories = false);

/// CSV of trajectories: trajectory,step,t,z0,...,z{d-1}.
std::string trajectories_csv(const ReplicationStudy& study, const SigmaSchedule& schedule, std::size_t steps);

}  // namespace tabmem
