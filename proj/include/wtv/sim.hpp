#pragma once

#include <cstdint>
#include <span>

#include "wtv/path.hpp"
#include "wtv/types.hpp"

namespace wtv {

enum class NoiseKind {
  gaussian_linear_sigma,    // N(0, (a0 + a1 t)^2)
  gaussian_piecewise_sigma, // sigma = a0 for t <= knee, a0 + a2 t after
  uniform_linear_halfwidth, // U(-d(t), d(t)), d = a0 + a1 t
  gaussian_plus_uniform     // N(0, (a0 + a1 t)^2) + U(-1, 1)
};

struct NoiseModel {
  NoiseKind kind = NoiseKind::gaussian_linear_sigma;
  double a0 = 1.0;
  double a1 = 0.0005;
  double a2 = 0.001;
  double knee = 1000.0;

  /// Models 1..4 of the simulation study.
  static NoiseModel standard(int index);
  /// Gaussian scale / uniform half-width at time t.
  double scale(double t) const;
};

struct StepSpec {
  double time;
  double level;
};

struct SimulatedTrace {
  std::vector<double> u_net;
  std::vector<double> y;
  std::vector<double> t;
  std::vector<double> epsilon_hat; // y - u_net
};

/// Piecewise-constant clean signal sampled at uniform dt, t_i = i * dt.
SimulatedTrace generate_signal(const std::vector<StepSpec>& steps,
                               std::size_t n, double dt);

/// Adds noise drawn per model at each timestamp; deterministic under seed.
SimulatedTrace add_noise(const SimulatedTrace& trace, const NoiseModel& model,
                         std::uint64_t seed);

/// Sliding unweighted standard deviation of the true noise realisation,
/// length n - m + 1.
std::vector<double> reference_sigma(const SimulatedTrace& trace, std::size_t m);

/// bias = mean(sigma_hat - sigma_star)
double mean_bias(std::span<const double> sigma_hat,
                 std::span<const double> sigma_star);

/// RVE = 1 - sum((sigma_hat - bias - sigma_star)^2)
///         / sum((sigma_hat - mean(sigma_hat))^2)
/// Throws for constant sigma_hat (zero denominator).
double rve_score(std::span<const double> sigma_hat,
                 std::span<const double> sigma_star);

std::vector<StepSpec> default_signal_steps();

struct ExperimentConfig {
  NoiseModel noise;
  std::size_t m = 400;
  std::size_t n = 2000;
  double dt = 1.0;
  std::size_t repetitions = 20;
  std::uint64_t seed = 1;
  SelectorConfig selector;
  std::vector<StepSpec> steps = default_signal_steps();
};

struct RepetitionResult {
  double rve_ours = 0;
  double bias_ours = 0;
  double rve_mad = 0;
  double bias_mad = 0;
  double mean_rewritten = 0;
  double mean_slide_us = 0;
  double max_nonright_len = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RepetitionResult> reps;
  std::vector<std::size_t> nonright_hist; // index = non-right-isolated length

  double median_rve_ours() const;
  double median_rve_mad() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

struct BenchResult {
  std::size_t m = 0;
  double mean_slide_us = 0;
  double mean_rewritten = 0;
  double mean_nonright_len = 0;
};

/// Per-slide wall time and touched-boundary counts on a stationary
/// piecewise-constant signal, one entry per window size.
std::vector<BenchResult> run_bench(const std::vector<std::size_t>& window_sizes,
                                   std::size_t slides, std::uint64_t seed);

} // namespace wtv
