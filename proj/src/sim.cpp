#include "wtv/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "wtv/core.hpp"
#include "wtv/monitor.hpp"
#include "wtv/stream.hpp"

namespace wtv {

NoiseModel NoiseModel::standard(int index) {
  NoiseModel nm;
  switch (index) {
    case 1:
      nm.kind = NoiseKind::gaussian_linear_sigma;
      break;
    case 2:
      nm.kind = NoiseKind::gaussian_piecewise_sigma;
      break;
    case 3:
      nm.kind = NoiseKind::uniform_linear_halfwidth;
      break;
    case 4:
      nm.kind = NoiseKind::gaussian_plus_uniform;
      break;
    default:
      throw ContractViolation("NoiseModel::standard: index must be 1..4");
  }
  return nm;
}

double NoiseModel::scale(double t) const {
  switch (kind) {
    case NoiseKind::gaussian_piecewise_sigma:
      return t <= knee ? a0 : a0 + a2 * t;
    case NoiseKind::gaussian_linear_sigma:
    case NoiseKind::uniform_linear_halfwidth:
    case NoiseKind::gaussian_plus_uniform:
      return a0 + a1 * t;
  }
  return a0;
}

SimulatedTrace generate_signal(const std::vector<StepSpec>& steps,
                               std::size_t n, double dt) {
  if (steps.empty()) throw ContractViolation("generate_signal: empty step list");
  if (dt <= 0) throw ContractViolation("generate_signal: dt <= 0");
  SimulatedTrace tr;
  tr.t.resize(n);
  tr.u_net.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = double(i) * dt;
    tr.t[i] = t;
    double level = steps.front().level;
    for (const auto& s : steps)
      if (s.time <= t) level = s.level;
    tr.u_net[i] = level;
  }
  tr.y = tr.u_net;
  tr.epsilon_hat.assign(n, 0.0);
  return tr;
}

SimulatedTrace add_noise(const SimulatedTrace& trace, const NoiseModel& model,
                         std::uint64_t seed) {
  SimulatedTrace tr = trace;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t n = tr.u_net.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = model.scale(tr.t[i]);
    double eps = 0;
    switch (model.kind) {
      case NoiseKind::gaussian_linear_sigma:
      case NoiseKind::gaussian_piecewise_sigma:
        eps = s * gauss(rng);
        break;
      case NoiseKind::uniform_linear_halfwidth:
        eps = s * unit(rng);
        break;
      case NoiseKind::gaussian_plus_uniform:
        eps = s * gauss(rng) + unit(rng);
        break;
    }
    tr.epsilon_hat[i] = eps;
    tr.y[i] = tr.u_net[i] + eps;
  }
  return tr;
}

std::vector<double> reference_sigma(const SimulatedTrace& trace,
                                    std::size_t m) {
  const std::size_t n = trace.epsilon_hat.size();
  if (m < 2 || m > n) throw ContractViolation("reference_sigma: bad m");
  std::vector<long double> ps(n + 1, 0), ps2(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ps[i + 1] = ps[i] + trace.epsilon_hat[i];
    ps2[i + 1] = ps2[i] + (long double)trace.epsilon_hat[i] * trace.epsilon_hat[i];
  }
  std::vector<double> out(n - m + 1);
  for (std::size_t i = 0; i + m <= n; ++i) {
    long double s = ps[i + m] - ps[i];
    long double ss = ps2[i + m] - ps2[i];
    long double var = (ss - s * s / (long double)m) / (long double)(m - 1);
    out[i] = var > 0 ? double(sqrtl(var)) : 0.0;
  }
  return out;
}

double mean_bias(std::span<const double> sigma_hat,
                 std::span<const double> sigma_star) {
  if (sigma_hat.size() != sigma_star.size() || sigma_hat.size() < 2)
    throw ContractViolation("mean_bias: bad lengths");
  double b = 0;
  for (std::size_t i = 0; i < sigma_hat.size(); ++i)
    b += sigma_hat[i] - sigma_star[i];
  return b / double(sigma_hat.size());
}

double rve_score(std::span<const double> sigma_hat,
                 std::span<const double> sigma_star) {
  const std::size_t n = sigma_hat.size();
  if (n != sigma_star.size() || n < 2)
    throw ContractViolation("rve_score: bad lengths");
  double mean = 0;
  for (double v : sigma_hat) mean += v;
  mean /= double(n);
  double den = 0;
  for (double v : sigma_hat) den += (v - mean) * (v - mean);
  if (den == 0) throw ContractViolation("rve_score: constant sigma_hat");
  double bias = mean_bias(sigma_hat, sigma_star);
  double num = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = sigma_hat[i] - bias - sigma_star[i];
    num += d * d;
  }
  return 1.0 - num / den;
}

std::vector<StepSpec> default_signal_steps() {
  return {{0, 0}, {400, 8}, {800, 3}, {1300, 10}, {1700, 5}};
}

double ExperimentReport::median_rve_ours() const {
  std::vector<double> v;
  for (const auto& r : reps) v.push_back(r.rve_ours);
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double ExperimentReport::median_rve_mad() const {
  std::vector<double> v;
  for (const auto& r : reps) v.push_back(r.rve_mad);
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport rep;
  rep.config = config;
  rep.nonright_hist.assign(config.m + 1, 0);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    SimulatedTrace trace =
        add_noise(generate_signal(config.steps, config.n, config.dt),
                  config.noise, config.seed + r);
    std::vector<double> sigma_hat = reference_sigma(trace, config.m);

    const std::size_t m = config.m;
    WindowSamples w0 = WindowSamples::from_yt(
        {trace.y.begin(), trace.y.begin() + m},
        {trace.t.begin(), trace.t.begin() + m});
    StreamState st = make_stream(std::move(w0));

    std::vector<double> sigma_star, mad;
    sigma_star.reserve(sigma_hat.size());
    mad.reserve(sigma_hat.size());
    double rew_sum = 0, slide_us = 0, max_nonright = 0;
    std::size_t slides = 0;
    for (std::size_t i = 0;; ++i) {
      auto [lam, seg] = restore_current(st, config.selector);
      sigma_star.push_back(window_residual_sigma(st.window, seg.expand(m)));
      mad.push_back(mad_sigma(st.window.y));
      if (i + m >= config.n) break;
      auto t0 = std::chrono::steady_clock::now();
      slide_update(st, trace.y[i + m], trace.t[i + m]);
      auto t1 = std::chrono::steady_clock::now();
      slide_us += std::chrono::duration<double, std::micro>(t1 - t0).count();
      rew_sum += double(st.last_rewritten);
      max_nonright = std::max(max_nonright, double(st.last_nonright_len));
      if (st.last_nonright_len < rep.nonright_hist.size())
        ++rep.nonright_hist[st.last_nonright_len];
      ++slides;
    }

    RepetitionResult rr;
    rr.rve_ours = rve_score(sigma_hat, sigma_star);
    rr.bias_ours = mean_bias(sigma_hat, sigma_star);
    rr.rve_mad = rve_score(sigma_hat, mad);
    rr.bias_mad = mean_bias(sigma_hat, mad);
    rr.mean_rewritten = slides ? rew_sum / double(slides) : 0;
    rr.mean_slide_us = slides ? slide_us / double(slides) : 0;
    rr.max_nonright_len = max_nonright;
    rep.reps.push_back(rr);
  }
  return rep;
}

std::vector<BenchResult> run_bench(const std::vector<std::size_t>& window_sizes,
                                   std::size_t slides, std::uint64_t seed) {
  std::vector<BenchResult> out;
  for (std::size_t m : window_sizes) {
    const std::size_t n = m + slides;
    std::vector<StepSpec> steps;
    // stationary piecewise-constant signal, steps every 50 samples with
    // alternating directions so every window carries junctions of both signs
    const double levels[4] = {0, 4, 1, 5};
    for (std::size_t k = 0; k * 50 < n; ++k)
      steps.push_back({double(k) * 50.0, levels[k % 4]});
    SimulatedTrace trace = add_noise(generate_signal(steps, n, 1.0),
                                     NoiseModel{.a1 = 0.0}, seed);
    WindowSamples w0 = WindowSamples::from_yt(
        {trace.y.begin(), trace.y.begin() + m},
        {trace.t.begin(), trace.t.begin() + m});
    // Cutting point at a fixed path quantile: keeps enough junctions near the
    // window ends for the locality conditions to hold on nearly every slide.
    StreamState st = make_stream(std::move(w0),
                                 CutPolicy{CutPolicyKind::path_quantile, 0, 0.7});
    SelectorConfig sel;
    BenchResult br;
    br.m = m;
    for (std::size_t i = 0; i + m < n; ++i) {
      restore_current(st, sel);
      auto t0 = std::chrono::steady_clock::now();
      slide_update(st, trace.y[i + m], trace.t[i + m]);
      auto t1 = std::chrono::steady_clock::now();
      br.mean_slide_us +=
          std::chrono::duration<double, std::micro>(t1 - t0).count();
      br.mean_rewritten += double(st.last_rewritten);
      br.mean_nonright_len += double(st.last_nonright_len);
    }
    double ns = double(slides);
    br.mean_slide_us /= ns;
    br.mean_rewritten /= ns;
    br.mean_nonright_len /= ns;
    out.push_back(br);
  }
  return out;
}

} // namespace wtv
