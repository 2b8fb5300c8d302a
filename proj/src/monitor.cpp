#include "wtv/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wtv/core.hpp"

namespace wtv {

double window_residual_sigma(const WindowSamples& w,
                             std::span<const double> u_star) {
  const std::size_t m = w.size();
  if (u_star.size() != m)
    throw ContractViolation("window_residual_sigma: length mismatch");
  if (m < 2) throw ContractViolation("window_residual_sigma: m < 2");
  double rbar = 0;
  for (std::size_t i = 0; i < m; ++i) rbar += w.y[i] - u_star[i];
  rbar /= double(m);
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double d = (w.y[i] - u_star[i]) - rbar;
    ss += d * d;
  }
  return std::sqrt(ss / double(m - 1));
}

namespace {

// Even length: mean of the two central order statistics.
double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  auto mid = v.begin() + n / 2;
  std::nth_element(v.begin(), mid, v.end());
  double hi = *mid;
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

} // namespace

double mad_sigma(std::span<const double> y) {
  if (y.size() < 2) throw ContractViolation("mad_sigma: need at least 2 points");
  const double sqrt2 = std::sqrt(2.0);
  std::vector<double> b(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    b[i] = sqrt2 * (y[i + 1] - y[i]);
  std::vector<double> tmp(b);
  double med = median_inplace(tmp);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::abs(b[i] - med);
  return 1.4826 * median_inplace(b);
}

double calibrate_baseline(std::span<const MonitorRecord> warmup) {
  if (warmup.empty()) throw ContractViolation("calibrate_baseline: empty span");
  std::vector<double> s;
  s.reserve(warmup.size());
  for (const auto& r : warmup) s.push_back(r.sigma_star);
  return median_inplace(s);
}

MonitorRecord monitor_step(StreamState& state, const SelectorConfig& cfg,
                           const ShiftPolicy& policy,
                           std::span<const MonitorRecord> history,
                           std::size_t window_start_index) {
  auto [lam, seg] = restore_current(state, cfg);
  MonitorRecord rec;
  rec.window_start_index = window_start_index;
  rec.lambda_used = lam;
  rec.sigma_star =
      window_residual_sigma(state.window, seg.expand(state.window.size()));
  rec.mad_sigma = mad_sigma(state.window.y);

  const double cut = policy.ratio_threshold * policy.baseline_sigma;
  bool alert = rec.sigma_star > cut;
  std::size_t needed = policy.consecutive_windows - 1;
  if (alert && history.size() < needed) alert = false;
  for (std::size_t k = 0; alert && k < needed; ++k)
    if (!(history[history.size() - 1 - k].sigma_star > cut)) alert = false;
  rec.shift_alert = alert;
  return rec;
}

} // namespace wtv
