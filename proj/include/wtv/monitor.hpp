#pragma once

#include <span>

#include "wtv/stream.hpp"
#include "wtv/types.hpp"

namespace wtv {

struct MonitorRecord {
  std::size_t window_start_index = 0;
  double sigma_star = 0;   // residual standard deviation
  double lambda_used = 0;
  double mad_sigma = 0;
  bool shift_alert = false;
};

/// Variance-shift rule: alert when sigma_star exceeds ratio_threshold times
/// the stable-regime baseline for consecutive_windows successive windows.
struct ShiftPolicy {
  double baseline_sigma = 1.0;
  double ratio_threshold = 1.2;
  std::size_t consecutive_windows = 5;
};

/// Unweighted standard deviation of the residual y - u_star:
///   sqrt( 1/(m-1) * sum (r_j - rbar)^2 )
double window_residual_sigma(const WindowSamples& w,
                             std::span<const double> u_star);

/// Robust sigma estimate from scaled first differences:
///   1.4826 * median(|B - median(B)|),  B = sqrt(2) * diff(y)
double mad_sigma(std::span<const double> y);

/// Median of sigma_star over a warm-up span of records.
double calibrate_baseline(std::span<const MonitorRecord> warmup);

/// One monitoring step: restores the current window, computes sigma_star and
/// the MAD baseline, and evaluates the shift rule against the trailing
/// history.
MonitorRecord monitor_step(StreamState& state, const SelectorConfig& cfg,
                           const ShiftPolicy& policy,
                           std::span<const MonitorRecord> history,
                           std::size_t window_start_index);

} // namespace wtv
