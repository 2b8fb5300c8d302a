#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtv {

/// Thrown when an operation is called with arguments violating its contract.
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by the stream when a sample cannot be ingested (non-monotone timestamp).
class RejectedSample : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an update would corrupt stream state (NaN propagation); the
/// state is left unmodified.
class CorruptedState : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One window of samples: values y, timestamps t and the derived sampling
/// periods tau, with tau_1 = tau_2 re-applied at the window head.
struct WindowSamples {
  std::vector<double> y;
  std::vector<double> t;
  std::vector<double> tau;

  std::size_t size() const { return y.size(); }

  /// Builds a window from values and strictly increasing timestamps.
  static WindowSamples from_yt(std::vector<double> y, std::vector<double> t);

  /// Uniformly sampled window: t_i = (i+1)*dt.
  static WindowSamples uniform(std::vector<double> y, double dt = 1.0);
};

/// Piecewise-constant restoration at one lambda.
///
/// Boundary b (0-based, b in [0, m-2]) separates points b and b+1.
/// signs has K+1 entries with signs[0] = signs[K] = 0 and
/// signs[j] = sign(levels[j] - levels[j-1]) for 1 <= j <= K-1.
struct Segmentation {
  std::vector<std::size_t> cut_boundaries; // sorted
  std::vector<double> levels;              // K
  std::vector<double> lengths;             // K, seconds
  std::vector<int> signs;                  // K+1

  std::size_t segment_count() const { return levels.size(); }

  /// First point index of segment j (0-based segment index).
  std::size_t segment_first(std::size_t j) const {
    return j == 0 ? 0 : cut_boundaries[j - 1] + 1;
  }
  /// Last point index of segment j.
  std::size_t segment_last(std::size_t j, std::size_t m) const {
    return j + 1 == segment_count() ? m - 1 : cut_boundaries[j];
  }

  /// Pointwise restoration u* of length m.
  std::vector<double> expand(std::size_t m) const;
};

/// Full merge path of one window: per-boundary merge values and extremum-count
/// drops. event_order lists boundaries sorted by (lambda, boundary index).
struct MergePath {
  std::vector<double> lambdas;          // m-1
  std::vector<int> g_drops;             // m-1
  std::vector<std::size_t> event_order; // m-1

  double max_lambda() const;
};

inline int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

} // namespace wtv
