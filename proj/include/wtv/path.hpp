#pragma once

#include <functional>
#include <span>

#include "wtv/types.hpp"

namespace wtv {

/// One committed merge of two adjacent segments during the homotopy.
struct MergeEvent {
  double lambda = 0;
  std::size_t boundary = 0; // 0-based boundary index
  std::size_t left_first = 0;
  std::size_t right_first = 0;
  int g_before = 0;
  int g_after = 0;
};

namespace detail {

/// Raw homotopy output for a (y, tau) sequence; timestamps are irrelevant to
/// the path itself.
struct HomotopyResult {
  std::vector<double> lambdas;
  std::vector<int> g_drops;
  std::vector<MergeEvent> events; // commit order, lambda nondecreasing
  int g_at_zero = 0;
};

HomotopyResult run_homotopy(std::span<const double> y,
                            std::span<const double> tau);

std::vector<std::size_t> sorted_event_order(const std::vector<double>& lambdas);

} // namespace detail

/// Event-driven merge-path computation: starting from each point (tied runs
/// pre-merged at lambda = 0) a segment, levels move linearly between events
/// and adjacent segments merge when their levels meet. Candidates live in a
/// priority queue keyed by (lambda, boundary index), invalidated lazily.
MergePath compute_merge_path(const WindowSamples& w);
MergePath compute_merge_path(std::span<const double> y,
                             std::span<const double> tau);

struct GStep {
  double lambda;
  int g;
};

/// Step function g(lambda): extremum count of the restoration, constant
/// between merge events. First step is (0, g(0)).
std::vector<GStep> g_curve(const MergePath& path, const WindowSamples& w);

enum class SelectorKind { g_plateau, fixed_lambda, external };

struct SelectorConfig {
  std::size_t q = 10; // derivative approximation length, log10(q) = 1
  SelectorKind kind = SelectorKind::g_plateau;
  double fixed = 0;
  std::function<double(const MergePath&, const WindowSamples&)> external;
};

/// Automatic lambda choice driven by the decay of g(lambda). The default
/// g-plateau rule walks merge events in ascending lambda and returns the
/// lambda of the first event after which g decreases by at most 1 over the
/// next q events; if no such plateau exists, the lambda where g first
/// reaches 0. Pluggable via SelectorConfig.
double select_lambda(const MergePath& path, const WindowSamples& w,
                     const SelectorConfig& cfg);

} // namespace wtv
