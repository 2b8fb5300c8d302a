#pragma once

#include <optional>
#include <utility>

#include "wtv/path.hpp"
#include "wtv/types.hpp"

namespace wtv {

enum class CutPolicyKind { previous_selection, fixed_value, path_quantile };

/// Policy refreshing the cutting point lambda-hat after each slide.
/// Correctness of the slide update is policy-independent; only the amount of
/// recomputation per slide varies.
struct CutPolicy {
  CutPolicyKind kind = CutPolicyKind::previous_selection;
  double fixed = 0;
  double quantile = 0.5;
};

/// Bounds of the isolated sequence of a window at the cutting point.
/// p and l are 1-based point indices: (2..p) is the non left-isolated
/// sequence, (l..m) the non right-isolated one, (p+1..l-1) is isolated.
/// A missing bound means the whole window is non-isolated on that side.
struct IsolationBounds {
  bool has_left = false;  // p valid
  bool has_right = false; // l valid
  std::size_t p = 0;
  std::size_t l = 0;
  std::size_t seg_p = 0; // 1-based id of the segment ending at p
  std::size_t seg_l = 0; // 1-based id of the segment starting at l
};

/// Sliding-window stream with an incrementally maintained merge path.
struct StreamState {
  WindowSamples window;
  MergePath path;
  double cutting_point = 0;    // lambda-hat
  double selected_lambda = 0;  // last lambda_ours
  double epsilon_lambda = 0;   // 0 -> auto: max(1e-9, 1e-9 * lambda_hat)
  CutPolicy policy;

  // per-slide diagnostics
  std::size_t last_rewritten = 0;
  std::size_t last_nonright_len = 0;
  bool last_fallback = false;
};

StreamState make_stream(WindowSamples w, CutPolicy policy = {},
                        double epsilon_lambda = 0);

/// Slide locality bounds: l is the first point of the last segment whose
/// left-jump sign matches sign(v_K - y_new); p is the last point of the first
/// segment whose left-jump sign matches sign(v_1 - y_removed).
IsolationBounds find_isolation_bounds(const Segmentation& seg, double y_removed,
                                      double y_new, std::size_t m);

/// Pads segment j (1-based) with sentinel samples v_j -/+ (lambda_hat+eps)/(2s)
/// of unit tau; the first segment gets only the right sentinel, the last only
/// the left one.
std::pair<std::vector<double>, std::vector<double>> build_virtual_segment(
    const WindowSamples& w, const Segmentation& seg, std::size_t j,
    double lambda_hat, double eps);

/// Slides the window by one sample and updates the merge path in place,
/// splicing the sub-paths of the left/right virtual extensions around the
/// unchanged isolated middle and recomputing the above-lambda-hat part on the
/// segment-level sequence. Falls back to a full offline recomputation when
/// the isolation test p < l-2 fails. The resulting path equals
/// compute_merge_path of the new window.
void slide_update(StreamState& state, double y_new, double t_new);

/// Runs the lambda selector on the current path and returns the selected
/// lambda together with the restoration at it. Refreshes the cutting point
/// under the previous_selection policy.
std::pair<double, Segmentation> restore_current(StreamState& state,
                                                const SelectorConfig& cfg);

} // namespace wtv
