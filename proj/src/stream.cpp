#include "wtv/stream.hpp"

#include <algorithm>
#include <cmath>

#include "wtv/core.hpp"

namespace wtv {

namespace {

double path_quantile(const std::vector<double>& lambdas, double q) {
  std::vector<double> s(lambdas);
  std::sort(s.begin(), s.end());
  double pos = q * double(s.size() - 1);
  std::size_t lo = std::size_t(pos);
  std::size_t hi = std::min(lo + 1, s.size() - 1);
  double frac = pos - double(lo);
  return s[lo] * (1 - frac) + s[hi] * frac;
}

} // namespace

StreamState make_stream(WindowSamples w, CutPolicy policy,
                        double epsilon_lambda) {
  StreamState st;
  st.path = compute_merge_path(w);
  st.window = std::move(w);
  st.policy = policy;
  st.epsilon_lambda = epsilon_lambda;
  if (policy.kind == CutPolicyKind::fixed_value) st.cutting_point = policy.fixed;
  if (policy.kind == CutPolicyKind::path_quantile)
    st.cutting_point = path_quantile(st.path.lambdas, policy.quantile);
  return st;
}

IsolationBounds find_isolation_bounds(const Segmentation& seg, double y_removed,
                                      double y_new, std::size_t m) {
  IsolationBounds b;
  const std::size_t K = seg.segment_count();
  const int target_r = sign_of(seg.levels[K - 1] - y_new);
  const int target_l = sign_of(seg.levels[0] - y_removed);
  // last segment j in [2..K] with sign(v_{j-1} - v_j) = sign(v_K - y_new)
  for (std::size_t j = K; j >= 2; --j) {
    if (target_r != 0 && -seg.signs[j - 1] == target_r) {
      b.has_right = true;
      b.seg_l = j;
      b.l = seg.segment_first(j - 1) + 1;
      break;
    }
  }
  // first segment k in [2..K] with sign(v_{k-1} - v_k) = sign(v_1 - y_removed)
  for (std::size_t k = 2; k <= K; ++k) {
    if (target_l != 0 && -seg.signs[k - 1] == target_l) {
      b.has_left = true;
      b.seg_p = k;
      b.p = seg.segment_last(k - 1, m) + 1;
      break;
    }
  }
  return b;
}

std::pair<std::vector<double>, std::vector<double>> build_virtual_segment(
    const WindowSamples& w, const Segmentation& seg, std::size_t j,
    double lambda_hat, double eps) {
  if (eps <= 0) throw ContractViolation("build_virtual_segment: eps <= 0");
  const std::size_t K = seg.segment_count();
  if (j < 1 || j > K) throw ContractViolation("build_virtual_segment: bad segment id");
  const std::size_t m = w.size();
  const std::size_t first = seg.segment_first(j - 1);
  const std::size_t last = seg.segment_last(j - 1, m);
  std::vector<double> yv, tv;
  if (j >= 2) {
    if (seg.signs[j - 1] == 0)
      throw ContractViolation("build_virtual_segment: zero sign at left junction");
    yv.push_back(seg.levels[j - 1] -
                 (lambda_hat + eps) / (2.0 * seg.signs[j - 1]));
    tv.push_back(1.0);
  }
  for (std::size_t i = first; i <= last; ++i) {
    yv.push_back(w.y[i]);
    tv.push_back(w.tau[i]);
  }
  if (j <= K - 1) {
    if (seg.signs[j] == 0)
      throw ContractViolation("build_virtual_segment: zero sign at right junction");
    yv.push_back(seg.levels[j - 1] + (lambda_hat + eps) / (2.0 * seg.signs[j]));
    tv.push_back(1.0);
  }
  return {std::move(yv), std::move(tv)};
}

void slide_update(StreamState& state, double y_new, double t_new) {
  const WindowSamples& w = state.window;
  const std::size_t m = w.size();
  if (!(t_new > w.t.back()))
    throw RejectedSample("slide_update: non-monotone timestamp");
  if (std::isnan(y_new) || std::isnan(t_new))
    throw RejectedSample("slide_update: NaN sample");

  std::vector<double> ny(w.y.begin() + 1, w.y.end());
  ny.push_back(y_new);
  std::vector<double> nt(w.t.begin() + 1, w.t.end());
  nt.push_back(t_new);
  WindowSamples nw = WindowSamples::from_yt(std::move(ny), std::move(nt));

  const double lam_hat = state.cutting_point;
  Segmentation seg = solution_at_lambda(w, state.path, lam_hat);
  IsolationBounds bounds = find_isolation_bounds(seg, w.y.front(), y_new, m);
  const std::size_t p = bounds.has_left ? bounds.p : m;  // pessimistic
  const std::size_t l = bounds.has_right ? bounds.l : 1; // pessimistic

  MergePath np;
  std::size_t rewritten = m - 1;
  bool fallback = true;
  if (p + 2 < l) {
    const double eps = state.epsilon_lambda > 0
                           ? state.epsilon_lambda
                           : std::max(1e-9, 1e-9 * lam_hat);
    // Right virtual extension: left sentinel + old points l..m + new sample.
    const std::size_t jl = bounds.seg_l;
    std::vector<double> ya, taua;
    ya.push_back(seg.levels[jl - 1] -
                 (lam_hat + eps) / (2.0 * seg.signs[jl - 1]));
    taua.push_back(1.0);
    for (std::size_t i = l - 1; i < m; ++i) {
      ya.push_back(w.y[i]);
      taua.push_back(w.tau[i]);
    }
    ya.push_back(y_new);
    taua.push_back(t_new - w.t.back());
    auto suba = detail::run_homotopy(ya, taua);

    // Left virtual extension: new points 1..p-1 + right sentinel.
    const std::size_t jp = bounds.seg_p;
    std::vector<double> yb, taub;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      yb.push_back(nw.y[i]);
      taub.push_back(nw.tau[i]);
    }
    yb.push_back(seg.levels[jp - 1] + (lam_hat + eps) / (2.0 * seg.signs[jp]));
    taub.push_back(1.0);
    auto subb = detail::run_homotopy(yb, taub);

    std::vector<double> nl(m - 1);
    std::vector<int> ng(m - 1);
    for (std::size_t i = 0; i + 1 < p; ++i) {
      nl[i] = subb.lambdas[i];
      ng[i] = subb.g_drops[i];
    }
    for (std::size_t k0 = p - 1; k0 + 3 <= l; ++k0) {
      nl[k0] = state.path.lambdas[k0 + 1];
      ng[k0] = state.path.g_drops[k0 + 1];
    }
    for (std::size_t k0 = l - 2; k0 + 1 < m; ++k0) {
      nl[k0] = suba.lambdas[k0 + 3 - l];
      ng[k0] = suba.g_drops[k0 + 3 - l];
    }

    // Above-lambda-hat part: path of the segment-level sequence.
    std::vector<std::size_t> d;
    for (std::size_t k0 = 0; k0 + 1 < m; ++k0)
      if (nl[k0] > lam_hat) d.push_back(k0);
    if (!d.empty()) {
      const std::size_t K = d.size() + 1;
      std::vector<int> signs(K + 1, 0);
      for (std::size_t j = 0; j + 1 < K; ++j)
        signs[j + 1] = sign_of(nw.y[d[j] + 1] - nw.y[d[j]]);
      std::vector<double> levels = segment_levels(nw, d, signs, lam_hat);
      std::vector<double> lengths(K);
      std::size_t first = 0;
      for (std::size_t j = 0; j < K; ++j) {
        std::size_t last = (j + 1 == K) ? m - 1 : d[j];
        double T = 0;
        for (std::size_t i = first; i <= last; ++i) T += nw.tau[i];
        lengths[j] = T;
        first = last + 1;
      }
      auto subd = detail::run_homotopy(levels, lengths);
      for (std::size_t c = 0; c + 1 < K; ++c) {
        nl[d[c]] = lam_hat + subd.lambdas[c];
        ng[d[c]] = subd.g_drops[c];
      }
    }

    for (double v : nl)
      if (std::isnan(v)) throw CorruptedState("slide_update: NaN in path");
    np.lambdas = std::move(nl);
    np.g_drops = std::move(ng);
    np.event_order = detail::sorted_event_order(np.lambdas);
    // Sample-level recomputation touches only the two window ends; the
    // above-lambda-hat part is replayed on segment levels and not counted.
    rewritten = (p - 1) + (m - l + 2);
    fallback = false;
  } else {
    np = compute_merge_path(nw);
    for (double v : np.lambdas)
      if (std::isnan(v)) throw CorruptedState("slide_update: NaN in path");
  }

  state.window = std::move(nw);
  state.path = std::move(np);
  state.last_rewritten = rewritten;
  state.last_nonright_len = bounds.has_right ? (m - l + 1) : m;
  state.last_fallback = fallback;
  switch (state.policy.kind) {
    case CutPolicyKind::fixed_value:
      state.cutting_point = state.policy.fixed;
      break;
    case CutPolicyKind::path_quantile:
      state.cutting_point = path_quantile(state.path.lambdas,
                                          state.policy.quantile);
      break;
    case CutPolicyKind::previous_selection:
      break; // refreshed by restore_current
  }
}

std::pair<double, Segmentation> restore_current(StreamState& state,
                                                const SelectorConfig& cfg) {
  double lam = select_lambda(state.path, state.window, cfg);
  state.selected_lambda = lam;
  if (state.policy.kind == CutPolicyKind::previous_selection)
    state.cutting_point = lam;
  return {lam, solution_at_lambda(state.window, state.path, lam)};
}

} // namespace wtv
