#include "wtv/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "wtv/core.hpp"

namespace wtv {
namespace detail {

namespace {

struct SegRec {
  double wy = 0; // sum tau_i * y_i
  double T = 0;  // sum tau_i
  std::size_t first = 0, last = 0;
  int prev = -1, next = -1;
  int s_left = 0, s_right = 0; // junction signs, 0 at window edges
  std::uint64_t version = 0;
  bool alive = true;

  double mean() const { return wy / T; }
  double slope() const { return double(s_right - s_left) / (2.0 * T); }
  bool is_extremum() const { return s_left != 0 && s_right == -s_left; }
};

struct Cand {
  double lambda;
  std::size_t boundary;
  int a, b; // segment slots
  std::uint64_t va, vb;
};

struct CandOrder {
  bool operator()(const Cand& x, const Cand& y) const {
    if (x.lambda != y.lambda) return x.lambda > y.lambda;
    return x.boundary > y.boundary;
  }
};

// Merge value of adjacent segments a, b. Pairs whose levels diverge never
// merge through this junction and get +inf.
double merge_candidate(const SegRec& a, const SegRec& b, double cur) {
  const double sa = a.slope(), sb = b.slope();
  const int gap_sign = a.s_right; // sign(level_b - level_a) at cur
  const double d = sb - sa;       // gap derivative
  bool converging = (gap_sign > 0 && d < 0) || (gap_sign < 0 && d > 0);
  if (!converging) return std::numeric_limits<double>::infinity();
  double lam = (a.mean() - b.mean()) / d;
  return std::max(lam, cur);
}

} // namespace

HomotopyResult run_homotopy(std::span<const double> y,
                            std::span<const double> tau) {
  const std::size_t n = y.size();
  if (n < 2) throw ContractViolation("run_homotopy: need at least 2 points");
  if (tau.size() != n) throw ContractViolation("run_homotopy: tau mismatch");

  HomotopyResult out;
  out.lambdas.assign(n - 1, 0.0);
  out.g_drops.assign(n - 1, 0);

  // Tied runs merge at lambda = 0.
  std::vector<SegRec> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!segs.empty() && y[i] == y[segs.back().last]) {
      segs.back().wy += tau[i] * y[i];
      segs.back().T += tau[i];
      segs.back().last = i;
    } else {
      SegRec s;
      s.wy = tau[i] * y[i];
      s.T = tau[i];
      s.first = s.last = i;
      segs.push_back(s);
    }
  }
  const int R = int(segs.size());
  for (int k = 0; k < R; ++k) {
    segs[k].prev = k - 1;
    segs[k].next = (k + 1 < R) ? k + 1 : -1;
  }
  for (int k = 0; k + 1 < R; ++k) {
    int s = sign_of(y[segs[k + 1].first] - y[segs[k].last]);
    segs[k].s_right = s;
    segs[k + 1].s_left = s;
  }
  int g = 0;
  for (const auto& s : segs) g += s.is_extremum() ? 1 : 0;
  out.g_at_zero = g;

  std::priority_queue<Cand, std::vector<Cand>, CandOrder> heap;
  auto push_cand = [&](int a, double cur) {
    int b = segs[a].next;
    if (b < 0) return;
    double lam = merge_candidate(segs[a], segs[b], cur);
    if (!std::isfinite(lam)) return;
    heap.push(Cand{lam, segs[b].first - 1, a, b, segs[a].version,
                   segs[b].version});
  };
  for (int k = 0; k + 1 < R; ++k) push_cand(k, 0.0);

  double cur = 0.0;
  int alive = R;
  while (alive > 1) {
    if (heap.empty())
      throw CorruptedState("run_homotopy: candidate queue exhausted");
    Cand c = heap.top();
    heap.pop();
    SegRec& a = segs[c.a];
    if (!a.alive || a.version != c.va) continue;
    int bi = a.next;
    if (bi != c.b) continue;
    SegRec& b = segs[bi];
    if (b.version != c.vb) continue;

    cur = std::max(cur, c.lambda);
    MergeEvent ev;
    ev.lambda = cur;
    ev.boundary = b.first - 1;
    ev.left_first = a.first;
    ev.right_first = b.first;
    ev.g_before = g;

    int extr_before = (a.is_extremum() ? 1 : 0) + (b.is_extremum() ? 1 : 0);
    a.wy += b.wy;
    a.T += b.T;
    a.last = b.last;
    a.s_right = b.s_right;
    a.next = b.next;
    if (b.next >= 0) segs[b.next].prev = c.a;
    b.alive = false;
    ++a.version;
    ++b.version;
    --alive;

    int drop = extr_before - (a.is_extremum() ? 1 : 0);
    g -= drop;
    ev.g_after = g;
    out.lambdas[ev.boundary] = cur;
    out.g_drops[ev.boundary] = drop;
    out.events.push_back(ev);

    if (a.prev >= 0) push_cand(a.prev, cur);
    push_cand(c.a, cur);
  }
  return out;
}

std::vector<std::size_t> sorted_event_order(const std::vector<double>& lambdas) {
  std::vector<std::size_t> order(lambdas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lambdas[a] != lambdas[b]) return lambdas[a] < lambdas[b];
    return a < b;
  });
  return order;
}

} // namespace detail

MergePath compute_merge_path(std::span<const double> y,
                             std::span<const double> tau) {
  auto h = detail::run_homotopy(y, tau);
  MergePath p;
  p.lambdas = std::move(h.lambdas);
  p.g_drops = std::move(h.g_drops);
  p.event_order = detail::sorted_event_order(p.lambdas);
  return p;
}

MergePath compute_merge_path(const WindowSamples& w) {
  return compute_merge_path(w.y, w.tau);
}

std::vector<GStep> g_curve(const MergePath& path, const WindowSamples& w) {
  int g = int(extremum_count(solution_at_lambda(w, path, 0.0)));
  std::vector<GStep> steps;
  steps.push_back({0.0, g});
  std::size_t i = 0;
  const auto& ord = path.event_order;
  while (i < ord.size()) {
    double lam = path.lambdas[ord[i]];
    int drop = 0;
    while (i < ord.size() && path.lambdas[ord[i]] == lam) {
      drop += path.g_drops[ord[i]];
      ++i;
    }
    if (lam == 0.0) continue; // tie merges, already reflected in g(0)
    g -= drop;
    steps.push_back({lam, g});
  }
  return steps;
}

double select_lambda(const MergePath& path, const WindowSamples& w,
                     const SelectorConfig& cfg) {
  if (path.lambdas.empty())
    throw ContractViolation("select_lambda: empty path");
  switch (cfg.kind) {
    case SelectorKind::fixed_lambda:
      return cfg.fixed;
    case SelectorKind::external:
      if (!cfg.external)
        throw ContractViolation("select_lambda: external selector not set");
      return cfg.external(path, w);
    case SelectorKind::g_plateau:
      break;
  }
  if (cfg.q < 1) throw ContractViolation("select_lambda: q < 1");

  // Per-event g trajectory, prepended with the lambda = 0 state.
  int g = int(extremum_count(solution_at_lambda(w, path, 0.0)));
  std::vector<double> lam{0.0};
  std::vector<int> gs{g};
  for (std::size_t b : path.event_order) {
    if (path.lambdas[b] == 0.0) continue;
    g -= path.g_drops[b];
    lam.push_back(path.lambdas[b]);
    gs.push_back(g);
  }
  // Plateau onset: most extremums must already be merged (g below
  // g0 / (q+1)) and g may decrease by at most 1 over a geometric lambda
  // window. Events cluster densely at small lambda, so a rank-based flatness
  // test would accept spurious flat runs inside the noise region; the
  // geometric window keeps the test scale invariant across the whole path.
  const double spread = 1.5;
  const int gate = gs.front() / (int(cfg.q) + 1);
  const std::size_t N = lam.size();
  for (std::size_t i = 0; i < N; ++i) {
    if (gs[i] > gate) continue;
    std::size_t j = i + 1;
    while (j < N && lam[j] < spread * lam[i]) ++j;
    if (gs[i] - gs[j - 1] <= 1) return lam[i];
  }
  for (std::size_t i = 0; i < N; ++i)
    if (gs[i] == 0) return lam[i];
  return lam.back();
}

} // namespace wtv
