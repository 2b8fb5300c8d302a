#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "wtv/core.hpp"
#include "wtv/path.hpp"
#include "wtv/stream.hpp"

using namespace wtv;

namespace {

bool paths_match(const MergePath& a, const MergePath& b, double rel = 1e-9) {
  if (a.lambdas.size() != b.lambdas.size()) return false;
  for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
    double tol = rel * std::max(1.0, std::abs(b.lambdas[i]));
    if (std::abs(a.lambdas[i] - b.lambdas[i]) > tol) return false;
  }
  return a.g_drops == b.g_drops && a.event_order == b.event_order;
}

// Gaussian stream with occasional level steps.
std::vector<double> step_noise_stream(std::uint64_t seed, std::size_t n,
                                      double sigma = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, sigma);
  std::uniform_real_distribution<double> u01(0, 1);
  std::vector<double> y(n);
  double level = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u01(rng) < 0.01) level += (u01(rng) - 0.5) * 8;
    y[i] = level + g(rng);
  }
  return y;
}

} // namespace

TEST_CASE("find_isolation_bounds on a single segment") {
  auto w = WindowSamples::uniform({3, 3, 3, 3});
  auto path = compute_merge_path(w);
  auto seg = solution_at_lambda(w, path, 0.5);
  auto b = find_isolation_bounds(seg, 3.0, 10.0, 4);
  CHECK_FALSE(b.has_left);
  CHECK_FALSE(b.has_right);
}

TEST_CASE("find_isolation_bounds picks matching junctions") {
  // levels 0, 2, 1, 3 with unit-length segments
  auto w = WindowSamples::uniform({0, 2, 1, 3});
  MergePath path;
  path.lambdas = {10, 10, 10}; // keep every point its own segment
  path.g_drops = {0, 0, 0};
  path.event_order = {0, 1, 2};
  auto seg = solution_at_lambda(w, path, 0);
  REQUIRE(seg.segment_count() == 4);

  // y_new above v_K: condition sign(v_{j-1}-v_j) = sign(v_K-y_new) = -1
  // holds last at segment 4 (1 -> 3 rises, left jump sign -1)
  auto b = find_isolation_bounds(seg, -1.0, 10.0, 4);
  REQUIRE(b.has_right);
  CHECK(b.seg_l == 4);
  CHECK(b.l == 4);

  // removed sample below v_1: sign(v_1-y_removed) = +1 first matches the
  // 2 -> 1 drop into segment 3
  REQUIRE(b.has_left);
  CHECK(b.seg_p == 3);
  CHECK(b.p == 3);
}

TEST_CASE("virtual segment sentinel values") {
  // first segment, s_1 = +1, lambda_hat = 1, eps = 0.01, v_1 = 0
  auto w = WindowSamples::uniform({-0.5, 0.5, 4});
  MergePath path;
  path.lambdas = {0.5, 10};
  path.g_drops = {0, 0};
  path.event_order = {0, 1};
  auto seg = solution_at_lambda(w, path, 1.0);
  REQUIRE(seg.segment_count() == 2);
  REQUIRE(seg.signs[1] == 1);
  // shift the first level to exactly 0 for the fixture
  double v1 = seg.levels[0];
  auto [yv, tv] = build_virtual_segment(w, seg, 1, 1.0, 0.01);
  REQUIRE(yv.size() == 3);
  CHECK(yv[0] == w.y[0]);
  CHECK(yv[1] == w.y[1]);
  CHECK(yv[2] == doctest::Approx(v1 + 0.505));
  CHECK(tv == std::vector<double>{1, 1, 1});
}

TEST_CASE("virtual segment interior sign arithmetic") {
  // interior segment with s_left = -1, s_right = +1: both sentinels above v
  auto w = WindowSamples::uniform({5, 0.1, -0.1, 5});
  MergePath path;
  path.lambdas = {10, 0.05, 10};
  path.g_drops = {0, 0, 0};
  path.event_order = {1, 0, 2};
  double lam_hat = 1.0, eps = 0.01;
  auto seg = solution_at_lambda(w, path, lam_hat);
  REQUIRE(seg.segment_count() == 3);
  CHECK(seg.signs[1] == -1);
  CHECK(seg.signs[2] == 1);
  auto [yv, tv] = build_virtual_segment(w, seg, 2, lam_hat, eps);
  REQUIRE(yv.size() == 4);
  double c = (lam_hat + eps) / 2.0;
  CHECK(yv.front() == doctest::Approx(seg.levels[1] + c));
  CHECK(yv.back() == doctest::Approx(seg.levels[1] + c));
  CHECK(tv.front() == 1);
  CHECK(tv.back() == 1);
}

TEST_CASE("virtual sub-paths decompose the below-cut path") {
  std::mt19937_64 rng(515);
  std::uniform_real_distribution<double> u01(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 6 + trial % 10;
    auto w = oracle::random_window(3000 + trial, m);
    auto path = compute_merge_path(w);
    double lam_hat = u01(rng) * path.max_lambda();
    auto seg = solution_at_lambda(w, path, lam_hat);
    const std::size_t K = seg.segment_count();

    std::vector<double> expected;
    for (double l : path.lambdas)
      if (l <= lam_hat) expected.push_back(l);

    std::vector<double> got;
    for (std::size_t j = 1; j <= K; ++j) {
      auto [yv, tv] = build_virtual_segment(w, seg, j, lam_hat, 1e-9);
      if (yv.size() < 2) continue;
      auto sub = compute_merge_path(yv, tv);
      std::size_t lo = (j == 1) ? 0 : 1;
      std::size_t hi = (j == K) ? sub.lambdas.size() : sub.lambdas.size() - 1;
      for (std::size_t i = lo; i < hi; ++i) got.push_back(sub.lambdas[i]);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      REQUIRE(got[i] ==
              doctest::Approx(expected[i]).epsilon(1e-9).scale(1.0));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("slide locality: slid restoration agrees on the isolated sequence") {
  std::mt19937_64 rng(626);
  std::uniform_real_distribution<double> u01(0, 1);
  int slides_checked = 0;
  for (int trial = 0; trial < 1000 && slides_checked < 100; ++trial) {
    std::size_t m = 30;
    auto ys = step_noise_stream(7000 + trial, m + 1);
    std::vector<double> t(m + 1);
    for (std::size_t i = 0; i <= m; ++i) t[i] = double(i + 1);
    auto w_old = WindowSamples::from_yt({ys.begin(), ys.begin() + m},
                                        {t.begin(), t.begin() + m});
    auto path_old = compute_merge_path(w_old);
    double lam_hat = u01(rng) * path_old.max_lambda();
    auto seg_old = solution_at_lambda(w_old, path_old, lam_hat);
    auto bounds = find_isolation_bounds(seg_old, ys.front(), ys.back(), m);
    if (!bounds.has_left || !bounds.has_right) continue;
    if (!(bounds.p + 2 < bounds.l)) continue;

    auto w_new = WindowSamples::from_yt({ys.begin() + 1, ys.end()},
                                        {t.begin() + 1, t.end()});
    auto u_new = solution_at_lambda(w_new, compute_merge_path(w_new), lam_hat)
                     .expand(m);
    auto u_old = seg_old.expand(m);
    // isolated sequence: old 1-based points p+1 .. l-1
    for (std::size_t i = bounds.p + 1; i <= bounds.l - 1; ++i)
      REQUIRE(u_new[i - 2] == u_old[i - 1]); // exact
    ++slides_checked;
  }
  CHECK(slides_checked == 100);
}

TEST_CASE("online/offline equivalence on random streams") {
  const std::size_t m = 50;
  const std::size_t slides = 150;
  auto ys = step_noise_stream(11, m + slides);
  std::vector<double> t(m + slides);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i + 1);

  // quantile cutting point keeps junctions near the ends, so most slides
  // exercise the incremental branch on this stream
  StreamState st = make_stream(
      WindowSamples::from_yt({ys.begin(), ys.begin() + m},
                             {t.begin(), t.begin() + m}),
      CutPolicy{CutPolicyKind::path_quantile, 0, 0.7});
  SelectorConfig sel;
  std::size_t incremental = 0;
  for (std::size_t i = 0; i < slides; ++i) {
    restore_current(st, sel);
    slide_update(st, ys[m + i], t[m + i]);
    auto offline = compute_merge_path(st.window);
    REQUIRE(paths_match(st.path, offline));
    if (!st.last_fallback) ++incremental;
  }
  CHECK(incremental > slides / 2); // the incremental branch must actually run
}

TEST_CASE("online/offline equivalence under fixed and quantile policies") {
  const std::size_t m = 40;
  auto ys = step_noise_stream(22, m + 60);
  std::vector<double> t(ys.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i + 1);

  for (CutPolicy pol : {CutPolicy{CutPolicyKind::fixed_value, 0.8, 0.5},
                        CutPolicy{CutPolicyKind::path_quantile, 0, 0.7}}) {
    StreamState st = make_stream(
        WindowSamples::from_yt({ys.begin(), ys.begin() + m},
                               {t.begin(), t.begin() + m}),
        pol);
    for (std::size_t i = 0; i + m < ys.size(); ++i) {
      slide_update(st, ys[m + i], t[m + i]);
      REQUIRE(paths_match(st.path, compute_merge_path(st.window)));
    }
  }
}

TEST_CASE("constant stream keeps a zero path") {
  auto w = WindowSamples::uniform({2, 2, 2, 2, 2});
  StreamState st = make_stream(w);
  for (int i = 0; i < 5; ++i) {
    slide_update(st, 2.0, double(6 + i));
    for (double l : st.path.lambdas) CHECK(l == 0);
  }
}

TEST_CASE("cutting point zero falls back to offline and stays correct") {
  const std::size_t m = 20;
  auto ys = step_noise_stream(33, m + 20);
  std::vector<double> t(ys.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i + 1);
  StreamState st = make_stream(
      WindowSamples::from_yt({ys.begin(), ys.begin() + m},
                             {t.begin(), t.begin() + m}),
      CutPolicy{CutPolicyKind::fixed_value, 0.0, 0.5});
  for (std::size_t i = 0; i + m < ys.size(); ++i) {
    slide_update(st, ys[m + i], t[m + i]);
    REQUIRE(paths_match(st.path, compute_merge_path(st.window)));
  }
}

TEST_CASE("rejected samples leave the state untouched") {
  auto w = WindowSamples::uniform({1, 2, 3, 4});
  StreamState st = make_stream(w);
  auto before = st.path.lambdas;
  CHECK_THROWS_AS(slide_update(st, 1.0, 3.0), RejectedSample); // t not increasing
  CHECK_THROWS_AS(slide_update(st, std::nan(""), 10.0), RejectedSample);
  CHECK(st.path.lambdas == before);
  CHECK(st.window.y == w.y);
}

TEST_CASE("restore_current with selector override matches solution_at_lambda") {
  auto w = oracle::random_window(9, 12);
  StreamState st = make_stream(w);
  SelectorConfig fixed;
  fixed.kind = SelectorKind::fixed_lambda;
  fixed.fixed = 0.3;
  auto [lam, seg] = restore_current(st, fixed);
  CHECK(lam == 0.3);
  auto direct = solution_at_lambda(st.window, st.path, 0.3);
  CHECK(seg.levels == direct.levels);
  CHECK(seg.cut_boundaries == direct.cut_boundaries);
}
