#include "wtv/core.hpp"

#include <algorithm>
#include <cmath>

namespace wtv {

WindowSamples WindowSamples::from_yt(std::vector<double> y,
                                     std::vector<double> t) {
  if (y.size() != t.size())
    throw ContractViolation("WindowSamples: y and t length mismatch");
  if (y.size() < 2)
    throw ContractViolation("WindowSamples: need at least 2 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ContractViolation("WindowSamples: timestamps not strictly increasing");
  std::vector<double> tau(y.size());
  for (std::size_t i = 1; i < t.size(); ++i) tau[i] = t[i] - t[i - 1];
  tau[0] = tau[1]; // tau_1 = tau_2 convention
  WindowSamples w;
  w.y = std::move(y);
  w.t = std::move(t);
  w.tau = std::move(tau);
  return w;
}

WindowSamples WindowSamples::uniform(std::vector<double> y, double dt) {
  std::vector<double> t(y.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dt * double(i + 1);
  return from_yt(std::move(y), std::move(t));
}

std::vector<double> Segmentation::expand(std::size_t m) const {
  std::vector<double> u(m);
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (j < cut_boundaries.size() && i > cut_boundaries[j]) ++j;
    u[i] = levels[j];
  }
  return u;
}

double MergePath::max_lambda() const {
  double mx = 0;
  for (double l : lambdas) mx = std::max(mx, l);
  return mx;
}

double weighted_mean(std::span<const double> y, std::span<const double> tau) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += tau[i] * y[i];
    den += tau[i];
  }
  return num / den;
}

double evaluate_functional(const WindowSamples& w, std::span<const double> u,
                           double lambda) {
  if (u.size() != w.size())
    throw ContractViolation("evaluate_functional: length mismatch");
  if (lambda < 0) throw ContractViolation("evaluate_functional: lambda < 0");
  double data = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double r = w.y[i] - u[i];
    data += w.tau[i] * r * r;
  }
  double tv = 0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) tv += std::abs(u[i + 1] - u[i]);
  return data + lambda * tv;
}

std::vector<double> segment_levels(const WindowSamples& w,
                                   const std::vector<std::size_t>& boundaries,
                                   const std::vector<int>& signs,
                                   double lambda) {
  const std::size_t m = w.size();
  const std::size_t K = boundaries.size() + 1;
  if (signs.size() != K + 1 || signs.front() != 0 || signs.back() != 0)
    throw ContractViolation("segment_levels: invalid sign vector");
  std::vector<double> v(K);
  std::size_t first = 0;
  for (std::size_t j = 0; j < K; ++j) {
    std::size_t last = (j + 1 == K) ? m - 1 : boundaries[j];
    if (last < first || last >= m)
      throw ContractViolation("segment_levels: invalid boundaries");
    double num = 0, T = 0;
    for (std::size_t i = first; i <= last; ++i) {
      num += w.tau[i] * w.y[i];
      T += w.tau[i];
    }
    v[j] = num / T + lambda / (2.0 * T) * double(signs[j + 1] - signs[j]);
    first = last + 1;
  }
  return v;
}

Segmentation solution_at_lambda(const WindowSamples& w, const MergePath& path,
                                double lambda) {
  const std::size_t m = w.size();
  if (path.lambdas.size() != m - 1)
    throw ContractViolation("solution_at_lambda: path does not match window");
  Segmentation seg;
  for (std::size_t b = 0; b + 1 < m; ++b)
    if (path.lambdas[b] > lambda) seg.cut_boundaries.push_back(b);
  const std::size_t K = seg.cut_boundaries.size() + 1;
  seg.signs.assign(K + 1, 0);
  for (std::size_t j = 0; j + 1 < K; ++j) {
    std::size_t b = seg.cut_boundaries[j];
    // junction signs are constant below the merge value of the boundary
    seg.signs[j + 1] = sign_of(w.y[b + 1] - w.y[b]);
  }
  seg.levels = segment_levels(w, seg.cut_boundaries, seg.signs, lambda);
  seg.lengths.resize(K);
  std::size_t first = 0;
  for (std::size_t j = 0; j < K; ++j) {
    std::size_t last = (j + 1 == K) ? m - 1 : seg.cut_boundaries[j];
    double T = 0;
    for (std::size_t i = first; i <= last; ++i) T += w.tau[i];
    seg.lengths[j] = T;
    first = last + 1;
  }
  return seg;
}

std::size_t extremum_count(const Segmentation& seg) {
  const std::size_t K = seg.segment_count();
  std::size_t g = 0;
  // interior segment j (0-based): junction signs signs[j] and signs[j+1]
  for (std::size_t j = 1; j + 1 < K; ++j)
    if (seg.signs[j] != 0 && seg.signs[j + 1] == -seg.signs[j]) ++g;
  return g;
}

} // namespace wtv
