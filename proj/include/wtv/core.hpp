#pragma once

#include <span>

#include "wtv/types.hpp"

namespace wtv {

/// Weighted TV functional:
///   sum_i tau_i (y_i - u_i)^2 + lambda * sum_{i=1}^{m-1} |u_{i+1} - u_i|
double evaluate_functional(const WindowSamples& w, std::span<const double> u,
                           double lambda);

/// Closed-form segment levels for a fixed segmentation and sign vector:
///   v_j = ybar_j + lambda / (2 T_j) * (s_j - s_{j-1})
/// with ybar_j the tau-weighted mean over segment j.
std::vector<double> segment_levels(const WindowSamples& w,
                                   const std::vector<std::size_t>& boundaries,
                                   const std::vector<int>& signs,
                                   double lambda);

/// Restoration at any lambda from a precomputed merge path. The cutting set
/// is {b : lambda_b > lambda}; junction signs are the raw data-difference
/// signs across the surviving boundaries (constant below the boundary's
/// merge value).
Segmentation solution_at_lambda(const WindowSamples& w, const MergePath& path,
                                double lambda);

/// Number of strict interior local extrema of the segment-level sequence.
/// Endpoint segments are never counted.
std::size_t extremum_count(const Segmentation& seg);

/// tau-weighted mean of y.
double weighted_mean(std::span<const double> y, std::span<const double> tau);

} // namespace wtv
