#pragma once

#include "forgetting/linalg.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace forgetting {

/// Closed-form forgetting bounds. Unless stated otherwise they assume the
/// unit-ball normalization ||X_m|| <= 1, ||w*|| <= 1.

/// 1/2 max_i (cos^2 a_i)^(k-1) (1 - cos^2 a_i) over the non-zero principal
/// angles a_i between two tasks; exact under the cyclic ordering after
/// k = 2n steps when the first task's non-zero singular values are all 1.
double two_task_forgetting_bound(std::size_t k, const Vector& angles);

struct WorstCase {
  double value = 0.0;
  double argmax_angle = 0.0;
};

/// Worst case of the two-task bound over all angles: the maximizer has
/// sin^2 a = 1/k and the value is 1/2 (1 - 1/k)^(k-1) / k.
WorstCase two_task_worst_case(std::size_t k);

struct CyclicBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Worst-case cyclic forgetting over T >= 3 tasks after k = nT >= T^2 steps:
/// lower T^2/(24 e k), upper min(T^2/sqrt(k), T^2 (d - r_max)/(2k)).
CyclicBounds cyclic_bounds(std::size_t task_count, std::size_t k, std::size_t dimension,
                           std::size_t max_rank);

/// T^2/k: the cyclic upper bound when the cyclic operator is symmetric.
double cyclic_symmetric_upper(std::size_t task_count, std::size_t k);

/// 9 (d - r_avg)/k for the uniform random ordering.
double random_expected_bound(std::size_t k, std::size_t dimension, double average_rank);

/// (cos^2 theta_F)^(k-1) ||w*||^2 bounding ||w_k - w*||^2 for two tasks under
/// the cyclic ordering, k even.
double distance_bound(std::size_t k, double friedrichs, double w_star_norm);

enum class AverageBoundKind { cyclic, random };

/// Average-iterate bounds: (T - 1)/(2n) for the end-of-cycle average with
/// k = nT, and the 1/k residual-surrogate bound for random orderings.
double average_iterate_bound(std::size_t task_count, std::size_t k, AverageBoundKind kind);

/// A named analytic curve sampled at increasing iterations.
struct BoundCurve {
  std::string label;
  std::vector<std::pair<std::size_t, double>> points;
};

}  // namespace forgetting
