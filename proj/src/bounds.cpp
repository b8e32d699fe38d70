#include "forgetting/bounds.hpp"

#include "forgetting/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace forgetting {

namespace {

void require_even(std::size_t k, const char* who) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidInput(std::string(who) + ": k must be even and at least 2, got " +
                       std::to_string(k));
  }
}

}  // namespace

double two_task_forgetting_bound(std::size_t k, const Vector& angles) {
  require_even(k, "two_task_forgetting_bound");
  if (angles.size() == 0) throw InvalidInput("two_task_forgetting_bound: no angles");
  double best = 0.0;
  for (const double a : angles) {
    if (!(a > 0.0 && a <= std::numbers::pi / 2.0 + 1e-12)) {
      throw InvalidInput("two_task_forgetting_bound: angles must lie in (0, pi/2]");
    }
    const double c2 = std::cos(a) * std::cos(a);
    best = std::max(best, std::pow(c2, static_cast<double>(k - 1)) * (1.0 - c2));
  }
  return 0.5 * best;
}

WorstCase two_task_worst_case(std::size_t k) {
  require_even(k, "two_task_worst_case");
  const double kk = static_cast<double>(k);
  return {0.5 * std::pow(1.0 - 1.0 / kk, kk - 1.0) / kk, std::asin(std::sqrt(1.0 / kk))};
}

CyclicBounds cyclic_bounds(std::size_t task_count, std::size_t k, std::size_t dimension,
                           std::size_t max_rank) {
  if (task_count < 3) throw InvalidInput("cyclic_bounds: needs T >= 3");
  if (k % task_count != 0 || k < task_count * task_count) {
    throw InvalidInput("cyclic_bounds: needs k = nT with n >= T");
  }
  if (max_rank >= dimension) throw InvalidInput("cyclic_bounds: needs r_max < d");
  const double t2 = static_cast<double>(task_count * task_count);
  const double kk = static_cast<double>(k);
  const double gap = static_cast<double>(dimension - max_rank);
  return {t2 / (24.0 * std::numbers::e * kk),
          std::min(t2 / std::sqrt(kk), t2 * gap / (2.0 * kk))};
}

double cyclic_symmetric_upper(std::size_t task_count, std::size_t k) {
  if (k == 0) throw InvalidInput("cyclic_symmetric_upper: k must be positive");
  return static_cast<double>(task_count * task_count) / static_cast<double>(k);
}

double random_expected_bound(std::size_t k, std::size_t dimension, double average_rank) {
  if (k == 0) throw InvalidInput("random_expected_bound: k must be positive");
  if (!(average_rank >= 0.0 && average_rank < static_cast<double>(dimension))) {
    throw InvalidInput("random_expected_bound: needs 0 <= r_avg < d");
  }
  return 9.0 * (static_cast<double>(dimension) - average_rank) / static_cast<double>(k);
}

double distance_bound(std::size_t k, double friedrichs, double w_star_norm) {
  require_even(k, "distance_bound");
  if (!(friedrichs > 0.0 && friedrichs <= std::numbers::pi / 2.0 + 1e-12)) {
    throw InvalidInput("distance_bound: Friedrichs angle must lie in (0, pi/2]");
  }
  const double c2 = std::cos(friedrichs) * std::cos(friedrichs);
  return std::pow(c2, static_cast<double>(k - 1)) * w_star_norm * w_star_norm;
}

double average_iterate_bound(std::size_t task_count, std::size_t k, AverageBoundKind kind) {
  if (k == 0) throw InvalidInput("average_iterate_bound: k must be positive");
  if (kind == AverageBoundKind::random) return 1.0 / static_cast<double>(k);
  if (task_count == 0 || k % task_count != 0) {
    throw InvalidInput("average_iterate_bound: cyclic bound needs k = nT");
  }
  const double n = static_cast<double>(k / task_count);
  return static_cast<double>(task_count - 1) / (2.0 * n);
}

}  // namespace forgetting
