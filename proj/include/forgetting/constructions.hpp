#pragma once

#include "forgetting/orderings.hpp"
#include "forgetting/tasks.hpp"

#include <optional>
#include <vector>

namespace forgetting {

/// Tasks whose solution spaces are lines in the (e1, e2) plane.
///
/// Task m has the single in-plane data row (-sin a_m, cos a_m), so its
/// in-plane solution direction is (cos a_m, sin a_m). The first
/// shared_data_dims coordinates after e2 are added as identical data rows to
/// every task; the remaining coordinates are identical null directions. In
/// both cases they never contribute to forgetting. All non-zero singular
/// values are 1.
struct PlanarSpec {
  Eigen::Index dimension = 2;
  std::vector<double> solution_angles;
  double solution_norm = 1.0;
  Eigen::Index shared_data_dims = 0;
  /// In-plane direction of the labelling solution; defaults to the first
  /// task's solution direction.
  std::optional<double> solution_angle;
};

CollectionPtr planar_collection(const PlanarSpec& spec);

/// Two tasks in d = 2 at solution angles 0 and theta, labelled by w* = e1.
/// Saturates the two-task forgetting and distance bounds.
CollectionPtr two_task_collection(double theta);

struct OrderedCollection {
  CollectionPtr collection;
  Ordering ordering;
  /// Horizon an adversarial construction was built for, if any.
  std::optional<std::size_t> tuned_horizon;
};

struct AdversarialParameters {
  std::size_t near_tasks = 0;  // ceil(k1)
  std::size_t far_tasks = 0;   // ceil(k2)
  double theta = 0.0;
};

/// k1 = (72 - 12 eps)/eps^2 + 1, k2 = 12/eps, theta = sqrt(eps/6), with k1
/// and k2 rounded up.
AdversarialParameters adversarial_parameters(double epsilon);

/// ceil(k1) solution directions equally spaced on [0, theta] (both ends
/// included), then ceil(k2) equally spaced on (theta, pi/2], under the
/// identity ordering. Forgetting after the last task exceeds 1 - epsilon.
OrderedCollection adversarial_identity(double epsilon);

/// Solution angles of the back-and-forth family: min(m, T-1-m) * theta for
/// m = 0..T-1 with theta = 1/sqrt(k-1). Tasks m and T-1-m coincide, so the
/// cyclic operator is symmetric.
std::vector<double> back_and_forth_angles(std::size_t task_count, std::size_t horizon);

/// Back-and-forth collection tuned for horizon k = nT, n >= T, with the
/// cyclic ordering.
OrderedCollection back_and_forth(std::size_t task_count, std::size_t horizon);

inline constexpr std::size_t kFig5TaskCount = 128;

/// 128 rank-one tasks in d = 2: back_and_forth(128, 128^2).
CollectionPtr fig5_collection();

/// P_T ... P_1 for the collection in index order.
Matrix cyclic_operator(const TaskCollection& s);

}  // namespace forgetting
