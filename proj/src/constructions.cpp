#include "forgetting/constructions.hpp"

#include "forgetting/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace forgetting {

CollectionPtr planar_collection(const PlanarSpec& spec) {
  const Eigen::Index d = spec.dimension;
  if (d < 2) throw InvalidInput("planar_collection: dimension must be at least 2");
  if (spec.solution_angles.empty()) throw InvalidInput("planar_collection: no tasks");
  if (spec.shared_data_dims < 0 || spec.shared_data_dims > d - 2) {
    throw InvalidInput("planar_collection: shared_data_dims must lie in [0, d - 2]");
  }
  if (!(spec.solution_norm > 0.0 && spec.solution_norm <= 1.0)) {
    throw InvalidInput("planar_collection: solution_norm must lie in (0, 1]");
  }
  for (const double a : spec.solution_angles) {
    if (!std::isfinite(a)) throw InvalidInput("planar_collection: non-finite angle");
  }

  const double w_angle = spec.solution_angle.value_or(spec.solution_angles.front());
  Vector w_star = Vector::Zero(d);
  w_star(0) = spec.solution_norm * std::cos(w_angle);
  w_star(1) = spec.solution_norm * std::sin(w_angle);

  std::vector<Matrix> matrices;
  matrices.reserve(spec.solution_angles.size());
  for (const double a : spec.solution_angles) {
    Matrix x = Matrix::Zero(1 + spec.shared_data_dims, d);
    x(0, 0) = -std::sin(a);
    x(0, 1) = std::cos(a);
    for (Eigen::Index j = 0; j < spec.shared_data_dims; ++j) x(1 + j, 2 + j) = 1.0;
    matrices.push_back(std::move(x));
  }
  return collection_from_solution(matrices, w_star);
}

CollectionPtr two_task_collection(double theta) {
  PlanarSpec spec;
  spec.solution_angles = {0.0, theta};
  return planar_collection(spec);
}

AdversarialParameters adversarial_parameters(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidInput("adversarial_identity: epsilon must lie in (0, 1)");
  }
  // Round up, but let values that are integers up to rounding stay put.
  const auto ceil_count = [](double x) {
    return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
  };
  AdversarialParameters p;
  p.near_tasks = ceil_count((72.0 - 12.0 * epsilon) / (epsilon * epsilon) + 1.0);
  p.far_tasks = ceil_count(12.0 / epsilon);
  p.theta = std::sqrt(epsilon / 6.0);
  return p;
}

OrderedCollection adversarial_identity(double epsilon) {
  const AdversarialParameters p = adversarial_parameters(epsilon);
  std::vector<double> angles;
  angles.reserve(p.near_tasks + p.far_tasks);
  for (std::size_t i = 0; i < p.near_tasks; ++i) {
    angles.push_back(p.theta * static_cast<double>(i) / static_cast<double>(p.near_tasks - 1));
  }
  const double far_step = (std::numbers::pi / 2.0 - p.theta) / static_cast<double>(p.far_tasks);
  for (std::size_t j = 1; j <= p.far_tasks; ++j) {
    angles.push_back(p.theta + far_step * static_cast<double>(j));
  }

  PlanarSpec spec;
  spec.solution_angles = std::move(angles);
  auto s = planar_collection(spec);
  return {s, Ordering::identity(s->size()), std::nullopt};
}

std::vector<double> back_and_forth_angles(std::size_t task_count, std::size_t horizon) {
  if (task_count < 3) throw InvalidInput("back_and_forth: needs at least 3 tasks");
  if (horizon == 0 || horizon % task_count != 0) {
    throw InvalidInput("back_and_forth: horizon " + std::to_string(horizon) +
                       " is not a multiple of T = " + std::to_string(task_count));
  }
  if (horizon / task_count < task_count) {
    throw InvalidInput("back_and_forth: needs n = k/T >= T cycles");
  }
  const double theta = 1.0 / std::sqrt(static_cast<double>(horizon - 1));
  std::vector<double> angles(task_count);
  for (std::size_t m = 0; m < task_count; ++m) {
    angles[m] = static_cast<double>(std::min(m, task_count - 1 - m)) * theta;
  }
  return angles;
}

OrderedCollection back_and_forth(std::size_t task_count, std::size_t horizon) {
  PlanarSpec spec;
  spec.solution_angles = back_and_forth_angles(task_count, horizon);
  auto s = planar_collection(spec);
  return {s, Ordering::cyclic(task_count), horizon};
}

CollectionPtr fig5_collection() {
  return back_and_forth(kFig5TaskCount, kFig5TaskCount * kFig5TaskCount).collection;
}

Matrix cyclic_operator(const TaskCollection& s) {
  Matrix m = Matrix::Identity(s.dimension(), s.dimension());
  for (const Task& t : s.tasks()) m = t.projection() * m;
  return m;
}

}  // namespace forgetting
