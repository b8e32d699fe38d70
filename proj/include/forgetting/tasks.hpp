#pragma once

#include "forgetting/linalg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace forgetting {

/// Slack allowed on the unit-norm data and solution assumptions.
inline constexpr double kNormSlack = 1e-8;
/// Largest stacked residual at which a collection still counts as realizable.
inline constexpr double kRealizabilityTolerance = 1e-8;

/// One regression problem (X, y). The SVD-derived quantities every fitting
/// step needs are computed once, when the task is built.
class Task {
public:
  Task(Matrix data, Vector labels);

  const Matrix& data() const noexcept { return data_; }
  const Vector& labels() const noexcept { return labels_; }
  Eigen::Index dimension() const noexcept { return data_.cols(); }
  Eigen::Index sample_count() const noexcept { return data_.rows(); }

  const Matrix& pseudo_inverse() const noexcept { return pinv_; }
  /// Projection onto null(X).
  const Matrix& projection() const noexcept { return projection_; }
  Eigen::Index rank() const noexcept { return rank_; }
  double spectral_norm() const noexcept { return spectral_norm_; }

  /// Squared residual ||X w - y||^2.
  double loss(const Vector& w) const;

private:
  Matrix data_;
  Vector labels_;
  Matrix pinv_;
  Matrix projection_;
  Eigen::Index rank_ = 0;
  double spectral_norm_ = 0.0;
};

struct ValidationReport {
  double max_spectral_norm = 0.0;
  bool realizable = false;
  double solution_norm = 0.0;
  /// ||X_m w - y_m|| at the min-norm least-squares fit of the stacked system.
  Vector per_task_residuals;
  Eigen::Index max_task_rank = 0;
  bool rank_deficient = false;
  bool passed = false;
};

/// An immutable set of tasks sharing one dimension, with its validation
/// report and (when realizable) the minimum-norm offline solution.
class TaskCollection {
public:
  /// Throws InvalidInput on an empty list or mismatched dimensions. Does not
  /// throw on assumption violations; inspect validation() for those.
  static std::shared_ptr<const TaskCollection> create(std::vector<Task> tasks);

  const std::vector<Task>& tasks() const noexcept { return tasks_; }
  const Task& task(std::size_t index) const { return tasks_.at(index); }
  std::size_t size() const noexcept { return tasks_.size(); }
  Eigen::Index dimension() const noexcept { return dimension_; }
  const std::optional<Vector>& offline_solution() const noexcept { return offline_solution_; }
  const ValidationReport& validation() const noexcept { return report_; }

  /// r_max and r_avg over the tasks.
  Eigen::Index max_rank() const noexcept { return report_.max_task_rank; }
  double average_rank() const noexcept;

  /// Stacked data X_{1:T} and labels y_{1:T}.
  Matrix stacked_data() const;
  Vector stacked_labels() const;

private:
  TaskCollection() = default;

  std::vector<Task> tasks_;
  Eigen::Index dimension_ = 0;
  std::optional<Vector> offline_solution_;
  ValidationReport report_;
};

using CollectionPtr = std::shared_ptr<const TaskCollection>;

ValidationReport validate_collection(const TaskCollection& s);

/// w* = X_{1:T}^+ y_{1:T}. Throws Infeasible (carrying the max residual)
/// when the tasks are not jointly realizable.
Vector min_norm_solution(const TaskCollection& s);

/// y_m = X_m w* for every matrix.
std::vector<Vector> labels_from_solution(const std::vector<Matrix>& matrices,
                                         const Vector& w_star);

/// Builds a collection whose labels are generated from w_star.
CollectionPtr collection_from_solution(const std::vector<Matrix>& matrices,
                                       const Vector& w_star);

}  // namespace forgetting
