#include "forgetting/tasks.hpp"

#include "forgetting/errors.hpp"

#include <string>

namespace forgetting {

Task::Task(Matrix data, Vector labels) : data_(std::move(data)), labels_(std::move(labels)) {
  require_finite(data_, "task data");
  require_finite(labels_, "task labels");
  if (labels_.size() != data_.rows()) {
    throw InvalidInput("task: " + std::to_string(labels_.size()) + " labels for " +
                       std::to_string(data_.rows()) + " rows");
  }
  const SvdResult s = svd(data_);
  pinv_ = forgetting::pseudo_inverse(s);
  projection_ = null_projection(s);
  rank_ = s.numerical_rank;
  spectral_norm_ = s.singular_values(0);
}

double Task::loss(const Vector& w) const {
  if (w.size() != dimension()) {
    throw InvalidInput("task loss: parameter dimension mismatch");
  }
  return (data_ * w - labels_).squaredNorm();
}

CollectionPtr TaskCollection::create(std::vector<Task> tasks) {
  if (tasks.empty()) throw InvalidInput("task collection: no tasks");
  const Eigen::Index d = tasks.front().dimension();
  for (const Task& t : tasks) {
    if (t.dimension() != d) {
      throw InvalidInput("task collection: tasks disagree on dimension");
    }
  }

  std::shared_ptr<TaskCollection> s(new TaskCollection());
  s->tasks_ = std::move(tasks);
  s->dimension_ = d;
  s->report_ = validate_collection(*s);
  if (s->report_.realizable) {
    s->offline_solution_ = pseudo_inverse(s->stacked_data()) * s->stacked_labels();
  }
  return s;
}

double TaskCollection::average_rank() const noexcept {
  double total = 0.0;
  for (const Task& t : tasks_) total += static_cast<double>(t.rank());
  return total / static_cast<double>(tasks_.size());
}

Matrix TaskCollection::stacked_data() const {
  Eigen::Index rows = 0;
  for (const Task& t : tasks_) rows += t.sample_count();
  Matrix out(rows, dimension_);
  Eigen::Index at = 0;
  for (const Task& t : tasks_) {
    out.middleRows(at, t.sample_count()) = t.data();
    at += t.sample_count();
  }
  return out;
}

Vector TaskCollection::stacked_labels() const {
  Eigen::Index rows = 0;
  for (const Task& t : tasks_) rows += t.sample_count();
  Vector out(rows);
  Eigen::Index at = 0;
  for (const Task& t : tasks_) {
    out.segment(at, t.sample_count()) = t.labels();
    at += t.sample_count();
  }
  return out;
}

ValidationReport validate_collection(const TaskCollection& s) {
  ValidationReport r;
  r.rank_deficient = true;
  for (const Task& t : s.tasks()) {
    r.max_spectral_norm = std::max(r.max_spectral_norm, t.spectral_norm());
    r.max_task_rank = std::max(r.max_task_rank, t.rank());
    if (t.rank() >= s.dimension()) r.rank_deficient = false;
  }

  const Vector w = pseudo_inverse(s.stacked_data()) * s.stacked_labels();
  r.solution_norm = w.norm();
  r.per_task_residuals.resize(static_cast<Eigen::Index>(s.size()));
  double worst = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m) {
    const Task& t = s.task(m);
    const double res = (t.data() * w - t.labels()).norm();
    r.per_task_residuals(static_cast<Eigen::Index>(m)) = res;
    worst = std::max(worst, res);
  }
  r.realizable = worst <= kRealizabilityTolerance;
  r.passed = r.max_spectral_norm <= 1.0 + kNormSlack && r.realizable &&
             r.solution_norm <= 1.0 + kNormSlack && r.rank_deficient;
  return r;
}

Vector min_norm_solution(const TaskCollection& s) {
  if (!s.offline_solution()) {
    throw Infeasible("tasks are not jointly realizable",
                     s.validation().per_task_residuals.maxCoeff());
  }
  return *s.offline_solution();
}

std::vector<Vector> labels_from_solution(const std::vector<Matrix>& matrices,
                                         const Vector& w_star) {
  require_finite(w_star, "w_star");
  std::vector<Vector> labels;
  labels.reserve(matrices.size());
  for (const Matrix& x : matrices) {
    if (x.cols() != w_star.size()) {
      throw InvalidInput("labels_from_solution: matrix has " + std::to_string(x.cols()) +
                         " columns, w_star has " + std::to_string(w_star.size()));
    }
    labels.emplace_back(x * w_star);
  }
  return labels;
}

CollectionPtr collection_from_solution(const std::vector<Matrix>& matrices,
                                       const Vector& w_star) {
  const std::vector<Vector> labels = labels_from_solution(matrices, w_star);
  std::vector<Task> tasks;
  tasks.reserve(matrices.size());
  for (std::size_t m = 0; m < matrices.size(); ++m) tasks.emplace_back(matrices[m], labels[m]);
  return TaskCollection::create(std::move(tasks));
}

}  // namespace forgetting
