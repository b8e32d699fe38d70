#include "forgetting/learner.hpp"

#include "forgetting/errors.hpp"

#include <string>

namespace forgetting {

Vector fit_step(const Vector& w, const Task& task) {
  if (w.size() != task.dimension()) {
    throw InvalidInput("fit_step: parameter has dimension " + std::to_string(w.size()) +
                       ", task has " + std::to_string(task.dimension()));
  }
  return w + task.pseudo_inverse() * (task.labels() - task.data() * w);
}

Trajectory run(const CollectionPtr& s, const Ordering& ordering, std::size_t k,
               const RunOptions& options) {
  if (!s) throw InvalidInput("run: null collection");
  if (ordering.task_count() != s->size()) {
    throw InvalidInput("run: ordering is over " + std::to_string(ordering.task_count()) +
                       " tasks, collection has " + std::to_string(s->size()));
  }

  Trajectory tr;
  tr.collection_ = s;
  tr.sequence_ = ordering.realize(k);
  tr.cycle_length_ = options.cycle_length == 0 ? s->size() : options.cycle_length;

  const Eigen::Index d = s->dimension();
  Vector w = Vector::Zero(d);
  tr.iterate_sum_ = Vector::Zero(d);
  tr.cycle_end_sum_ = Vector::Zero(d);
  if (options.store_iterates) {
    tr.iterates_.reserve(k + 1);
    tr.iterates_.push_back(w);
  }

  for (std::size_t t = 1; t <= k; ++t) {
    w = fit_step(w, s->task(tr.sequence_[t - 1]));
    tr.iterate_sum_ += w;
    if (t % tr.cycle_length_ == 0) tr.cycle_end_sum_ += w;
    if (options.store_iterates) tr.iterates_.push_back(w);
    if (options.observer) options.observer(t, w);
  }
  tr.final_ = std::move(w);
  return tr;
}

Vector run_projected(const Vector& w_star, const std::vector<Matrix>& projections,
                     const std::vector<std::size_t>& sequence) {
  const Eigen::Index d = w_star.size();
  Vector offset = -w_star;
  for (const std::size_t m : sequence) {
    if (m >= projections.size()) throw InvalidInput("run_projected: task index out of range");
    const Matrix& p = projections[m];
    if (p.rows() != d || p.cols() != d) {
      throw InvalidInput("run_projected: projection is not d x d");
    }
    offset = p * offset;
  }
  return w_star + offset;
}

Vector average_iterates(const Trajectory& tr, AverageKind mode) {
  const std::size_t k = tr.steps();
  if (k == 0) throw InvalidInput("average_iterates: no iterates after w_0");
  if (mode == AverageKind::full) return tr.iterate_sum() / static_cast<double>(k);

  const std::size_t period = tr.cycle_length();
  if (k % period != 0) {
    throw InvalidInput("average_iterates: " + std::to_string(k) +
                       " steps is not a whole number of cycles of " + std::to_string(period));
  }
  return tr.cycle_end_sum() / static_cast<double>(k / period);
}

}  // namespace forgetting
