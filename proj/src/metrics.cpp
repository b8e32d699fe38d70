#include "forgetting/metrics.hpp"

#include "forgetting/errors.hpp"
#include "forgetting/parallel.hpp"

#include <cmath>
#include <string>

namespace forgetting {

double task_loss(const Vector& w, const Task& task) { return task.loss(w); }

namespace {

const Vector& offline_solution_of(const TaskCollection& s) {
  if (!s.offline_solution()) {
    throw Infeasible("forgetting: collection has no offline solution",
                     s.validation().per_task_residuals.maxCoeff());
  }
  return *s.offline_solution();
}

double residual_term(const Task& task, const Vector& offset) {
  return (offset - task.projection() * offset).squaredNorm();
}

void require_sequence(const std::vector<std::size_t>& sequence, const TaskCollection& s) {
  if (sequence.empty()) throw InvalidInput("forgetting: empty task sequence");
  for (const std::size_t m : sequence) {
    if (m >= s.size()) throw InvalidInput("forgetting: task index out of range");
  }
}

}  // namespace

ForgettingRecord forgetting(const Trajectory& tr) {
  const std::size_t k = tr.steps();
  if (k == 0) throw InvalidInput("forgetting: trajectory has no steps");
  const TaskCollection& s = *tr.collection();
  const Vector& w_star = offline_solution_of(s);
  const Vector& w = tr.final_iterate();
  const Vector offset = w - w_star;

  // Losses and residuals depend only on the task, so evaluate each once.
  std::vector<double> loss(s.size(), -1.0);
  std::vector<double> residual(s.size(), 0.0);

  ForgettingRecord r;
  r.iteration = k;
  r.per_task_losses.resize(static_cast<Eigen::Index>(k));
  double loss_total = 0.0;
  double residual_total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t m = tr.sequence()[t];
    if (loss[m] < 0.0) {
      loss[m] = s.task(m).loss(w);
      residual[m] = residual_term(s.task(m), offset);
    }
    r.per_task_losses(static_cast<Eigen::Index>(t)) = loss[m];
    loss_total += loss[m];
    residual_total += residual[m];
  }
  r.forgetting = loss_total / static_cast<double>(k);
  r.residual_bound = residual_total / static_cast<double>(k);
  r.distance_sq = offset.squaredNorm();
  return r;
}

double forgetting_at(const Vector& w, const std::vector<std::size_t>& sequence,
                     const TaskCollection& s) {
  require_sequence(sequence, s);
  double total = 0.0;
  for (const std::size_t m : sequence) total += s.task(m).loss(w);
  return total / static_cast<double>(sequence.size());
}

double residual_bound_at(const Vector& w, const std::vector<std::size_t>& sequence,
                         const TaskCollection& s) {
  require_sequence(sequence, s);
  const Vector offset = w - offline_solution_of(s);
  double total = 0.0;
  for (const std::size_t m : sequence) total += residual_term(s.task(m), offset);
  return total / static_cast<double>(sequence.size());
}

ForgettingTracker::ForgettingTracker(CollectionPtr s)
    : collection_(std::move(s)), visits_(collection_->size(), 0) {
  w_star_ = offline_solution_of(*collection_);
}

void ForgettingTracker::visit(std::size_t task_index) {
  ++visits_.at(task_index);
  ++iteration_;
}

CurvePoint ForgettingTracker::evaluate(const Vector& w) const {
  if (iteration_ == 0) throw InvalidInput("forgetting: no tasks visited yet");
  const Vector offset = w - w_star_;
  CurvePoint p;
  p.iteration = iteration_;
  for (std::size_t m = 0; m < visits_.size(); ++m) {
    if (visits_[m] == 0) continue;
    const auto count = static_cast<double>(visits_[m]);
    const Task& task = collection_->task(m);
    p.forgetting += count * task.loss(w);
    p.residual_bound += count * residual_term(task, offset);
  }
  p.forgetting /= static_cast<double>(iteration_);
  p.residual_bound /= static_cast<double>(iteration_);
  p.distance_sq = offset.squaredNorm();
  return p;
}

std::vector<CurvePoint> forgetting_curve(const CollectionPtr& s, const Ordering& ordering,
                                         const std::vector<std::size_t>& record) {
  if (record.empty()) return {};
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (record[i] == 0 || (i > 0 && record[i] <= record[i - 1])) {
      throw InvalidInput("forgetting_curve: record iterations must be positive and increasing");
    }
  }

  ForgettingTracker tracker(s);
  std::vector<CurvePoint> points;
  points.reserve(record.size());
  std::size_t next = 0;

  RunOptions options;
  options.store_iterates = false;
  const std::vector<std::size_t> sequence = ordering.realize(record.back());
  options.observer = [&](std::size_t t, const Vector& w) {
    tracker.visit(sequence[t - 1]);
    if (next < record.size() && record[next] == t) {
      points.push_back(tracker.evaluate(w));
      ++next;
    }
  };
  run(s, ordering, record.back(), options);
  return points;
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double sq = 0.0;
  for (const double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size() - 1))};
}

ExpectedForgettingEstimate expected_forgetting(const CollectionPtr& s, std::size_t k,
                                               std::size_t trials, std::uint64_t seed_base) {
  if (trials == 0) throw InvalidInput("expected_forgetting: trials must be positive");
  if (k == 0) throw InvalidInput("expected_forgetting: k must be positive");
  offline_solution_of(*s);

  std::vector<double> values(trials);
  parallel_for(trials, [&](std::size_t i) {
    RunOptions options;
    options.store_iterates = false;
    const Trajectory tr = run(s, Ordering::random(s->size(), seed_base + i), k, options);
    values[i] = forgetting(tr).forgetting;
  });

  const auto [mean, sd] = mean_and_std(values);
  return {mean, sd, trials, seed_base};
}

std::vector<CurveSummary> expected_forgetting_curve(const CollectionPtr& s,
                                                    const std::vector<std::size_t>& record,
                                                    std::size_t trials,
                                                    std::uint64_t seed_base) {
  if (trials == 0) throw InvalidInput("expected_forgetting: trials must be positive");
  std::vector<std::vector<CurvePoint>> curves(trials);
  parallel_for(trials, [&](std::size_t i) {
    curves[i] = forgetting_curve(s, Ordering::random(s->size(), seed_base + i), record);
  });

  std::vector<CurveSummary> out(record.size());
  std::vector<double> column(trials);
  for (std::size_t j = 0; j < record.size(); ++j) {
    CurveSummary& c = out[j];
    c.iteration = record[j];
    for (std::size_t i = 0; i < trials; ++i) column[i] = curves[i][j].forgetting;
    std::tie(c.forgetting_mean, c.forgetting_std) = mean_and_std(column);
    for (std::size_t i = 0; i < trials; ++i) column[i] = curves[i][j].residual_bound;
    c.residual_bound_mean = mean_and_std(column).first;
    for (std::size_t i = 0; i < trials; ++i) column[i] = curves[i][j].distance_sq;
    c.distance_sq_mean = mean_and_std(column).first;
  }
  return out;
}

}  // namespace forgetting
