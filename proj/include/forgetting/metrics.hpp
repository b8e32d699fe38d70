#pragma once

#include "forgetting/learner.hpp"

#include <cstdint>
#include <vector>

namespace forgetting {

/// Forgetting of a trajectory's final iterate w_k over the tasks seen so far.
struct ForgettingRecord {
  std::size_t iteration = 0;
  /// (1/k) sum_t ||X_{tau(t)} w_k - y_{tau(t)}||^2, repeated visits counted each time.
  double forgetting = 0.0;
  /// (1/k) sum_t ||(I - P_{tau(t)})(w_k - w*)||^2, an upper bound on forgetting.
  double residual_bound = 0.0;
  double distance_sq = 0.0;
  /// L_t(w_k) for t = 1..k.
  Vector per_task_losses;
};

struct ExpectedForgettingEstimate {
  double mean = 0.0;
  /// Sample standard deviation (trials - 1 divisor); 0 for a single trial.
  double std_dev = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed_base = 0;
};

double task_loss(const Vector& w, const Task& task);

/// Throws InvalidInput when the trajectory has no steps and Infeasible when
/// the collection has no offline solution.
ForgettingRecord forgetting(const Trajectory& tr);

/// Forgetting evaluated at an arbitrary w over the given (0-based) sequence.
double forgetting_at(const Vector& w, const std::vector<std::size_t>& sequence,
                     const TaskCollection& s);

/// The projection-residual bound evaluated at an arbitrary w.
double residual_bound_at(const Vector& w, const std::vector<std::size_t>& sequence,
                         const TaskCollection& s);

/// One point of a forgetting curve; per-task losses are not kept.
struct CurvePoint {
  std::size_t iteration = 0;
  double forgetting = 0.0;
  double residual_bound = 0.0;
  double distance_sq = 0.0;
};

/// Accumulates visit counts so forgetting at w_t costs O(T) task evaluations
/// instead of O(t).
class ForgettingTracker {
public:
  explicit ForgettingTracker(CollectionPtr s);

  void visit(std::size_t task_index);
  std::size_t iteration() const noexcept { return iteration_; }
  CurvePoint evaluate(const Vector& w) const;

private:
  CollectionPtr collection_;
  Vector w_star_;
  std::vector<std::size_t> visits_;
  std::size_t iteration_ = 0;
};

/// Forgetting of w_t at each iteration in `record` (ascending, each >= 1,
/// last one = horizon) for one run.
std::vector<CurvePoint> forgetting_curve(const CollectionPtr& s, const Ordering& ordering,
                                         const std::vector<std::size_t>& record);

/// Monte Carlo estimate of the expected forgetting under the uniform i.i.d.
/// ordering. Trial i uses Ordering::random(T, seed_base + i); trials run in
/// parallel and are reduced in trial order.
ExpectedForgettingEstimate expected_forgetting(const CollectionPtr& s, std::size_t k,
                                               std::size_t trials, std::uint64_t seed_base);

/// Per-iteration mean and sample std of a curve over random-ordering trials.
struct CurveSummary {
  std::size_t iteration = 0;
  double forgetting_mean = 0.0;
  double forgetting_std = 0.0;
  double residual_bound_mean = 0.0;
  double distance_sq_mean = 0.0;
};

std::vector<CurveSummary> expected_forgetting_curve(const CollectionPtr& s,
                                                    const std::vector<std::size_t>& record,
                                                    std::size_t trials,
                                                    std::uint64_t seed_base);

/// Mean and sample standard deviation in index order.
std::pair<double, double> mean_and_std(const std::vector<double>& values);

}  // namespace forgetting
