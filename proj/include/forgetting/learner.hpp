#pragma once

#include "forgetting/orderings.hpp"
#include "forgetting/tasks.hpp"

#include <functional>
#include <vector>

namespace forgetting {

/// Largest residual ||X w_t - y|| accepted right after fitting a task.
inline constexpr double kFitTolerance = 1e-8;
/// Agreement required between the iterative and closed-form routes.
inline constexpr double kOracleTolerance = 1e-7;

/// w + X^+ (y - X w): the closest point to w that fits the task exactly.
Vector fit_step(const Vector& w, const Task& task);

struct RunOptions {
  /// Keep w_0..w_k. Off for long runs; the averages below survive either way.
  bool store_iterates = true;
  /// Period for end-of-cycle averaging; 0 uses the collection size.
  std::size_t cycle_length = 0;
  /// Called after every step with (t, w_t), t = 1..k.
  std::function<void(std::size_t, const Vector&)> observer;
};

class Trajectory {
public:
  const CollectionPtr& collection() const noexcept { return collection_; }
  /// 0-based task indices tau(1)..tau(k).
  const std::vector<std::size_t>& sequence() const noexcept { return sequence_; }
  std::size_t steps() const noexcept { return sequence_.size(); }

  bool has_iterates() const noexcept { return !iterates_.empty(); }
  /// w_0..w_k; empty when the run did not store them.
  const std::vector<Vector>& iterates() const noexcept { return iterates_; }
  const Vector& final_iterate() const noexcept { return final_; }

  /// sum_{t=1}^{k} w_t
  const Vector& iterate_sum() const noexcept { return iterate_sum_; }
  /// sum of w_{jP} over completed cycles j, P = cycle_length().
  const Vector& cycle_end_sum() const noexcept { return cycle_end_sum_; }
  std::size_t cycle_length() const noexcept { return cycle_length_; }

private:
  friend Trajectory run(const CollectionPtr&, const Ordering&, std::size_t, const RunOptions&);

  CollectionPtr collection_;
  std::vector<std::size_t> sequence_;
  std::vector<Vector> iterates_;
  Vector final_;
  Vector iterate_sum_;
  Vector cycle_end_sum_;
  std::size_t cycle_length_ = 0;
};

/// Fits tau(1)..tau(k) in turn starting from w_0 = 0.
Trajectory run(const CollectionPtr& s, const Ordering& ordering, std::size_t k,
               const RunOptions& options = {});

/// w* + P_{tau(k)} ... P_{tau(1)} (0 - w*), the closed form of run's final
/// iterate for a realizable collection.
Vector run_projected(const Vector& w_star, const std::vector<Matrix>& projections,
                     const std::vector<std::size_t>& sequence);

enum class AverageKind { full, end_of_cycle };

/// Mean of w_1..w_k (full) or of w_T, w_2T, ..., w_nT (end_of_cycle). The
/// cycle length is the one the trajectory was run with.
Vector average_iterates(const Trajectory& tr, AverageKind mode);

}  // namespace forgetting
