#include "forgetting/orderings.hpp"

#include "forgetting/errors.hpp"
#include "forgetting/philox.hpp"

#include <string>

namespace forgetting {

std::string_view to_string(OrderingKind kind) noexcept {
  switch (kind) {
    case OrderingKind::identity: return "identity";
    case OrderingKind::cyclic: return "cyclic";
    case OrderingKind::random: return "random";
    case OrderingKind::explicit_sequence: return "explicit";
  }
  return "unknown";
}

namespace {

void require_tasks(std::size_t task_count) {
  if (task_count == 0) throw InvalidInput("ordering: task count must be positive");
}

}  // namespace

Ordering Ordering::identity(std::size_t task_count) {
  require_tasks(task_count);
  return {OrderingKind::identity, task_count};
}

Ordering Ordering::cyclic(std::size_t task_count) {
  require_tasks(task_count);
  return {OrderingKind::cyclic, task_count};
}

Ordering Ordering::random(std::size_t task_count, std::uint64_t seed) {
  require_tasks(task_count);
  Ordering o{OrderingKind::random, task_count};
  o.seed_ = seed;
  return o;
}

Ordering Ordering::explicit_sequence(std::size_t task_count, std::vector<std::size_t> sequence) {
  require_tasks(task_count);
  for (const std::size_t m : sequence) {
    if (m >= task_count) {
      throw InvalidInput("ordering: explicit entry " + std::to_string(m + 1) + " outside [1, " +
                         std::to_string(task_count) + "]");
    }
  }
  Ordering o{OrderingKind::explicit_sequence, task_count};
  o.sequence_ = std::move(sequence);
  return o;
}

std::vector<std::size_t> Ordering::realize(std::size_t k) const {
  std::vector<std::size_t> out;
  switch (kind_) {
    case OrderingKind::identity:
      if (k > task_count_) {
        throw InvalidInput("ordering: identity ordering visits each of the " +
                           std::to_string(task_count_) + " tasks once, asked for " +
                           std::to_string(k));
      }
      out.resize(k);
      for (std::size_t t = 0; t < k; ++t) out[t] = t;
      break;
    case OrderingKind::cyclic:
      out.resize(k);
      for (std::size_t t = 0; t < k; ++t) out[t] = t % task_count_;
      break;
    case OrderingKind::random: {
      RandomStream stream(*seed_);
      out.resize(k);
      for (std::size_t t = 0; t < k; ++t) out[t] = stream.uniform_index(task_count_);
      break;
    }
    case OrderingKind::explicit_sequence:
      if (k > sequence_.size()) {
        throw InvalidInput("ordering: explicit sequence has " + std::to_string(sequence_.size()) +
                           " entries, asked for " + std::to_string(k));
      }
      out.assign(sequence_.begin(), sequence_.begin() + static_cast<std::ptrdiff_t>(k));
      break;
  }
  return out;
}

}  // namespace forgetting
