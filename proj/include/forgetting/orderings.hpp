#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace forgetting {

enum class OrderingKind { identity, cyclic, random, explicit_sequence };

std::string_view to_string(OrderingKind kind) noexcept;

/// A task ordering t -> task index. Indices are 0-based here; configuration
/// files and the CLI use 1-based indices and convert at the boundary.
class Ordering {
public:
  static Ordering identity(std::size_t task_count);
  static Ordering cyclic(std::size_t task_count);
  static Ordering random(std::size_t task_count, std::uint64_t seed);
  static Ordering explicit_sequence(std::size_t task_count, std::vector<std::size_t> sequence);

  OrderingKind kind() const noexcept { return kind_; }
  std::size_t task_count() const noexcept { return task_count_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }
  const std::vector<std::size_t>& sequence() const noexcept { return sequence_; }

  /// The first k task indices. Throws InvalidInput for identity with k > T or
  /// an explicit sequence shorter than k.
  std::vector<std::size_t> realize(std::size_t k) const;

private:
  Ordering(OrderingKind kind, std::size_t task_count) : kind_(kind), task_count_(task_count) {}

  OrderingKind kind_;
  std::size_t task_count_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::size_t> sequence_;
};

}  // namespace forgetting
