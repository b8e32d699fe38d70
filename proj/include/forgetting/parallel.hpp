#pragma once

#include <cstddef>
#include <functional>

namespace forgetting {

/// Worker count: FORGETTING_LAB_THREADS when set and positive, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Callers write
/// results into slot i so the outcome does not depend on scheduling. The
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace forgetting
