#pragma once

#include "forgetting/philox.hpp"
#include "forgetting/tasks.hpp"

#include <vector>

namespace forgetting {

/// Gaussian matrix with i.i.d. N(0, 1) entries.
Matrix random_gaussian(RandomStream& rng, Eigen::Index rows, Eigen::Index cols);

/// Orthonormal d x d basis from the QR factorization of a Gaussian matrix.
Matrix random_orthonormal(RandomStream& rng, Eigen::Index d);

/// Uniform point in the unit ball of R^d.
Vector random_unit_ball(RandomStream& rng, Eigen::Index d);

/// Uniform integer in [lo, hi].
Eigen::Index random_between(RandomStream& rng, Eigen::Index lo, Eigen::Index hi);

/// n rows spanning exactly the columns of `basis` (n >= basis.cols()),
/// rescaled to a spectral norm drawn from [0.3, 1].
Matrix random_rows_in_span(RandomStream& rng, const Matrix& basis, Eigen::Index n);

/// T tasks in R^d, each of random rank in [1, d - 1], labelled by a random
/// w in the unit ball. Passes validate_collection.
CollectionPtr random_collection(RandomStream& rng, Eigen::Index d, std::size_t task_count);

}  // namespace forgetting
