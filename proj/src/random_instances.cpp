#include "forgetting/random_instances.hpp"

#include "forgetting/errors.hpp"

namespace forgetting {

Matrix random_gaussian(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_orthonormal(RandomStream& rng, Eigen::Index d) {
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(rng, d, d));
  return qr.householderQ() * Matrix::Identity(d, d);
}

Vector random_unit_ball(RandomStream& rng, Eigen::Index d) {
  Vector v = random_gaussian(rng, d, 1);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return v.normalized() * radius;
}

Eigen::Index random_between(RandomStream& rng, Eigen::Index lo, Eigen::Index hi) {
  return lo + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(hi - lo + 1)));
}

Matrix random_rows_in_span(RandomStream& rng, const Matrix& basis, Eigen::Index n) {
  if (n < basis.cols()) throw InvalidInput("random_rows_in_span: too few rows for the span");
  // Gaussian coefficients are full rank with probability one; redraw if not.
  for (;;) {
    Matrix x = random_gaussian(rng, n, basis.cols()) * basis.transpose();
    const SvdResult s = svd(x);
    if (s.numerical_rank != basis.cols()) continue;
    const double target = 0.3 + 0.7 * rng.uniform();
    return x * (target / s.singular_values(0));
  }
}

CollectionPtr random_collection(RandomStream& rng, Eigen::Index d, std::size_t task_count) {
  if (d < 2) throw InvalidInput("random_collection: needs d >= 2");
  std::vector<Matrix> matrices;
  matrices.reserve(task_count);
  for (std::size_t m = 0; m < task_count; ++m) {
    const Eigen::Index rank = random_between(rng, 1, d - 1);
    const Eigen::Index rows = rank + random_between(rng, 0, 1);
    const Matrix basis = random_orthonormal(rng, d).leftCols(rank);
    matrices.push_back(random_rows_in_span(rng, basis, rows));
  }
  return collection_from_solution(matrices, random_unit_ball(rng, d));
}

}  // namespace forgetting
