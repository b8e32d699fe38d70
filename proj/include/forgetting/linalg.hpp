#pragma once

#include <Eigen/Dense>

#include <optional>

namespace forgetting {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-10;
/// Principal angles at or below this many radians count as zero.
inline constexpr double kAngleZeroTolerance = 1e-9;

/// Thin SVD m = U diag(s) V^T with the numerical rank under kRankTolerance.
struct SvdResult {
  Matrix left_basis;
  Vector singular_values;
  Matrix right_basis;
  Eigen::Index numerical_rank = 0;
};

/// Throws InvalidInput on an empty matrix or any non-finite entry.
void require_finite(const Matrix& m, const char* what);
void require_finite(const Vector& v, const char* what);

SvdResult svd(const Matrix& m);

/// Moore-Penrose inverse.
Matrix pseudo_inverse(const Matrix& m);
Matrix pseudo_inverse(const SvdResult& decomposition);

/// Orthogonal projection onto null(m), materialized as a dense d x d matrix.
Matrix null_projection(const Matrix& m);
Matrix null_projection(const SvdResult& decomposition);

/// Orthonormal basis of range(m) (its columns span the subspace).
Matrix range_basis(const Matrix& m);

/// Principal angles between range(a) and range(b), ascending, in [0, pi/2].
///
/// Computed as arccos of the singular values of Qa^T Qb, where Qa and Qb are
/// orthonormal bases, with singular values clamped to [0, 1]. Angles below
/// pi/4 are taken from the matching sines instead, which keeps them accurate
/// to machine precision near zero. Returns min(rank a, rank b) angles. Throws InvalidInput when either range is {0}
/// or the row counts differ.
Vector principal_angles(const Matrix& a, const Matrix& b);

/// Smallest angle strictly above kAngleZeroTolerance, if any.
std::optional<double> friedrichs_angle(const Vector& angles);

}  // namespace forgetting
