#include "forgetting/linalg.hpp"

#include "forgetting/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace forgetting {

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw InvalidInput(std::string(what) + ": matrix must be at least 1x1");
  }
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

void require_finite(const Vector& v, const char* what) {
  if (v.size() < 1) {
    throw InvalidInput(std::string(what) + ": vector must be non-empty");
  }
  if (!v.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

SvdResult svd(const Matrix& m) {
  require_finite(m, "svd");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdResult out;
  out.left_basis = solver.matrixU();
  out.singular_values = solver.singularValues();
  out.right_basis = solver.matrixV();

  // Eigen already sorts in decreasing order.
  const double largest = out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
  const double cutoff = kRankTolerance * largest;
  Eigen::Index rank = 0;
  if (largest > 0.0) {
    for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
      if (out.singular_values(i) > cutoff) ++rank;
    }
  }
  out.numerical_rank = rank;
  return out;
}

Matrix pseudo_inverse(const SvdResult& s) {
  const Eigen::Index r = s.numerical_rank;
  const Eigen::Index rows = s.left_basis.rows();
  const Eigen::Index cols = s.right_basis.rows();
  if (r == 0) return Matrix::Zero(cols, rows);
  const Vector inv = s.singular_values.head(r).cwiseInverse();
  return s.right_basis.leftCols(r) * inv.asDiagonal() * s.left_basis.leftCols(r).transpose();
}

Matrix pseudo_inverse(const Matrix& m) { return pseudo_inverse(svd(m)); }

Matrix null_projection(const SvdResult& s) {
  const Eigen::Index d = s.right_basis.rows();
  const auto vr = s.right_basis.leftCols(s.numerical_rank);
  Matrix p = Matrix::Identity(d, d) - vr * vr.transpose();
  // Symmetrize away the rounding asymmetry of the outer product.
  return 0.5 * (p + p.transpose());
}

Matrix null_projection(const Matrix& m) { return null_projection(svd(m)); }

Matrix range_basis(const Matrix& m) {
  const SvdResult s = svd(m);
  return s.left_basis.leftCols(s.numerical_rank);
}

Vector principal_angles(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw InvalidInput("principal_angles: subspaces live in different dimensions");
  }
  Matrix qa = range_basis(a);
  Matrix qb = range_basis(b);
  if (qa.cols() == 0 || qb.cols() == 0) {
    throw InvalidInput("principal_angles: zero subspace");
  }
  // Angles are symmetric; keep the larger subspace first so the sine matrix
  // below has exactly one singular value per angle.
  if (qa.cols() < qb.cols()) std::swap(qa, qb);
  const Eigen::Index count = qb.cols();

  const Matrix cross = qa.transpose() * qb;
  Eigen::JacobiSVD<Matrix> cos_svd(cross);
  const Vector cosines = cos_svd.singularValues();  // descending

  // arccos loses about half the digits near 0; recover small angles from the
  // sines, i.e. the singular values of the part of qb outside range(qa).
  Eigen::JacobiSVD<Matrix> sin_svd(qb - qa * cross);
  Vector sines = sin_svd.singularValues();  // descending
  std::reverse(sines.data(), sines.data() + sines.size());

  Vector angles(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    angles(i) = c > std::numbers::sqrt2 / 2 ? std::asin(std::clamp(sines(i), 0.0, 1.0))
                                            : std::acos(c);
  }
  std::sort(angles.data(), angles.data() + count);
  return angles;
}

std::optional<double> friedrichs_angle(const Vector& angles) {
  std::optional<double> best;
  for (const double a : angles) {
    if (a > kAngleZeroTolerance && (!best || a < *best)) best = a;
  }
  return best;
}

}  // namespace forgetting
