#ifndef ROBPCA_LINALG_HPP
#define ROBPCA_LINALG_HPP

// Dense primitives shared by the reducers: weighted scatter matrices, a cyclic
// Jacobi eigensolver for symmetric matrices, projections and subspace angles.
//
// Storage convention: samples are rows. A data matrix is n x D (n samples, D
// features) and the scatter of its rows is sum_i w_i z_i z_i^T, a D x D matrix.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "robpca/error.hpp"

namespace robpca {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// n x D table of samples (rows) by features (columns).
template <typename Scalar>
using DataMatrix = Matrix<Scalar>;

enum class EigenOrder { Descending, Ascending };

/// Throws unless every coefficient of `m` is finite.
template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* what) {
  if (!m.derived().allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite value");
  }
}

/// Validates the DataMatrix invariants (n >= 1, D >= 1, finite).
template <typename Derived>
void require_data(const Eigen::MatrixBase<Derived>& x, const char* what) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw InvalidArgument(std::string(what) + ": empty data matrix");
  }
  require_finite(x, what);
}

/// Square matrix that is exactly symmetric. Construction copies the upper
/// triangle onto the lower one after checking the input is symmetric up to
/// round-off.
template <typename Scalar>
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;

  template <typename Derived>
  explicit SymmetricMatrix(const Eigen::MatrixBase<Derived>& m) : values_(m) {
    if (values_.rows() != values_.cols()) {
      throw DimensionError("SymmetricMatrix: matrix is not square");
    }
    require_finite(values_, "SymmetricMatrix");
    const Scalar scale = Scalar(1) + values_.cwiseAbs().maxCoeff();
    const Scalar asym = (values_ - values_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Scalar(1e-9) * scale) {
      throw InvalidArgument("SymmetricMatrix: matrix is not symmetric");
    }
    values_.template triangularView<Eigen::StrictlyLower>() =
        values_.transpose().template triangularView<Eigen::StrictlyLower>();
  }

  Index dim() const { return values_.rows(); }
  const Matrix<Scalar>& matrix() const { return values_; }
  Scalar operator()(Index i, Index j) const { return values_(i, j); }

private:
  Matrix<Scalar> values_;
};

/// Full eigendecomposition: column k of `vectors` pairs with `values[k]`.
template <typename Scalar>
struct EigenDecomposition {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;
  EigenOrder order = EigenOrder::Descending;
};

/// C = (sum_i w_i z_i z_i^T) / (sum_i w_i) over the rows of `z`, taken about
/// the origin (no re-centering).
template <typename DerivedZ, typename DerivedW>
SymmetricMatrix<typename DerivedZ::Scalar> weighted_scatter(
    const Eigen::MatrixBase<DerivedZ>& z, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedZ::Scalar;
  require_data(z, "weighted_scatter");
  if (w.size() != z.rows()) {
    throw DimensionError("weighted_scatter: weight count " + std::to_string(w.size()) +
                         " does not match sample count " + std::to_string(z.rows()));
  }
  require_finite(w, "weighted_scatter weights");
  if ((w.array() < Scalar(0)).any()) {
    throw InvalidArgument("weighted_scatter: negative weight");
  }
  const Scalar total = w.sum();
  if (!(total > Scalar(0))) {
    throw InvalidArgument("weighted_scatter: weights sum to zero");
  }
  Matrix<Scalar> c = z.transpose() * w.asDiagonal() * z;
  c /= total;
  return SymmetricMatrix<Scalar>(c);
}

namespace detail {

/// Flips each column so its entry of largest magnitude (first on ties) is
/// nonnegative.
template <typename Scalar>
void normalize_signs(Matrix<Scalar>& vectors) {
  for (Index k = 0; k < vectors.cols(); ++k) {
    Index arg = 0;
    Scalar best = Scalar(-1);
    for (Index i = 0; i < vectors.rows(); ++i) {
      const Scalar a = std::abs(vectors(i, k));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (vectors(arg, k) < Scalar(0)) vectors.col(k) = -vectors.col(k);
  }
}

template <typename Scalar>
Scalar off_diagonal_norm(const Matrix<Scalar>& a) {
  Scalar sum = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

/// Orders eigenpairs (stable on ties) and applies the sign convention.
template <typename Scalar>
EigenDecomposition<Scalar> sorted_decomposition(const Vector<Scalar>& values,
                                                const Matrix<Scalar>& vectors,
                                                EigenOrder order) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return order == EigenOrder::Descending ? values[a] > values[b] : values[a] < values[b];
  });
  EigenDecomposition<Scalar> out;
  out.order = order;
  out.values.resize(values.size());
  out.vectors.resize(vectors.rows(), vectors.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.values[static_cast<Index>(k)] = values[idx[k]];
    out.vectors.col(static_cast<Index>(k)) = vectors.col(idx[k]);
  }
  normalize_signs(out.vectors);
  return out;
}

}  // namespace detail

inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigendecomposition. Sweeps over every (p, q) pair until the
/// off-diagonal Frobenius norm drops to 1e-12 * ||C||_F.
template <typename Scalar>
EigenDecomposition<Scalar> sym_eigen(const SymmetricMatrix<Scalar>& c,
                                     EigenOrder order = EigenOrder::Descending) {
  const Index n = c.dim();
  Matrix<Scalar> a = c.matrix();
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const Scalar tolerance = Scalar(1e-12) * a.norm();

  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= tolerance) {
      converged = true;
      break;
    }
    if (sweep == kJacobiMaxSweeps) break;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("sym_eigen: Jacobi iteration did not converge in " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps");
  }
  return detail::sorted_decomposition<Scalar>(a.diagonal(), v, order);
}

/// Max-abs deviation of Q^T Q from the identity.
template <typename Derived>
typename Derived::Scalar orthonormality_error(const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  if (q.cols() == 0) return Scalar(0);
  const Matrix<Scalar> gram = q.transpose() * q;
  return (gram - Matrix<Scalar>::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

/// Z = X * U_d. The basis columns must be orthonormal within 1e-6.
template <typename DerivedX, typename DerivedU>
DataMatrix<typename DerivedX::Scalar> project(const Eigen::MatrixBase<DerivedX>& x,
                                              const Eigen::MatrixBase<DerivedU>& basis) {
  using Scalar = typename DerivedX::Scalar;
  if (x.cols() != basis.rows()) {
    throw DimensionError("project: data has " + std::to_string(x.cols()) +
                         " columns but basis has " + std::to_string(basis.rows()) + " rows");
  }
  if (basis.cols() > basis.rows()) {
    throw DimensionError("project: basis has more columns than rows");
  }
  if (orthonormality_error(basis) > Scalar(1e-6)) {
    throw InvalidArgument("project: basis columns are not orthonormal");
  }
  return x * basis;
}

/// Angle between the lines spanned by u and v, in degrees within [0, 90].
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar angle_between(const Eigen::MatrixBase<DerivedU>& u,
                                        const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) throw DimensionError("angle_between: length mismatch");
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) {
    throw InvalidArgument("angle_between: zero vector");
  }
  const Vector<Scalar> a = u / nu;
  const Vector<Scalar> b = v / nv;
  const Scalar cosine = std::abs(a.dot(b));
  // atan2 of the perpendicular residual keeps precision near 0 and 90 degrees.
  const Scalar sine = (b - a.dot(b) * a).norm();
  return std::atan2(sine, cosine) * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Orthonormal basis (thin Q of a Householder QR) of the column space of `m`.
/// `m` is assumed to have full column rank.
template <typename Derived>
Matrix<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(m);
  return qr.householderQ() * Matrix<Scalar>::Identity(m.rows(), m.cols());
}

/// Principal angles (radians, ascending) between the column spaces of `a` and
/// `b`. Both inputs are orthonormalized first. Small angles come from the
/// sines of the residual, large ones from the cosines.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> principal_angles(const Eigen::MatrixBase<DerivedA>& a,
                                                   const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.rows() != b.rows()) throw DimensionError("principal_angles: ambient dimension mismatch");
  Matrix<Scalar> qa = orthonormalize(a);
  Matrix<Scalar> qb = orthonormalize(b);
  // The residual is taken for the smaller basis so sines and cosines pair up.
  if (qb.cols() > qa.cols()) std::swap(qa, qb);
  const Index m = qb.cols();
  const Matrix<Scalar> cross = qa.transpose() * qb;
  Eigen::JacobiSVD<Matrix<Scalar>> cos_svd(cross);
  const Matrix<Scalar> residual = qb - qa * cross;
  Eigen::JacobiSVD<Matrix<Scalar>> sin_svd(residual);

  Vector<Scalar> angles(m);
  const auto& cosines = cos_svd.singularValues();  // descending
  const auto& sines = sin_svd.singularValues();     // descending
  for (Index i = 0; i < m; ++i) {
    const Scalar c = std::min(Scalar(1), cosines[i]);
    const Scalar s = std::min(Scalar(1), sines[m - 1 - i]);
    angles[i] = std::atan2(s, c);
  }
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar max_principal_angle(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  const auto angles = principal_angles(a, b);
  return angles.size() == 0 ? typename DerivedA::Scalar(0) : angles.maxCoeff();
}

}  // namespace robpca

#endif  // ROBPCA_LINALG_HPP
