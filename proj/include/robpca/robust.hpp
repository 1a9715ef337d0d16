#ifndef ROBPCA_ROBUST_HPP
#define ROBPCA_ROBUST_HPP

// Robust location/scale estimators, per-feature scaling, and the Huber loss
// used to down-weight samples far from the robust center.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "robpca/error.hpp"
#include "robpca/linalg.hpp"

namespace robpca {

/// Consistency constant of the MAD at the normal distribution.
inline constexpr double kSmadConstant = 1.4826;
/// Consistency constant of the S_n pairwise-median estimator.
inline constexpr double kSnConstant = 1.1926;

namespace detail {

template <typename Derived>
std::vector<typename Derived::Scalar> to_std_vector(const Eigen::DenseBase<Derived>& v,
                                                    const char* what) {
  if (v.size() == 0) throw InvalidArgument(std::string(what) + ": empty input");
  require_finite(v, what);
  const auto& d = v.derived();
  std::vector<typename Derived::Scalar> out(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) out[static_cast<std::size_t>(i)] = d(i);
  return out;
}

/// Median of a scratch buffer; reorders the buffer.
template <typename Scalar>
Scalar median_inplace(std::vector<Scalar>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const Scalar upper = v[mid];
  if (n % 2 == 1) return upper;
  const Scalar lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / Scalar(2);
}

}  // namespace detail

/// Middle order statistic; midpoint of the two central ones for even length.
template <typename Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& v) {
  auto buf = detail::to_std_vector(v, "median");
  return detail::median_inplace(buf);
}

/// 1.4826 * med_i |x_i - med_j x_j|. May be zero.
template <typename Derived>
typename Derived::Scalar s_mad(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  auto buf = detail::to_std_vector(v, "s_mad");
  auto scratch = buf;
  const Scalar center = detail::median_inplace(scratch);
  for (auto& x : buf) x = std::abs(x - center);
  return Scalar(kSmadConstant) * detail::median_inplace(buf);
}

/// 1.1926 * med_i med_j |x_i - x_j|, j ranging over all indices (j = i
/// included). Naive O(n^2).
template <typename Derived>
typename Derived::Scalar s_n(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const auto values = detail::to_std_vector(v, "s_n");
  const std::size_t n = values.size();
  std::vector<Scalar> inner(n);
  std::vector<Scalar> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = std::abs(values[i] - values[j]);
    inner[i] = detail::median_inplace(row);
  }
  return Scalar(kSnConstant) * detail::median_inplace(inner);
}

enum class ScalingKind {
  Center,      ///< mean location, unit scale (plain centering)
  Auto,        ///< mean location, sample standard deviation
  RobustSmad,  ///< median location, S_mad
  RobustSn,    ///< median location, S_n
};

/// Per-feature location and scale. Features whose raw scale is zero get
/// scale 1 and are listed in `degenerate_features`.
template <typename Scalar>
struct ScalingModel {
  ScalingKind kind = ScalingKind::Center;
  Vector<Scalar> location;
  Vector<Scalar> scale;
  std::vector<Index> degenerate_features;

  Index dim() const { return location.size(); }
};

template <typename Derived>
ScalingModel<typename Derived::Scalar> fit_scaling(const Eigen::MatrixBase<Derived>& x,
                                                   ScalingKind kind) {
  using Scalar = typename Derived::Scalar;
  require_data(x, "fit_scaling");
  const Index n = x.rows();
  const Index dims = x.cols();
  ScalingModel<Scalar> m;
  m.kind = kind;
  m.location.resize(dims);
  m.scale.resize(dims);
  for (Index j = 0; j < dims; ++j) {
    const auto col = x.col(j);
    Scalar loc = 0;
    Scalar raw = 1;
    switch (kind) {
      case ScalingKind::Center:
        loc = col.mean();
        break;
      case ScalingKind::Auto:
        loc = col.mean();
        raw = n > 1 ? std::sqrt((col.array() - loc).square().sum() / Scalar(n - 1)) : Scalar(0);
        break;
      case ScalingKind::RobustSmad:
        loc = median(col);
        raw = s_mad(col);
        break;
      case ScalingKind::RobustSn:
        loc = median(col);
        raw = s_n(col);
        break;
    }
    m.location[j] = loc;
    if (raw > Scalar(0)) {
      m.scale[j] = raw;
    } else {
      m.scale[j] = Scalar(1);
      m.degenerate_features.push_back(j);
    }
  }
  return m;
}

/// z_ij = (x_ij - location_j) / scale_j
template <typename Derived>
DataMatrix<typename Derived::Scalar> apply_scaling(
    const Eigen::MatrixBase<Derived>& x, const ScalingModel<typename Derived::Scalar>& m) {
  if (x.cols() != m.dim()) {
    throw DimensionError("apply_scaling: data has " + std::to_string(x.cols()) +
                         " columns, model expects " + std::to_string(m.dim()));
  }
  return ((x.rowwise() - m.location.transpose()).array().rowwise() /
          m.scale.transpose().array())
      .matrix();
}

/// Huber loss: y^2/2 inside [-t, t], linear t|y| - t^2/2 outside.
template <typename Scalar>
Scalar huber_rho(Scalar y, Scalar t) {
  if (!(t > Scalar(0))) throw InvalidArgument("huber_rho: threshold must be positive");
  const Scalar a = std::abs(y);
  return a <= t ? y * y / Scalar(2) : t * a - t * t / Scalar(2);
}

/// psi(r)/r for Huber's psi: 1 on [0, t], t/r beyond.
template <typename Scalar>
Scalar huber_weight(Scalar r, Scalar t) {
  if (!(t > Scalar(0))) throw InvalidArgument("huber_weight: threshold must be positive");
  if (r < Scalar(0)) throw InvalidArgument("huber_weight: negative residual size");
  return r <= t ? Scalar(1) : t / r;
}

template <typename Scalar>
struct HuberParams {
  int percentile = 90;
  Scalar threshold = 1;
};

/// Nearest-rank percentile of the sample sizes: sort ascending and take order
/// statistic max(1, ceil(c*n/100)). A zero result is replaced by the smallest
/// positive norm.
template <typename Derived>
typename Derived::Scalar threshold_from_percentile(const Eigen::DenseBase<Derived>& norms,
                                                   int c) {
  using Scalar = typename Derived::Scalar;
  if (c < 0 || c > 100) {
    throw InvalidArgument("threshold_from_percentile: percentile " + std::to_string(c) +
                          " outside [0, 100]");
  }
  auto sorted = detail::to_std_vector(norms, "threshold_from_percentile");
  if (std::any_of(sorted.begin(), sorted.end(), [](Scalar r) { return r < Scalar(0); })) {
    throw InvalidArgument("threshold_from_percentile: negative norm");
  }
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() == Scalar(0)) {
    throw InvalidArgument("threshold_from_percentile: all norms are zero");
  }
  const auto n = static_cast<std::int64_t>(sorted.size());
  const std::int64_t rank = std::max<std::int64_t>(1, (std::int64_t{c} * n + 99) / 100);
  const Scalar t = sorted[static_cast<std::size_t>(rank - 1)];
  if (t > Scalar(0)) return t;
  return *std::upper_bound(sorted.begin(), sorted.end(), Scalar(0));
}

}  // namespace robpca

#endif  // ROBPCA_ROBUST_HPP
