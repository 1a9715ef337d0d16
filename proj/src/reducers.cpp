#include "robpca/reducers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace robpca {

namespace {

void require_fit_shape(const MatrixXd& x, Index d, const char* what) {
  require_data(x, what);
  if (x.rows() < 2) {
    throw InvalidArgument(std::string(what) + ": need at least 2 samples, got " +
                          std::to_string(x.rows()));
  }
  if (d < 1 || d > x.cols()) {
    throw InvalidArgument(std::string(what) + ": target dimension " + std::to_string(d) +
                          " outside [1, " + std::to_string(x.cols()) + "]");
  }
}

void require_percentile(int c, const char* what) {
  if (c < 0 || c > 100) {
    throw InvalidArgument(std::string(what) + ": percentile " + std::to_string(c) +
                          " outside [0, 100]");
  }
}

/// Eigendecomposes the weighted scatter of `z` and keeps d columns.
void fill_basis(ReductionModel& model, const MatrixXd& z, const VectorXd& weights, Index d,
                EigenOrder order) {
  const auto eig = sym_eigen(weighted_scatter(z, weights), order);
  model.basis = eig.vectors.leftCols(d);
  model.eigenvalues = eig.values.head(d);
  model.eigen_order = order;
}

ReductionModel huber_fit(LinearMethod method, const MatrixXd& x, Index d, int c,
                         ScalingKind scaling, EigenOrder order, const char* what) {
  require_fit_shape(x, d, what);
  require_percentile(c, what);
  ReductionModel model;
  model.method = method;
  model.scaling = fit_scaling(x, scaling);
  const MatrixXd z = apply_scaling(x, model.scaling);
  const HuberWeights hw = huber_weights(z, c);
  model.huber = HuberParams<double>{c, hw.threshold};
  fill_basis(model, z, hw.weights, d, order);
  return model;
}

double pow_int(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

double squared_distance(const MatrixXd& a, Index i, const MatrixXd& b, Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

}  // namespace

VectorXd ReductionModel::data_space_direction(Index k) const {
  VectorXd v = scaling.scale.cwiseProduct(basis.col(k));
  return v / v.norm();
}

void validate(const ReductionModel& model, double tolerance) {
  const Index dims = model.basis.rows();
  const Index d = model.basis.cols();
  if (d < 1 || d > dims) throw FormatError("model: basis has invalid shape");
  if (model.eigenvalues.size() != d) {
    throw FormatError("model: eigenvalue count does not match basis columns");
  }
  if (model.scaling.location.size() != dims || model.scaling.scale.size() != dims) {
    throw FormatError("model: scaling vectors do not match the feature count");
  }
  if (!model.basis.allFinite() || !model.eigenvalues.allFinite() ||
      !model.scaling.location.allFinite() || !model.scaling.scale.allFinite()) {
    throw FormatError("model: non-finite value");
  }
  if ((model.scaling.scale.array() <= 0.0).any()) {
    throw FormatError("model: nonpositive scale");
  }
  if (orthonormality_error(model.basis) > tolerance) {
    throw FormatError("model: basis columns are not orthonormal");
  }
  for (Index k = 1; k < d; ++k) {
    const bool ok = model.eigen_order == EigenOrder::Descending
                        ? model.eigenvalues[k - 1] >= model.eigenvalues[k]
                        : model.eigenvalues[k - 1] <= model.eigenvalues[k];
    if (!ok) throw FormatError("model: eigenvalues out of order");
  }
  if (model.huber) {
    if (model.huber->percentile < 0 || model.huber->percentile > 100 ||
        !(model.huber->threshold > 0.0)) {
      throw FormatError("model: invalid Huber parameters");
    }
  }
}

HuberWeights huber_weights(const MatrixXd& z, int c) {
  HuberWeights out;
  out.norms = z.rowwise().norm();
  out.threshold = threshold_from_percentile(out.norms, c);
  out.weights.resize(out.norms.size());
  for (Index i = 0; i < out.norms.size(); ++i) {
    out.weights[i] = huber_weight(out.norms[i], out.threshold);
  }
  return out;
}

ReductionModel pca_fit(const MatrixXd& x, Index d, Centering centering) {
  require_fit_shape(x, d, "pca_fit");
  ReductionModel model;
  model.method = LinearMethod::Pca;
  if (centering == Centering::Mean) {
    model.scaling = fit_scaling(x, ScalingKind::Center);
  } else {
    model.scaling.kind = ScalingKind::Center;
    model.scaling.location = VectorXd::Zero(x.cols());
    model.scaling.scale = VectorXd::Ones(x.cols());
  }
  const MatrixXd z = apply_scaling(x, model.scaling);
  fill_basis(model, z, VectorXd::Ones(x.rows()), d, EigenOrder::Descending);
  return model;
}

ReductionModel hpca_fit(const MatrixXd& x, Index d, int c, EigenOrder order) {
  return huber_fit(LinearMethod::Hpca, x, d, c, ScalingKind::Center, order, "hpca_fit");
}

ReductionModel dc_hpca_fit(const MatrixXd& x, Index d, int c, RobustScale scale,
                           EigenOrder order) {
  return scale == RobustScale::Smad
             ? huber_fit(LinearMethod::DcHpcaSmad, x, d, c, ScalingKind::RobustSmad, order,
                         "dc_hpca_fit")
             : huber_fit(LinearMethod::DcHpcaSn, x, d, c, ScalingKind::RobustSn, order,
                         "dc_hpca_fit");
}

double median_pairwise_distance(const MatrixXd& x) {
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(x.rows() * (x.rows() - 1) / 2));
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = i + 1; j < x.rows(); ++j) dist.push_back(std::sqrt(squared_distance(x, i, x, j)));
  if (dist.empty()) return 0.0;
  return detail::median_inplace(dist);
}

MatrixXd kernel_matrix(const KernelSpec& kernel, const MatrixXd& a, const MatrixXd& b) {
  if (a.cols() != b.cols()) throw DimensionError("kernel_matrix: feature count mismatch");
  MatrixXd k(a.rows(), b.rows());
  if (const auto* g = std::get_if<GaussianKernel>(&kernel)) {
    if (!g->sigma || !(*g->sigma > 0.0)) {
      throw InvalidArgument("kernel_matrix: Gaussian sigma must be positive");
    }
    const double denom = 2.0 * *g->sigma * *g->sigma;
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < b.rows(); ++j)
        k(i, j) = std::expm1(-squared_distance(a, i, b, j) / denom);
  } else {
    const auto& p = std::get<PolynomialKernel>(kernel);
    const MatrixXd gram = a * b.transpose();
    k = gram.unaryExpr([&](double v) { return pow_int(v + p.coef, p.degree); });
  }
  return k;
}

KernelModel kpca_fit(const MatrixXd& x, Index d, const KernelSpec& kernel) {
  require_data(x, "kpca_fit");
  const Index n = x.rows();
  if (d < 1 || d > n - 1) {
    throw InvalidArgument("kpca_fit: target dimension " + std::to_string(d) + " outside [1, " +
                          std::to_string(n - 1) + "]");
  }
  KernelModel model;
  model.kernel = kernel;
  if (auto* g = std::get_if<GaussianKernel>(&model.kernel)) {
    if (!g->sigma) {
      double sigma = median_pairwise_distance(x);
      if (!(sigma > 0.0)) {
        // More than half the pairs coincide; fall back to the mean distance.
        double sum = 0.0;
        for (Index i = 0; i < n; ++i)
          for (Index j = i + 1; j < n; ++j) sum += std::sqrt(squared_distance(x, i, x, j));
        sigma = sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
      }
      if (!(sigma > 0.0)) {
        throw InvalidArgument("kpca_fit: all training points coincide; centered kernel has rank 0");
      }
      g->sigma = sigma;
    } else if (!(*g->sigma > 0.0)) {
      throw InvalidArgument("kpca_fit: Gaussian sigma must be positive");
    }
  } else if (std::get<PolynomialKernel>(model.kernel).degree < 1) {
    throw InvalidArgument("kpca_fit: polynomial degree must be at least 1");
  }
  model.training = x;

  const MatrixXd k = kernel_matrix(model.kernel, x, x);
  model.train_means = k.colwise().mean().transpose();
  model.grand_mean = model.train_means.mean();
  MatrixXd centered = k;
  centered.rowwise() -= model.train_means.transpose();
  centered.colwise() -= model.train_means;
  centered.array() += model.grand_mean;
  centered = (0.5 * (centered + centered.transpose())).eval();

  const double trace = centered.trace();
  if (!(trace > 0.0)) {
    throw InvalidArgument("kpca_fit: centered kernel has rank 0 (all training points coincide "
                          "in feature space)");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("kpca_fit: kernel eigendecomposition failed");
  }
  const VectorXd& ascending = solver.eigenvalues();
  const double floor = 1e-10 * trace;
  MatrixXd vectors(n, d);
  model.eigenvalues.resize(d);
  for (Index k2 = 0; k2 < d; ++k2) {
    const Index src = n - 1 - k2;
    const double lambda = ascending[src];
    if (!(lambda > floor)) {
      throw InvalidArgument("kpca_fit: only " + std::to_string(k2) +
                            " positive kernel eigenvalues, need " + std::to_string(d));
    }
    model.eigenvalues[k2] = lambda;
    vectors.col(k2) = solver.eigenvectors().col(src);
  }
  detail::normalize_signs(vectors);
  model.alphas = vectors * model.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
  return model;
}

DataMatrix<double> transform(const ReductionModel& model, const MatrixXd& x) {
  if (x.cols() != model.input_dim()) {
    throw DimensionError("transform: data has " + std::to_string(x.cols()) +
                         " columns, model expects " + std::to_string(model.input_dim()));
  }
  return project(apply_scaling(x, model.scaling), model.basis);
}

DataMatrix<double> transform(const KernelModel& model, const MatrixXd& x) {
  if (x.cols() != model.input_dim()) {
    throw DimensionError("transform: data has " + std::to_string(x.cols()) +
                         " columns, kernel model expects " + std::to_string(model.input_dim()));
  }
  MatrixXd k = kernel_matrix(model.kernel, x, model.training);
  const VectorXd row_means = k.rowwise().mean();
  k.rowwise() -= model.train_means.transpose();
  k.colwise() -= row_means;
  k.array() += model.grand_mean;
  return k * model.alphas;
}

DataMatrix<double> transform(const Reducer& model, const MatrixXd& x) {
  return std::visit([&](const auto& m) { return transform(m, x); }, model);
}

bool is_kernel(Method m) { return m == Method::KpcaGauss || m == Method::KpcaPoly; }

Reducer fit(const MethodConfig& config, const MatrixXd& x, Index d) {
  switch (config.method) {
    case Method::Pca:
      return pca_fit(x, d, config.centering);
    case Method::Hpca:
      return hpca_fit(x, d, config.c, config.eigen_order);
    case Method::DcHpcaSmad:
      return dc_hpca_fit(x, d, config.c, RobustScale::Smad, config.eigen_order);
    case Method::DcHpcaSn:
      return dc_hpca_fit(x, d, config.c, RobustScale::Sn, config.eigen_order);
    case Method::KpcaGauss:
      return kpca_fit(x, d, GaussianKernel{config.kernel_sigma});
    case Method::KpcaPoly:
      return kpca_fit(x, d, PolynomialKernel{config.poly_degree, config.poly_coef});
  }
  throw InvalidArgument("fit: unknown method");
}

std::string_view method_tag(Method m) {
  switch (m) {
    case Method::Pca: return "pca";
    case Method::Hpca: return "hpca";
    case Method::DcHpcaSmad: return "dchpca-smad";
    case Method::DcHpcaSn: return "dchpca-sn";
    case Method::KpcaGauss: return "kpca-gauss";
    case Method::KpcaPoly: return "kpca-poly";
  }
  return "unknown";
}

std::string_view method_tag(LinearMethod m) {
  switch (m) {
    case LinearMethod::Pca: return "pca";
    case LinearMethod::Hpca: return "hpca";
    case LinearMethod::DcHpcaSmad: return "dchpca-smad";
    case LinearMethod::DcHpcaSn: return "dchpca-sn";
  }
  return "unknown";
}

Method parse_method(std::string_view tag) {
  for (Method m : {Method::Pca, Method::Hpca, Method::DcHpcaSmad, Method::DcHpcaSn,
                   Method::KpcaGauss, Method::KpcaPoly}) {
    if (method_tag(m) == tag) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(tag) + "'");
}

std::string_view eigen_order_tag(EigenOrder o) {
  return o == EigenOrder::Descending ? "desc" : "asc";
}

EigenOrder parse_eigen_order(std::string_view tag) {
  if (tag == "desc") return EigenOrder::Descending;
  if (tag == "asc") return EigenOrder::Ascending;
  throw InvalidArgument("unknown eigen order '" + std::string(tag) + "'");
}

std::string describe_params(const MethodConfig& config) {
  std::ostringstream os;
  switch (config.method) {
    case Method::Pca:
      os << "centering=" << (config.centering == Centering::Mean ? "mean" : "none");
      break;
    case Method::Hpca:
      os << "c=" << config.c << ";order=" << eigen_order_tag(config.eigen_order);
      break;
    case Method::DcHpcaSmad:
    case Method::DcHpcaSn:
      os << "c=" << config.c << ";scale="
         << (config.method == Method::DcHpcaSmad ? "smad" : "sn")
         << ";order=" << eigen_order_tag(config.eigen_order);
      break;
    case Method::KpcaGauss:
      os << "sigma=";
      if (config.kernel_sigma) {
        os << *config.kernel_sigma;
      } else {
        os << "auto";
      }
      break;
    case Method::KpcaPoly:
      os << "degree=" << config.poly_degree << ";coef=" << config.poly_coef;
      break;
  }
  return os.str();
}

}  // namespace robpca
