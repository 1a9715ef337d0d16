#ifndef ROBPCA_REDUCERS_HPP
#define ROBPCA_REDUCERS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "robpca/linalg.hpp"
#include "robpca/robust.hpp"

namespace robpca {

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

enum class LinearMethod { Pca, Hpca, DcHpcaSmad, DcHpcaSn };

/// Fitted linear reducer. `transform` maps a sample x to
/// ((x - scaling.location) / scaling.scale)^T * basis.
struct ReductionModel {
  LinearMethod method = LinearMethod::Pca;
  MatrixXd basis;  ///< D x d, orthonormal columns
  VectorXd eigenvalues;
  ScalingModel<double> scaling;
  std::optional<HuberParams<double>> huber;
  EigenOrder eigen_order = EigenOrder::Descending;

  Index input_dim() const { return basis.rows(); }
  Index output_dim() const { return basis.cols(); }

  /// Column k of the basis mapped back to the original feature coordinates
  /// (undoes the per-feature scale) and normalized. Equal to the basis column
  /// when the scale is all ones.
  VectorXd data_space_direction(Index k) const;
};

/// Throws FormatError/InvalidArgument when the model violates its invariants
/// (orthonormality within `tolerance`, eigenvalue order, shapes).
void validate(const ReductionModel& model, double tolerance = 1e-8);

enum class Centering { Mean, None };

/// Classical PCA: center, unit-weight scatter, d leading eigenvectors.
/// `Centering::None` treats the rows as already centered at the origin.
ReductionModel pca_fit(const MatrixXd& x, Index d, Centering centering = Centering::Mean);

/// Huber-weighted PCA on mean-centered data.
ReductionModel hpca_fit(const MatrixXd& x, Index d, int c,
                        EigenOrder order = EigenOrder::Descending);

enum class RobustScale { Smad, Sn };

/// Robust scaling (median, S_mad or S_n), Huber weights from the sample norms
/// at percentile c, weighted scatter about the origin, eigendecomposition.
ReductionModel dc_hpca_fit(const MatrixXd& x, Index d, int c, RobustScale scale,
                           EigenOrder order = EigenOrder::Descending);

/// Per-sample Huber weights the robust fits use: r_i = ||z_i||, t from the
/// percentile, w_i = huber_weight(r_i, t).
struct HuberWeights {
  VectorXd norms;
  VectorXd weights;
  double threshold = 0;
};
HuberWeights huber_weights(const MatrixXd& z, int c);

struct GaussianKernel {
  /// Bandwidth; unset means "median pairwise training distance".
  std::optional<double> sigma;
};
struct PolynomialKernel {
  int degree = 2;
  double coef = 1.0;
};
using KernelSpec = std::variant<GaussianKernel, PolynomialKernel>;

/// Fitted kernel PCA. Kernel values are stored shifted by a constant for the
/// Gaussian kernel (expm1 instead of exp); centering cancels the shift.
struct KernelModel {
  KernelSpec kernel;  ///< Gaussian sigma is always resolved after fitting
  MatrixXd training;
  MatrixXd alphas;  ///< n x d, column k scaled by 1/sqrt(lambda_k)
  VectorXd eigenvalues;
  VectorXd train_means;  ///< column means of the training kernel matrix
  double grand_mean = 0;

  Index input_dim() const { return training.cols(); }
  Index output_dim() const { return alphas.cols(); }
};

KernelModel kpca_fit(const MatrixXd& x, Index d, const KernelSpec& kernel);

/// Median of the pairwise Euclidean distances between rows (i < j).
double median_pairwise_distance(const MatrixXd& x);

/// Raw (uncentered) kernel matrix between rows of `a` and rows of `b`, with
/// the Gaussian shift applied.
MatrixXd kernel_matrix(const KernelSpec& kernel, const MatrixXd& a, const MatrixXd& b);

DataMatrix<double> transform(const ReductionModel& model, const MatrixXd& x);
DataMatrix<double> transform(const KernelModel& model, const MatrixXd& x);

using Reducer = std::variant<ReductionModel, KernelModel>;

DataMatrix<double> transform(const Reducer& model, const MatrixXd& x);

/// Method selector covering every reducer, with the parameters each uses.
enum class Method { Pca, Hpca, DcHpcaSmad, DcHpcaSn, KpcaGauss, KpcaPoly };

struct MethodConfig {
  Method method = Method::Pca;
  int c = 90;
  EigenOrder eigen_order = EigenOrder::Descending;
  std::optional<double> kernel_sigma;
  int poly_degree = 2;
  double poly_coef = 1.0;
  Centering centering = Centering::Mean;  ///< PCA only
};

bool is_kernel(Method m);
Reducer fit(const MethodConfig& config, const MatrixXd& x, Index d);

std::string_view method_tag(Method m);
std::string_view method_tag(LinearMethod m);
Method parse_method(std::string_view tag);
std::string_view eigen_order_tag(EigenOrder o);
EigenOrder parse_eigen_order(std::string_view tag);

/// Parameter summary, e.g. "c=90;order=desc" or "sigma=auto".
std::string describe_params(const MethodConfig& config);

}  // namespace robpca

#endif  // ROBPCA_REDUCERS_HPP
