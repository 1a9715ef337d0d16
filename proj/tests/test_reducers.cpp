#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robpca/random.hpp"
#include "robpca/reducers.hpp"

using namespace robpca;

namespace {

MatrixXd random_matrix(Rng& rng, Index n, Index d, double sd = 1.0) {
  MatrixXd x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) x(i, j) = rng.normal(0, sd * (1 + j));
  return x;
}

MatrixXd line_points(Rng& rng, Index n, double noise) {
  const Eigen::Vector2d along = Eigen::Vector2d(1, 1).normalized();
  const Eigen::Vector2d across(-along.y(), along.x());
  MatrixXd x(n, 2);
  for (Index i = 0; i < n; ++i) {
    x.row(i) = (rng.uniform(-3, 3) * along + rng.normal(0, noise) * across).transpose();
  }
  return x;
}

// Leading right singular vectors of the centered data via the Gram matrix
// X^T X, solved with Eigen's own symmetric solver.
MatrixXd gram_oracle(const MatrixXd& x, Index d) {
  const MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(c.transpose() * c);
  return es.eigenvectors().rightCols(d);
}

// H K H with H = I - 11^T/n, built explicitly.
MatrixXd centered_gram(const MatrixXd& k) {
  const Index n = k.rows();
  const MatrixXd h = MatrixXd::Identity(n, n) - MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return h * k * h;
}

const Eigen::Vector2d kLine = Eigen::Vector2d(1, 1).normalized();

}  // namespace

TEST_CASE("pca_fit examples") {
  Rng rng(1);
  SUBCASE("points on a line") {
    const ReductionModel m = pca_fit(line_points(rng, 40, 0.01), 1);
    CHECK(angle_between(m.basis.col(0), kLine) < 1.0);
  }
  SUBCASE("zero variance in column 2") {
    MatrixXd x(5, 2);
    x << 1, 3, 2, 3, 5, 3, -1, 3, 0, 3;
    const ReductionModel m = pca_fit(x, 1);
    CHECK(std::abs(m.basis(0, 0)) == doctest::Approx(1));
    CHECK(m.basis(1, 0) == doctest::Approx(0));
  }
  SUBCASE("random 20x4 matches the Gram oracle") {
    const MatrixXd x = random_matrix(rng, 20, 4);
    for (Index d = 1; d <= 4; ++d) {
      const ReductionModel m = pca_fit(x, d);
      CHECK(max_principal_angle(m.basis, gram_oracle(x, d)) < 1e-6);
      CHECK(orthonormality_error(m.basis) <= 1e-8);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(pca_fit(MatrixXd::Ones(1, 3), 1), InvalidArgument);
    CHECK_THROWS_AS(pca_fit(MatrixXd::Ones(4, 3), 0), InvalidArgument);
    CHECK_THROWS_AS(pca_fit(MatrixXd::Ones(4, 3), 4), InvalidArgument);
  }
}

TEST_CASE("dc_hpca_fit with c = 100 spans the scaled-data PCA subspace") {
  Rng rng(2);
  MatrixXd x = random_matrix(rng, 30, 5);
  x.row(3) *= 40;  // an outlier, which c = 100 must not treat specially
  for (RobustScale scale : {RobustScale::Smad, RobustScale::Sn}) {
    for (Index d = 1; d <= 4; ++d) {
      const ReductionModel m = dc_hpca_fit(x, d, 100, scale);
      CHECK(m.huber->percentile == 100);
      const MatrixXd z = apply_scaling(x, m.scaling);
      const ReductionModel p = pca_fit(z, d, Centering::None);
      CHECK(max_principal_angle(m.basis, p.basis) < 1e-6);
    }
  }
}

TEST_CASE("hpca_fit with c = 100 equals PCA") {
  Rng rng(3);
  const MatrixXd x = random_matrix(rng, 25, 4);
  for (Index d = 1; d <= 3; ++d) {
    CHECK(max_principal_angle(hpca_fit(x, d, 100).basis, pca_fit(x, d).basis) < 1e-6);
  }
}

TEST_CASE("robust fits reject degenerate input") {
  CHECK_THROWS_AS(dc_hpca_fit(MatrixXd::Ones(1, 2), 1, 90, RobustScale::Smad), InvalidArgument);
  CHECK_THROWS_AS(hpca_fit(MatrixXd::Ones(1, 2), 1, 90), InvalidArgument);
  Rng rng(4);
  const MatrixXd x = random_matrix(rng, 10, 3);
  CHECK_THROWS_AS(dc_hpca_fit(x, 1, 101, RobustScale::Sn), InvalidArgument);
  CHECK_THROWS_AS(hpca_fit(x, 4, 90), InvalidArgument);
}

TEST_CASE("HPCA and DC-HPCA weights differ on anisotropically scaled data") {
  Rng rng(5);
  MatrixXd x = random_matrix(rng, 40, 3);
  x.col(0) *= 1000;
  const MatrixXd centered = x.rowwise() - x.colwise().mean();
  const auto hw = huber_weights(centered, 80);
  const ReductionModel robust = dc_hpca_fit(x, 1, 80, RobustScale::Smad);
  const auto dw = huber_weights(apply_scaling(x, robust.scaling), 80);
  CHECK((hw.weights - dw.weights).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("huber_weights follow the percentile threshold") {
  MatrixXd z(4, 1);
  z << 1, -2, 3, 4;
  const auto hw = huber_weights(z, 50);
  CHECK(hw.threshold == 2);
  CHECK(hw.norms == VectorXd{{1, 2, 3, 4}});
  CHECK(hw.weights[0] == 1);
  CHECK(hw.weights[1] == 1);
  CHECK(hw.weights[2] == doctest::Approx(2.0 / 3));
  CHECK(hw.weights[3] == 0.5);
}

TEST_CASE("every fitted linear model is orthonormal and ordered") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd x = random_matrix(rng, 15 + trial, 6);
    for (EigenOrder order : {EigenOrder::Descending, EigenOrder::Ascending}) {
      for (int c : {0, 50, 90, 100}) {
        for (const ReductionModel& m :
             {pca_fit(x, 3), hpca_fit(x, 3, c, order), dc_hpca_fit(x, 3, c, RobustScale::Smad, order),
              dc_hpca_fit(x, 3, c, RobustScale::Sn, order)}) {
          CHECK(orthonormality_error(m.basis) <= 1e-8);
          CHECK_NOTHROW(validate(m));
        }
      }
    }
  }
}

TEST_CASE("validate catches broken models") {
  Rng rng(7);
  ReductionModel m = pca_fit(random_matrix(rng, 12, 3), 2);
  ReductionModel bad = m;
  bad.basis(0, 0) += 0.01;
  CHECK_THROWS(validate(bad));
  bad = m;
  std::swap(bad.eigenvalues[0], bad.eigenvalues[1]);
  CHECK_THROWS(validate(bad));
  bad = m;
  bad.scaling.scale[1] = 0;
  CHECK_THROWS(validate(bad));
}

TEST_CASE("transform") {
  Rng rng(8);
  const MatrixXd x = random_matrix(rng, 12, 4);
  SUBCASE("full PCA basis is an isometry of the centered data") {
    const ReductionModel m = pca_fit(x, 4);
    const MatrixXd y = transform(m, x);
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.rows(); ++j)
        CHECK(std::abs((y.row(i) - y.row(j)).norm() - (x.row(i) - x.row(j)).norm()) <= 1e-9);
  }
  SUBCASE("the DC-HPCA location maps to the origin") {
    const ReductionModel m = dc_hpca_fit(x, 2, 90, RobustScale::Sn);
    const MatrixXd y = transform(m, MatrixXd(m.scaling.location.transpose()));
    CHECK(y.isZero());
  }
  SUBCASE("deterministic") {
    const Reducer m = fit(MethodConfig{Method::DcHpcaSmad}, x, 2);
    const MatrixXd a = transform(m, x);
    const MatrixXd b = transform(m, x);
    CHECK(a == b);
  }
  SUBCASE("dimension mismatch") {
    const ReductionModel m = pca_fit(x, 2);
    CHECK_THROWS_AS(transform(m, MatrixXd::Zero(2, 3)), DimensionError);
  }
}

TEST_CASE("data_space_direction undoes the feature scale") {
  ReductionModel m;
  m.basis = MatrixXd{{1 / std::sqrt(2.0)}, {1 / std::sqrt(2.0)}};
  m.scaling.scale = VectorXd{{1, 3}};
  const VectorXd v = m.data_space_direction(0);
  CHECK(v.norm() == doctest::Approx(1));
  CHECK(v[1] / v[0] == doctest::Approx(3));
}

TEST_CASE("kernel PCA with a linear kernel matches PCA") {
  Rng rng(9);
  const MatrixXd x = random_matrix(rng, 25, 4);
  for (Index d = 1; d <= 3; ++d) {
    const KernelModel k = kpca_fit(x, d, PolynomialKernel{1, 0.0});
    const MatrixXd yk = transform(k, x);
    const MatrixXd yp = transform(pca_fit(x, d), x);
    CHECK(max_principal_angle(yk, yp) < 1e-6);
    // Same axes up to sign: every column pair is parallel.
    for (Index j = 0; j < d; ++j) CHECK(angle_between(yk.col(j), yp.col(j)) < 1e-4);
  }
}

TEST_CASE("Gaussian kernel with a huge bandwidth behaves like a linear kernel") {
  Rng rng(10);
  const MatrixXd x = random_matrix(rng, 15, 3);
  const KernelModel g = kpca_fit(x, 2, GaussianKernel{1e6});
  const KernelModel l = kpca_fit(x, 2, PolynomialKernel{1, 0.0});
  CHECK(max_principal_angle(transform(g, x), transform(l, x)) < 1e-3);
}

TEST_CASE("kernel transform of training points reproduces the fitted embedding") {
  Rng rng(11);
  const MatrixXd x = random_matrix(rng, 20, 3);
  for (const KernelSpec& spec : {KernelSpec{GaussianKernel{}}, KernelSpec{PolynomialKernel{}}}) {
    const KernelModel m = kpca_fit(x, 3, spec);
    const MatrixXd expected = centered_gram(kernel_matrix(m.kernel, x, x)) * m.alphas;
    CHECK((transform(m, x) - expected).cwiseAbs().maxCoeff() <= 1e-8);
    // With alphas scaled by 1/sqrt(lambda), axis k has squared norm lambda_k.
    for (Index j = 0; j < 3; ++j) {
      CHECK(expected.col(j).squaredNorm() == doctest::Approx(m.eigenvalues[j]).epsilon(1e-8));
    }
  }
}

TEST_CASE("kernel PCA defaults and errors") {
  Rng rng(12);
  const MatrixXd x = random_matrix(rng, 10, 2);
  const KernelModel g = kpca_fit(x, 2, GaussianKernel{});
  CHECK(std::get<GaussianKernel>(g.kernel).sigma.value() == doctest::Approx(median_pairwise_distance(x)));
  CHECK_THROWS_AS(kpca_fit(MatrixXd::Ones(6, 2), 1, GaussianKernel{}), InvalidArgument);
  CHECK_THROWS_AS(kpca_fit(MatrixXd::Ones(6, 2), 1, PolynomialKernel{1, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(kpca_fit(x, 10, PolynomialKernel{}), InvalidArgument);
  CHECK_THROWS_AS(kpca_fit(x, 1, GaussianKernel{-1.0}), InvalidArgument);
  CHECK_THROWS_AS(kpca_fit(x, 1, PolynomialKernel{0, 1.0}), InvalidArgument);
}

TEST_CASE("median_pairwise_distance by hand") {
  MatrixXd x(3, 1);
  x << 0, 1, 3;
  CHECK(median_pairwise_distance(x) == 2);
}

TEST_CASE("method tags round-trip") {
  for (Method m : {Method::Pca, Method::Hpca, Method::DcHpcaSmad, Method::DcHpcaSn, Method::KpcaGauss,
                   Method::KpcaPoly}) {
    CHECK(parse_method(method_tag(m)) == m);
    CHECK(is_kernel(m) == (m == Method::KpcaGauss || m == Method::KpcaPoly));
  }
  CHECK_THROWS_AS(parse_method("svd"), InvalidArgument);
  CHECK(parse_eigen_order("asc") == EigenOrder::Ascending);
  CHECK_THROWS_AS(parse_eigen_order("up"), InvalidArgument);
  MethodConfig c{Method::DcHpcaSn};
  c.c = 85;
  CHECK(describe_params(c) == "c=85;scale=sn;order=desc");
  CHECK(describe_params(MethodConfig{Method::KpcaGauss}) == "sigma=auto");
  CHECK(describe_params(MethodConfig{Method::KpcaPoly}) == "degree=2;coef=1");
}
