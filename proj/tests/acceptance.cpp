// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robpca/eval.hpp"
#include "robpca/io.hpp"
#include "robpca/random.hpp"

using namespace robpca;
using namespace robpca::eval;

namespace {

const std::string kManifests = std::string(ROBPCA_DATA_DIR) + "/manifests/";

/// Collects failures and notes for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// ---- independent oracles ----

double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

double oracle_smad(const std::vector<double>& v) {
  const double m = oracle_median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - m));
  return 1.4826 * oracle_median(dev);
}

double oracle_sn(const std::vector<double>& v) {
  std::vector<double> inner;
  for (double xi : v) {
    std::vector<double> row;
    for (double xj : v) row.push_back(std::abs(xi - xj));
    inner.push_back(oracle_median(row));
  }
  return 1.1926 * oracle_median(inner);
}

std::vector<double> char_poly_roots(const MatrixXd& a) {
  std::vector<double> roots;
  if (a.rows() == 2) {
    const double tr = a.trace();
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    roots = {tr / 2 + disc, tr / 2 - disc};
  } else {
    const double c2 = a.trace();
    const double c1 = a(0, 0) * a(1, 1) + a(0, 0) * a(2, 2) + a(1, 1) * a(2, 2) - a(0, 1) * a(1, 0) -
                      a(0, 2) * a(2, 0) - a(1, 2) * a(2, 1);
    const double c0 = a.determinant();
    const double p = c1 - c2 * c2 / 3;
    const double q = -2 * c2 * c2 * c2 / 27 + c2 * c1 / 3 - c0;
    const double m = 2 * std::sqrt(std::max(0.0, -p / 3));
    const double arg = m == 0 ? 0 : std::clamp(3 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3;
    for (int k = 0; k < 3; ++k) roots.push_back(c2 / 3 + m * std::cos(theta - 2 * std::numbers::pi * k / 3));
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

MatrixXd random_symmetric(Rng& rng, Index n) {
  MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-10, 10);
  return 0.5 * (a + a.transpose());
}

std::optional<LabeledDataset> load(const std::string& file, Check& check) {
  try {
    return io::load_csv(io::load_manifest(kManifests + file));
  } catch (const std::exception& e) {
    check.expect(false, file + ": " + e.what());
    return std::nullopt;
  }
}

const std::vector<std::string> kAllDatasets{"wine.json", "ionosphere.json", "tic-tac-toe.json", "glass.json",
                                            "parkinsons.json"};

// ---- criteria ----

void criterion1(Check& check) {
  Rng rng(20240601);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.below(200));
    std::vector<double> v(n);
    for (double& x : v) x = rng.below(4) == 0 ? std::round(rng.uniform(-5, 5)) : rng.normal(0, 3);
    const VectorXd e = Eigen::Map<const VectorXd>(v.data(), static_cast<Index>(n));
    if (median(e) != oracle_median(v) || s_mad(e) != oracle_smad(v) || s_n(e) != oracle_sn(v)) ++mismatches;
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " of 1000 vectors differ from the oracles");
  const double sn = s_n(VectorXd{{1, 2, 3}});
  const double smad = s_mad(VectorXd{{1, 2, 3, 4, 5}});
  check.expect(sn == 1.1926 * 1.0, "s_n(1,2,3) = " + fmt(sn, 17));
  check.expect(smad == 1.4826 * 1.0, "s_mad(1..5) = " + fmt(smad, 17));
  check.note("1000 vectors exact; s_n(1,2,3)=" + fmt(sn) + ", s_mad(1..5)=" + fmt(smad));
}

void criterion2(Check& check) {
  Rng rng(77);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = trial % 2 == 0 ? 2 : 3;
    const MatrixXd a = random_symmetric(rng, n);
    const auto e = sym_eigen(SymmetricMatrix<double>(a));
    const auto roots = char_poly_roots(a);
    for (Index k = 0; k < n; ++k) worst = std::max(worst, std::abs(e.values[k] - roots[static_cast<std::size_t>(k)]));
  }
  check.expect(worst <= 1e-8, "max eigenvalue error vs characteristic polynomial " + fmt(worst));
  double worst_orth = 0, worst_recon = 0;
  for (Index n = 1; n <= 50; ++n) {
    const MatrixXd a = random_symmetric(rng, n);
    const auto e = sym_eigen(SymmetricMatrix<double>(a));
    worst_orth = std::max(worst_orth, orthonormality_error(e.vectors));
    const MatrixXd rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    worst_recon = std::max(worst_recon, (rebuilt - a).cwiseAbs().maxCoeff() / (1 + a.cwiseAbs().maxCoeff()));
  }
  check.expect(worst_orth <= 1e-8, "orthonormality error " + fmt(worst_orth));
  check.expect(worst_recon <= 1e-9, "relative reconstruction error " + fmt(worst_recon));
  check.note("eig err " + fmt(worst) + ", orth " + fmt(worst_orth) + ", recon " + fmt(worst_recon));
}

void criterion3(Check& check) {
  const MatrixXd x = synth_line_dataset({}, 42);
  const auto rows = eigendirection_report(x, linear_methods());
  const double pca = rows[0].angle_deg;
  std::string summary;
  for (const auto& r : rows) summary += r.method + "=" + fmt(r.angle_deg) + "deg ";
  check.note(summary);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    check.expect(rows[i].angle_deg < 2.0, rows[i].method + " angle " + fmt(rows[i].angle_deg) + " >= 2");
    check.expect(pca > rows[i].angle_deg, "PCA angle does not exceed " + rows[i].method);
  }
}

void criterion4(Check& check) {
  double worst = 0;
  for (const std::string& file : kAllDatasets) {
    const auto ds = load(file, check);
    if (!ds) continue;
    for (Index d : {2, 3}) {
      for (RobustScale scale : {RobustScale::Smad, RobustScale::Sn}) {
        const ReductionModel robust = dc_hpca_fit(ds->features, d, 100, scale);
        const MatrixXd z = apply_scaling(ds->features, robust.scaling);
        const ReductionModel pca = pca_fit(z, d, Centering::None);
        const double angle = max_principal_angle(robust.basis, pca.basis);
        worst = std::max(worst, angle);
        check.expect(angle < 1e-6, ds->name + " d=" + std::to_string(d) + " angle " + fmt(angle));
      }
    }
  }
  check.note("max principal angle " + fmt(worst));
}

void criterion5(Check& check) {
  struct Cell {
    const char* file;
    Method method;
    Index d;
    double target;
  };
  const std::vector<Cell> cells{{"wine.json", Method::Pca, 3, 73.03},
                                {"ionosphere.json", Method::Pca, 3, 85.47},
                                {"tic-tac-toe.json", Method::DcHpcaSn, 2, 98.75},
                                {"glass.json", Method::DcHpcaSn, 3, 98.60}};
  for (const Cell& cell : cells) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ds = load(cell.file, check);
    if (!ds) continue;
    Table2Options options;
    options.dims = {cell.d};
    const auto result = run_table2({{ds->name, *ds, ""}}, {MethodConfig{cell.method}}, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string label = ds->name + "/" + std::string(method_tag(cell.method)) + "/d=" + std::to_string(cell.d);
    if (!result[0].ok()) {
      check.expect(false, label + ": " + result[0].error);
      continue;
    }
    const auto& report = *result[0].report;
    const double got = report.mean_accuracy;
    check.note(label + " " + fmt(got) + " (target " + fmt(cell.target) + ", " + describe_params(report.method) + ")");
    check.expect(std::abs(got - cell.target) <= 4.0, label + " accuracy " + fmt(got) + " vs " + fmt(cell.target));
    check.expect(secs < 120, label + " took " + fmt(secs) + " s");
  }
  double worst = 0;
  for (const std::string& file : {"wine.json", "ionosphere.json", "tic-tac-toe.json", "glass.json"}) {
    const auto ds = load(file, check);
    if (!ds) continue;
    for (Index d : {2, 3}) {
      const MatrixXd yk = transform(kpca_fit(ds->features, d, PolynomialKernel{1, 0.0}), ds->features);
      const MatrixXd yp = transform(pca_fit(ds->features, d), ds->features);
      const double angle = max_principal_angle(yk, yp);
      worst = std::max(worst, angle);
      check.expect(angle < 1e-6, ds->name + " linear-kernel KPCA vs PCA angle " + fmt(angle));
    }
  }
  check.note("linear-kernel KPCA vs PCA max angle " + fmt(worst));
}

void criterion6(Check& check) {
  // Orthonormality of every fitted basis.
  double worst = 0;
  for (const std::string& file : {"wine.json", "ionosphere.json", "tic-tac-toe.json", "glass.json"}) {
    const auto ds = load(file, check);
    if (!ds) continue;
    for (EigenOrder order : {EigenOrder::Descending, EigenOrder::Ascending}) {
      for (int c : {85, 90, 95, 100}) {
        for (const ReductionModel& m :
             {pca_fit(ds->features, 3), hpca_fit(ds->features, 3, c, order),
              dc_hpca_fit(ds->features, 3, c, RobustScale::Smad, order),
              dc_hpca_fit(ds->features, 3, c, RobustScale::Sn, order)}) {
          worst = std::max(worst, orthonormality_error(m.basis));
        }
      }
    }
  }
  check.expect(worst <= 1e-8, "orthonormality error " + fmt(worst));

  // Affine equivariance of robust scaling.
  Rng rng(6);
  MatrixXd x(60, 5);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal(j, 1 + j);
  VectorXd a(5), b(5);
  for (Index j = 0; j < 5; ++j) {
    a[j] = rng.uniform(0.1, 30);
    b[j] = rng.uniform(-100, 100);
  }
  const MatrixXd y = ((x.array().rowwise() * a.transpose().array()).rowwise() + b.transpose().array()).matrix();
  double affine = 0;
  for (ScalingKind kind : {ScalingKind::RobustSmad, ScalingKind::RobustSn}) {
    affine = std::max(affine, (apply_scaling(x, fit_scaling(x, kind)) - apply_scaling(y, fit_scaling(y, kind)))
                                  .cwiseAbs()
                                  .maxCoeff());
  }
  check.expect(affine <= 1e-10, "affine equivariance error " + fmt(affine));

  // Huber weight monotonicity and continuity.
  bool weights_ok = true;
  for (double t : {0.5, 1.0, 4.0}) {
    double prev = 1;
    for (double r = 0; r < 100; r += 0.01) {
      const double w = huber_weight(r, t);
      weights_ok &= w > 0 && w <= 1 && w <= prev && (r > t || w == 1);
      prev = w;
    }
    weights_ok &= std::abs(huber_weight(t * (1 + 1e-12), t) - 1) < 1e-10;
  }
  check.expect(weights_ok, "huber_weight is not monotone/continuous");

  // huber_rho derivative at the boundary by finite differences.
  double rho_err = 0;
  const double h = 1e-6;
  for (double t : {0.25, 1.0, 3.0, 10.0}) {
    for (double s : {1.0, -1.0}) {
      const double y0 = s * t;
      const double left = (huber_rho(y0, t) - huber_rho(y0 - h, t)) / h;
      const double right = (huber_rho(y0 + h, t) - huber_rho(y0, t)) / h;
      rho_err = std::max({rho_err, std::abs(left - s * t), std::abs(right - s * t)});
    }
  }
  check.expect(rho_err <= 1e-4, "huber_rho one-sided derivative error " + fmt(rho_err));

  // Fold-partition completeness.
  bool folds_ok = true;
  for (const std::string& file : {"wine.json", "glass.json"}) {
    const auto ds = load(file, check);
    if (!ds) continue;
    for (bool stratified : {true, false}) {
      const FoldPlan plan = make_folds(*ds, 10, 42, stratified);
      std::vector<int> seen(ds->labels.size(), 0);
      for (int f = 0; f < 10; ++f) {
        for (Index i : plan.test_indices(f)) ++seen[static_cast<std::size_t>(i)];
        folds_ok &= plan.test_indices(f).size() + plan.train_indices(f).size() == ds->labels.size();
      }
      folds_ok &= std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
    }
  }
  check.expect(folds_ok, "fold plans do not partition the samples");

  // Full-run determinism: identical seeds give identical TSV bytes.
  auto run_once = [&]() {
    std::string text;
    const auto ds = load("wine.json", check);
    if (ds) {
      Table2Options options;
      options.dims = {2};
      options.k = 5;
      text += io::format_report_tsv(run_table2({{ds->name, *ds, ""}}, table2_methods(), options));
    }
    text += io::format_plot_tsv(eigendirection_report(synth_line_dataset({}, 42), linear_methods()));
    return text;
  };
  check.expect(run_once() == run_once(), "repeated runs produced different TSV bytes");
  check.note("orth " + fmt(worst) + ", affine " + fmt(affine) + ", rho fd " + fmt(rho_err));
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-6)")->check(CLI::Range(1, 6));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "estimators match sort/double-loop oracles", 5, criterion1},
      {2, "eigensolver matches characteristic polynomial", 10, criterion2},
      {3, "synthetic eigendirections (robust < 2 deg, PCA worse)", 1, criterion3},
      {4, "c = 100 degenerates to PCA on scaled data", 30, criterion4},
      {5, "1-NN accuracy within 4 points of reference cells", 480, criterion5},
      {6, "invariant suite", 30, criterion6},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.expect(secs < c.limit_s, "runtime " + fmt(secs) + " s exceeds " + fmt(c.limit_s) + " s");
    for (const auto& n : check.notes) std::cout << "    " << n << "\n";
    for (const auto& f : check.failures) std::cout << "    failure: " << f << "\n";
    const bool ok = check.failures.empty();
    if (!ok) ++failed;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.title << " (" << fmt(secs, 3)
              << " s)\n";
  }
  return failed == 0 ? 0 : 1;
}
