#include "robpca/eval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "robpca/random.hpp"

namespace robpca::eval {

void validate(const LabeledDataset& ds) {
  require_data(ds.features, ds.name.empty() ? "dataset" : ds.name.c_str());
  if (static_cast<Index>(ds.labels.size()) != ds.features.rows()) {
    throw DimensionError("dataset " + ds.name + ": " + std::to_string(ds.labels.size()) +
                         " labels for " + std::to_string(ds.features.rows()) + " rows");
  }
  if (ds.class_count < 2) {
    throw InvalidArgument("dataset " + ds.name + ": need at least 2 classes");
  }
  for (int label : ds.labels) {
    if (label < 0 || label >= ds.class_count) {
      throw InvalidArgument("dataset " + ds.name + ": label " + std::to_string(label) +
                            " outside [0, " + std::to_string(ds.class_count) + ")");
    }
  }
}

MatrixXd synth_line_dataset(const SynthOptions& options, std::uint64_t seed) {
  if (options.n_line < 2) throw InvalidArgument("synth_line_dataset: need at least 2 line points");
  if (options.n_outliers < 0) throw InvalidArgument("synth_line_dataset: negative outlier count");
  const Eigen::Vector2d along = Eigen::Vector2d(1.0, 1.0).normalized();
  const Eigen::Vector2d across(-along.y(), along.x());
  Rng rng(seed);
  MatrixXd x(options.n_line + options.n_outliers, 2);
  for (Index i = 0; i < options.n_line; ++i) {
    const double s = rng.uniform(-options.spread, options.spread);
    const double e = rng.normal(0.0, options.noise);
    x.row(i) = (s * along + e * across).transpose();
  }
  const double min_offset = options.outlier_factor * options.spread;
  for (Index i = 0; i < options.n_outliers; ++i) {
    const double s = rng.uniform(-options.spread, options.spread);
    const double side = rng.below(2) == 0 ? 1.0 : -1.0;
    const double h = min_offset * (1.0 + 0.25 * rng.uniform());
    x.row(options.n_line + i) = (s * along + side * h * across).transpose();
  }
  return x;
}

int knn1_classify(const MatrixXd& train, const std::vector<int>& labels,
                  const Eigen::Ref<const VectorXd>& query) {
  if (train.rows() == 0) throw InvalidArgument("knn1_classify: empty training set");
  if (static_cast<Index>(labels.size()) != train.rows()) {
    throw DimensionError("knn1_classify: label count does not match training rows");
  }
  if (query.size() != train.cols()) {
    throw DimensionError("knn1_classify: query has " + std::to_string(query.size()) +
                         " features, training data has " + std::to_string(train.cols()));
  }
  Index best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < train.rows(); ++i) {
    const double dist = (train.row(i).transpose() - query).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return labels[static_cast<std::size_t>(best)];
}

std::vector<Index> FoldPlan::test_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(static_cast<Index>(i));
  return out;
}

std::vector<Index> FoldPlan::train_indices(int fold) const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(static_cast<Index>(i));
  return out;
}

namespace {

FoldPlan assign_folds(std::vector<std::vector<std::size_t>> groups, std::size_t n, int k,
                      std::uint64_t seed, bool stratified) {
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw InvalidArgument("make_folds: k = " + std::to_string(k) + " outside [2, " +
                          std::to_string(n) + "]");
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.assignment.assign(n, -1);
  Rng rng(seed);
  int next = 0;
  for (auto& group : groups) {
    rng.shuffle(group);
    for (std::size_t i : group) {
      plan.assignment[i] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

/// Sample indices grouped by class id (ascending); one group when unstratified.
std::vector<std::vector<std::size_t>> fold_groups(const std::vector<int>& labels,
                                                  bool stratified) {
  std::vector<std::vector<std::size_t>> groups;
  if (!stratified) {
    groups.emplace_back(labels.size());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
    return groups;
  }
  std::vector<int> classes(labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  groups.resize(classes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto g = std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin();
    groups[static_cast<std::size_t>(g)].push_back(i);
  }
  return groups;
}

}  // namespace

FoldPlan make_folds(const std::vector<int>& labels, int k, std::uint64_t seed, bool stratified) {
  return assign_folds(fold_groups(labels, stratified), labels.size(), k, seed, stratified);
}

FoldPlan make_folds(const LabeledDataset& ds, int k, std::uint64_t seed, bool stratified) {
  auto groups = fold_groups(ds.labels, stratified);
  const MatrixXd& x = ds.features;
  for (auto& group : groups) {
    std::stable_sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
      const auto ra = x.row(static_cast<Index>(a));
      const auto rb = x.row(static_cast<Index>(b));
      if (ds.labels[a] != ds.labels[b]) return ds.labels[a] < ds.labels[b];
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
  }
  return assign_folds(std::move(groups), ds.labels.size(), k, seed, stratified);
}

double rounded_mean_accuracy(const std::vector<FoldResult>& folds) {
  if (folds.empty()) throw InvalidArgument("rounded_mean_accuracy: no folds");
  __int128 lcm = 1;
  for (const auto& f : folds) {
    if (f.total <= 0) throw InvalidArgument("rounded_mean_accuracy: empty fold");
    lcm = std::lcm(static_cast<long long>(lcm), static_cast<long long>(f.total));
  }
  // 10000 * mean(correct_i / total_i) = num / den, rounded half-up.
  __int128 num = 0;
  for (const auto& f : folds) num += static_cast<__int128>(f.correct) * (lcm / f.total);
  num *= 10000;
  const __int128 den = lcm * static_cast<__int128>(folds.size());
  const __int128 hundredths = (2 * num + den) / (2 * den);
  return static_cast<double>(hundredths) / 100.0;
}

MatrixXd select_rows(const MatrixXd& x, const std::vector<Index>& rows) {
  MatrixXd out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

Reducer fit_fold(const LabeledDataset& ds, const MethodConfig& method, Index d,
                 const FoldPlan& plan, int fold) {
  return fit(method, select_rows(ds.features, plan.train_indices(fold)), d);
}

ExperimentReport cross_validate(const LabeledDataset& ds, const MethodConfig& method, Index d,
                                const FoldPlan& plan) {
  validate(ds);
  if (static_cast<Index>(plan.assignment.size()) != ds.size()) {
    throw DimensionError("cross_validate: fold plan does not match dataset " + ds.name);
  }
  ExperimentReport report;
  report.dataset = ds.name;
  report.method = method;
  report.d = d;
  report.k = plan.k;
  report.seed = plan.seed;
  report.stratified = plan.stratified;

  for (int fold = 0; fold < plan.k; ++fold) {
    const auto train_idx = plan.train_indices(fold);
    const auto test_idx = plan.test_indices(fold);
    std::vector<int> train_labels;
    train_labels.reserve(train_idx.size());
    for (Index i : train_idx) train_labels.push_back(ds.labels[static_cast<std::size_t>(i)]);

    FoldResult result;
    try {
      const MatrixXd train = select_rows(ds.features, train_idx);
      const Reducer model = fit(method, train, d);
      const MatrixXd train_z = transform(model, train);
      const MatrixXd test_z = transform(model, select_rows(ds.features, test_idx));
      for (std::size_t i = 0; i < test_idx.size(); ++i) {
        const int predicted =
            knn1_classify(train_z, train_labels, test_z.row(static_cast<Index>(i)).transpose());
        if (predicted == ds.labels[static_cast<std::size_t>(test_idx[i])]) ++result.correct;
      }
    } catch (const Error& e) {
      throw Error(ds.name + " " + std::string(method_tag(method.method)) + " d=" +
                  std::to_string(d) + " fold " + std::to_string(fold) + ": " + e.what());
    }
    result.total = static_cast<int>(test_idx.size());
    report.folds.push_back(result);
  }
  report.mean_accuracy = rounded_mean_accuracy(report.folds);
  return report;
}

namespace {

bool uses_percentile(Method m) {
  return m == Method::Hpca || m == Method::DcHpcaSmad || m == Method::DcHpcaSn;
}

}  // namespace

std::vector<Table2Cell> run_table2(const std::vector<DatasetSlot>& datasets,
                                   const std::vector<MethodConfig>& methods,
                                   const Table2Options& options) {
  std::vector<Table2Cell> cells;
  for (const auto& slot : datasets) {
    std::optional<FoldPlan> plan;
    std::string plan_error = slot.load_error;
    if (slot.dataset) {
      try {
        plan = make_folds(*slot.dataset, options.k, options.seed, options.stratified);
      } catch (const Error& e) {
        plan_error = e.what();
      }
    }
    for (Index d : options.dims) {
      for (const auto& method : methods) {
        Table2Cell cell;
        cell.dataset = slot.name;
        cell.method = method;
        cell.d = d;
        if (!plan) {
          cell.error = plan_error.empty() ? "dataset unavailable" : plan_error;
          cells.push_back(std::move(cell));
          continue;
        }
        try {
          if (uses_percentile(method.method) && !options.c_sweep.empty()) {
            for (int c : options.c_sweep) {
              MethodConfig swept = method;
              swept.c = c;
              auto report = cross_validate(*slot.dataset, swept, d, *plan);
              if (!cell.report || report.mean_accuracy > cell.report->mean_accuracy) {
                cell.report = std::move(report);
              }
            }
            cell.method = cell.report->method;
          } else {
            cell.report = cross_validate(*slot.dataset, method, d, *plan);
          }
        } catch (const Error& e) {
          cell.report.reset();
          cell.error = e.what();
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<DirectionRow> eigendirection_report(const MatrixXd& x,
                                                const std::vector<MethodConfig>& methods,
                                                const Eigen::Vector2d& reference) {
  if (x.cols() != 2) {
    throw DimensionError("eigendirection_report: expected 2-D data, got " +
                         std::to_string(x.cols()) + " columns");
  }
  std::vector<DirectionRow> rows;
  for (const auto& method : methods) {
    if (is_kernel(method.method)) {
      throw InvalidArgument("eigendirection_report: kernel methods have no direction in data space");
    }
    const auto model = std::get<ReductionModel>(fit(method, x, 1));
    MatrixXd dir = model.data_space_direction(0);
    detail::normalize_signs(dir);
    DirectionRow row;
    row.method = std::string(method_tag(method.method));
    row.direction = dir.col(0);
    row.angle_deg = angle_between(row.direction, reference);
    rows.push_back(row);
  }
  return rows;
}

std::vector<MethodConfig> linear_methods(int c, EigenOrder order) {
  std::vector<MethodConfig> out;
  for (Method m : {Method::Pca, Method::Hpca, Method::DcHpcaSmad, Method::DcHpcaSn}) {
    MethodConfig cfg;
    cfg.method = m;
    cfg.c = c;
    cfg.eigen_order = order;
    out.push_back(cfg);
  }
  return out;
}

std::vector<MethodConfig> table2_methods() {
  std::vector<MethodConfig> out;
  for (Method m : {Method::Pca, Method::KpcaGauss, Method::KpcaPoly, Method::DcHpcaSmad,
                   Method::DcHpcaSn}) {
    MethodConfig cfg;
    cfg.method = m;
    out.push_back(cfg);
  }
  return out;
}

}  // namespace robpca::eval
