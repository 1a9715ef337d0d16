#ifndef ROBPCA_EVAL_HPP
#define ROBPCA_EVAL_HPP

// Experiment harness: synthetic outlier-line data, seeded k-fold plans,
// 1-NN cross-validation of the reducers and the eigendirection report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robpca/reducers.hpp"

namespace robpca::eval {

struct LabeledDataset {
  std::string name;
  MatrixXd features;
  std::vector<int> labels;  ///< class ids in [0, class_count)
  int class_count = 0;
  std::vector<std::string> class_names;  ///< original label text by class id

  Index size() const { return features.rows(); }
};

/// Throws unless labels match the rows, lie in range, and class_count >= 2.
void validate(const LabeledDataset& ds);

struct SynthOptions {
  Index n_line = 30;
  Index n_outliers = 3;
  double spread = 3.0;          ///< inliers at s * dir with s ~ U[-spread, spread]
  double noise = 0.05;          ///< std of the perpendicular inlier noise
  double outlier_factor = 5.0;  ///< outliers sit >= factor * spread off the line
};

/// Points along (1,1)/sqrt(2) followed by `n_outliers` off-line points. The
/// outliers are the last rows.
MatrixXd synth_line_dataset(const SynthOptions& options, std::uint64_t seed);

/// Label of the nearest training row (Euclidean); lowest row index on ties.
int knn1_classify(const MatrixXd& train, const std::vector<int>& labels,
                  const Eigen::Ref<const VectorXd>& query);

struct FoldPlan {
  int k = 10;
  std::uint64_t seed = 42;
  bool stratified = true;
  std::vector<int> assignment;  ///< fold index per sample

  std::vector<Index> test_indices(int fold) const;
  std::vector<Index> train_indices(int fold) const;
};

/// Seeded shuffle then round-robin assignment. Under stratification the
/// shuffle and the round robin run per class (ascending class id), the
/// round-robin position carrying over between classes so overall fold sizes
/// stay balanced.
FoldPlan make_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                    bool stratified = true);

/// As above, but each class is first put in a canonical order (rows sorted
/// lexicographically), so fold membership follows sample content rather than
/// file order.
FoldPlan make_folds(const LabeledDataset& ds, int k, std::uint64_t seed, bool stratified = true);

struct FoldResult {
  int correct = 0;
  int total = 0;
  double accuracy() const { return 100.0 * correct / total; }
};

struct ExperimentReport {
  std::string dataset;
  MethodConfig method;
  Index d = 0;
  int k = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0;  ///< percent, rounded half-up to 2 decimals
};

/// Mean of the per-fold accuracies in percent, rounded half-up to 2 decimals
/// with exact rational arithmetic on the fold counts.
double rounded_mean_accuracy(const std::vector<FoldResult>& folds);

MatrixXd select_rows(const MatrixXd& x, const std::vector<Index>& rows);

/// Reducer fitted on the training split of `fold` only.
Reducer fit_fold(const LabeledDataset& ds, const MethodConfig& method, Index d,
                 const FoldPlan& plan, int fold);

/// Fits on each training split, transforms both splits, 1-NN classifies the
/// held-out split. Fit errors are rethrown with the fold index attached.
ExperimentReport cross_validate(const LabeledDataset& ds, const MethodConfig& method, Index d,
                                const FoldPlan& plan);

struct Table2Options {
  std::vector<Index> dims{2, 3};
  int k = 10;
  std::uint64_t seed = 42;
  bool stratified = true;
  /// Percentiles tried for the Huber-weighted methods; the best mean accuracy
  /// is reported (first listed c on ties).
  std::vector<int> c_sweep{85, 90, 95};
};

struct Table2Cell {
  std::string dataset;
  MethodConfig method;
  Index d = 0;
  std::optional<ExperimentReport> report;
  std::string error;  ///< set when the cell failed

  bool ok() const { return report.has_value(); }
};

/// Input slot for run_table2: a dataset or the reason it could not be loaded.
struct DatasetSlot {
  std::string name;
  std::optional<LabeledDataset> dataset;
  std::string load_error;
};

/// Every dataset x d x method cell in table order (dataset, then d, then
/// method). Failed cells are recorded and the run continues.
std::vector<Table2Cell> run_table2(const std::vector<DatasetSlot>& datasets,
                                   const std::vector<MethodConfig>& methods,
                                   const Table2Options& options);

struct DirectionRow {
  std::string method;
  Eigen::Vector2d direction;
  double angle_deg = 0;
};

/// First principal direction of each method on 2-D data, mapped back to the
/// data coordinates, and its angle to `reference`.
std::vector<DirectionRow> eigendirection_report(
    const MatrixXd& x, const std::vector<MethodConfig>& methods,
    const Eigen::Vector2d& reference = Eigen::Vector2d(1.0, 1.0).normalized());

/// PCA, HPCA and both DC-HPCA variants at percentile c.
std::vector<MethodConfig> linear_methods(int c = 90,
                                         EigenOrder order = EigenOrder::Descending);

/// PCA, KPCA (Gaussian), KPCA (polynomial), DC-HPCA S_mad, DC-HPCA S_n.
std::vector<MethodConfig> table2_methods();

}  // namespace robpca::eval

#endif  // ROBPCA_EVAL_HPP
