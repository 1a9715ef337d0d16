#ifndef ROBPCA_IO_HPP
#define ROBPCA_IO_HPP

// Dataset loading, model persistence and report/plot emission.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robpca/eval.hpp"
#include "robpca/reducers.hpp"

namespace robpca::io {

namespace fs = std::filesystem;

enum class Encoding { Ordinal, OneHot };

Encoding parse_encoding(std::string_view tag);
std::string_view encoding_tag(Encoding e);

struct LabelColumn {
  enum class Kind { Index, Last, None };
  Kind kind = Kind::Last;
  Index index = 0;

  static LabelColumn last() { return {}; }
  static LabelColumn none() { return {Kind::None, 0}; }
  static LabelColumn at(Index i) { return {Kind::Index, i}; }

  /// Accepts a 0-based column index, "last" or "none".
  static LabelColumn parse(std::string_view text);
};

struct DatasetManifest {
  std::string name;
  fs::path path;
  bool has_header = false;
  LabelColumn label_column;
  /// File column indices to encode as categories; unset means "auto" (any
  /// column holding a non-numeric cell).
  std::optional<std::vector<Index>> categorical_columns;
  char delimiter = ',';
  Encoding encoding = Encoding::Ordinal;
};

/// Reads a JSON manifest. A relative `path` is resolved against the
/// manifest's directory.
DatasetManifest load_manifest(const fs::path& manifest_path);

/// RFC 4180 records: quoted fields may hold delimiters, doubled quotes and
/// line breaks. Unquoted fields are trimmed. Blank lines are skipped. Each
/// record carries the 1-based line it starts on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view text, char delimiter = ',');

/// Finite real number or nothing.
std::optional<double> parse_number(std::string_view cell);

/// Labeled dataset under the manifest. Numeric columns are parsed as reals,
/// categorical ones encoded by first appearance, labels mapped to class ids
/// by first appearance. "?" and empty cells are rejected with their position.
eval::LabeledDataset load_csv(const DatasetManifest& manifest);

/// Every column as a feature (the manifest's label column is dropped when
/// set). Class labels, if any, are ignored.
MatrixXd load_features(const DatasetManifest& manifest);

std::string read_file(const fs::path& path);

/// Writes to a sibling temporary and renames it over `path`, so a failure
/// never leaves a partial file behind.
void atomic_write(const fs::path& path, std::string_view content);

/// Rows of %.17g values, optionally preceded by a header row.
std::string format_csv(const MatrixXd& x, const std::vector<std::string>& header = {});

/// Features followed by the label text as the last column.
std::string format_labeled_csv(const eval::LabeledDataset& ds,
                               const std::vector<std::string>& header = {});

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormatName = "robpca-model";

std::string model_to_json(const Reducer& model);

/// Parses and checks a model document. Linear bases must be orthonormal to
/// within 1e-6.
Reducer model_from_json(std::string_view text);

void save_model(const fs::path& path, const Reducer& model);
Reducer load_model(const fs::path& path);

/// Header `method x y angle_deg`, one row per direction, 6 decimals.
std::string format_plot_tsv(const std::vector<eval::DirectionRow>& rows);
void emit_plot_tsv(const std::vector<eval::DirectionRow>& rows, const fs::path& path);

/// Header `dataset method d params fold_accuracies mean_accuracy`. Fold
/// accuracies are comma-joined percentages; all percentages use 2 decimals.
std::string format_report_tsv(const std::vector<eval::ExperimentReport>& reports);

/// As above for a run_table2 grid. Failed cells get `-` for the folds and `NA`
/// for the mean.
std::string format_report_tsv(const std::vector<eval::Table2Cell>& cells);

void write_report_tsv(const std::vector<eval::ExperimentReport>& reports, const fs::path& path);

}  // namespace robpca::io

#endif  // ROBPCA_IO_HPP
