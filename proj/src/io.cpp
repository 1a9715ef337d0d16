#include "robpca/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

namespace robpca::io {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string position(const fs::path& path, std::size_t line, Index column) {
  return path.string() + ": line " + std::to_string(line) + ", column " +
         std::to_string(column + 1);
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

/// Encoded table of the feature columns of a CSV file.
struct ParsedTable {
  MatrixXd features;
  std::vector<std::string> labels;  ///< raw label text per row, empty if no label column
};

Index resolve_label(const DatasetManifest& m, Index columns) {
  switch (m.label_column.kind) {
    case LabelColumn::Kind::None:
      return -1;
    case LabelColumn::Kind::Last:
      return columns - 1;
    case LabelColumn::Kind::Index:
      if (m.label_column.index < 0 || m.label_column.index >= columns) {
        throw InvalidArgument(m.path.string() + ": label column " +
                              std::to_string(m.label_column.index) + " outside a file with " +
                              std::to_string(columns) + " columns");
      }
      return m.label_column.index;
  }
  return -1;
}

ParsedTable parse_table(const DatasetManifest& m, bool want_labels) {
  const std::string text = read_file(m.path);
  std::vector<CsvRecord> records = parse_csv(text, m.delimiter);
  if (m.has_header && !records.empty()) records.erase(records.begin());
  if (records.empty()) throw FormatError(m.path.string() + ": no data rows");

  const Index columns = static_cast<Index>(records.front().fields.size());
  for (const auto& r : records) {
    if (static_cast<Index>(r.fields.size()) != columns) {
      throw FormatError(m.path.string() + ": line " + std::to_string(r.line) + " has " +
                        std::to_string(r.fields.size()) + " fields, expected " +
                        std::to_string(columns));
    }
  }
  const Index label = want_labels || m.label_column.kind != LabelColumn::Kind::None
                          ? resolve_label(m, columns)
                          : -1;
  if (want_labels && label < 0) {
    throw InvalidArgument(m.path.string() + ": a labeled dataset needs a label column");
  }

  for (const auto& r : records) {
    for (Index j = 0; j < columns; ++j) {
      const std::string& cell = r.fields[static_cast<std::size_t>(j)];
      if (cell.empty() || cell == "?") {
        throw FormatError(position(m.path, r.line, j) + ": missing value" +
                          (cell.empty() ? std::string() : " '?'"));
      }
    }
  }

  std::vector<bool> categorical(static_cast<std::size_t>(columns), false);
  if (m.categorical_columns) {
    for (Index j : *m.categorical_columns) {
      if (j < 0 || j >= columns) {
        throw InvalidArgument(m.path.string() + ": categorical column " + std::to_string(j) +
                              " outside a file with " + std::to_string(columns) + " columns");
      }
      categorical[static_cast<std::size_t>(j)] = true;
    }
  } else {
    for (Index j = 0; j < columns; ++j) {
      if (j == label) continue;
      for (const auto& r : records) {
        if (!parse_number(r.fields[static_cast<std::size_t>(j)])) {
          categorical[static_cast<std::size_t>(j)] = true;
          break;
        }
      }
    }
  }

  // Codes per categorical column, by first appearance.
  std::vector<std::vector<std::string>> levels(static_cast<std::size_t>(columns));
  for (Index j = 0; j < columns; ++j) {
    if (j == label || !categorical[static_cast<std::size_t>(j)]) continue;
    auto& lv = levels[static_cast<std::size_t>(j)];
    for (const auto& r : records) {
      const std::string& cell = r.fields[static_cast<std::size_t>(j)];
      if (std::find(lv.begin(), lv.end(), cell) == lv.end()) lv.push_back(cell);
    }
  }

  Index width = 0;
  for (Index j = 0; j < columns; ++j) {
    if (j == label) continue;
    const bool onehot = categorical[static_cast<std::size_t>(j)] && m.encoding == Encoding::OneHot;
    width += onehot ? static_cast<Index>(levels[static_cast<std::size_t>(j)].size()) : 1;
  }
  if (width == 0) throw FormatError(m.path.string() + ": no feature columns");

  ParsedTable table;
  const Index n = static_cast<Index>(records.size());
  table.features = MatrixXd::Zero(n, width);
  for (Index i = 0; i < n; ++i) {
    const CsvRecord& r = records[static_cast<std::size_t>(i)];
    Index out = 0;
    for (Index j = 0; j < columns; ++j) {
      const std::string& cell = r.fields[static_cast<std::size_t>(j)];
      if (j == label) {
        table.labels.push_back(cell);
        continue;
      }
      if (categorical[static_cast<std::size_t>(j)]) {
        const auto& lv = levels[static_cast<std::size_t>(j)];
        const Index code = std::find(lv.begin(), lv.end(), cell) - lv.begin();
        if (m.encoding == Encoding::OneHot) {
          table.features(i, out + code) = 1.0;
          out += static_cast<Index>(lv.size());
        } else {
          table.features(i, out++) = static_cast<double>(code);
        }
        continue;
      }
      const auto value = parse_number(cell);
      if (!value) {
        throw FormatError(position(m.path, r.line, j) + ": cannot parse '" + cell +
                          "' as a number");
      }
      table.features(i, out++) = *value;
    }
  }
  return table;
}

void append_csv_field(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos &&
      trim(field).size() == field.size()) {
    out += field;
    return;
  }
  out += '"';
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

void append_header(std::string& out, const std::vector<std::string>& header) {
  if (header.empty()) return;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    append_csv_field(out, header[j]);
  }
  out += '\n';
}

json vector_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

/// Column-major: one array per column.
json columns_json(const MatrixXd& m) {
  json cols = json::array();
  for (Index k = 0; k < m.cols(); ++k) cols.push_back(vector_json(m.col(k)));
  return cols;
}

json rows_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

VectorXd vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("model: '") + what + "' is not an array");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw FormatError(std::string("model: '") + what + "' holds a non-number");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

/// Arrays of equal length stacked as columns (or rows when `as_rows`).
MatrixXd matrix_from(const json& j, const char* what, bool as_rows) {
  if (!j.is_array() || j.empty()) throw FormatError(std::string("model: '") + what + "' is empty");
  const VectorXd first = vector_from(j[0], what);
  const Index inner = first.size();
  const Index outer = static_cast<Index>(j.size());
  MatrixXd m = as_rows ? MatrixXd(outer, inner) : MatrixXd(inner, outer);
  for (Index k = 0; k < outer; ++k) {
    const VectorXd v = vector_from(j[static_cast<std::size_t>(k)], what);
    if (v.size() != inner) throw FormatError(std::string("model: '") + what + "' is ragged");
    if (as_rows) {
      m.row(k) = v.transpose();
    } else {
      m.col(k) = v;
    }
  }
  return m;
}

std::string_view scaling_tag(ScalingKind k) {
  switch (k) {
    case ScalingKind::Center: return "center";
    case ScalingKind::Auto: return "auto";
    case ScalingKind::RobustSmad: return "robust-smad";
    case ScalingKind::RobustSn: return "robust-sn";
  }
  return "unknown";
}

ScalingKind parse_scaling(const std::string& tag) {
  for (ScalingKind k : {ScalingKind::Center, ScalingKind::Auto, ScalingKind::RobustSmad,
                        ScalingKind::RobustSn}) {
    if (scaling_tag(k) == tag) return k;
  }
  throw FormatError("model: unknown scaling kind '" + tag + "'");
}

LinearMethod parse_linear_method(const std::string& tag) {
  for (LinearMethod m : {LinearMethod::Pca, LinearMethod::Hpca, LinearMethod::DcHpcaSmad,
                         LinearMethod::DcHpcaSn}) {
    if (method_tag(m) == tag) return m;
  }
  throw FormatError("model: unknown linear method '" + tag + "'");
}

json linear_json(const ReductionModel& m) {
  json j;
  j["type"] = "linear";
  j["method"] = method_tag(m.method);
  j["input_dim"] = m.input_dim();
  j["output_dim"] = m.output_dim();
  j["eigen_order"] = eigen_order_tag(m.eigen_order);
  j["basis"] = columns_json(m.basis);
  j["eigenvalues"] = vector_json(m.eigenvalues);
  j["scaling"] = {{"kind", scaling_tag(m.scaling.kind)},
                  {"location", vector_json(m.scaling.location)},
                  {"scale", vector_json(m.scaling.scale)},
                  {"degenerate_features", m.scaling.degenerate_features}};
  if (m.huber) {
    j["huber"] = {{"percentile", m.huber->percentile}, {"threshold", m.huber->threshold}};
  } else {
    j["huber"] = nullptr;
  }
  return j;
}

json kernel_json(const KernelModel& m) {
  json j;
  j["type"] = "kernel";
  j["input_dim"] = m.input_dim();
  j["output_dim"] = m.output_dim();
  if (const auto* g = std::get_if<GaussianKernel>(&m.kernel)) {
    j["kernel"] = {{"name", "gaussian"}, {"sigma", g->sigma.value_or(0.0)}};
  } else {
    const auto& p = std::get<PolynomialKernel>(m.kernel);
    j["kernel"] = {{"name", "polynomial"}, {"degree", p.degree}, {"coef", p.coef}};
  }
  j["training"] = rows_json(m.training);
  j["alphas"] = columns_json(m.alphas);
  j["eigenvalues"] = vector_json(m.eigenvalues);
  j["train_means"] = vector_json(m.train_means);
  j["grand_mean"] = m.grand_mean;
  return j;
}

ReductionModel linear_from(const json& j) {
  ReductionModel m;
  m.method = parse_linear_method(j.at("method").get<std::string>());
  m.eigen_order = parse_eigen_order(j.at("eigen_order").get<std::string>());
  m.basis = matrix_from(j.at("basis"), "basis", false);
  m.eigenvalues = vector_from(j.at("eigenvalues"), "eigenvalues");
  const json& s = j.at("scaling");
  m.scaling.kind = parse_scaling(s.at("kind").get<std::string>());
  m.scaling.location = vector_from(s.at("location"), "location");
  m.scaling.scale = vector_from(s.at("scale"), "scale");
  m.scaling.degenerate_features = s.at("degenerate_features").get<std::vector<Index>>();
  if (!j.at("huber").is_null()) {
    const json& h = j.at("huber");
    m.huber = HuberParams<double>{h.at("percentile").get<int>(), h.at("threshold").get<double>()};
  }
  if (j.at("input_dim").get<Index>() != m.input_dim() ||
      j.at("output_dim").get<Index>() != m.output_dim()) {
    throw FormatError("model: declared dimensions do not match the basis");
  }
  validate(m, 1e-6);
  return m;
}

KernelModel kernel_from(const json& j) {
  KernelModel m;
  const json& k = j.at("kernel");
  const std::string name = k.at("name").get<std::string>();
  if (name == "gaussian") {
    const double sigma = k.at("sigma").get<double>();
    if (!(sigma > 0.0)) throw FormatError("model: Gaussian sigma must be positive");
    m.kernel = GaussianKernel{sigma};
  } else if (name == "polynomial") {
    m.kernel = PolynomialKernel{k.at("degree").get<int>(), k.at("coef").get<double>()};
  } else {
    throw FormatError("model: unknown kernel '" + name + "'");
  }
  m.training = matrix_from(j.at("training"), "training", true);
  m.alphas = matrix_from(j.at("alphas"), "alphas", false);
  m.eigenvalues = vector_from(j.at("eigenvalues"), "eigenvalues");
  m.train_means = vector_from(j.at("train_means"), "train_means");
  m.grand_mean = j.at("grand_mean").get<double>();
  const Index n = m.training.rows();
  if (m.alphas.rows() != n || m.train_means.size() != n ||
      m.eigenvalues.size() != m.alphas.cols()) {
    throw FormatError("model: kernel model arrays have inconsistent sizes");
  }
  if (j.at("input_dim").get<Index>() != m.input_dim() ||
      j.at("output_dim").get<Index>() != m.output_dim()) {
    throw FormatError("model: declared dimensions do not match the stored arrays");
  }
  if (!m.eigenvalues.allFinite() || (m.eigenvalues.array() <= 0.0).any()) {
    throw FormatError("model: kernel eigenvalues must be positive");
  }
  return m;
}

std::string fold_list(const std::vector<eval::FoldResult>& folds) {
  std::string out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f) out += ',';
    out += format_double("%.2f", folds[f].accuracy());
  }
  return out;
}

constexpr std::string_view kReportHeader =
    "dataset\tmethod\td\tparams\tfold_accuracies\tmean_accuracy\n";

void append_report_row(std::string& out, const eval::ExperimentReport& r) {
  out += r.dataset;
  out += '\t';
  out += method_tag(r.method.method);
  out += '\t';
  out += std::to_string(r.d);
  out += '\t';
  out += describe_params(r.method);
  out += '\t';
  out += fold_list(r.folds);
  out += '\t';
  out += format_double("%.2f", r.mean_accuracy);
  out += '\n';
}

}  // namespace

Encoding parse_encoding(std::string_view tag) {
  if (tag == "ordinal") return Encoding::Ordinal;
  if (tag == "onehot") return Encoding::OneHot;
  throw InvalidArgument("unknown encoding '" + std::string(tag) + "' (expected ordinal|onehot)");
}

std::string_view encoding_tag(Encoding e) {
  return e == Encoding::Ordinal ? "ordinal" : "onehot";
}

LabelColumn LabelColumn::parse(std::string_view text) {
  if (text == "last") return last();
  if (text == "none") return none();
  Index value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw InvalidArgument("label column must be a 0-based index, 'last' or 'none', got '" +
                          std::string(text) + "'");
  }
  return at(value);
}

DatasetManifest load_manifest(const fs::path& manifest_path) {
  json j;
  try {
    j = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  DatasetManifest m;
  try {
    m.name = j.value("name", manifest_path.stem().string());
    fs::path p = j.at("path").get<std::string>();
    m.path = p.is_relative() ? manifest_path.parent_path() / p : p;
    m.has_header = j.value("has_header", false);
    if (j.contains("label_column")) {
      const json& lc = j.at("label_column");
      m.label_column = lc.is_number_integer() ? LabelColumn::at(lc.get<Index>())
                                              : LabelColumn::parse(lc.get<std::string>());
    }
    if (j.contains("categorical_columns")) {
      const json& cc = j.at("categorical_columns");
      if (cc.is_string()) {
        if (cc.get<std::string>() != "auto") {
          throw FormatError("categorical_columns must be \"auto\" or a list of indices");
        }
      } else {
        m.categorical_columns = cc.get<std::vector<Index>>();
      }
    }
    const std::string delim = j.value("delimiter", std::string(","));
    if (delim.size() != 1) throw FormatError("delimiter must be a single character");
    m.delimiter = delim[0];
    if (j.contains("encoding")) m.encoding = parse_encoding(j.at("encoding").get<std::string>());
  } catch (const json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  return m;
}

std::vector<CsvRecord> parse_csv(std::string_view text, char delimiter) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    CsvRecord rec;
    rec.line = line;
    bool end_of_record = false;
    while (!end_of_record) {
      std::string field;
      // Leading blanks before an opening quote are tolerated.
      std::size_t j = i;
      while (j < n && (text[j] == ' ' || text[j] == '\t') && text[j] != delimiter) ++j;
      if (j < n && text[j] == '"') {
        i = j + 1;
        const std::size_t start_line = line;
        for (;;) {
          if (i >= n) {
            throw FormatError("unterminated quoted field starting on line " +
                              std::to_string(start_line));
          }
          const char ch = text[i++];
          if (ch == '"') {
            if (i < n && text[i] == '"') {
              field += '"';
              ++i;
            } else {
              break;
            }
          } else {
            if (ch == '\n') ++line;
            field += ch;
          }
        }
        while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r') &&
               text[i] != delimiter) {
          ++i;
        }
        if (i < n && text[i] != delimiter && text[i] != '\n') {
          throw FormatError("line " + std::to_string(line) +
                            ": unexpected character after closing quote");
        }
      } else {
        const std::size_t start = i;
        while (i < n && text[i] != delimiter && text[i] != '\n') ++i;
        field = std::string(trim(text.substr(start, i - start)));
      }
      rec.fields.push_back(std::move(field));
      if (i >= n) {
        end_of_record = true;
      } else if (text[i] == delimiter) {
        ++i;
      } else {
        ++i;  // newline
        ++line;
        end_of_record = true;
      }
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

eval::LabeledDataset load_csv(const DatasetManifest& manifest) {
  ParsedTable table = parse_table(manifest, true);
  eval::LabeledDataset ds;
  ds.name = manifest.name.empty() ? manifest.path.stem().string() : manifest.name;
  ds.features = std::move(table.features);
  std::map<std::string, int> ids;
  for (const std::string& text : table.labels) {
    auto [it, inserted] = ids.try_emplace(text, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(text);
    ds.labels.push_back(it->second);
  }
  ds.class_count = static_cast<int>(ds.class_names.size());
  eval::validate(ds);
  return ds;
}

MatrixXd load_features(const DatasetManifest& manifest) {
  return parse_table(manifest, false).features;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("error reading " + path.string());
  std::string text = ss.str();
  if (trim(text).empty()) throw FormatError(path.string() + ": file is empty");
  return text;
}

void atomic_write(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error("error writing " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error("cannot replace " + path.string() + ": " + ec.message());
  }
}

std::string format_csv(const MatrixXd& x, const std::vector<std::string>& header) {
  std::string out;
  append_header(out, header);
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out += ',';
      out += format_double("%.17g", x(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_labeled_csv(const eval::LabeledDataset& ds,
                               const std::vector<std::string>& header) {
  std::string out;
  append_header(out, header);
  for (Index i = 0; i < ds.size(); ++i) {
    for (Index j = 0; j < ds.features.cols(); ++j) {
      out += format_double("%.17g", ds.features(i, j));
      out += ',';
    }
    append_csv_field(out, ds.class_names.at(static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)])));
    out += '\n';
  }
  return out;
}

std::string model_to_json(const Reducer& model) {
  json j = std::visit(
      [](const auto& m) -> json {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ReductionModel>) {
          return linear_json(m);
        } else {
          return kernel_json(m);
        }
      },
      model);
  j["format"] = kModelFormatName;
  j["version"] = kModelFormatVersion;
  return j.dump(1) + "\n";
}

Reducer model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model: truncated or malformed file (") + e.what() + ")");
  }
  try {
    if (!j.is_object() || j.value("format", std::string()) != kModelFormatName) {
      throw FormatError("model: not a " + std::string(kModelFormatName) + " document");
    }
    const auto& version = j.at("version");
    if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
      throw FormatError("model: unsupported format version " + version.dump() + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "linear") return linear_from(j);
    if (type == "kernel") return kernel_from(j);
    throw FormatError("model: unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void save_model(const fs::path& path, const Reducer& model) {
  atomic_write(path, model_to_json(model));
}

Reducer load_model(const fs::path& path) {
  try {
    return model_from_json(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string format_plot_tsv(const std::vector<eval::DirectionRow>& rows) {
  if (rows.empty()) throw InvalidArgument("plot TSV: no directions to emit");
  std::string out = "method\tx\ty\tangle_deg\n";
  for (const auto& r : rows) {
    out += r.method;
    out += '\t' + format_double("%.6f", r.direction.x());
    out += '\t' + format_double("%.6f", r.direction.y());
    out += '\t' + format_double("%.6f", r.angle_deg);
    out += '\n';
  }
  return out;
}

void emit_plot_tsv(const std::vector<eval::DirectionRow>& rows, const fs::path& path) {
  atomic_write(path, format_plot_tsv(rows));
}

std::string format_report_tsv(const std::vector<eval::ExperimentReport>& reports) {
  if (reports.empty()) throw InvalidArgument("report TSV: no reports to emit");
  std::string out(kReportHeader);
  for (const auto& r : reports) append_report_row(out, r);
  return out;
}

std::string format_report_tsv(const std::vector<eval::Table2Cell>& cells) {
  if (cells.empty()) throw InvalidArgument("report TSV: no cells to emit");
  std::string out(kReportHeader);
  for (const auto& cell : cells) {
    if (cell.report) {
      append_report_row(out, *cell.report);
      continue;
    }
    out += cell.dataset + '\t' + std::string(method_tag(cell.method.method)) + '\t' +
           std::to_string(cell.d) + '\t' + describe_params(cell.method) + "\t-\tNA\n";
  }
  return out;
}

void write_report_tsv(const std::vector<eval::ExperimentReport>& reports, const fs::path& path) {
  atomic_write(path, format_report_tsv(reports));
}

}  // namespace robpca::io
