#include "robpca/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

namespace robpca::cli {

namespace {

/// Raw option values bound to CLI11 before they are checked and copied into
/// a CommandConfig.
struct RawOptions {
  std::string method = "pca";
  Index d = 0;
  int c = 90;
  std::string eigen_order = "desc";
  std::string centering = "mean";
  double kernel_sigma = 0;
  int poly_degree = 2;
  double poly_coef = 1.0;
  int k = 10;
  std::uint64_t seed = 42;
  bool unstratified = false;
  std::string label_col;
  bool header = false;
  std::string in;
  std::string out;
  std::string model;
  std::vector<std::string> manifests;
  std::string encoding = "ordinal";
  std::string delimiter = ",";
  Index n_line = 30;
  Index n_outliers = 3;
  double spread = 3.0;
  double noise = 0.05;
  double outlier_factor = 5.0;
  std::vector<int> c_sweep{85, 90, 95};
  std::vector<Index> dims{2, 3};
};

struct Bound {
  CLI::App* app = nullptr;
  Subcommand sub = Subcommand::Fit;
  CLI::Option* d = nullptr;
  CLI::Option* kernel_sigma = nullptr;
  CLI::Option* label_col = nullptr;
  CLI::Option* header = nullptr;
  CLI::Option* in = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* model = nullptr;
};

void add_method_options(CLI::App* app, RawOptions& raw, Bound& b) {
  app->add_option("--method", raw.method,
                  "pca|hpca|dchpca-smad|dchpca-sn|kpca-gauss|kpca-poly")
      ->check(CLI::IsMember({"pca", "hpca", "dchpca-smad", "dchpca-sn", "kpca-gauss", "kpca-poly"}));
  b.d = app->add_option("--d", raw.d, "target dimension");
  app->add_option("--c", raw.c, "Huber percentile in [0, 100]")->capture_default_str();
  app->add_option("--eigen-order", raw.eigen_order, "desc|asc")
      ->check(CLI::IsMember({"desc", "asc"}))
      ->capture_default_str();
  app->add_option("--centering", raw.centering, "PCA centering: mean|none")
      ->check(CLI::IsMember({"mean", "none"}))
      ->capture_default_str();
  b.kernel_sigma = app->add_option("--kernel-sigma", raw.kernel_sigma,
                                   "Gaussian bandwidth (default: median pairwise distance)");
  app->add_option("--poly-degree", raw.poly_degree)->capture_default_str();
  app->add_option("--poly-coef", raw.poly_coef)->capture_default_str();
}

void add_input_options(CLI::App* app, RawOptions& raw, Bound& b, bool manifests) {
  b.in = app->add_option("--in", raw.in, "input CSV");
  if (manifests) app->add_option("--manifest", raw.manifests, "dataset manifest (JSON)");
  b.label_col = app->add_option("--label-col", raw.label_col, "0-based index, last or none");
  b.header = app->add_flag("--header,!--no-header", raw.header, "first row is a header");
  app->add_option("--delimiter", raw.delimiter, "field delimiter")->capture_default_str();
  app->add_option("--encoding", raw.encoding, "categorical encoding: ordinal|onehot")
      ->check(CLI::IsMember({"ordinal", "onehot"}))
      ->capture_default_str();
}

void add_fold_options(CLI::App* app, RawOptions& raw) {
  app->add_option("--k", raw.k, "number of folds")->capture_default_str();
  app->add_option("--seed", raw.seed, "fold shuffling seed")->capture_default_str();
  app->add_flag("--unstratified", raw.unstratified, "plain k-fold instead of stratified");
}

CommandConfig to_config(const RawOptions& raw, const Bound& b) {
  CommandConfig c;
  c.subcommand = b.sub;
  c.method.method = parse_method(raw.method);
  c.method.c = raw.c;
  c.method.eigen_order = parse_eigen_order(raw.eigen_order);
  c.method.centering = raw.centering == "none" ? Centering::None : Centering::Mean;
  if (b.kernel_sigma && b.kernel_sigma->count()) c.method.kernel_sigma = raw.kernel_sigma;
  c.method.poly_degree = raw.poly_degree;
  c.method.poly_coef = raw.poly_coef;
  if (b.d && b.d->count()) c.d = raw.d;
  c.k = raw.k;
  c.seed = raw.seed;
  c.stratified = !raw.unstratified;
  if (b.in && b.in->count()) c.in = raw.in;
  c.manifests = raw.manifests;
  if (b.label_col && b.label_col->count()) c.label_col = raw.label_col;
  if (b.header && b.header->count()) c.header = raw.header;
  const std::string delim = raw.delimiter == "\\t" ? "\t" : raw.delimiter;
  if (delim.size() != 1) throw InvalidArgument("--delimiter must be a single character");
  c.delimiter = delim[0];
  c.encoding = io::parse_encoding(raw.encoding);
  if (b.model && b.model->count()) c.model = raw.model;
  if (b.out && b.out->count()) c.out = raw.out;
  c.synth = eval::SynthOptions{raw.n_line, raw.n_outliers, raw.spread, raw.noise,
                               raw.outlier_factor};
  c.c_sweep = raw.c_sweep;
  c.dims = raw.dims;
  return c;
}

eval::LabeledDataset load_labeled(const CommandConfig& config) {
  io::DatasetManifest m = input_manifest(config);
  if (!config.label_col && config.manifests.empty()) m.label_column = io::LabelColumn::last();
  return io::load_csv(m);
}

int run_fit(const CommandConfig& config, std::ostream& out) {
  const MatrixXd x = io::load_features(input_manifest(config));
  const Reducer model = fit(config.method, x, *config.d);
  io::save_model(*config.out, model);
  out << "fit " << method_tag(config.method.method) << " d=" << *config.d << " on " << x.rows()
      << "x" << x.cols() << " -> " << *config.out << "\n";
  return 0;
}

int run_transform(const CommandConfig& config, std::ostream& out) {
  const Reducer model = io::load_model(*config.model);
  const MatrixXd x = io::load_features(input_manifest(config));
  const MatrixXd y = transform(model, x);
  io::atomic_write(*config.out, io::format_csv(y));
  out << "transform " << x.rows() << "x" << x.cols() << " -> " << y.rows() << "x" << y.cols()
      << " -> " << *config.out << "\n";
  return 0;
}

int run_eval(const CommandConfig& config, std::ostream& out) {
  const eval::LabeledDataset ds = load_labeled(config);
  const eval::FoldPlan plan = eval::make_folds(ds, config.k, config.seed, config.stratified);
  const eval::ExperimentReport report = eval::cross_validate(ds, config.method, *config.d, plan);
  const std::string tsv = io::format_report_tsv(std::vector{report});
  io::atomic_write(*config.out, tsv);
  out << tsv;
  return 0;
}

int run_synth(const CommandConfig& config, std::ostream& out) {
  const MatrixXd x = eval::synth_line_dataset(config.synth, config.seed);
  io::atomic_write(*config.out, io::format_csv(x));
  out << "synth " << x.rows() << " points -> " << *config.out << "\n";
  return 0;
}

int run_table2(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<eval::DatasetSlot> slots;
  for (const std::string& path : config.manifests) {
    eval::DatasetSlot slot;
    try {
      const io::DatasetManifest m = io::load_manifest(path);
      slot.name = m.name;
      slot.dataset = io::load_csv(m);
    } catch (const std::exception& e) {
      if (slot.name.empty()) slot.name = path;
      slot.load_error = e.what();
    }
    slots.push_back(std::move(slot));
  }
  eval::Table2Options options;
  options.dims = config.dims;
  options.k = config.k;
  options.seed = config.seed;
  options.stratified = config.stratified;
  options.c_sweep = config.c_sweep;
  const auto cells = eval::run_table2(slots, eval::table2_methods(), options);
  const std::string tsv = io::format_report_tsv(cells);
  io::atomic_write(*config.out, tsv);
  out << tsv;
  int failed = 0;
  for (const auto& cell : cells) {
    if (cell.ok()) continue;
    ++failed;
    err << "robpca: table2: " << cell.dataset << " " << method_tag(cell.method.method)
        << " d=" << cell.d << ": " << cell.error << "\n";
  }
  return failed == 0 ? 0 : 3;
}

int run_eigendirs(const CommandConfig& config, std::ostream& out) {
  const MatrixXd x = io::load_features(input_manifest(config));
  const auto rows =
      eval::eigendirection_report(x, eval::linear_methods(config.method.c, config.method.eigen_order));
  const std::string tsv = io::format_plot_tsv(rows);
  io::atomic_write(*config.out, tsv);
  out << tsv;
  return 0;
}

}  // namespace

std::string_view subcommand_tag(Subcommand s) {
  switch (s) {
    case Subcommand::Fit: return "fit";
    case Subcommand::Transform: return "transform";
    case Subcommand::Eval: return "eval";
    case Subcommand::Synth: return "synth";
    case Subcommand::Table2: return "table2";
    case Subcommand::Eigendirs: return "eigendirs";
  }
  return "unknown";
}

void validate(const CommandConfig& config) {
  const std::string sub(subcommand_tag(config.subcommand));
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(sub + ": " + what);
  };
  require(config.method.c >= 0 && config.method.c <= 100, "--c must lie in [0, 100]");
  require(!config.d || *config.d >= 1, "--d must be at least 1");
  require(config.out.has_value(), "--out is required");
  const bool has_input = config.in.has_value() || !config.manifests.empty();
  switch (config.subcommand) {
    case Subcommand::Fit:
      require(has_input, "--in or --manifest is required");
      require(config.d.has_value(), "--d is required");
      break;
    case Subcommand::Transform:
      require(has_input, "--in or --manifest is required");
      require(config.model.has_value(), "--model is required");
      break;
    case Subcommand::Eval:
      require(has_input, "--in or --manifest is required");
      require(config.d.has_value(), "--d is required");
      require(config.k >= 2, "--k must be at least 2");
      break;
    case Subcommand::Synth:
      require(config.synth.n_line >= 2, "--n-line must be at least 2");
      require(config.synth.n_outliers >= 0, "--n-outliers must be nonnegative");
      break;
    case Subcommand::Table2:
      require(!config.manifests.empty(), "at least one --manifest is required");
      require(config.k >= 2, "--k must be at least 2");
      require(!config.dims.empty(), "--dims must not be empty");
      for (Index d : config.dims) require(d >= 1, "--dims entries must be at least 1");
      for (int c : config.c_sweep) require(c >= 0 && c <= 100, "--c-sweep entries must lie in [0, 100]");
      break;
    case Subcommand::Eigendirs:
      require(has_input, "--in or --manifest is required");
      break;
  }
  if (config.manifests.size() > 1 && config.subcommand != Subcommand::Table2) {
    throw InvalidArgument(sub + ": only one --manifest is accepted");
  }
}

io::DatasetManifest input_manifest(const CommandConfig& config) {
  io::DatasetManifest m;
  if (!config.manifests.empty()) {
    m = io::load_manifest(config.manifests.front());
  } else {
    if (!config.in) throw InvalidArgument("no input given");
    m.path = *config.in;
    m.name = m.path.stem().string();
    m.label_column = io::LabelColumn::none();
    m.delimiter = config.delimiter;
    m.encoding = config.encoding;
  }
  if (config.label_col) m.label_column = io::LabelColumn::parse(*config.label_col);
  if (config.header) m.has_header = *config.header;
  if (config.encoding != io::Encoding::Ordinal) m.encoding = config.encoding;
  return m;
}

int dispatch(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    switch (config.subcommand) {
      case Subcommand::Fit: return run_fit(config, out);
      case Subcommand::Transform: return run_transform(config, out);
      case Subcommand::Eval: return run_eval(config, out);
      case Subcommand::Synth: return run_synth(config, out);
      case Subcommand::Table2: return run_table2(config, out, err);
      case Subcommand::Eigendirs: return run_eigendirs(config, out);
    }
    throw InvalidArgument("unknown subcommand");
  } catch (const std::exception& e) {
    err << "robpca: " << subcommand_tag(config.subcommand) << ": " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust PCA reducers and evaluation harness", "robpca"};
  app.require_subcommand(1);
  RawOptions raw;
  std::vector<Bound> bound;

  auto make = [&](Subcommand s, const char* help) -> Bound& {
    Bound b;
    b.sub = s;
    b.app = app.add_subcommand(std::string(subcommand_tag(s)), help);
    bound.push_back(b);
    return bound.back();
  };
  bound.reserve(6);

  {
    Bound& b = make(Subcommand::Fit, "fit a reducer and save it as JSON");
    add_method_options(b.app, raw, b);
    add_input_options(b.app, raw, b, true);
    b.out = b.app->add_option("--out", raw.out, "model file");
  }
  {
    Bound& b = make(Subcommand::Transform, "reduce data with a saved model");
    b.model = b.app->add_option("--model", raw.model, "model file");
    add_input_options(b.app, raw, b, true);
    b.out = b.app->add_option("--out", raw.out, "reduced CSV");
  }
  {
    Bound& b = make(Subcommand::Eval, "k-fold 1-NN accuracy of one method");
    add_method_options(b.app, raw, b);
    add_input_options(b.app, raw, b, true);
    add_fold_options(b.app, raw);
    b.out = b.app->add_option("--out", raw.out, "report TSV");
  }
  {
    Bound& b = make(Subcommand::Synth, "synthetic line data with outliers");
    b.app->add_option("--seed", raw.seed)->capture_default_str();
    b.app->add_option("--n-line", raw.n_line)->capture_default_str();
    b.app->add_option("--n-outliers", raw.n_outliers)->capture_default_str();
    b.app->add_option("--spread", raw.spread)->capture_default_str();
    b.app->add_option("--noise", raw.noise)->capture_default_str();
    b.app->add_option("--outlier-factor", raw.outlier_factor)->capture_default_str();
    b.out = b.app->add_option("--out", raw.out, "output CSV");
  }
  {
    Bound& b = make(Subcommand::Table2, "accuracy grid over datasets, dimensions and methods");
    b.app->add_option("--manifest", raw.manifests, "dataset manifest (repeatable)");
    add_fold_options(b.app, raw);
    b.app->add_option("--dims", raw.dims, "target dimensions")->capture_default_str();
    b.app->add_option("--c-sweep", raw.c_sweep, "percentiles tried for Huber methods")
        ->capture_default_str();
    b.out = b.app->add_option("--out", raw.out, "report TSV");
  }
  {
    Bound& b = make(Subcommand::Eigendirs, "first principal direction per linear method");
    b.app->add_option("--c", raw.c)->capture_default_str();
    b.app->add_option("--eigen-order", raw.eigen_order)
        ->check(CLI::IsMember({"desc", "asc"}))
        ->capture_default_str();
    add_input_options(b.app, raw, b, true);
    b.out = b.app->add_option("--out", raw.out, "plot TSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  for (const Bound& b : bound) {
    if (!b.app->parsed()) continue;
    CommandConfig config;
    try {
      config = to_config(raw, b);
    } catch (const std::exception& e) {
      err << "robpca: " << subcommand_tag(b.sub) << ": " << e.what() << "\n";
      return 2;
    }
    return dispatch(config, out, err);
  }
  err << "robpca: no subcommand given\n";
  return 2;
}

}  // namespace robpca::cli
