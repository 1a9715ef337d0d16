#ifndef ROBPCA_CLI_HPP
#define ROBPCA_CLI_HPP

// Command-line front end: argument parsing and command dispatch.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "robpca/eval.hpp"
#include "robpca/io.hpp"

namespace robpca::cli {

enum class Subcommand { Fit, Transform, Eval, Synth, Table2, Eigendirs };

std::string_view subcommand_tag(Subcommand s);

struct CommandConfig {
  Subcommand subcommand = Subcommand::Fit;
  MethodConfig method;
  std::optional<Index> d;
  int k = 10;
  std::uint64_t seed = 42;
  bool stratified = true;

  // Data input: a manifest, or a CSV path plus column options.
  std::optional<std::string> in;
  std::vector<std::string> manifests;
  std::optional<std::string> label_col;
  std::optional<bool> header;
  char delimiter = ',';
  io::Encoding encoding = io::Encoding::Ordinal;

  std::optional<std::string> model;  ///< transform: fitted model file
  std::optional<std::string> out;

  eval::SynthOptions synth;
  std::vector<int> c_sweep{85, 90, 95};
  std::vector<Index> dims{2, 3};
};

/// Throws InvalidArgument naming the first missing or out-of-range field.
void validate(const CommandConfig& config);

/// Data source for fit/transform/eval/eigendirs. A manifest wins over `--in`;
/// command-line column options override the manifest's.
io::DatasetManifest input_manifest(const CommandConfig& config);

/// Runs one command. Returns 0 on success; on failure writes one diagnostic
/// line to `err` and returns nonzero. Output files are written atomically.
int dispatch(const CommandConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Usage errors return 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robpca::cli

#endif  // ROBPCA_CLI_HPP
