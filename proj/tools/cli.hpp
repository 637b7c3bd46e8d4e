#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latshift/serialize.hpp"

namespace latshift::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationError = 1,
  kGuardViolation = 2,
  kCheckMismatch = 3,
};

/// Every knob a command can read. Artifacts embed this verbatim so that a
/// run can be replayed with --config.
struct ExperimentConfig {
  std::size_t s = 3;
  unsigned m = 4;
  unsigned r = 4;
  std::optional<std::uint64_t> ell;
  std::vector<std::uint64_t> z;
  std::string scheme = "scalar";  // grid | scalar | ideal
  std::uint64_t q = 10;
  std::string bits = "seed:1";
  std::int64_t H = 16;
  std::string format = "json";  // json | csv
  std::string candidates = "auto";  // auto | full | sampled
  std::uint64_t n = 64;  // bit count for the bits command
};

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

/// One reference value the tables command compares against.
struct ReferenceValue {
  int table = 0;
  std::string quantity;  // bias_grid | bias_scalar | sd_grid | sd_scalar
  double value = 0.0;
  double tolerance = 1e-3;  // relative
};

struct ManifestCell {
  std::size_t s;
  unsigned m;
  unsigned r;
  std::uint64_t ell;
  std::vector<ReferenceValue> references;
};

/// The six built-in (ell, (s,m,r)) cells of the bias and SD tables.
const std::vector<ManifestCell>& table_manifest();

/// Runs one command line (args excludes the program name). Artifacts go to
/// `out` (or --out); diagnostics to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latshift::cli
