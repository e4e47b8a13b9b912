#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shiftcurv::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int { ok = 0, check_failed = 1, usage = 2, numerical = 3 };

/// Every setting of one run. Optional fields fall back to per-command defaults.
struct RunConfig {
  std::string command;
  std::string surface = "sphere:rho=1";
  int n = 2;
  std::optional<int> k, l;
  int grid = 128;
  std::optional<double> tol;
  unsigned long long seed = 1;
  std::string out;
  std::string format = "text";
  bool exact = false;

  std::optional<std::string> chi;
  std::vector<double> a, b;
  std::vector<std::string> a_fn, b_fn;
  std::optional<std::string> eta;
  std::vector<std::string> aij;
  std::optional<double> epsilon;
  std::optional<std::string> expr;
  std::optional<double> target;
  std::string name;

  std::vector<std::string> check = {"all"};
  std::vector<std::string> weights = {"const:1", "pow:1", "pow:2"};
  std::vector<std::string> field = {"harmonic:2", "pow:1@V-u"};
  double correction_factor = 1.0;
  std::vector<std::string> lambda;
  int cases = 120;

  int members = 20;
  double amplitude = 0.2;
  double offset_fraction = 0.0;
  double max_offset = 0.3;
  std::vector<int> modes = {2, 3};
  double rho = 1.0;
  int max_steps = 40;
  int continuation = 1;
  std::vector<double> targets;
  std::optional<std::string> expr_to;
  int steps = 5;
};

/// Keys accepted in a config file; identical to the long flag names.
const std::vector<std::string>& config_keys();

/// Parses argv (argv[0] is the program name). A --config JSON file is applied
/// first and explicit flags override it. Throws ArgumentError on unknown keys
/// or malformed values; CLI::ParseError escapes for --help and flag syntax.
RunConfig parse_config(int argc, const char* const* argv);

/// Runs one command and returns its exit code. Reports go to `out` (or to
/// files under --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shiftcurv::cli
