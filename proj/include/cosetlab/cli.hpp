#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cosetlab {

enum ExitCode : int { kExitOk = 0, kExitAssertion = 1, kExitUsage = 2, kExitCapacity = 3 };

struct RunConfig {
  std::string command;  // verify | csi-sweep | tcs-sweep | qes-security | hn-check
  std::string group;    // recipe text, e.g. "kind=dihedral n=6"
  std::string family;   // family text, e.g. "kind=sdp"
  int k_min = 1;
  int k_max = 1;
  std::uint64_t seed = 1;
  std::string out;              // empty: standard output
  std::string format = "csv";   // csv | json
  std::optional<std::size_t> dense_cap;
  std::optional<double> tol;
  int workers = 1;
  std::string path = "automatic";
  int n = 4;
  int m = 2;
  int k = 0;
  std::size_t trials = 200;
  std::size_t dim_min = 2;
  std::size_t dim_max = 16;

  // Throws UsageError on inconsistent settings. Group and family texts are
  // parsed, but the group is not built.
  void validate() const;
};

// Parses command-line arguments (args[0] is the program name). A JSON
// config file given with --config supplies defaults; explicit flags win.
// Throws UsageError on bad input. Returns nullopt after printing help.
std::optional<RunConfig> parse_run_config(const std::vector<std::string>& args, std::ostream& out);

// Runs a validated config, writing the artifact to config.out (or `out`)
// and a one-line summary to `log`. Returns the exit status.
int execute(const RunConfig& config, std::ostream& out, std::ostream& log);

// parse_run_config + execute with the exit-code contract:
// 0 success, 1 an asserted inequality failed, 2 usage error, 3 capacity.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace cosetlab
