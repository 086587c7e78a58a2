#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace optdesign::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

struct RunConfig {
  std::string command;  // local | bayes | maximin | verify | theory | growth
  std::string model = "exp1";
  std::optional<double> x_max;
  double beta = 1.0;
  std::string prior;
  int quadrature = 0;
  int grid = 2001;
  std::optional<std::pair<double, double>> beta_range;
  int beta_grid = 400;
  std::string check;
  std::optional<double> lambda;
  int samples = 0;
  std::string envelope;
  std::string criterion = "maximin";
  std::vector<double> B_list;
  std::string input;
  std::string out;
  std::string plot;
  unsigned seed = 0;
};

/// Parses argv; returns nullopt after printing help. Throws UsageError.
std::optional<RunConfig> parse(int argc, const char* const* argv);

/// Executes one command; JSON/CSV go to `out` unless an output path is set.
/// Returns 0 when every certificate or check passed, 1 otherwise.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + run with the documented exit codes.
int main_entry(int argc, const char* const* argv);

}  // namespace optdesign::cli
