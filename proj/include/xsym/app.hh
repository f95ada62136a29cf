#pragma once

// Command-line front end. Subcommands:
//   coeff     coupling coefficients (cg | w6j | racah | z)
//   model     Legendre coefficients and sigma(theta) for given A, B, C, r
//   fit       fit (A, B, C, r) and norms to an angular-distribution CSV
//   spectrum  scale a proton spectrum by eps sigma_inv and fit a temperature
//   exciton   exciton-model temperature range
//   times     phase-memory, lifetime, thermalization and Heisenberg times
//
// Exit codes: 0 success, 1 usage, 2 data, 3 numerical.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace xsym::app {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.1eV", "5 keV", "2MeV", "1e-16MeV"; a bare number is taken in
/// default_unit. Returns the width in eV. Throws std::invalid_argument.
double parse_width_ev(std::string_view token, std::string_view default_unit);

struct AngleGrid {
  double start_deg = 0.0;
  double stop_deg = 180.0;
  int count = 19;

  std::vector<double> angles() const;
};

/// "start:stop:count", degrees. Throws std::invalid_argument.
AngleGrid parse_grid(std::string_view spec);

/// Reads "key = value" lines ('#' comments) into "--key value" tokens;
/// single-letter keys become "-k value".
std::vector<std::string> config_tokens(const std::string& path);

}  // namespace xsym::app
