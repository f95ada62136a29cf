#pragma once

// Reader/writers for the plain CSV inputs:
//   angular data   bin_label, theta_deg, yield[, err]
//   spectrum       eps_mev, counts[, err]
//   sigma_inv      eps_mev, sigma_fm2
// A header row naming the columns is required; columns may come in any
// order. Blank lines and lines starting with '#' are skipped. Malformed
// input raises DataError carrying the 1-based line number.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xsym/fitkit.hh"
#include "xsym/thermo.hh"

namespace xsym::io {

struct AngularCsv {
  std::vector<fitkit::AngularDataset> datasets;  // in order of first appearance
  bool unit_weights = false;                     // no err column, or all empty
  std::vector<std::string> warnings;
};

AngularCsv read_angular_csv(std::istream& in);
AngularCsv read_angular_csv(const std::filesystem::path& path);

std::vector<thermo::SpectrumPoint> read_spectrum_csv(std::istream& in);
std::vector<thermo::SpectrumPoint> read_spectrum_csv(const std::filesystem::path& path);

thermo::SigmaInvTable read_sigma_table_csv(std::istream& in);
thermo::SigmaInvTable read_sigma_table_csv(const std::filesystem::path& path);

void write_angular_csv(std::ostream& out, std::span<const fitkit::AngularDataset> datasets);
void write_spectrum_csv(std::ostream& out, std::span<const thermo::SpectrumPoint> points);

}  // namespace xsym::io
