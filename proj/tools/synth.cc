// Generator for the bundled synthetic datasets.
//
//   xsym-synth angular  -A 0.082 -B 0.47 -C 0.37 -r 0.11 --bins 3 --noise 0.05 --seed 1
//   xsym-synth spectrum -T 0.55 --noise 0.05 --seed 1
//   xsym-synth sigma-table --mass-number 208 --charge 82

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xsym/csv_io.hh"
#include "xsym/fitkit.hh"
#include "xsym/thermo.hh"

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic angular distributions and evaporation spectra", "xsym-synth"};
  app.require_subcommand(1);
  std::string out_path;
  std::uint64_t seed = 1;
  double noise = 0.0;

  xsym::xsection::ShapeParams params{0.082, 0.47, 0.37, 0.11};
  int bins = 3;
  double theta_lo = 20.0, theta_hi = 155.0;
  int n_theta = 10;
  auto* angular = app.add_subcommand("angular", "bin_label,theta_deg,yield,err");
  angular->add_option("-A", params.A)->capture_default_str();
  angular->add_option("-B", params.B)->capture_default_str();
  angular->add_option("-C", params.C)->capture_default_str();
  angular->add_option("-r", params.r)->capture_default_str();
  angular->add_option("--bins", bins)->check(CLI::PositiveNumber)->capture_default_str();
  angular->add_option("--theta-min", theta_lo)->capture_default_str();
  angular->add_option("--theta-max", theta_hi)->capture_default_str();
  angular->add_option("--n-theta", n_theta)->capture_default_str();

  double temperature = 0.55, eps_lo = 1.0, eps_hi = 12.0;
  int n_eps = 23;
  double peak_counts = 1e4;
  xsym::thermo::NucleusSpec nucleus{208, 82, 0.0};
  auto* spectrum = app.add_subcommand("spectrum", "eps_mev,counts,err");
  spectrum->add_option("-T", temperature)->capture_default_str();
  spectrum->add_option("--eps-min", eps_lo)->capture_default_str();
  spectrum->add_option("--eps-max", eps_hi)->capture_default_str();
  spectrum->add_option("--n-eps", n_eps)->capture_default_str();
  spectrum->add_option("--peak", peak_counts, "Largest expected count")->capture_default_str();
  spectrum->add_option("--mass-number", nucleus.mass_number)->capture_default_str();
  spectrum->add_option("--charge", nucleus.charge)->capture_default_str();

  auto* table = app.add_subcommand("sigma-table", "eps_mev,sigma_fm2 from the barrier model");
  table->add_option("--eps-min", eps_lo)->capture_default_str();
  table->add_option("--eps-max", eps_hi)->capture_default_str();
  table->add_option("--n-eps", n_eps)->capture_default_str();
  table->add_option("--mass-number", nucleus.mass_number)->capture_default_str();
  table->add_option("--charge", nucleus.charge)->capture_default_str();

  for (auto* sub : {angular, spectrum}) {
    sub->add_option("--noise", noise, "Relative Gaussian noise")->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
  }
  for (auto* sub : {angular, spectrum, table}) sub->add_option("-o,--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (angular->parsed()) {
      const std::vector<double> norms(bins, 1.0);
      const auto thetas = linspace(theta_lo, theta_hi, n_theta);
      const auto data = xsym::fitkit::synth_dataset(params, norms, thetas, noise, seed);
      emit(out_path, [&](std::ostream& o) { xsym::io::write_angular_csv(o, data); });
    } else if (spectrum->parsed()) {
      // counts = K eps sigma_inv(eps) exp(-eps/T), so the scaled spectrum is
      // a pure exponential. K puts the largest expected count at --peak.
      const xsym::thermo::InverseCrossSection sigma_inv(nucleus);
      const auto grid = linspace(eps_lo, eps_hi, n_eps);
      std::vector<double> shape;
      double largest = 0.0;
      for (double eps : grid) {
        shape.push_back(eps * sigma_inv(eps) * std::exp(-eps / temperature));
        largest = std::max(largest, shape.back());
      }
      xsym::fitkit::NormalStream rng(seed);
      std::vector<xsym::thermo::SpectrumPoint> points;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double expected = peak_counts * shape[i] / largest;
        const double err = (noise > 0.0 ? noise : 0.05) * expected;
        const double counts = noise > 0.0 ? expected + noise * expected * rng.normal() : expected;
        points.push_back({grid[i], counts, err});
      }
      emit(out_path, [&](std::ostream& o) { xsym::io::write_spectrum_csv(o, points); });
    } else if (table->parsed()) {
      emit(out_path, [&](std::ostream& o) {
        o << "eps_mev,sigma_fm2\n" << std::setprecision(17);
        for (double eps : linspace(eps_lo, eps_hi, n_eps))
          o << eps << ',' << xsym::thermo::inverse_capture_xsec(nucleus, 0, eps) << '\n';
      });
    }
  } catch (const std::exception& e) {
    std::cerr << "xsym-synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
