#include "xsym/app.hh"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "xsym/angmom.hh"
#include "xsym/csv_io.hh"
#include "xsym/errors.hh"
#include "xsym/fitkit.hh"
#include "xsym/thermo.hh"
#include "xsym/xsection.hh"

namespace xsym::app {

using nlohmann::json;

namespace {

// Non-finite values have no JSON literal; they are written as strings.
json number(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

xsection::SpinWeighting parse_weighting(const std::string& name) {
  if (name == "equal") return xsection::SpinWeighting::Equal;
  if (name == "multiplicity") return xsection::SpinWeighting::Multiplicity;
  if (name == "cutoff") return xsection::SpinWeighting::SpinCutoff;
  throw std::invalid_argument("unknown weighting '" + name + "'");
}

const std::vector<std::string> kWeightings{"equal", "multiplicity", "cutoff"};

struct Output {
  std::string path;
  std::string format = "json";

  void write(std::ostream& fallback, const std::string& text) const {
    if (path.empty() || path == "-") {
      fallback << text;
      return;
    }
    std::ofstream file(path);
    if (!file) throw DataError("cannot write '" + path + "'");
    file << text;
  }
};

void add_output_options(CLI::App* cmd, Output& output, bool allow_csv) {
  cmd->add_option("-o,--out", output.path, "Output file (default: stdout)");
  if (allow_csv)
    cmd->add_option("--format", output.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string significant(double value, int digits) {
  std::ostringstream s;
  s << std::setprecision(digits) << std::fixed;
  if (value == 0.0) return "0";
  // Fixed notation with `digits` significant digits where it stays readable.
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
  if (magnitude < -4 || magnitude >= digits) {
    s.str({});
    s << std::scientific << std::setprecision(digits - 1) << value;
    return s.str();
  }
  s << std::setprecision(std::max(digits - 1 - magnitude, 0)) << value;
  return s.str();
}

// ---- coeff ---------------------------------------------------------------

struct CoeffArgs {
  std::string kind;
  std::vector<std::string> numbers;
};

void run_coeff(const CoeffArgs& args, std::ostream& out) {
  if (args.numbers.size() != 6)
    throw std::invalid_argument("coeff expects exactly six quantum numbers");
  std::array<int, 6> v{};
  for (std::size_t i = 0; i < 6; ++i) v[i] = angmom::parse_doubled(args.numbers[i]);
  using angmom::AngularMomentum;
  using angmom::Projection;
  auto J = [&](int i) { return AngularMomentum::doubled(v[i]); };
  double value = 0.0;
  if (args.kind == "cg") {
    value = angmom::clebsch_gordan(J(0), Projection::doubled(v[1]), J(2),
                                   Projection::doubled(v[3]), J(4), Projection::doubled(v[5]));
  } else if (args.kind == "w6j") {
    value = angmom::wigner_6j(J(0), J(1), J(2), J(3), J(4), J(5));
  } else if (args.kind == "racah") {
    value = angmom::racah_w(J(0), J(1), J(2), J(3), J(4), J(5));
  } else {
    value = angmom::z_coeff(J(0), J(1), J(2), J(3), J(4), J(5));
  }
  out << significant(value, 12) << "\n";
}

// ---- model ---------------------------------------------------------------

struct ModelArgs {
  xsection::ShapeParams params;
  std::string weighting = "equal";
  double spin_cutoff = 4.0;
  std::string grid = "0:180:19";
  Output output;
};

void run_model(const ModelArgs& args, std::ostream& out) {
  xsection::ChannelConfig config;
  config.weighting = parse_weighting(args.weighting);
  config.spin_cutoff = args.spin_cutoff;
  const auto series = xsection::legendre_coefficients(args.params, config);
  const double u = xsection::asymmetry(series);
  const auto angles = parse_grid(args.grid).angles();

  if (args.output.format == "csv") {
    std::ostringstream s;
    s << std::setprecision(15);
    s << "# schema_version=" << kSchemaVersion << "\n";
    s << "# A=" << args.params.A << " B=" << args.params.B << " C=" << args.params.C
      << " r=" << args.params.r << " weighting=" << args.weighting << "\n";
    for (int L = 0; L <= xsection::kMaxRank; ++L) s << "# c" << L << "=" << series.c[L] + 0.0 << "\n";
    s << "# asymmetry=" << u << "\n";
    s << "theta_deg,sigma\n";
    for (double theta : angles)
      s << theta << "," << xsection::cross_section(series, radians(theta)) << "\n";
    args.output.write(out, s.str());
    return;
  }

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["params"] = {{"A", args.params.A}, {"B", args.params.B}, {"C", args.params.C},
                   {"r", args.params.r}};
  doc["weighting"] = args.weighting;
  doc["coefficients"] = json::array();
  for (double c : series.c) doc["coefficients"].push_back(c + 0.0);
  doc["asymmetry"] = u;
  doc["curve"] = json::array();
  for (double theta : angles)
    doc["curve"].push_back(
        {{"theta_deg", theta}, {"sigma", xsection::cross_section(series, radians(theta))}});
  args.output.write(out, dump(doc));
}

// ---- fit -----------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string mode = "joint";
  int starts = 32;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int max_iter = 500;
  std::string weighting = "equal";
  double spin_cutoff = 4.0;
  Output output;
};

json fit_to_json(const fitkit::FitResult& fit) {
  json j;
  j["params"] = {{"A", fit.params.A}, {"B", fit.params.B}, {"C", fit.params.C},
                 {"r", fit.params.r}};
  j["labels"] = fit.labels;
  j["norms"] = fit.norms;
  j["chi2"] = fit.chi2;
  j["dof"] = fit.dof;
  j["covariance_coordinates"] = json::array({"log_A", "log_B", "log_C", "log1p_r"});
  for (const auto& label : fit.labels) j["covariance_coordinates"].push_back("log_norm:" + label);
  j["covariance"] = json::array();
  for (Eigen::Index i = 0; i < fit.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < fit.covariance.cols(); ++k) row.push_back(number(fit.covariance(i, k)));
    j["covariance"].push_back(row);
  }
  j["converged"] = fit.converged;
  j["identifiable"] = fit.identifiable;
  j["n_starts_agreeing"] = fit.n_starts_agreeing;
  j["log1p_r_sigma"] = number(fit.log1p_r_sigma());
  return j;
}

struct ResidualRow {
  std::string label;
  double theta_deg, yield, err, model, pull;
};

std::vector<ResidualRow> residual_rows(const fitkit::FitResult& fit,
                                       std::span<const fitkit::AngularDataset> datasets,
                                       const xsection::ChannelConfig& config) {
  const auto series = xsection::legendre_coefficients(fit.params, config);
  std::vector<ResidualRow> rows;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (const auto& p : datasets[d].points) {
      const double model = fit.norms[d] * xsection::cross_section(series, radians(p.theta_deg));
      rows.push_back({datasets[d].bin_label, p.theta_deg, p.yield, p.err, model,
                      (p.yield - model) / p.err});
    }
  return rows;
}

void run_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  const auto csv = io::read_angular_csv(std::filesystem::path(args.data));
  for (const auto& w : csv.warnings) err << "warning: " << w << "\n";

  xsection::ChannelConfig config;
  config.weighting = parse_weighting(args.weighting);
  config.spin_cutoff = args.spin_cutoff;
  fitkit::FitOptions options;
  options.n_starts = args.starts;
  options.seed = args.seed;
  options.tol = args.tol;
  options.max_iter = args.max_iter;
  options.mode = args.mode == "per-bin" ? fitkit::FitMode::PerBin : fitkit::FitMode::Joint;

  const auto fits = fitkit::fit_angular(csv.datasets, config, options);
  for (const auto& fit : fits)
    if (!fit.identifiable)
      err << "warning: fit " << (fit.labels.size() == 1 ? "'" + fit.labels[0] + "' " : "")
          << "is not identifiable; parameter values are not constrained by the data\n";

  std::vector<ResidualRow> rows;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto subset = options.mode == fitkit::FitMode::Joint
                            ? std::span<const fitkit::AngularDataset>(csv.datasets)
                            : std::span<const fitkit::AngularDataset>(csv.datasets).subspan(i, 1);
    const auto part = residual_rows(fits[i], subset, config);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  if (args.output.format == "csv") {
    std::ostringstream s;
    s << std::setprecision(15) << "bin_label,theta_deg,yield,err,model,pull\n";
    for (const auto& r : rows)
      s << r.label << "," << r.theta_deg << "," << r.yield << "," << r.err << "," << r.model
        << "," << r.pull << "\n";
    args.output.write(out, s.str());
    return;
  }

  json doc;
  if (options.mode == fitkit::FitMode::Joint) {
    doc = fit_to_json(fits.front());
  } else {
    doc["fits"] = json::array();
    for (const auto& fit : fits) doc["fits"].push_back(fit_to_json(fit));
  }
  doc["schema_version"] = kSchemaVersion;
  doc["mode"] = args.mode;
  doc["unit_weights"] = csv.unit_weights;
  doc["warnings"] = csv.warnings;
  doc["residuals"] = json::array();
  for (const auto& r : rows)
    doc["residuals"].push_back({{"bin_label", r.label}, {"theta_deg", r.theta_deg},
                                {"yield", r.yield}, {"err", r.err}, {"model", r.model},
                                {"pull", r.pull}});
  args.output.write(out, dump(doc));
}

// ---- spectrum ------------------------------------------------------------

struct SpectrumArgs {
  std::string data;
  int mass_number = 208;
  int charge = 82;
  int l = 0;
  double eps_max = 8.0;
  std::string sigma_table;
  Output output;
};

void run_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& err) {
  const auto points = io::read_spectrum_csv(std::filesystem::path(args.data));
  const thermo::NucleusSpec nucleus{args.mass_number, args.charge, 0.0};
  nucleus.validate();
  const thermo::InverseCrossSection sigma_inv =
      args.sigma_table.empty()
          ? thermo::InverseCrossSection(nucleus, args.l)
          : thermo::InverseCrossSection(io::read_sigma_table_csv(std::filesystem::path(args.sigma_table)));
  const auto scaled = thermo::scale_spectrum(points, sigma_inv);
  const auto fit = thermo::fit_temperature(scaled, args.eps_max);
  if (!fit.warning.empty()) err << "warning: " << fit.warning << "\n";

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["temperature_mev"] = number(fit.temperature);
  doc["temperature_err_mev"] = number(fit.temperature_err);
  doc["slope_per_mev"] = fit.slope;
  doc["log_intercept"] = fit.log_intercept;
  doc["n_used"] = fit.n_used;
  doc["weighted"] = fit.weighted;
  doc["eps_max_mev"] = args.eps_max;
  doc["sigma_inv_source"] = sigma_inv.from_table() ? "table:" + args.sigma_table
                                                   : sigma_inv.provenance();
  doc["nucleus"] = {{"mass_number", args.mass_number}, {"charge", args.charge}};
  doc["warning"] = fit.warning;
  doc["unscalable_eps_mev"] = json::array();
  doc["scaled"] = json::array();
  for (const auto& p : scaled) {
    if (!p.scalable) doc["unscalable_eps_mev"].push_back(p.eps);
    doc["scaled"].push_back(
        {{"eps_mev", p.eps}, {"value", p.value}, {"err", p.err}, {"scalable", p.scalable}});
  }
  args.output.write(out, dump(doc));
}

// ---- exciton / times -----------------------------------------------------

struct ExcitonArgs {
  int mass_number = 0;
  double e_star = 0.0;
  Output output;
};

void run_exciton(const ExcitonArgs& args, std::ostream& out) {
  const auto report = thermo::exciton_report(args.mass_number, args.e_star);
  json doc{{"schema_version", kSchemaVersion},
           {"mass_number", args.mass_number},
           {"e_star_mev", args.e_star},
           {"g_per_mev", report.g},
           {"n_bar", report.n_bar},
           {"n_sigma", report.n_sigma},
           {"t_low_mev", report.t_low},
           {"t_high_mev", report.t_high}};
  args.output.write(out, dump(doc));
}

struct TimesArgs {
  double r = 0.0;
  std::string gamma_cn = "0.1eV";
  std::string gamma_spr = "2MeV";
  std::string level_spacing = "1e-16MeV";
  Output output;
};

void run_times(const TimesArgs& args, std::ostream& out) {
  const double gamma_cn_ev = parse_width_ev(args.gamma_cn, "eV");
  const double gamma_spr_mev = parse_width_ev(args.gamma_spr, "MeV") * 1e-6;
  const double spacing_mev = parse_width_ev(args.level_spacing, "MeV") * 1e-6;
  const auto t = thermo::timescales(args.r, gamma_cn_ev, gamma_spr_mev, spacing_mev);
  json doc{{"schema_version", kSchemaVersion},
           {"r", args.r},
           {"beta_ev", t.beta},
           {"tau_ph_s", number(t.tau_ph)},
           {"gamma_cn_ev", t.gamma_cn},
           {"tau_cn_s", t.tau_cn},
           {"gamma_spr_mev", t.gamma_spr},
           {"tau_th_s", t.tau_th},
           {"level_spacing_mev", t.level_spacing_d},
           {"t_heisenberg_s", t.t_heisenberg},
           {"n_eff", t.n_eff},
           {"tau_ph_over_tau_th", number(t.tau_ph / t.tau_th)}};
  args.output.write(out, dump(doc));
}

// Splices config-file tokens in front of the command-line arguments of the
// subcommand, so that explicit flags (parsed later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty() || rest.empty()) return rest;
  std::vector<std::string> expanded{rest.front()};
  const auto tokens = config_tokens(config_path);
  expanded.insert(expanded.end(), tokens.begin(), tokens.end());
  expanded.insert(expanded.end(), rest.begin() + 1, rest.end());
  return expanded;
}

}  // namespace

double parse_width_ev(std::string_view token, std::string_view default_unit) {
  std::string text = trim(std::string(token));
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed width '" + std::string(token) + "'");
  }
  std::string unit = trim(text.substr(consumed));
  if (unit.empty()) unit = default_unit;
  double scale = 0.0;
  if (unit == "eV") scale = 1.0;
  else if (unit == "keV") scale = 1e3;
  else if (unit == "MeV") scale = 1e6;
  else throw std::invalid_argument("unknown energy unit '" + unit + "' (use eV, keV or MeV)");
  return value * scale;
}

std::vector<double> AngleGrid::angles() const {
  std::vector<double> out;
  if (count == 1) return {start_deg};
  for (int i = 0; i < count; ++i)
    out.push_back(start_deg + (stop_deg - start_deg) * i / (count - 1));
  return out;
}

AngleGrid parse_grid(std::string_view spec) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:count");
  AngleGrid grid;
  try {
    std::size_t pos = 0;
    grid.start_deg = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("");
    grid.stop_deg = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("");
    grid.count = std::stoi(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed grid '" + std::string(spec) + "'");
  }
  if (!(grid.start_deg >= 0.0 && grid.stop_deg <= 180.0 && grid.start_deg < grid.stop_deg) ||
      grid.count < 2)
    throw std::invalid_argument("grid needs 0 <= start < stop <= 180 and count >= 2");
  return grid;
}

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) +
                                                 ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) + ": empty key");
    tokens.push_back(key.size() == 1 ? "-" + key : "--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compound-nucleus proton angular distributions and cross-symmetry phase relaxation",
               "xsym"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all");
  std::string config_placeholder;
  app.add_option("--config", config_placeholder, "Key = value file; flags override it");

  CoeffArgs coeff;
  auto* coeff_cmd = app.add_subcommand("coeff", "Print a coupling coefficient");
  coeff_cmd->add_option("kind", coeff.kind, "cg | w6j | racah | z")
      ->required()
      ->check(CLI::IsMember({"cg", "w6j", "racah", "z"}));
  coeff_cmd->add_option("numbers", coeff.numbers,
                        "Six quantum numbers, e.g. 1 -1 1 1 0 0 or 3/2 ...")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Legendre coefficients and sigma(theta)");
  model_cmd->add_option("-A", model.params.A, "T(L=2)/T(L=1)")->required()->check(CLI::NonNegativeNumber);
  model_cmd->add_option("-B", model.params.B, "T(l'=1)/T(l'=0)")->required()->check(CLI::NonNegativeNumber);
  model_cmd->add_option("-C", model.params.C, "T(l'=2)/T(l'=0)")->required()->check(CLI::NonNegativeNumber);
  model_cmd->add_option("-r", model.params.r, "beta/Gamma_cn")->required()->check(CLI::NonNegativeNumber);
  model_cmd->add_option("--weighting", model.weighting, "Residual-spin weights")
      ->check(CLI::IsMember(kWeightings))->capture_default_str();
  model_cmd->add_option("--sigma-spin", model.spin_cutoff, "Spin cutoff for --weighting cutoff")
      ->check(CLI::PositiveNumber)->capture_default_str();
  model_cmd->add_option("--grid", model.grid, "start:stop:count in degrees")->capture_default_str();
  add_output_options(model_cmd, model.output, true);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit angular distributions");
  fit_cmd->add_option("--data", fit.data, "CSV: bin_label, theta_deg, yield[, err]")
      ->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--mode", fit.mode)->check(CLI::IsMember({"joint", "per-bin"}))->capture_default_str();
  fit_cmd->add_option("--starts", fit.starts)->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed)->capture_default_str();
  fit_cmd->add_option("--tol", fit.tol)->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
  fit_cmd->add_option("--weighting", fit.weighting)->check(CLI::IsMember(kWeightings))->capture_default_str();
  fit_cmd->add_option("--sigma-spin", fit.spin_cutoff)->check(CLI::PositiveNumber)->capture_default_str();
  add_output_options(fit_cmd, fit.output, true);

  SpectrumArgs spectrum;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Scaled spectrum temperature");
  spectrum_cmd->add_option("--data", spectrum.data, "CSV: eps_mev, counts[, err]")
      ->required()->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--mass-number", spectrum.mass_number, "Residual nucleus A")->capture_default_str();
  spectrum_cmd->add_option("--charge", spectrum.charge, "Residual nucleus Z")->capture_default_str();
  spectrum_cmd->add_option("-l,--orbital", spectrum.l, "Partial wave for the barrier model")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  spectrum_cmd->add_option("--eps-max", spectrum.eps_max, "Fit range upper edge, MeV")
      ->check(CLI::PositiveNumber)->capture_default_str();
  spectrum_cmd->add_option("--sigma-table", spectrum.sigma_table, "CSV: eps_mev, sigma_fm2")
      ->check(CLI::ExistingFile);
  add_output_options(spectrum_cmd, spectrum.output, false);

  ExcitonArgs exciton;
  auto* exciton_cmd = app.add_subcommand("exciton", "Exciton-model temperature range");
  exciton_cmd->add_option("-A,--mass-number", exciton.mass_number)->required()->check(CLI::PositiveNumber);
  exciton_cmd->add_option("-E,--e-star", exciton.e_star, "Excitation energy, MeV")
      ->required()->check(CLI::NonNegativeNumber);
  add_output_options(exciton_cmd, exciton.output, false);

  TimesArgs times;
  auto* times_cmd = app.add_subcommand("times", "Phase-memory and related timescales");
  times_cmd->add_option("-r", times.r, "beta/Gamma_cn")->required()->check(CLI::NonNegativeNumber);
  times_cmd->add_option("--gcn", times.gamma_cn, "Compound decay width (default unit eV)")->capture_default_str();
  times_cmd->add_option("--gspr", times.gamma_spr, "Spreading width (default unit MeV)")->capture_default_str();
  times_cmd->add_option("--D", times.level_spacing, "Mean level spacing (default unit MeV)")->capture_default_str();
  add_output_options(times_cmd, times.output, false);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kUsage;
  }

  try {
    if (coeff_cmd->parsed()) run_coeff(coeff, out);
    else if (model_cmd->parsed()) run_model(model, out);
    else if (fit_cmd->parsed()) run_fit(fit, out, err);
    else if (spectrum_cmd->parsed()) run_spectrum(spectrum, out, err);
    else if (exciton_cmd->parsed()) run_exciton(exciton, out);
    else if (times_cmd->parsed()) run_times(times, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::out_of_range& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kSuccess;
}

}  // namespace xsym::app
