#include "xsym/thermo.hh"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "xsym/errors.hh"

namespace xsym::thermo {

namespace {

void require_positive_energy(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("proton energy must be positive and finite");
}

}  // namespace

void NucleusSpec::validate() const {
  if (!(charge >= 1 && charge < mass_number))
    throw std::invalid_argument("nucleus: need 1 <= Z < A");
  if (!(excitation_energy >= 0.0))
    throw std::invalid_argument("nucleus: excitation energy must be non-negative");
}

double nuclear_radius(const NucleusSpec& nucleus) {
  return kRadiusParameterFm * std::cbrt(static_cast<double>(nucleus.mass_number));
}

double reduced_mass(const NucleusSpec& nucleus) {
  const double a = nucleus.mass_number;
  return kAtomicMassMev * a / (a + 1.0);
}

double coulomb_barrier(const NucleusSpec& nucleus) {
  return kCoulombMevFm * nucleus.charge / nuclear_radius(nucleus);
}

double barrier_height(const NucleusSpec& nucleus, int l) {
  const double R = nuclear_radius(nucleus);
  return coulomb_barrier(nucleus) +
         l * (l + 1.0) * kHbarCMevFm * kHbarCMevFm / (2.0 * reduced_mass(nucleus) * R * R);
}

double sommerfeld_parameter(const NucleusSpec& nucleus, double eps) {
  require_positive_energy(eps);
  const double alpha = kCoulombMevFm / kHbarCMevFm;
  return nucleus.charge * alpha * std::sqrt(reduced_mass(nucleus) / (2.0 * eps));
}

double coulomb_s_wave_penetrability(const NucleusSpec& nucleus, double eps) {
  const double x = eps / coulomb_barrier(nucleus);
  if (x >= 1.0) return 1.0;
  const double eta = sommerfeld_parameter(nucleus, eps);
  const double shape = std::acos(std::sqrt(x)) - std::sqrt(x * (1.0 - x));
  return std::exp(-2.0 * std::numbers::pi * eta * (2.0 / std::numbers::pi) * shape);
}

double wkb_penetrability(const NucleusSpec& nucleus, int l, double eps) {
  require_positive_energy(eps);
  if (l < 0) throw std::invalid_argument("orbital momentum must be non-negative");
  if (eps >= barrier_height(nucleus, l)) return 1.0;

  const double mu = reduced_mass(nucleus);
  const double R = nuclear_radius(nucleus);
  const double coulomb = kCoulombMevFm * nucleus.charge;
  const double centrifugal = l * (l + 1.0) * kHbarCMevFm * kHbarCMevFm / (2.0 * mu);
  // Outer turning point: eps r^2 - coulomb r - centrifugal = 0.
  const double r_out =
      (coulomb + std::sqrt(coulomb * coulomb + 4.0 * eps * centrifugal)) / (2.0 * eps);
  const double span = r_out - R;

  // r = r_out - span u^2 removes the square-root endpoint at r_out.
  auto integrand = [&](double u) {
    const double r = r_out - span * u * u;
    const double excess = coulomb / r + centrifugal / (r * r) - eps;
    return std::sqrt(std::max(excess, 0.0)) * 2.0 * span * u;
  };
  const double action = std::sqrt(2.0 * mu) / kHbarCMevFm *
                        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                            integrand, 0.0, 1.0, 15, 1e-13);
  return std::exp(-2.0 * action);
}

double transmission(const NucleusSpec& nucleus, int l, double eps) {
  require_positive_energy(eps);
  if (l < 0) throw std::invalid_argument("orbital momentum must be non-negative");
  if (l == 0) return coulomb_s_wave_penetrability(nucleus, eps);
  return wkb_penetrability(nucleus, l, eps);
}

double inverse_capture_xsec(const NucleusSpec& nucleus, int l, double eps) {
  nucleus.validate();
  const double R = nuclear_radius(nucleus);
  return std::numbers::pi * R * R * transmission(nucleus, l, eps);
}

SigmaInvTable::SigmaInvTable(std::vector<std::pair<double, double>> rows)
    : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw std::invalid_argument("sigma_inv table needs at least two rows");
  std::sort(rows_.begin(), rows_.end());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].second < 0.0)
      throw std::invalid_argument("sigma_inv table has a negative cross section");
    if (i > 0 && rows_[i].first == rows_[i - 1].first)
      throw std::invalid_argument("sigma_inv table has duplicate energies");
  }
}

double SigmaInvTable::operator()(double eps) const {
  if (eps < rows_.front().first || eps > rows_.back().first)
    throw std::out_of_range("energy " + std::to_string(eps) +
                            " MeV outside the sigma_inv table range");
  auto hi = std::lower_bound(rows_.begin(), rows_.end(), eps,
                             [](const auto& row, double e) { return row.first < e; });
  if (hi->first == eps) return hi->second;
  auto lo = std::prev(hi);
  const double t = (eps - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

InverseCrossSection::InverseCrossSection(NucleusSpec nucleus, int l) : nucleus_(nucleus), l_(l) {
  nucleus_.validate();
  if (l_ < 0) throw std::invalid_argument("orbital momentum must be non-negative");
}

InverseCrossSection::InverseCrossSection(SigmaInvTable table) : table_(std::move(table)) {}

double InverseCrossSection::operator()(double eps) const {
  if (table_) return (*table_)(eps);
  return inverse_capture_xsec(nucleus_, l_, eps);
}

std::string InverseCrossSection::provenance() const {
  if (table_) return "table";
  return "barrier-model:l=" + std::to_string(l_);
}

std::vector<ScaledPoint> scale_spectrum(std::span<const SpectrumPoint> points,
                                        const InverseCrossSection& sigma_inv) {
  if (points.empty()) throw std::invalid_argument("scale_spectrum: empty spectrum");
  std::vector<ScaledPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    require_positive_energy(p.eps);
    if (p.err < 0.0) throw std::invalid_argument("scale_spectrum: negative error");
    const double sigma = sigma_inv(p.eps);
    if (!(sigma > 0.0)) {
      out.push_back({p.eps, 0.0, 0.0, false});
      continue;
    }
    const double factor = 1.0 / (p.eps * sigma);
    out.push_back({p.eps, p.counts * factor, p.err * factor, true});
  }
  return out;
}

TemperatureFit fit_temperature(std::span<const ScaledPoint> points, double eps_max) {
  std::vector<const ScaledPoint*> used;
  for (const auto& p : points)
    if (p.scalable && p.eps <= eps_max) used.push_back(&p);
  if (used.size() < 3)
    throw Underdetermined("temperature fit needs at least 3 points with eps <= " +
                          std::to_string(eps_max) + " MeV, have " +
                          std::to_string(used.size()));
  for (const auto* p : used)
    if (!(p->value > 0.0))
      throw DataError("non-positive scaled yield at eps = " + std::to_string(p->eps) + " MeV");

  const bool weighted =
      std::all_of(used.begin(), used.end(), [](const ScaledPoint* p) { return p->err > 0.0; });

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto* p : used) {
    // Var(ln y) ~ (err/y)^2.
    const double w = weighted ? (p->value / p->err) * (p->value / p->err) : 1.0;
    const double y = std::log(p->value);
    sw += w;
    sx += w * p->eps;
    sy += w * y;
    sxx += w * p->eps * p->eps;
    sxy += w * p->eps * y;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw Underdetermined("temperature fit: all energies coincide");

  TemperatureFit fit;
  fit.n_used = used.size();
  fit.weighted = weighted;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.log_intercept = (sxx * sy - sx * sxy) / det;

  double slope_var = sw / det;
  if (!weighted) {
    double rss = 0.0;
    for (const auto* p : used) {
      const double res = std::log(p->value) - fit.log_intercept - fit.slope * p->eps;
      rss += res * res;
    }
    slope_var *= used.size() > 2 ? rss / static_cast<double>(used.size() - 2) : 0.0;
  }
  const double slope_err = std::sqrt(slope_var);

  // A slope that changes ln(value) by less than round-off across the fitted
  // range is a flat spectrum.
  double lo = used.front()->eps, hi = lo;
  for (const auto* p : used) {
    lo = std::min(lo, p->eps);
    hi = std::max(hi, p->eps);
  }
  if (std::abs(fit.slope) * (hi - lo) <= 1e-12) {
    fit.slope = 0.0;
    fit.temperature = std::numeric_limits<double>::infinity();
    fit.temperature_err = std::numeric_limits<double>::infinity();
    fit.warning = "flat scaled spectrum: temperature is unbounded";
    return fit;
  }
  fit.temperature = -1.0 / fit.slope;
  fit.temperature_err = slope_err / (fit.slope * fit.slope);
  if (fit.slope > 0.0) fit.warning = "scaled spectrum rises with energy: negative temperature";
  return fit;
}

ExcitonReport exciton_report(int mass_number, double e_star) {
  if (mass_number < 1) throw std::invalid_argument("exciton_report: mass number must be >= 1");
  if (!(e_star >= 0.0) || !std::isfinite(e_star))
    throw std::invalid_argument("exciton_report: excitation energy must be non-negative");
  ExcitonReport report;
  report.g = mass_number / 13.0;
  report.n_bar = std::sqrt(2.0 * report.g * e_star);
  report.n_sigma = std::sqrt(report.n_bar / 2.0);
  if (!(report.n_bar > report.n_sigma))
    throw DegenerateModel("exciton_report: mean exciton number does not exceed its spread; "
                          "temperature range is unbounded");
  report.t_low = e_star / (report.n_bar + report.n_sigma);
  report.t_high = e_star / (report.n_bar - report.n_sigma);
  return report;
}

TimescaleReport timescales(double r, double gamma_cn_ev, double gamma_spr_mev,
                           double level_spacing_mev) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::invalid_argument("timescales: r must be finite and non-negative");
  for (double w : {gamma_cn_ev, gamma_spr_mev, level_spacing_mev})
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("timescales: widths and spacing must be positive");

  TimescaleReport t;
  t.gamma_cn = gamma_cn_ev;
  t.gamma_spr = gamma_spr_mev;
  t.level_spacing_d = level_spacing_mev;
  t.beta = r * gamma_cn_ev;
  t.tau_ph = t.beta > 0.0 ? kHbarEvS / t.beta : std::numeric_limits<double>::infinity();
  t.tau_cn = kHbarEvS / gamma_cn_ev;
  t.tau_th = kHbarEvS / (gamma_spr_mev * 1e6);
  t.t_heisenberg = kHbarEvS / (level_spacing_mev * 1e6);
  t.n_eff = gamma_spr_mev / level_spacing_mev;
  return t;
}

}  // namespace xsym::thermo
