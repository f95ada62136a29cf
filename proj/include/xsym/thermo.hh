#pragma once

// Evaporation-spectrum thermometry and compound-nucleus timescales.
//
// Energies are MeV and lengths fm unless a name says otherwise; decay
// widths of the compound nucleus are in eV.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xsym::thermo {

inline constexpr double kHbarEvS = 6.582119e-16;        // eV s
inline constexpr double kCoulombMevFm = 1.43997;        // e^2 / 4 pi eps0
inline constexpr double kAtomicMassMev = 931.494;       // u c^2
inline constexpr double kHbarCMevFm = 197.3269804;      // hbar c
inline constexpr double kRadiusParameterFm = 1.5;       // R = r0 A^(1/3)

struct NucleusSpec {
  int mass_number = 0;
  int charge = 0;
  double excitation_energy = 0.0;

  void validate() const;
};

/// Proton + nucleus kinematics for the inverse (capture) reaction. The
/// nucleus is the residual one; the proton mass is taken as 1 u.
double nuclear_radius(const NucleusSpec& nucleus);
double reduced_mass(const NucleusSpec& nucleus);
double coulomb_barrier(const NucleusSpec& nucleus);
/// Coulomb plus centrifugal barrier at r = R.
double barrier_height(const NucleusSpec& nucleus, int l);
double sommerfeld_parameter(const NucleusSpec& nucleus, double eps);

/// exp(-2 pi eta (2/pi)(arccos sqrt(x) - sqrt(x(1-x)))), x = eps / V_C.
/// Valid for eps <= V_C.
double coulomb_s_wave_penetrability(const NucleusSpec& nucleus, double eps);

/// exp(-2G) with G the WKB action through the Coulomb + centrifugal barrier
/// from R to the outer turning point, by numerical quadrature. 1 at and
/// above the barrier top.
double wkb_penetrability(const NucleusSpec& nucleus, int l, double eps);

/// Barrier transmission for a single partial wave: the closed form for l = 0,
/// numerical WKB otherwise; 1 above the barrier.
double transmission(const NucleusSpec& nucleus, int l, double eps);

/// pi R^2 T_l(eps) in fm^2. Throws std::invalid_argument for eps <= 0 or l < 0.
double inverse_capture_xsec(const NucleusSpec& nucleus, int l, double eps);

/// Tabulated sigma_inv(eps), piecewise linear in eps.
class SigmaInvTable {
 public:
  explicit SigmaInvTable(std::vector<std::pair<double, double>> rows);

  /// Throws std::out_of_range outside the tabulated energies.
  double operator()(double eps) const;
  std::span<const std::pair<double, double>> rows() const { return rows_; }

 private:
  std::vector<std::pair<double, double>> rows_;
};

/// sigma_inv source: the barrier model, or a user table that overrides it.
class InverseCrossSection {
 public:
  InverseCrossSection(NucleusSpec nucleus, int l = 0);  // NOLINT: implicit on purpose
  explicit InverseCrossSection(SigmaInvTable table);

  double operator()(double eps) const;
  bool from_table() const { return table_.has_value(); }
  std::string provenance() const;

 private:
  NucleusSpec nucleus_{};
  int l_ = 0;
  std::optional<SigmaInvTable> table_;
};

struct SpectrumPoint {
  double eps = 0.0;
  double counts = 0.0;
  double err = 0.0;
};

struct ScaledPoint {
  double eps = 0.0;
  double value = 0.0;
  double err = 0.0;
  bool scalable = true;  // false where sigma_inv(eps) == 0
};

/// counts / (eps sigma_inv(eps)), errors scaled alike. Points where
/// sigma_inv vanishes are kept and flagged.
std::vector<ScaledPoint> scale_spectrum(std::span<const SpectrumPoint> points,
                                        const InverseCrossSection& sigma_inv);

struct TemperatureFit {
  double temperature = 0.0;    // MeV, -1/slope
  double temperature_err = 0.0;
  double log_intercept = 0.0;
  double slope = 0.0;          // 1/MeV
  std::size_t n_used = 0;
  bool weighted = false;
  std::string warning;         // empty unless the fit is degenerate
};

/// Weighted straight-line fit of ln(value) against eps over eps <= eps_max.
/// Points are weighted by (value/err)^2 when every used point has err > 0;
/// otherwise unweighted with the slope error taken from the scatter.
TemperatureFit fit_temperature(std::span<const ScaledPoint> points, double eps_max);

struct ExcitonReport {
  double g = 0.0;          // MeV^-1
  double n_bar = 0.0;
  double n_sigma = 0.0;
  double t_low = 0.0;      // MeV
  double t_high = 0.0;     // MeV
};

/// g = A/13, n = sqrt(2 g E*), spread sqrt(n/2), T = E*/(n +- spread).
ExcitonReport exciton_report(int mass_number, double e_star);

struct TimescaleReport {
  double beta = 0.0;              // eV
  double tau_ph = 0.0;            // s, +inf for r = 0
  double gamma_cn = 0.0;          // eV
  double tau_cn = 0.0;            // s
  double gamma_spr = 0.0;         // MeV
  double tau_th = 0.0;            // s
  double level_spacing_d = 0.0;   // MeV
  double t_heisenberg = 0.0;      // s
  double n_eff = 0.0;
};

TimescaleReport timescales(double r, double gamma_cn_ev, double gamma_spr_mev,
                           double level_spacing_mev);

}  // namespace xsym::thermo
