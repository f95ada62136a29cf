#pragma once

// Angular distribution of evaporation protons from a photo-excited compound
// nucleus, expanded in Legendre polynomials.
//
// The model keeps electric dipole and quadrupole absorption (compound spins
// L = 1, 2) on a spinless target, neglects the proton spin so that the exit
// channel spin equals the residual spin I', and truncates proton orbital
// momenta at l' <= 2. Each interference term pairs two compound states
// (L1, l1, l1') and (L2, l2, l2') and contributes to P_L(cos theta).
//
// The shape depends on four ratios:
//   A = T(L=2)/T(L=1)        entrance transmission, quadrupole vs dipole
//   B = T(l'=1)/T(l'=0)      exit transmission
//   C = T(l'=2)/T(l'=0)
//   r = beta/Gamma_cn        cross-symmetry phase relaxation width over the
//                            compound decay width
// Terms with L1 != L2 (opposite parity) are damped by 1/(1+r); they are the
// only source of odd L, so r -> infinity gives a distribution symmetric
// about 90 degrees.

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace xsym::xsection {

inline constexpr int kMaxRank = 4;

enum class SpinWeighting { Equal, Multiplicity, SpinCutoff };

struct ChannelConfig {
  std::vector<int> multipoles{1, 2};         // compound spins L, electric only
  std::vector<int> exit_orbitals{0, 1, 2};   // proton l'
  SpinWeighting weighting = SpinWeighting::Equal;
  double spin_cutoff = 4.0;                  // sigma_spin, SpinCutoff mode only

  // Throws std::invalid_argument for multipoles outside {1, 2}, l' outside
  // [0, 2], duplicates, empty sets or a non-positive spin cutoff.
  void validate() const;
};

/// Residual-spin weight w(I') for the configured mode.
double residual_spin_weight(const ChannelConfig& config, int residual_spin);

struct TermAmplitude {
  int L1 = 0, L2 = 0;      // compound spins (= multipolarities)
  int l1 = 0, l2 = 0;      // photon orbital momenta, L -+ 1
  int lp1 = 0, lp2 = 0;    // proton orbital momenta
  int residual_spin = 0;   // I'
  int rank = 0;            // Legendre order L
  std::complex<double> geometry;

  bool is_cross() const { return L1 != L2; }
};

struct ShapeParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double r = 0.0;

  // Throws std::invalid_argument unless all four are finite and >= 0.
  void validate() const;
};

using RawCoefficients = std::array<std::complex<double>, kMaxRank + 1>;

struct LegendreSeries {
  std::array<double, kMaxRank + 1> c{};
  // max_L |Im c_L| / |c_0| before the imaginary parts were dropped.
  double max_imag_residue = 0.0;
};

/// All terms passing the selection rules, ordered lexicographically by
/// (L1, L2, l1, l2, l1', l2', I', L).
std::vector<TermAmplitude> enumerate_terms(const ChannelConfig& config);

/// 1 for L1 == L2, 1/(1+r) otherwise.
double correlation_factor(int L1, int L2, double r);

/// sqrt(A^a B^b C^c): a counts quadrupole indices among {L1, L2}, b and c
/// count l' = 1 and l' = 2 indices among {l1', l2'}.
double magnitude_factor(const TermAmplitude& term, const ShapeParams& params);

/// Unnormalized sums over the terms of geometry x magnitude x correlation.
RawCoefficients raw_coefficients(std::span<const TermAmplitude> terms,
                                 const ShapeParams& params);

/// Drops the imaginary parts and scales to c_0 = 1. Throws DegenerateModel
/// when Re c_0 <= 0 and std::logic_error when the imaginary residue exceeds
/// 1e-10 |c_0|.
LegendreSeries realize(const RawCoefficients& raw);

LegendreSeries legendre_coefficients(const ShapeParams& params,
                                     const ChannelConfig& config = {});

/// sigma(theta) = sum_L c_L P_L(cos theta); theta in radians, [0, pi].
double cross_section(const LegendreSeries& series, double theta);
double cross_section(const ShapeParams& params, const ChannelConfig& config, double theta);

/// Forward over backward hemisphere yield, in closed form from the c_L.
double asymmetry(const LegendreSeries& series);
double asymmetry(const ShapeParams& params, const ChannelConfig& config = {});

/// Precomputed model for repeated evaluation. Terms are grouped by their
/// transmission-ratio exponents so that a coefficient evaluation costs a
/// handful of multiplications.
class AngularModel {
 public:
  explicit AngularModel(ChannelConfig config = {});

  const ChannelConfig& config() const { return config_; }
  const std::vector<TermAmplitude>& terms() const { return terms_; }

  RawCoefficients raw(const ShapeParams& params) const;
  LegendreSeries coefficients(const ShapeParams& params) const;

 private:
  struct Monomial {
    int a = 0, b = 0, c = 0;
    bool cross = false;
    RawCoefficients weight{};
  };

  ChannelConfig config_;
  std::vector<TermAmplitude> terms_;
  std::vector<Monomial> monomials_;
};

}  // namespace xsym::xsection
