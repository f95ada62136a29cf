#include "xsym/xsection.hh"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <tuple>

#include "xsym/angmom.hh"
#include "xsym/errors.hh"

namespace xsym::xsection {

namespace {

using angmom::AngularMomentum;
using angmom::Projection;

AngularMomentum j(int value) { return AngularMomentum::whole(value); }

std::complex<double> i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// <L -1 1 1 | l 0>: a photon of helicity +1 along the beam axis.
double photon_cg(int L, int l) {
  return angmom::clebsch_gordan(j(L), Projection::whole(-1), j(1), Projection::whole(1),
                                j(l), Projection::whole(0));
}

std::vector<int> entrance_orbitals(int L) {
  std::vector<int> out;
  if (L - 1 >= 0) out.push_back(L - 1);
  out.push_back(L + 1);
  return out;
}

std::vector<int> sorted_unique(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

struct Exponents {
  int a = 0, b = 0, c = 0;
};

Exponents exponents_of(const TermAmplitude& term) {
  Exponents e;
  for (int L : {term.L1, term.L2})
    if (L == 2) ++e.a;
  for (int lp : {term.lp1, term.lp2}) {
    if (lp == 1) ++e.b;
    if (lp == 2) ++e.c;
  }
  return e;
}

double monomial(const Exponents& e, const ShapeParams& p) {
  return std::sqrt(std::pow(p.A, e.a) * std::pow(p.B, e.b) * std::pow(p.C, e.c));
}

double hemisphere_integral(int L) {
  // int_0^1 P_L(x) dx = (P_{L-1}(0) - P_{L+1}(0)) / (2L+1) for L >= 1.
  if (L == 0) return 1.0;
  return (angmom::legendre_p(L - 1, 0.0) - angmom::legendre_p(L + 1, 0.0)) / (2 * L + 1);
}

}  // namespace

void ChannelConfig::validate() const {
  if (multipoles.empty() || exit_orbitals.empty())
    throw std::invalid_argument("channel config: empty multipole or exit orbital set");
  for (int L : multipoles)
    if (L != 1 && L != 2)
      throw std::invalid_argument("channel config: only E1 and E2 multipoles are modeled");
  for (int lp : exit_orbitals)
    if (lp < 0 || lp > 2)
      throw std::invalid_argument("channel config: proton orbital momentum must be 0, 1 or 2");
  if (sorted_unique(multipoles).size() != multipoles.size() ||
      sorted_unique(exit_orbitals).size() != exit_orbitals.size())
    throw std::invalid_argument("channel config: duplicate entries");
  if (weighting == SpinWeighting::SpinCutoff && !(spin_cutoff > 0.0 && std::isfinite(spin_cutoff)))
    throw std::invalid_argument("channel config: spin cutoff must be positive");
}

double residual_spin_weight(const ChannelConfig& config, int residual_spin) {
  switch (config.weighting) {
    case SpinWeighting::Equal:
      return 1.0;
    case SpinWeighting::Multiplicity:
      return 2.0 * residual_spin + 1.0;
    case SpinWeighting::SpinCutoff: {
      const double s2 = config.spin_cutoff * config.spin_cutoff;
      return std::exp(-residual_spin * (residual_spin + 1.0) / (2.0 * s2));
    }
  }
  return 1.0;
}

void ShapeParams::validate() const {
  for (double v : {A, B, C, r})
    if (!(std::isfinite(v) && v >= 0.0))
      throw std::invalid_argument("shape parameters must be finite and non-negative");
}

std::vector<TermAmplitude> enumerate_terms(const ChannelConfig& config) {
  config.validate();
  const auto multipoles = sorted_unique(config.multipoles);
  const auto exits = sorted_unique(config.exit_orbitals);

  std::vector<TermAmplitude> terms;
  for (int L1 : multipoles)
    for (int L2 : multipoles)
      for (int l1 : entrance_orbitals(L1))
        for (int l2 : entrance_orbitals(L2))
          for (int lp1 : exits)
            for (int lp2 : exits) {
              // Same-spin pairs share parity, so |l1'-l2'| is even; opposite
              // parities need it odd.
              const bool cross = L1 != L2;
              if ((std::abs(lp1 - lp2) % 2 == 1) != cross) continue;

              const int spin_lo = std::max(std::abs(lp1 - L1), std::abs(lp2 - L2));
              const int spin_hi = std::min(lp1 + L1, lp2 + L2);
              for (int spin = spin_lo; spin <= spin_hi; ++spin) {
                const int rank_hi = std::min({L1 + L2, l1 + l2, lp1 + lp2});
                for (int rank = 0; rank <= rank_hi; ++rank) {
                  if (!angmom::triangle_ok(j(L1), j(L2), j(rank)) ||
                      !angmom::triangle_ok(j(l1), j(l2), j(rank)) ||
                      !angmom::triangle_ok(j(lp1), j(lp2), j(rank)))
                    continue;
                  if ((l1 + l2 + rank) % 2 != 0 || (lp1 + lp2 + rank) % 2 != 0) continue;

                  const double real_part =
                      photon_cg(L1, l1) * photon_cg(L2, l2) * ((spin + 1) % 2 == 0 ? 1.0 : -1.0) *
                      angmom::z_coeff(j(l1), j(L1), j(l2), j(L2), j(1), j(rank)) *
                      angmom::z_coeff(j(lp1), j(L1), j(lp2), j(L2), j(spin), j(rank)) *
                      residual_spin_weight(config, spin);
                  terms.push_back({L1, L2, l1, l2, lp1, lp2, spin, rank,
                                   i_power(L2 - L1 + l1 - l2) * real_part});
                }
              }
            }
  return terms;
}

double correlation_factor(int L1, int L2, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("correlation_factor: r must be non-negative");
  if (L1 == L2) return 1.0;
  if (std::isinf(r)) return 0.0;
  return 1.0 / (1.0 + r);
}

double magnitude_factor(const TermAmplitude& term, const ShapeParams& params) {
  return monomial(exponents_of(term), params);
}

RawCoefficients raw_coefficients(std::span<const TermAmplitude> terms,
                                 const ShapeParams& params) {
  params.validate();
  RawCoefficients sums{};
  for (const auto& term : terms) {
    if (term.rank < 0 || term.rank > kMaxRank)
      throw std::logic_error("term rank outside the Legendre series");
    sums[term.rank] += term.geometry * magnitude_factor(term, params) *
                       correlation_factor(term.L1, term.L2, params.r);
  }
  return sums;
}

LegendreSeries realize(const RawCoefficients& raw) {
  const double c0 = raw[0].real();
  if (!(c0 > 0.0))
    throw DegenerateModel("angular model has non-positive isotropic coefficient");
  LegendreSeries series;
  for (int L = 0; L <= kMaxRank; ++L) {
    series.max_imag_residue = std::max(series.max_imag_residue, std::abs(raw[L].imag()) / c0);
    series.c[L] = raw[L].real() / c0;
  }
  if (series.max_imag_residue >= 1e-10)
    throw std::logic_error("angular model produced complex Legendre coefficients");
  series.c[0] = 1.0;
  return series;
}

LegendreSeries legendre_coefficients(const ShapeParams& params, const ChannelConfig& config) {
  const auto terms = enumerate_terms(config);
  return realize(raw_coefficients(terms, params));
}

double cross_section(const LegendreSeries& series, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::invalid_argument("cross_section: theta outside [0, pi]");
  const double x = std::cos(theta);
  double sigma = 0.0;
  for (int L = 0; L <= kMaxRank; ++L) sigma += series.c[L] * angmom::legendre_p(L, x);
  return sigma;
}

double cross_section(const ShapeParams& params, const ChannelConfig& config, double theta) {
  return cross_section(legendre_coefficients(params, config), theta);
}

double asymmetry(const LegendreSeries& series) {
  double forward = 0.0, backward = 0.0;
  for (int L = 0; L <= kMaxRank; ++L) {
    const double h = series.c[L] * hemisphere_integral(L);
    forward += h;
    backward += (L % 2 == 0) ? h : -h;
  }
  if (!(backward > 0.0))
    throw DegenerateModel("asymmetry: backward hemisphere yield is not positive");
  return forward / backward;
}

double asymmetry(const ShapeParams& params, const ChannelConfig& config) {
  return asymmetry(legendre_coefficients(params, config));
}

AngularModel::AngularModel(ChannelConfig config)
    : config_(std::move(config)), terms_(enumerate_terms(config_)) {
  std::map<std::tuple<int, int, int, bool>, RawCoefficients> groups;
  for (const auto& term : terms_) {
    const auto e = exponents_of(term);
    groups[{e.a, e.b, e.c, term.is_cross()}][term.rank] += term.geometry;
  }
  for (const auto& [key, weight] : groups) {
    const auto& [a, b, c, cross] = key;
    monomials_.push_back({a, b, c, cross, weight});
  }
}

RawCoefficients AngularModel::raw(const ShapeParams& params) const {
  params.validate();
  const double cross_factor = correlation_factor(1, 2, params.r);
  RawCoefficients sums{};
  for (const auto& m : monomials_) {
    const double scale = monomial({m.a, m.b, m.c}, params) * (m.cross ? cross_factor : 1.0);
    for (int L = 0; L <= kMaxRank; ++L) sums[L] += m.weight[L] * scale;
  }
  return sums;
}

LegendreSeries AngularModel::coefficients(const ShapeParams& params) const {
  return realize(raw(params));
}

}  // namespace xsym::xsection
