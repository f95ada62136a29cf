// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracle/exact_coupling.hh"
#include "support.hh"
#include "xsym/angmom.hh"
#include "xsym/fitkit.hh"
#include "xsym/thermo.hh"
#include "xsym/xsection.hh"

namespace {

using namespace xsym;
using angmom::AngularMomentum;
using angmom::Projection;
using xsection::ShapeParams;
using xsym::testing::kBismuthFit;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

AngularMomentum J(int two_j) { return AngularMomentum::doubled(two_j); }
Projection M(int two_m) { return Projection::doubled(two_m); }

bool triad(int a, int b, int c) { return (a + b + c) % 2 == 0 && std::abs(a - b) <= c && c <= a + b; }

// 1. Coupling coefficients against the exact oracle, plus orthogonality.
Outcome coefficient_oracle() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> spin(0, 6), kind_pick(0, 3);
  auto pick_in = [&](int lo, int hi, int step) {
    std::uniform_int_distribution<int> d(0, (hi - lo) / step);
    return lo + step * d(rng);
  };
  double worst = 0.0;
  int nonzero = 0;
  for (int n = 0; n < 500;) {
    const int kind = kind_pick(rng);
    double got = 0.0, exact = 0.0;
    if (kind == 0) {
      const int j1 = spin(rng), j2 = spin(rng);
      const int jj = pick_in(std::abs(j1 - j2), j1 + j2, 2);
      const int m1 = pick_in(-j1, j1, 2), m2 = pick_in(-j2, j2, 2);
      if (std::abs(m1 + m2) > jj) continue;
      got = angmom::clebsch_gordan(J(j1), M(m1), J(j2), M(m2), J(jj), M(m1 + m2));
      exact = oracle::clebsch_gordan(j1, m1, j2, m2, jj, m1 + m2).to_double();
    } else if (kind == 1 || kind == 2) {
      int v[6];
      for (int& x : v) x = spin(rng);
      if (!triad(v[0], v[1], v[2]) || !triad(v[0], v[4], v[5]) || !triad(v[3], v[1], v[5]) ||
          !triad(v[3], v[4], v[2]))
        continue;
      if (kind == 1) {
        got = angmom::wigner_6j(J(v[0]), J(v[1]), J(v[2]), J(v[3]), J(v[4]), J(v[5]));
        exact = oracle::wigner_6j(v[0], v[1], v[2], v[3], v[4], v[5]).to_double();
      } else {
        // W(a b c d; e f) = (-1)^(a+b+c+d) {a b e; d c f}
        got = angmom::racah_w(J(v[0]), J(v[1]), J(v[4]), J(v[3]), J(v[2]), J(v[5]));
        exact = oracle::racah_w(v[0], v[1], v[4], v[3], v[2], v[5]).to_double();
      }
    } else {
      const int l1 = 2 * pick_in(0, 3, 1), l2 = 2 * pick_in(0, 3, 1);
      const int L = pick_in(std::abs(l1 - l2), l1 + l2, 4);
      const int j1 = spin(rng), j2 = spin(rng), s = spin(rng);
      if (!triad(l1, j1, s) || !triad(l2, j2, s) || !triad(j1, j2, L)) continue;
      got = angmom::z_coeff(J(l1), J(j1), J(l2), J(j2), J(s), J(L));
      exact = oracle::z_coeff(l1, j1, l2, j2, s, L).to_double();
    }
    worst = std::max(worst, std::abs(got - exact));
    nonzero += exact != 0.0;
    ++n;
  }

  double orth = 0.0;
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int ja = std::abs(j1 - j2); ja <= j1 + j2; ja += 2)
        for (int jb = std::abs(j1 - j2); jb <= j1 + j2; jb += 2)
          for (int mm = -std::min(ja, jb); mm <= std::min(ja, jb); mm += 2) {
            double sum = 0.0;
            for (int m1 = -j1; m1 <= j1; m1 += 2)
              if (std::abs(mm - m1) <= j2)
                sum += angmom::clebsch_gordan(J(j1), M(m1), J(j2), M(mm - m1), J(ja), M(mm)) *
                       angmom::clebsch_gordan(J(j1), M(m1), J(j2), M(mm - m1), J(jb), M(mm));
            orth = std::max(orth, std::abs(sum - (ja == jb)));
          }
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int d = 0; d <= 6; ++d)
        for (int e = 0; e <= 6; ++e)
          for (int f = 0; f <= 6; ++f)
            for (int g = 0; g <= 6; ++g) {
              if (!triad(a, e, f) || !triad(d, b, f) || !triad(a, e, g) || !triad(d, b, g)) continue;
              double sum = 0.0;
              for (int c = 0; c <= 12; ++c)
                sum += (c + 1.0) * (f + 1.0) *
                       angmom::wigner_6j(J(a), J(b), J(c), J(d), J(e), J(f)) *
                       angmom::wigner_6j(J(a), J(b), J(c), J(d), J(e), J(g));
              orth = std::max(orth, std::abs(sum - (f == g)));
            }
  return {worst < 1e-12 && orth < 1e-12 && nonzero > 250,
          fmt("500 samples (%d nonzero): max |err| %.1e; orthogonality %.1e", nonzero, worst, orth)};
}

// 2. Realness, parity scaling and truncation on a random grid.
Outcome model_structure() {
  std::mt19937_64 rng(77);
  const xsection::AngularModel model;
  double imag = 0.0, odd_drift = 0.0, affine = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto p = xsym::testing::random_params(rng);
    const auto series = model.coefficients(p);
    imag = std::max(imag, series.max_imag_residue);
    // (1 + r) c_odd at two other r values.
    for (double r2 : {0.0, 3.7}) {
      const auto other = model.coefficients({p.A, p.B, p.C, r2});
      for (int L : {1, 3})
        odd_drift = std::max(odd_drift, std::abs((1 + p.r) * series.c[L] - (1 + r2) * other.c[L]));
    }
    // Even sums before the c_0 = 1 scaling: line through A = 0, 1 checked at
    // p.A and at 2.5.
    const auto r0 = model.raw({0.0, p.B, p.C, p.r}), r1 = model.raw({1.0, p.B, p.C, p.r});
    for (double a : {p.A, 2.5}) {
      const auto ra = model.raw({a, p.B, p.C, p.r});
      for (int L : {0, 2, 4}) {
        const double line = r0[L].real() + a * (r1[L].real() - r0[L].real());
        affine = std::max(affine, std::abs(ra[L].real() - line));
      }
    }
  }
  int max_rank = 0;
  for (const auto& t : model.terms()) max_rank = std::max(max_rank, t.rank);
  return {imag < 1e-10 && odd_drift < 1e-10 && affine < 1e-10 && max_rank <= 4,
          fmt("imag %.1e; (1+r)c_odd drift %.1e; even affine residual %.1e; max rank %d", imag,
              odd_drift, affine, max_rank)};
}

// 3. Bohr limit.
Outcome bohr_limit() {
  const auto series = xsection::legendre_coefficients({0.082, 0.47, 0.37, 1e12});
  const double pi = std::numbers::pi, mid = xsection::cross_section(series, pi / 2);
  double worst = 0.0;
  for (int i = 0; i <= 1800; ++i) {
    const double th = pi * i / 1800;
    worst = std::max(worst, std::abs(xsection::cross_section(series, th) -
                                     xsection::cross_section(series, pi - th)) / mid);
  }
  return {worst < 1e-10, fmt("max |sigma(t) - sigma(pi - t)| / sigma(90) = %.1e", worst)};
}

// 4. Brute-force term summation projected on 19 Gauss nodes.
Outcome brute_force() {
  const xsym::testing::BruteForceModel brute;
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = xsym::testing::random_params(rng);
    const auto [expected, imag] = brute.project(p, 19);
    const auto got = xsection::legendre_coefficients(p);
    for (int L = 0; L <= 4; ++L) worst = std::max(worst, std::abs(got.c[L] - expected[L]));
    for (int L = 5; L <= 6; ++L) worst = std::max(worst, std::abs(expected[L]));
  }
  return {worst < 1e-10, fmt("20 parameter sets: max |c_L - c_L(brute)| = %.1e", worst)};
}

// 5. Fit round trip and coverage of r.
Outcome fit_round_trip() {
  const std::vector<double> thetas{20, 35, 50, 65, 80, 95, 110, 125, 140, 155};
  const std::vector<double> norms{1.0, 0.8, 1.3};
  const auto exact = fitkit::synth_dataset(kBismuthFit, norms, thetas, 0.0, 1);
  const auto f = fitkit::fit_angular(exact, {})[0];
  double rel = 0.0;
  for (auto [got, want] : {std::pair{f.params.A, 0.082}, {f.params.B, 0.47}, {f.params.C, 0.37},
                           {f.params.r, 0.11}})
    rel = std::max(rel, std::abs(got / want - 1));
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto noisy = fitkit::synth_dataset(kBismuthFit, norms, thetas, 0.05, seed);
    const auto g = fitkit::fit_angular(noisy, {})[0];
    covered += std::abs(std::log1p(0.11) - std::log1p(g.params.r)) <= g.log1p_r_sigma();
  }
  return {rel < 1e-4 && f.chi2 < 1e-10 && covered >= 85,
          fmt("zero noise: max rel err %.1e, chi2 %.1e; 5%% noise: r covered in %d/100", rel,
              f.chi2, covered)};
}

// 6. Exciton numbers.
Outcome exciton() {
  const auto pb = thermo::exciton_report(208, 6.3);
  const auto bi = thermo::exciton_report(209, 14.0);
  const bool ok = std::abs(pb.n_bar - 14.2) <= 0.3 && std::abs(pb.n_sigma - 2.66) <= 0.005 &&
                  std::abs(pb.t_low - 0.38) <= 0.01 && std::abs(pb.t_high - 0.55) <= 0.01 &&
                  std::abs(bi.t_low - 0.57) <= 0.01 && std::abs(bi.t_high - 0.78) <= 0.01;
  return {ok, fmt("A=208: n=%.2f sigma=%.3f T=[%.3f, %.3f]; A=209: T=[%.3f, %.3f]", pb.n_bar,
                  pb.n_sigma, pb.t_low, pb.t_high, bi.t_low, bi.t_high)};
}

// 7. Timescales.
Outcome times() {
  const auto t = thermo::timescales(0.11, 0.1, 2.0, 1e-16);
  const double ratio = t.tau_ph / t.tau_th;
  const bool ok = t.beta / 0.01 <= 1.2 && t.beta / 0.01 >= 1 / 1.2 &&
                  std::abs(t.tau_ph / 6e-14 - 1) <= 0.05 && std::abs(t.tau_th / 3e-22 - 1) <= 0.15 &&
                  std::abs(ratio / 1.8e8 - 1) <= 0.05 && std::abs(std::log10(t.t_heisenberg / 1e-5)) <= 1 &&
                  std::abs(std::log10(t.n_eff / 1e16)) <= 1;
  return {ok, fmt("beta %.3g eV, tau_ph %.3g s, tau_th %.3g s, ratio %.3g, t_H %.3g s, N_eff %.3g",
                  t.beta, t.tau_ph, t.tau_th, ratio, t.t_heisenberg, t.n_eff)};
}

// 8. Temperature from a synthetic spectrum scaled by eps sigma_inv.
Outcome temperature() {
  const thermo::NucleusSpec lead{208, 82, 0.0};
  const thermo::InverseCrossSection sigma(lead);
  auto spectrum = [&](double noise, std::uint64_t seed) {
    fitkit::NormalStream rng(seed);
    std::vector<thermo::SpectrumPoint> out;
    for (int i = 0; i < 20; ++i) {
      const double eps = 1.0 + 7.0 * i / 19;
      const double expected = 1e4 * eps * sigma(eps) * std::exp(-(eps - 1) / 0.55);
      out.push_back({eps, expected * (1 + noise * rng.normal()), (noise > 0 ? noise : 0.05) * expected});
    }
    return thermo::scale_spectrum(out, sigma);
  };
  const auto exact = thermo::fit_temperature(spectrum(0.0, 1), 8.0);
  int within = 0;
  double worst_pull = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto f = thermo::fit_temperature(spectrum(0.05, seed), 8.0);
    const double pull = std::abs(f.temperature - 0.55) / f.temperature_err;
    worst_pull = std::max(worst_pull, pull);
    within += pull <= 3;
  }
  return {std::abs(exact.temperature / 0.55 - 1) <= 0.01 && within == 100,
          fmt("zero noise T = %.6f MeV; 5%% noise: %d/100 seeds within 3 SE (max pull %.2f)",
              exact.temperature, within, worst_pull)};
}

// 9. Asymmetry relaxes monotonically toward 1.
Outcome asymmetry() {
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  std::string values;
  for (double r : {0.0, 0.11, 0.5, 1.0, 10.0, 1e3}) {
    const double u = xsection::asymmetry(ShapeParams{0.082, 0.47, 0.37, r});
    monotone &= std::abs(u - 1) < previous;
    previous = std::abs(u - 1);
    values += fmt(" %.4f", u);
  }
  const double fitted = xsection::asymmetry(kBismuthFit);
  return {monotone && std::abs(fitted - 1) > 0.05,
          fmt("U(r) =%s; fitted Bi(gamma,p) parameters U = %.4f", values.c_str(), fitted)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "coefficient oracle agreement", 5, coefficient_oracle},
      {2, "model structure", 5, model_structure},
      {3, "Bohr-limit symmetry", 0, bohr_limit},
      {4, "brute-force equivalence", 0, brute_force},
      {5, "fit round trip and coverage", 60, fit_round_trip},
      {6, "exciton numbers", 0, exciton},
      {7, "timescales", 0, times},
      {8, "temperature extraction", 0, temperature},
      {9, "asymmetry monotonicity", 0, asymmetry},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s <= 0 || seconds < c.time_limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::string limit = c.time_limit_s > 0 ? fmt(" (limit %.0f s)", c.time_limit_s) : "";
    std::printf("%s  %d  %-30s %s [%.2f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds, limit.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
