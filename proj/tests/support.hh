#pragma once

// Shared test helpers: Gauss-Legendre nodes built from scratch, and a
// brute-force angular-distribution evaluator that sums the interference terms
// directly with exact-arithmetic coupling coefficients.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "oracle/exact_coupling.hh"
#include "xsym/xsection.hh"

namespace xsym::testing {

// Explicit Legendre polynomials up to order 6, written out term by term.
inline double legendre_explicit(int L, double x) {
  const double x2 = x * x;
  switch (L) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 0.5 * (3 * x2 - 1);
    case 3: return 0.5 * (5 * x2 * x - 3 * x);
    case 4: return (35 * x2 * x2 - 30 * x2 + 3) / 8.0;
    case 5: return (63 * x2 * x2 * x - 70 * x2 * x + 15 * x) / 8.0;
    case 6: return (231 * x2 * x2 * x2 - 315 * x2 * x2 + 105 * x2 - 5) / 16.0;
  }
  return std::nan("");
}

// n-point Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> rule;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.emplace_back(x, 2.0 / ((1 - x * x) * dp * dp));
  }
  return rule;
}

inline double exact_cg(int j1, int m1, int j2, int m2, int J, int M) {
  return oracle::clebsch_gordan(2 * j1, 2 * m1, 2 * j2, 2 * m2, 2 * J, 2 * M).to_double();
}

inline double exact_z(int l1, int j1, int l2, int j2, int s, int L) {
  return oracle::z_coeff(2 * l1, 2 * j1, 2 * l2, 2 * j2, 2 * s, 2 * L).to_double();
}

// sigma(theta) as the literal double sum over compound states and the
// residual spin, with every rank up to 6 included and no selection rule
// applied beyond what the coefficients themselves enforce. Equal residual
// spin weights.
class BruteForceModel {
 public:
  BruteForceModel() {
    for (int L1 : {1, 2})
      for (int L2 : {1, 2})
        for (int l1 : {L1 - 1, L1 + 1})
          for (int l2 : {L2 - 1, L2 + 1})
            for (int lp1 = 0; lp1 <= 2; ++lp1)
              for (int lp2 = 0; lp2 <= 2; ++lp2) {
                if ((std::abs(lp1 - lp2) % 2 == 1) != (L1 != L2)) continue;
                for (int spin = 0; spin <= 4; ++spin)
                  for (int rank = 0; rank <= 6; ++rank) {
                    const double g = exact_cg(L1, -1, 1, 1, l1, 0) * exact_cg(L2, -1, 1, 1, l2, 0) *
                                     exact_z(l1, L1, l2, L2, 1, rank) *
                                     exact_z(lp1, L1, lp2, L2, spin, rank) *
                                     ((spin + 1) % 2 == 0 ? 1.0 : -1.0);
                    if (g == 0.0) continue;
                    const int n = L2 - L1 + l1 - l2;
                    const std::complex<double> phase =
                        std::pow(std::complex<double>(0.0, 1.0), ((n % 4) + 4) % 4);
                    terms_.push_back({L1, L2, lp1, lp2, rank, phase * g});
                  }
              }
  }

  std::complex<double> sigma(const xsection::ShapeParams& p, double x) const {
    std::complex<double> total = 0.0;
    for (const auto& t : terms_) {
      double weight = 1.0;
      for (int L : {t.L1, t.L2})
        if (L == 2) weight *= std::sqrt(p.A);
      for (int lp : {t.lp1, t.lp2}) {
        if (lp == 1) weight *= std::sqrt(p.B);
        if (lp == 2) weight *= std::sqrt(p.C);
      }
      if (t.L1 != t.L2) weight /= 1.0 + p.r;
      total += t.geometry * weight * legendre_explicit(t.rank, x);
    }
    return total;
  }

  // Legendre projection of sigma on `points` Gauss nodes, scaled to c_0 = 1;
  // orders 0..6 and the largest imaginary part seen.
  std::pair<std::vector<double>, double> project(const xsection::ShapeParams& p,
                                                 int points = 19) const {
    std::vector<std::complex<double>> c(7, 0.0);
    double imag = 0.0;
    for (auto [x, w] : gauss_legendre(points)) {
      const auto s = sigma(p, x);
      imag = std::max(imag, std::abs(s.imag()));
      for (int L = 0; L <= 6; ++L) c[L] += 0.5 * (2 * L + 1) * w * s * legendre_explicit(L, x);
    }
    std::vector<double> out;
    for (int L = 0; L <= 6; ++L) out.push_back(c[L].real() / c[0].real());
    return {out, imag / c[0].real()};
  }

 private:
  struct Term {
    int L1, L2, lp1, lp2, rank;
    std::complex<double> geometry;
  };
  std::vector<Term> terms_;
};

inline xsection::ShapeParams random_params(std::mt19937_64& rng, double max_ratio = 2.0,
                                           double max_r = 100.0) {
  std::uniform_real_distribution<double> ratio(0.0, max_ratio), relax(0.0, max_r);
  return {ratio(rng), ratio(rng), ratio(rng), relax(rng)};
}

inline const xsection::ShapeParams kBismuthFit{0.082, 0.47, 0.37, 0.11};

}  // namespace xsym::testing
