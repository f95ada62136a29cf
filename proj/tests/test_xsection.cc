#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "support.hh"
#include "xsym/errors.hh"
#include "xsym/xsection.hh"

namespace {

using namespace xsym::xsection;
using xsym::testing::kBismuthFit;

constexpr double kPi = std::numbers::pi;

TEST(Terms, SelectionRulesHold) {
  const auto terms = enumerate_terms({});
  ASSERT_FALSE(terms.empty());
  for (const auto& t : terms) {
    EXPECT_LE(t.rank, kMaxRank);
    EXPECT_LE(t.lp1, 2);
    EXPECT_LE(t.lp2, 2);
    EXPECT_TRUE(t.l1 == t.L1 - 1 || t.l1 == t.L1 + 1);
    EXPECT_TRUE(t.l2 == t.L2 - 1 || t.l2 == t.L2 + 1);
    EXPECT_EQ(std::abs(t.lp1 - t.lp2) % 2 == 1, t.is_cross());
    if (t.rank % 2 == 1) EXPECT_TRUE(t.is_cross());
    EXPECT_LE(std::abs(t.lp1 - t.L1), t.residual_spin);
    EXPECT_LE(t.residual_spin, t.lp1 + t.L1);
    EXPECT_LE(std::abs(t.lp2 - t.L2), t.residual_spin);
    EXPECT_LE(t.residual_spin, t.lp2 + t.L2);
    EXPECT_EQ((t.l1 + t.l2 + t.rank) % 2, 0);
    EXPECT_EQ((t.lp1 + t.lp2 + t.rank) % 2, 0);
    EXPECT_NE(t.geometry, std::complex<double>(0.0, 0.0));
  }
}

TEST(Terms, SwapPartnersAreConjugate) {
  const auto terms = enumerate_terms({});
  std::map<std::tuple<int, int, int, int, int, int, int, int>, std::complex<double>> index;
  for (const auto& t : terms)
    index[{t.L1, t.L2, t.l1, t.l2, t.lp1, t.lp2, t.residual_spin, t.rank}] = t.geometry;
  for (const auto& t : terms) {
    const auto it = index.find({t.L2, t.L1, t.l2, t.l1, t.lp2, t.lp1, t.residual_spin, t.rank});
    ASSERT_NE(it, index.end());
    EXPECT_NEAR(std::abs(it->second - std::conj(t.geometry)), 0.0, 1e-13);
  }
}

TEST(Terms, DipoleOnlyHasNoOddRank) {
  ChannelConfig config;
  config.multipoles = {1};
  for (const auto& t : enumerate_terms(config)) EXPECT_TRUE(t.rank == 0 || t.rank == 2);
}

TEST(Config, RejectsUnsupportedChannels) {
  ChannelConfig bad;
  bad.exit_orbitals = {0, 3};
  EXPECT_THROW(enumerate_terms(bad), std::invalid_argument);
  bad = {};
  bad.multipoles = {1, 3};
  EXPECT_THROW(enumerate_terms(bad), std::invalid_argument);
  bad = {};
  bad.multipoles = {};
  EXPECT_THROW(enumerate_terms(bad), std::invalid_argument);
  EXPECT_THROW((ShapeParams{-0.1, 1, 1, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((ShapeParams{1, 1, std::nan(""), 0}.validate()), std::invalid_argument);
}

TEST(Factors, CorrelationAndMagnitude) {
  EXPECT_EQ(correlation_factor(1, 1, 123.0), 1.0);
  EXPECT_NEAR(correlation_factor(1, 2, 0.11), 1.0 / 1.11, 1e-15);
  EXPECT_EQ(correlation_factor(1, 2, std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_THROW(correlation_factor(1, 2, -1.0), std::invalid_argument);

  TermAmplitude t;
  t.L1 = t.L2 = 1;
  EXPECT_EQ(magnitude_factor(t, kBismuthFit), 1.0);
  t.L2 = 2;
  t.lp2 = 1;
  EXPECT_NEAR(magnitude_factor(t, kBismuthFit), std::sqrt(0.082 * 0.47), 1e-15);
  t.L1 = 2;
  t.lp1 = t.lp2 = 2;
  EXPECT_NEAR(magnitude_factor(t, kBismuthFit), 0.082 * 0.37, 1e-15);
}

TEST(Coefficients, RealAndTruncated) {
  std::mt19937_64 rng(3);
  const AngularModel model;
  for (int i = 0; i < 200; ++i) {
    const auto p = xsym::testing::random_params(rng);
    const auto raw = model.raw(p);
    for (const auto& c : raw) EXPECT_LT(std::abs(c.imag()), 1e-10 * std::abs(raw[0].real()));
    const auto series = model.coefficients(p);
    EXPECT_EQ(series.c[0], 1.0);
    EXPECT_LT(series.max_imag_residue, 1e-10);
  }
}

TEST(Coefficients, ModelMatchesTermSum) {
  std::mt19937_64 rng(4);
  const AngularModel model;
  for (int i = 0; i < 50; ++i) {
    const auto p = xsym::testing::random_params(rng);
    const auto a = model.raw(p);
    const auto b = raw_coefficients(model.terms(), p);
    for (int L = 0; L <= kMaxRank; ++L) EXPECT_NEAR(std::abs(a[L] - b[L]), 0.0, 1e-12);
  }
}

TEST(Coefficients, ParityScaling) {
  const AngularModel model;
  const double B = 0.47, C = 0.37;
  // Raw odd coefficients scale as sqrt(A)/(1+r); raw even ones are affine in A
  // and independent of r.
  const auto ref = model.raw({1.0, B, C, 0.0});
  for (double A : {0.01, 0.082, 0.7, 1.9})
    for (double r : {0.0, 0.11, 1.0, 10.0}) {
      const auto raw = model.raw({A, B, C, r});
      for (int L : {1, 3})
        EXPECT_NEAR(raw[L].real() * (1 + r) / std::sqrt(A), ref[L].real(), 1e-12);
    }
  const auto e0 = model.raw({0.0, B, C, 0.3}), e1 = model.raw({1.0, B, C, 0.3});
  for (double A : {0.05, 0.5, 3.0})
    for (int L : {0, 2, 4}) {
      const double line = e0[L].real() + A * (e1[L].real() - e0[L].real());
      EXPECT_NEAR(model.raw({A, B, C, 5.0})[L].real(), line, 1e-10);
    }
  // After normalization, (1 + r) c_odd does not depend on r.
  for (int L : {1, 3}) {
    const double base = model.coefficients({0.082, B, C, 0.0}).c[L];
    for (double r : {0.11, 1.0, 10.0})
      EXPECT_NEAR((1 + r) * model.coefficients({0.082, B, C, r}).c[L], base, 1e-12);
  }
}

TEST(Coefficients, NoQuadrupoleMeansSymmetric) {
  const auto series = legendre_coefficients({0.0, 0.47, 0.37, 0.11});
  EXPECT_EQ(series.c[1], 0.0);
  EXPECT_EQ(series.c[3], 0.0);
  EXPECT_EQ(asymmetry(series), 1.0);
}

TEST(Coefficients, MatchBruteForceSum) {
  const xsym::testing::BruteForceModel brute;
  std::mt19937_64 rng(21);
  std::vector<ShapeParams> cases{kBismuthFit, {0.0, 0.0, 0.0, 0.0}, {5.0, 0.1, 3.0, 0.0}};
  for (int i = 0; i < 20; ++i) cases.push_back(xsym::testing::random_params(rng));
  for (const auto& p : cases) {
    const auto [expected, imag] = brute.project(p);
    const auto got = legendre_coefficients(p);
    EXPECT_LT(imag, 1e-12);
    for (int L = 0; L <= kMaxRank; ++L) EXPECT_NEAR(got.c[L], expected[L], 1e-10) << "L=" << L;
    for (int L = kMaxRank + 1; L <= 6; ++L) EXPECT_NEAR(expected[L], 0.0, 1e-12);
  }
}

TEST(CrossSection, BohrLimitIsSymmetric) {
  const ShapeParams p{0.082, 0.47, 0.37, 1e12};
  const auto series = legendre_coefficients(p);
  const double mid = cross_section(series, kPi / 2);
  for (int i = 0; i <= 180; ++i) {
    const double th = kPi * i / 180.0;
    EXPECT_LT(std::abs(cross_section(series, th) - cross_section(series, kPi - th)) / mid, 1e-10);
  }
  EXPECT_NEAR(asymmetry(p), 1.0, 1e-10);
}

TEST(CrossSection, LegendreIdentities) {
  LegendreSeries iso;
  iso.c = {1.0, 0, 0, 0, 0};
  for (double th : {0.0, 0.4, 1.7, kPi}) EXPECT_EQ(cross_section(iso, th), 1.0);
  const auto s = legendre_coefficients(kBismuthFit);
  EXPECT_NEAR(cross_section(s, kPi / 2), s.c[0] - s.c[2] / 2 + 3 * s.c[4] / 8, 1e-15);
  EXPECT_NEAR(cross_section(s, 0.0), s.c[0] + s.c[1] + s.c[2] + s.c[3] + s.c[4], 1e-14);
  EXPECT_NEAR(cross_section(kBismuthFit, {}, 0.7), cross_section(s, 0.7), 1e-15);
  EXPECT_THROW(cross_section(s, -0.1), std::invalid_argument);
  EXPECT_THROW(cross_section(s, 4.0), std::invalid_argument);
}

TEST(Asymmetry, ClosedFormMatchesQuadrature) {
  std::mt19937_64 rng(8);
  std::vector<ShapeParams> cases{kBismuthFit};
  for (int i = 0; i < 20; ++i) cases.push_back(xsym::testing::random_params(rng, 2.0, 3.0));
  for (const auto& p : cases) {
    const auto s = legendre_coefficients(p);
    auto f = [&](double th) { return cross_section(s, th) * std::sin(th); };
    using boost::math::quadrature::gauss_kronrod;
    const double fwd = gauss_kronrod<double, 31>::integrate(f, 0.0, kPi / 2, 15, 1e-14);
    const double bwd = gauss_kronrod<double, 31>::integrate(f, kPi / 2, kPi, 15, 1e-14);
    EXPECT_NEAR(asymmetry(s), fwd / bwd, 1e-8 * fwd / bwd);
  }
}

TEST(Asymmetry, ForwardPeakedAndRelaxesWithR) {
  const double u = asymmetry(kBismuthFit);
  EXPECT_GT(u, 1.05);
  EXPECT_NEAR(u, 1.1664, 5e-4);
  double previous = std::numeric_limits<double>::infinity();
  for (double r : {0.0, 0.11, 0.5, 1.0, 10.0, 1e3}) {
    const double ur = asymmetry(ShapeParams{0.082, 0.47, 0.37, r});
    EXPECT_LT(std::abs(ur - 1.0), previous);
    previous = std::abs(ur - 1.0);
  }
  for (double th : {30.0, 45.0, 60.0, 75.0}) {
    const double a = th * kPi / 180;
    EXPECT_GT(cross_section(kBismuthFit, {}, a), cross_section(kBismuthFit, {}, kPi - a));
  }
}

TEST(Weighting, AlternativesChangeTheShapeOnly) {
  EXPECT_EQ(residual_spin_weight({}, 3), 1.0);
  ChannelConfig mult;
  mult.weighting = SpinWeighting::Multiplicity;
  EXPECT_EQ(residual_spin_weight(mult, 3), 7.0);
  ChannelConfig cut;
  cut.weighting = SpinWeighting::SpinCutoff;
  cut.spin_cutoff = 2.0;
  EXPECT_NEAR(residual_spin_weight(cut, 2), std::exp(-6.0 / 8.0), 1e-15);
  for (const auto& config : {mult, cut}) {
    const auto s = legendre_coefficients(kBismuthFit, config);
    EXPECT_EQ(s.c[0], 1.0);
    EXPECT_LT(s.max_imag_residue, 1e-10);
  }
}

TEST(Degenerate, RealizeRejectsBadSeries) {
  RawCoefficients zero{};
  EXPECT_THROW(realize(zero), xsym::DegenerateModel);
  RawCoefficients complex_series{};
  complex_series[0] = 1.0;
  complex_series[2] = {0.1, 1e-6};
  EXPECT_THROW(realize(complex_series), std::logic_error);
}

}  // namespace
