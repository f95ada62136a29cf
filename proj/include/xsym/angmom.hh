#pragma once

// Angular-momentum coupling coefficients (Clebsch-Gordan, 6j, Racah W,
// Blatt-Biedenharn Z) and Legendre polynomials.
//
// Every quantum number is stored doubled so that half-integers are exact:
// spin 3/2 is AngularMomentum{3}, projection -1/2 is Projection{-1}.

#include <array>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string_view>
#include <unordered_map>

namespace xsym::angmom {

struct AngularMomentum {
  int two_j = 0;

  static constexpr AngularMomentum whole(int j) { return {2 * j}; }
  static constexpr AngularMomentum doubled(int two_j) { return {two_j}; }

  constexpr double value() const { return 0.5 * two_j; }
  constexpr bool is_integral() const { return two_j % 2 == 0; }
  friend constexpr auto operator<=>(AngularMomentum, AngularMomentum) = default;
};

struct Projection {
  int two_m = 0;

  static constexpr Projection whole(int m) { return {2 * m}; }
  static constexpr Projection doubled(int two_m) { return {two_m}; }

  constexpr double value() const { return 0.5 * two_m; }
  friend constexpr auto operator<=>(Projection, Projection) = default;
};

// Parses "3/2", "-1/2", "1", "-2" into a doubled integer. Throws
// std::invalid_argument on anything else.
int parse_doubled(std::string_view token);

// Checks two_j >= 0; throws std::invalid_argument otherwise.
void validate(AngularMomentum j);
// Checks |m| <= j and matching parity; throws std::invalid_argument otherwise.
void validate(AngularMomentum j, Projection m);

bool triangle_ok(AngularMomentum a, AngularMomentum b, AngularMomentum c);

/// <j1 m1 j2 m2 | J M> in the Condon-Shortley convention.
double clebsch_gordan(AngularMomentum j1, Projection m1, AngularMomentum j2,
                      Projection m2, AngularMomentum J, Projection M);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}.
double wigner_6j(AngularMomentum j1, AngularMomentum j2, AngularMomentum j3,
                 AngularMomentum j4, AngularMomentum j5, AngularMomentum j6);

/// Racah W(abcd; ef) = (-1)^(a+b+c+d) {a b e; d c f}.
double racah_w(AngularMomentum a, AngularMomentum b, AngularMomentum c,
               AngularMomentum d, AngularMomentum e, AngularMomentum f);

/// Blatt-Biedenharn Z(l1 j1 l2 j2; s L) in the original 1952 phase
/// convention, i.e. without the extra i^(l2-l1-L) of the Huby revision:
///   sqrt((2l1+1)(2l2+1)(2j1+1)(2j2+1)) <l1 0 l2 0|L 0> W(l1 j1 l2 j2; s L)
/// Orbital momenta l1, l2 and the rank L must be integral.
double z_coeff(AngularMomentum l1, AngularMomentum j1, AngularMomentum l2,
               AngularMomentum j2, AngularMomentum s, AngularMomentum L);

/// P_L(x) by the Bonnet recurrence. Throws std::invalid_argument for L < 0
/// or |x| > 1.
double legendre_p(int L, double x);

// Largest doubled spin accepted by the coefficient routines (j = 40). The
// log-factorial table covers every factorial these can request.
inline constexpr int kMaxTwoJ = 80;

enum class CoefficientKind : std::int8_t { ClebschGordan, SixJ, RacahW, Z };

/// Canonical key of one coefficient evaluation: the kind plus the six
/// doubled arguments in call order.
struct CouplingKey {
  CoefficientKind kind{};
  std::array<int, 6> args{};
  friend bool operator==(const CouplingKey&, const CouplingKey&) = default;
};

struct CouplingKeyHash {
  std::size_t operator()(const CouplingKey& key) const noexcept;
};

/// Memoizing front end to the coefficient functions. Safe for concurrent
/// readers and writers; the cache is unbounded.
class CoefficientCache {
 public:
  double clebsch_gordan(AngularMomentum j1, Projection m1, AngularMomentum j2,
                        Projection m2, AngularMomentum J, Projection M);
  double wigner_6j(AngularMomentum j1, AngularMomentum j2, AngularMomentum j3,
                   AngularMomentum j4, AngularMomentum j5, AngularMomentum j6);
  double racah_w(AngularMomentum a, AngularMomentum b, AngularMomentum c,
                 AngularMomentum d, AngularMomentum e, AngularMomentum f);
  double z_coeff(AngularMomentum l1, AngularMomentum j1, AngularMomentum l2,
                 AngularMomentum j2, AngularMomentum s, AngularMomentum L);

  std::size_t size() const;
  void clear();

 private:
  template <class Compute>
  double lookup(const CouplingKey& key, Compute&& compute);

  mutable std::shared_mutex mutex_;
  std::unordered_map<CouplingKey, double, CouplingKeyHash> values_;
};

}  // namespace xsym::angmom
