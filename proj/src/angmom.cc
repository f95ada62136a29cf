#include "xsym/angmom.hh"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace xsym::angmom {

namespace {

constexpr int kFactorialTableSize = 200;

struct LogFactorials {
  std::array<double, kFactorialTableSize + 1> values{};
  LogFactorials() {
    for (int n = 0; n <= kFactorialTableSize; ++n)
      values[n] = std::lgamma(static_cast<double>(n) + 1.0);
  }
};

double log_factorial(int n) {
  static const LogFactorials table;
  if (n < 0 || n > kFactorialTableSize)
    throw std::out_of_range("log_factorial: argument " + std::to_string(n) +
                            " outside the factorial table");
  return table.values[n];
}

int phase(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

void check_range(AngularMomentum j) {
  validate(j);
  if (j.two_j > kMaxTwoJ)
    throw std::invalid_argument("angular momentum above j = 40 is not supported");
}

// log of the triangle coefficient Delta(abc); arguments doubled, triad valid.
double log_delta(int a, int b, int c) {
  return 0.5 * (log_factorial((a + b - c) / 2) + log_factorial((a - b + c) / 2) +
                log_factorial((-a + b + c) / 2) - log_factorial((a + b + c) / 2 + 1));
}

bool triad(int a, int b, int c) {
  return triangle_ok({a}, {b}, {c});
}

}  // namespace

int parse_doubled(std::string_view token) {
  auto parse_int = [&](std::string_view s) {
    int value = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw std::invalid_argument("malformed spin token '" + std::string(token) + "'");
    return value;
  };
  const auto slash = token.find('/');
  if (slash == std::string_view::npos) return 2 * parse_int(token);
  if (parse_int(token.substr(slash + 1)) != 2)
    throw std::invalid_argument("spin token '" + std::string(token) +
                                "' must have denominator 2");
  const int numerator = parse_int(token.substr(0, slash));
  if (numerator % 2 == 0)
    throw std::invalid_argument("spin token '" + std::string(token) +
                                "' is not a half-integer");
  return numerator;
}

void validate(AngularMomentum j) {
  if (j.two_j < 0)
    throw std::invalid_argument("negative angular momentum (2j = " +
                                std::to_string(j.two_j) + ")");
}

void validate(AngularMomentum j, Projection m) {
  validate(j);
  if (std::abs(m.two_m) > j.two_j || (j.two_j - m.two_m) % 2 != 0)
    throw std::invalid_argument("projection 2m = " + std::to_string(m.two_m) +
                                " is not allowed for 2j = " + std::to_string(j.two_j));
}

bool triangle_ok(AngularMomentum a, AngularMomentum b, AngularMomentum c) {
  if (a.two_j < 0 || b.two_j < 0 || c.two_j < 0) return false;
  if ((a.two_j + b.two_j + c.two_j) % 2 != 0) return false;
  return std::abs(a.two_j - b.two_j) <= c.two_j && c.two_j <= a.two_j + b.two_j;
}

double clebsch_gordan(AngularMomentum j1, Projection m1, AngularMomentum j2,
                      Projection m2, AngularMomentum J, Projection M) {
  check_range(j1);
  check_range(j2);
  check_range(J);
  validate(j1, m1);
  validate(j2, m2);
  validate(J, M);
  if (M.two_m != m1.two_m + m2.two_m) return 0.0;
  if (!triangle_ok(j1, j2, J)) return 0.0;

  const int a = j1.two_j, b = j2.two_j, c = J.two_j;
  const int ma = m1.two_m, mb = m2.two_m, mc = M.two_m;

  const double log_prefactor =
      0.5 * std::log(static_cast<double>(c + 1)) + log_delta(a, b, c) +
      0.5 * (log_factorial((c + mc) / 2) + log_factorial((c - mc) / 2) +
             log_factorial((a - ma) / 2) + log_factorial((a + ma) / 2) +
             log_factorial((b - mb) / 2) + log_factorial((b + mb) / 2));

  // Integer arguments of the six denominator factorials, at k = 0.
  const int n1 = (a + b - c) / 2;
  const int n2 = (a - ma) / 2;
  const int n3 = (b + mb) / 2;
  const int n4 = (c - b + ma) / 2;
  const int n5 = (c - a - mb) / 2;

  const int k_min = std::max({0, -n4, -n5});
  const int k_max = std::min({n1, n2, n3});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_term = log_factorial(k) + log_factorial(n1 - k) +
                            log_factorial(n2 - k) + log_factorial(n3 - k) +
                            log_factorial(n4 + k) + log_factorial(n5 + k);
    sum += phase(k) * std::exp(log_prefactor - log_term);
  }
  return sum;
}

double wigner_6j(AngularMomentum j1, AngularMomentum j2, AngularMomentum j3,
                 AngularMomentum j4, AngularMomentum j5, AngularMomentum j6) {
  for (auto j : {j1, j2, j3, j4, j5, j6}) check_range(j);
  const int a = j1.two_j, b = j2.two_j, c = j3.two_j;
  const int d = j4.two_j, e = j5.two_j, f = j6.two_j;
  if (!triad(a, b, c) || !triad(a, e, f) || !triad(d, b, f) || !triad(d, e, c))
    return 0.0;

  const double log_prefactor =
      log_delta(a, b, c) + log_delta(a, e, f) + log_delta(d, b, f) + log_delta(d, e, c);

  const int s1 = (a + b + c) / 2;
  const int s2 = (a + e + f) / 2;
  const int s3 = (d + b + f) / 2;
  const int s4 = (d + e + c) / 2;
  const int p1 = (a + b + d + e) / 2;
  const int p2 = (b + c + e + f) / 2;
  const int p3 = (c + a + f + d) / 2;

  const int t_min = std::max({s1, s2, s3, s4});
  const int t_max = std::min({p1, p2, p3});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_term = log_factorial(t + 1) - log_factorial(t - s1) -
                            log_factorial(t - s2) - log_factorial(t - s3) -
                            log_factorial(t - s4) - log_factorial(p1 - t) -
                            log_factorial(p2 - t) - log_factorial(p3 - t);
    sum += phase(t) * std::exp(log_prefactor + log_term);
  }
  return sum;
}

double racah_w(AngularMomentum a, AngularMomentum b, AngularMomentum c,
               AngularMomentum d, AngularMomentum e, AngularMomentum f) {
  const double six_j = wigner_6j(a, b, e, d, c, f);
  if (six_j == 0.0) return 0.0;
  return phase((a.two_j + b.two_j + c.two_j + d.two_j) / 2) * six_j;
}

double z_coeff(AngularMomentum l1, AngularMomentum j1, AngularMomentum l2,
               AngularMomentum j2, AngularMomentum s, AngularMomentum L) {
  for (auto j : {l1, j1, l2, j2, s, L}) check_range(j);
  if (!l1.is_integral() || !l2.is_integral() || !L.is_integral())
    throw std::invalid_argument("z_coeff: l1, l2 and L must be integral");
  if (((l1.two_j + l2.two_j + L.two_j) / 2) % 2 != 0) return 0.0;

  const double cg = clebsch_gordan(l1, {0}, l2, {0}, L, {0});
  if (cg == 0.0) return 0.0;
  const double w = racah_w(l1, j1, l2, j2, s, L);
  if (w == 0.0) return 0.0;
  const double dims = static_cast<double>(l1.two_j + 1) * (l2.two_j + 1) *
                      (j1.two_j + 1) * (j2.two_j + 1);
  return std::sqrt(dims) * cg * w;
}

double legendre_p(int L, double x) {
  if (L < 0) throw std::invalid_argument("legendre_p: negative order");
  if (!(std::abs(x) <= 1.0))
    throw std::invalid_argument("legendre_p: argument outside [-1, 1]");
  if (L == 0) return 1.0;
  double previous = 1.0;
  double current = x;
  for (int n = 1; n < L; ++n) {
    const double next = ((2 * n + 1) * x * current - n * previous) / (n + 1);
    previous = current;
    current = next;
  }
  return current;
}

std::size_t CouplingKeyHash::operator()(const CouplingKey& key) const noexcept {
  std::size_t h = static_cast<std::size_t>(key.kind);
  for (int v : key.args) h = h * 1000003u ^ static_cast<std::size_t>(v + 512);
  return h;
}

template <class Compute>
double CoefficientCache::lookup(const CouplingKey& key, Compute&& compute) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double value = compute();
  std::unique_lock lock(mutex_);
  values_.emplace(key, value);
  return value;
}

double CoefficientCache::clebsch_gordan(AngularMomentum j1, Projection m1,
                                        AngularMomentum j2, Projection m2,
                                        AngularMomentum J, Projection M) {
  const CouplingKey key{CoefficientKind::ClebschGordan,
                        {j1.two_j, m1.two_m, j2.two_j, m2.two_m, J.two_j, M.two_m}};
  return lookup(key, [&] { return angmom::clebsch_gordan(j1, m1, j2, m2, J, M); });
}

double CoefficientCache::wigner_6j(AngularMomentum j1, AngularMomentum j2,
                                   AngularMomentum j3, AngularMomentum j4,
                                   AngularMomentum j5, AngularMomentum j6) {
  const CouplingKey key{CoefficientKind::SixJ,
                        {j1.two_j, j2.two_j, j3.two_j, j4.two_j, j5.two_j, j6.two_j}};
  return lookup(key, [&] { return angmom::wigner_6j(j1, j2, j3, j4, j5, j6); });
}

double CoefficientCache::racah_w(AngularMomentum a, AngularMomentum b,
                                 AngularMomentum c, AngularMomentum d,
                                 AngularMomentum e, AngularMomentum f) {
  const CouplingKey key{CoefficientKind::RacahW,
                        {a.two_j, b.two_j, c.two_j, d.two_j, e.two_j, f.two_j}};
  return lookup(key, [&] { return angmom::racah_w(a, b, c, d, e, f); });
}

double CoefficientCache::z_coeff(AngularMomentum l1, AngularMomentum j1,
                                 AngularMomentum l2, AngularMomentum j2,
                                 AngularMomentum s, AngularMomentum L) {
  const CouplingKey key{CoefficientKind::Z,
                        {l1.two_j, j1.two_j, l2.two_j, j2.two_j, s.two_j, L.two_j}};
  return lookup(key, [&] { return angmom::z_coeff(l1, j1, l2, j2, s, L); });
}

std::size_t CoefficientCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

void CoefficientCache::clear() {
  std::unique_lock lock(mutex_);
  values_.clear();
}

}  // namespace xsym::angmom
