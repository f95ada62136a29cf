#include "xsym/fitkit.hh"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "xsym/angmom.hh"
#include "xsym/errors.hh"

namespace xsym::fitkit {

namespace {

constexpr int kShapeCount = 4;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Multi-start box for the shape parameters.
constexpr std::array<double, kShapeCount> kStartLow{1e-3, 1e-3, 1e-3, 1e-3};
constexpr std::array<double, kShapeCount> kStartHigh{10.0, 10.0, 10.0, 100.0};
// Hard bounds the optimizer may not leave.
constexpr std::array<double, kShapeCount> kBoundLow{1e-10, 1e-10, 1e-10, 0.0};
constexpr std::array<double, kShapeCount> kBoundHigh{1e4, 1e4, 1e4, 1e8};

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

// Radical inverse in the given prime base: the Halton sequence.
double halton(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

// Optimizer coordinates. Log mode uses (log A, log B, log C, log(1+r),
// log norms), which are also the coordinates of the reported covariance;
// linear mode uses the raw values.
class Problem {
 public:
  Problem(const ChiSquare& chi, Parameterization parameterization)
      : chi_(chi), parameterization_(parameterization) {
    const std::size_t n = kShapeCount + chi.n_datasets();
    lower_.resize(n);
    upper_.resize(n);
    for (int i = 0; i < kShapeCount; ++i) {
      lower_[i] = to_coordinate(i, kBoundLow[i]);
      upper_[i] = to_coordinate(i, kBoundHigh[i]);
    }
    for (std::size_t i = kShapeCount; i < n; ++i) {
      lower_[i] = log_space() ? -700.0 : 0.0;
      upper_[i] = log_space() ? 700.0 : 1e300;
    }
  }

  bool log_space() const { return parameterization_ == Parameterization::Log; }
  std::size_t size() const { return lower_.size(); }
  std::size_t n_points() const { return chi_.n_points(); }

  double to_coordinate(Eigen::Index i, double value) const {
    if (!log_space()) return value;
    return i == 3 ? std::log1p(value) : std::log(value);
  }
  double from_coordinate(Eigen::Index i, double x) const {
    if (!log_space()) return x;
    return i == 3 ? std::expm1(x) : std::exp(x);
  }

  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lower_).cwiseMin(upper_);
  }

  void unpack(const Eigen::VectorXd& x, ShapeParams& params, std::vector<double>& norms) const {
    params = {from_coordinate(0, x[0]), from_coordinate(1, x[1]), from_coordinate(2, x[2]),
              from_coordinate(3, x[3])};
    norms.resize(size() - kShapeCount);
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(kShapeCount + i);
      norms[i] = from_coordinate(k, x[k]);
    }
  }

  bool residuals(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    ShapeParams params;
    std::vector<double> norms;
    unpack(x, params, norms);
    f.resize(static_cast<Eigen::Index>(chi_.n_points()));
    try {
      chi_.residuals(params, norms, f);
    } catch (const DegenerateModel&) {
      return false;
    } catch (const std::invalid_argument&) {
      return false;
    }
    return f.allFinite();
  }

  double chi2(const Eigen::VectorXd& x) const {
    Eigen::VectorXd f;
    return residuals(x, f) ? f.squaredNorm() : kInf;
  }

  // Finite-difference step for coordinate i at x.
  double step(const Eigen::VectorXd& x, Eigen::Index i, double relative) const {
    if (log_space()) return relative;
    return relative * std::max(std::abs(x[i]), 1e-6);
  }

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  // Differences are taken forward where a backward step would leave the box.
  bool forward_only(const Eigen::VectorXd& x, Eigen::Index i, double h) const {
    return x[i] - h < lower_[i];
  }

 private:
  const ChiSquare& chi_;
  Parameterization parameterization_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

bool jacobian(const Problem& problem, const Eigen::VectorXd& x, Eigen::MatrixXd& J) {
  const auto n = static_cast<Eigen::Index>(problem.size());
  J.resize(static_cast<Eigen::Index>(problem.n_points()), n);
  Eigen::VectorXd f_plus, f_minus;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = problem.step(x, i, 1e-6);
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    if (problem.forward_only(x, i, h)) {
      if (!problem.residuals(xp, f_plus) || !problem.residuals(x, f_minus)) return false;
      J.col(i) = (f_plus - f_minus) / h;
    } else {
      xm[i] -= h;
      if (!problem.residuals(xp, f_plus) || !problem.residuals(xm, f_minus)) return false;
      J.col(i) = (f_plus - f_minus) / (2.0 * h);
    }
  }
  return true;
}

struct RunOutcome {
  Eigen::VectorXd x;
  double chi2 = kInf;
  double start_chi2 = kInf;
  bool converged = false;
};

RunOutcome levenberg_marquardt(const Problem& problem, Eigen::VectorXd x,
                               const FitOptions& options) {
  RunOutcome out;
  x = problem.clamp(x);
  Eigen::VectorXd f;
  if (!problem.residuals(x, f)) {
    out.x = x;
    return out;
  }
  double chi2 = f.squaredNorm();
  out.start_chi2 = chi2;

  double lambda = 1e-3;
  Eigen::MatrixXd J;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (chi2 < 1e-30) {
      out.converged = true;
      break;
    }
    if (!jacobian(problem, x, J)) break;
    const Eigen::VectorXd gradient = J.transpose() * f;
    const Eigen::MatrixXd normal = J.transpose() * J;

    // Coordinates pinned on a bound with the gradient pushing outward stay
    // fixed; the step is solved over the rest.
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const bool pinned_low = x[i] <= problem.lower()[i] && gradient[i] > 0.0;
      const bool pinned_high = x[i] >= problem.upper()[i] && gradient[i] < 0.0;
      if (!pinned_low && !pinned_high) free.push_back(i);
    }
    if (free.empty()) {
      out.converged = true;
      break;
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd reduced(m, m);
    Eigen::VectorXd reduced_gradient(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      reduced_gradient[a] = gradient[free[a]];
      for (Eigen::Index b = 0; b < m; ++b) reduced(a, b) = normal(free[a], free[b]);
    }

    bool improved = false;
    double decrease = 0.0;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = reduced;
      for (Eigen::Index i = 0; i < m; ++i)
        damped(i, i) += lambda * std::max(reduced(i, i), 1e-12);
      const Eigen::VectorXd delta = damped.ldlt().solve(reduced_gradient);
      Eigen::VectorXd trial = x;
      for (Eigen::Index a = 0; a < m; ++a) trial[free[a]] -= delta[a];
      trial = problem.clamp(trial);
      Eigen::VectorXd f_trial;
      if (trial != x && problem.residuals(trial, f_trial)) {
        const double chi2_trial = f_trial.squaredNorm();
        if (chi2_trial < chi2) {
          decrease = chi2 - chi2_trial;
          x = trial;
          f = std::move(f_trial);
          chi2 = chi2_trial;
          lambda = std::max(lambda / 10.0, 1e-12);
          improved = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    // No downhill step at any damping: a minimum to finite-difference
    // precision.
    if (!improved || decrease <= options.tol * chi2) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.chi2 = chi2;
  return out;
}

// Hessian of chi^2/2 by finite differences in optimizer coordinates:
// central stencils, forward ones for coordinates sitting on a lower bound.
Eigen::MatrixXd hessian_half_chi2(const Problem& problem, const Eigen::VectorXd& x) {
  struct Tap {
    double offset;
    double weight;
  };
  const auto n = static_cast<Eigen::Index>(problem.size());
  std::vector<std::vector<Tap>> first(n), second(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = problem.step(x, i, 1e-4);
    if (problem.forward_only(x, i, 2.0 * h)) {
      first[i] = {{h, 1.0 / h}, {0.0, -1.0 / h}};
      second[i] = {{2.0 * h, 1.0 / (h * h)}, {h, -2.0 / (h * h)}, {0.0, 1.0 / (h * h)}};
    } else {
      first[i] = {{h, 0.5 / h}, {-h, -0.5 / h}};
      second[i] = {{h, 1.0 / (h * h)}, {0.0, -2.0 / (h * h)}, {-h, 1.0 / (h * h)}};
    }
  }
  auto f = [&](const Eigen::VectorXd& y) { return 0.5 * problem.chi2(y); };

  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diagonal = 0.0;
    for (const Tap& t : second[i]) {
      Eigen::VectorXd y = x;
      y[i] += t.offset;
      diagonal += t.weight * f(y);
    }
    H(i, i) = diagonal;
    for (Eigen::Index k = 0; k < i; ++k) {
      double mixed = 0.0;
      for (const Tap& a : first[i])
        for (const Tap& b : first[k]) {
          Eigen::VectorXd y = x;
          y[i] += a.offset;
          y[k] += b.offset;
          mixed += a.weight * b.weight * f(y);
        }
      H(i, k) = H(k, i) = mixed;
    }
  }
  return H;
}

// Inverse of a symmetric matrix with eigenvalues floored so that flat or
// non-convex directions come out as huge variances.
Eigen::MatrixXd floored_inverse(const Eigen::MatrixXd& H) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double largest = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inverse(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    inverse[i] = 1.0 / std::max(values[i], largest * 1e-16);
  return solver.eigenvectors() * inverse.asDiagonal() * solver.eigenvectors().transpose();
}

std::vector<double> initial_norms(const ChiSquare& chi, std::span<const AngularDataset> datasets,
                                  const ShapeParams& params) {
  std::vector<double> norms(datasets.size(), 1.0);
  std::vector<double> model;
  try {
    model = chi.model_values(params);
  } catch (const DegenerateModel&) {
    return norms;
  }
  std::size_t k = 0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    double num = 0.0, den = 0.0;
    for (const auto& p : datasets[d].points) {
      const double w = 1.0 / (p.err * p.err);
      num += w * p.yield * model[k];
      den += w * model[k] * model[k];
      ++k;
    }
    if (num > 0.0 && den > 0.0) norms[d] = num / den;
  }
  return norms;
}

FitResult fit_joint(std::span<const AngularDataset> datasets,
                    const xsection::AngularModel& model, const FitOptions& options) {
  for (const auto& d : datasets) validate(d);
  const ChiSquare chi(datasets, model);
  const int n_par = kShapeCount + static_cast<int>(datasets.size());
  const int dof = static_cast<int>(chi.n_points()) - n_par;
  if (dof <= 0)
    throw Underdetermined("fit has " + std::to_string(chi.n_points()) + " points for " +
                          std::to_string(n_par) + " parameters");
  if (options.n_starts < 1) throw std::invalid_argument("fit needs at least one start");

  const Problem problem(chi, options.parameterization);

  std::array<double, kShapeCount> shift{};
  if (options.seed != 0) {
    NormalStream stream(options.seed);
    for (auto& s : shift) s = stream.uniform();
  }
  constexpr std::array<unsigned, kShapeCount> bases{2, 3, 5, 7};

  std::vector<Eigen::VectorXd> starts;
  for (int s = 0; s < options.n_starts; ++s) {
    ShapeParams p;
    std::array<double, kShapeCount> values{};
    for (int i = 0; i < kShapeCount; ++i) {
      double u = halton(static_cast<std::uint64_t>(s) + 1, bases[i]) + shift[i];
      u -= std::floor(u);
      const double lo = std::log(kStartLow[i]), hi = std::log(kStartHigh[i]);
      values[i] = std::exp(lo + u * (hi - lo));
    }
    p = {values[0], values[1], values[2], values[3]};
    const auto norms = initial_norms(chi, datasets, p);
    Eigen::VectorXd x(n_par);
    for (int i = 0; i < kShapeCount; ++i) x[i] = problem.to_coordinate(i, values[i]);
    for (std::size_t d = 0; d < norms.size(); ++d) {
      const auto k = static_cast<Eigen::Index>(kShapeCount + d);
      x[k] = problem.to_coordinate(k, norms[d]);
    }
    starts.push_back(std::move(x));
  }

  std::vector<RunOutcome> outcomes(starts.size());
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(starts.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < starts.size(); s = next++)
      outcomes[s] = levenberg_marquardt(problem, starts[s], options);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Best converged start, ties to the lowest index.
  std::size_t best = outcomes.size();
  for (std::size_t s = 0; s < outcomes.size(); ++s) {
    if (!outcomes[s].converged || !std::isfinite(outcomes[s].chi2)) continue;
    if (best == outcomes.size() || outcomes[s].chi2 < outcomes[best].chi2) best = s;
  }
  if (best == outcomes.size())
    throw NoConvergence("none of " + std::to_string(outcomes.size()) + " fit starts converged");

  FitResult result;
  const RunOutcome& winner = outcomes[best];
  problem.unpack(winner.x, result.params, result.norms);
  for (const auto& d : datasets) result.labels.push_back(d.bin_label);
  result.chi2 = winner.chi2;
  result.dof = dof;
  result.converged = true;
  for (const auto& o : outcomes) {
    result.start_chi2.push_back(o.start_chi2);
    if (o.converged &&
        std::abs(o.chi2 - winner.chi2) <= options.agreement_tol * std::max(winner.chi2, 1.0))
      ++result.n_starts_agreeing;
  }

  // Covariance in optimizer coordinates, mapped to the reported logs.
  const Eigen::MatrixXd optimizer_cov = floored_inverse(hessian_half_chi2(problem, winner.x));
  Eigen::VectorXd jac(n_par);
  const double r = result.params.r;
  if (problem.log_space()) {
    jac.setOnes();
  } else {
    const ShapeParams& p = result.params;
    jac[0] = 1.0 / p.A;
    jac[1] = 1.0 / p.B;
    jac[2] = 1.0 / p.C;
    jac[3] = 1.0 / (1.0 + r);
    for (std::size_t d = 0; d < result.norms.size(); ++d)
      jac[kShapeCount + static_cast<Eigen::Index>(d)] = 1.0 / result.norms[d];
  }
  result.covariance = jac.asDiagonal() * optimizer_cov * jac.asDiagonal();
  result.covariance = 0.5 * (result.covariance + result.covariance.transpose()).eval();

  const Eigen::VectorXd variances = result.covariance.diagonal();
  result.identifiable = variances.allFinite() &&
                        variances.maxCoeff() <= options.identifiability_threshold;
  return result;
}

}  // namespace

void validate(const AngularDataset& dataset) {
  const auto& pts = dataset.points;
  if (pts.size() < 5)
    throw Underdetermined("dataset '" + dataset.bin_label + "' has " +
                          std::to_string(pts.size()) + " points, need at least 5");
  for (const auto& p : pts) {
    if (!(p.theta_deg > 0.0 && p.theta_deg < 180.0))
      throw std::invalid_argument("dataset '" + dataset.bin_label +
                                  "': angle outside (0, 180) degrees");
    if (!(p.err > 0.0) || !std::isfinite(p.err) || !std::isfinite(p.yield))
      throw std::invalid_argument("dataset '" + dataset.bin_label +
                                  "': errors must be positive and finite");
  }
  const bool single_angle = std::all_of(pts.begin(), pts.end(), [&](const AngularPoint& p) {
    return p.theta_deg == pts.front().theta_deg;
  });
  if (single_angle)
    throw Underdetermined("dataset '" + dataset.bin_label + "' has a single angle");
}

ChiSquare::ChiSquare(std::span<const AngularDataset> datasets,
                     const xsection::AngularModel& model)
    : model_(&model) {
  offsets_.push_back(0);
  for (const auto& d : datasets) {
    for (const auto& p : d.points) {
      Point point;
      const double theta = radians(p.theta_deg);
      if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw std::invalid_argument("angle outside [0, 180] degrees");
      const double x = std::cos(theta);
      for (int L = 0; L <= xsection::kMaxRank; ++L)
        point.legendre[L] = angmom::legendre_p(L, x);
      point.yield = p.yield;
      if (!(p.err > 0.0)) throw std::invalid_argument("errors must be positive");
      point.inv_err = 1.0 / p.err;
      points_.push_back(point);
    }
    offsets_.push_back(points_.size());
  }
}

void ChiSquare::residuals(const ShapeParams& params, std::span<const double> norms,
                          Eigen::Ref<Eigen::VectorXd> out) const {
  if (norms.size() != n_datasets())
    throw std::invalid_argument("chi_square: " + std::to_string(norms.size()) +
                                " norms for " + std::to_string(n_datasets()) + " datasets");
  const auto series = model_->coefficients(params);
  for (std::size_t d = 0; d < n_datasets(); ++d) {
    for (std::size_t k = offsets_[d]; k < offsets_[d + 1]; ++k) {
      const Point& p = points_[k];
      double sigma = 0.0;
      for (int L = 0; L <= xsection::kMaxRank; ++L) sigma += series.c[L] * p.legendre[L];
      out[static_cast<Eigen::Index>(k)] = (p.yield - norms[d] * sigma) * p.inv_err;
    }
  }
}

double ChiSquare::operator()(const ShapeParams& params, std::span<const double> norms) const {
  Eigen::VectorXd f(static_cast<Eigen::Index>(points_.size()));
  residuals(params, norms, f);
  return f.squaredNorm();
}

std::vector<double> ChiSquare::model_values(const ShapeParams& params) const {
  const auto series = model_->coefficients(params);
  std::vector<double> values;
  values.reserve(points_.size());
  for (const auto& p : points_) {
    double sigma = 0.0;
    for (int L = 0; L <= xsection::kMaxRank; ++L) sigma += series.c[L] * p.legendre[L];
    values.push_back(sigma);
  }
  return values;
}

double chi_square(const ShapeParams& params, std::span<const double> norms,
                  std::span<const AngularDataset> datasets,
                  const xsection::ChannelConfig& config) {
  if (norms.size() != datasets.size())
    throw std::invalid_argument("chi_square: norms and datasets differ in length");
  const xsection::AngularModel model(config);
  return ChiSquare(datasets, model)(params, norms);
}

std::vector<FitResult> fit_angular(std::span<const AngularDataset> datasets,
                                   const xsection::ChannelConfig& config,
                                   const FitOptions& options) {
  if (datasets.empty()) throw std::invalid_argument("fit_angular: no datasets");
  const xsection::AngularModel model(config);
  std::vector<FitResult> results;
  if (options.mode == FitMode::Joint) {
    results.push_back(fit_joint(datasets, model, options));
  } else {
    for (std::size_t d = 0; d < datasets.size(); ++d)
      results.push_back(fit_joint(datasets.subspan(d, 1), model, options));
  }
  return results;
}

double NormalStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::vector<AngularDataset> synth_dataset(const ShapeParams& params,
                                          std::span<const double> norms,
                                          std::span<const double> thetas_deg,
                                          double noise_frac, std::uint64_t seed,
                                          const xsection::ChannelConfig& config,
                                          double nominal_err_frac) {
  if (!(noise_frac >= 0.0)) throw std::invalid_argument("synth_dataset: negative noise");
  const auto series = xsection::legendre_coefficients(params, config);
  const double err_frac = noise_frac > 0.0 ? noise_frac : nominal_err_frac;
  NormalStream stream(seed);
  std::vector<AngularDataset> out;
  for (std::size_t d = 0; d < norms.size(); ++d) {
    AngularDataset dataset{"bin" + std::to_string(d + 1), {}};
    for (double theta : thetas_deg) {
      const double expected = norms[d] * xsection::cross_section(series, radians(theta));
      const double noise = noise_frac > 0.0 ? noise_frac * stream.normal() : 0.0;
      dataset.points.push_back({theta, expected * (1.0 + noise), err_frac * expected});
    }
    out.push_back(std::move(dataset));
  }
  return out;
}

}  // namespace xsym::fitkit
