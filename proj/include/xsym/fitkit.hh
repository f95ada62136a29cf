#pragma once

// Least-squares extraction of the shape parameters (A, B, C, r) and per-bin
// normalizations from measured angular distributions.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xsym/xsection.hh"

namespace xsym::fitkit {

using xsection::ShapeParams;

struct AngularPoint {
  double theta_deg = 0.0;
  double yield = 0.0;
  double err = 1.0;
};

struct AngularDataset {
  std::string bin_label;
  std::vector<AngularPoint> points;
};

/// Throws Underdetermined for fewer than 5 points or a single angle, and
/// std::invalid_argument for angles outside (0, 180) or non-positive errors.
void validate(const AngularDataset& dataset);

enum class FitMode { Joint, PerBin };

enum class Parameterization {
  Log,            // optimize log A, log B, log C, log(1+r), log norms
  LinearBounded,  // optimize the raw values, clamped at zero
};

struct FitOptions {
  int n_starts = 32;
  std::uint64_t seed = 0;          // 0: unshifted Halton starts
  double tol = 1e-10;              // relative chi^2 decrease that ends a run
  int max_iter = 500;
  FitMode mode = FitMode::Joint;
  Parameterization parameterization = Parameterization::Log;
  double agreement_tol = 1e-6;     // relative chi^2 band for agreeing starts
  double identifiability_threshold = 1e2;  // max log-space variance
  unsigned threads = 0;            // 0: hardware concurrency
};

struct FitResult {
  ShapeParams params;
  std::vector<double> norms;
  std::vector<std::string> labels;
  double chi2 = 0.0;
  int dof = 0;
  // Over (log A, log B, log C, log(1+r), log norm_1, ...).
  Eigen::MatrixXd covariance;
  bool converged = false;
  bool identifiable = false;
  int n_starts_agreeing = 0;
  std::vector<double> start_chi2;   // chi^2 at each initial point

  /// One-sigma half width of log(1+r).
  double log1p_r_sigma() const { return std::sqrt(covariance(3, 3)); }
};

/// Precomputed chi^2 evaluator for a fixed set of datasets.
class ChiSquare {
 public:
  ChiSquare(std::span<const AngularDataset> datasets, const xsection::AngularModel& model);

  std::size_t n_datasets() const { return offsets_.size() - 1; }
  std::size_t n_points() const { return points_.size(); }

  /// Weighted residuals (yield - norm sigma)/err, in dataset order.
  void residuals(const ShapeParams& params, std::span<const double> norms,
                 Eigen::Ref<Eigen::VectorXd> out) const;
  double operator()(const ShapeParams& params, std::span<const double> norms) const;
  /// Model curve sigma(theta_i) at every point, without normalization.
  std::vector<double> model_values(const ShapeParams& params) const;

 private:
  struct Point {
    std::array<double, xsection::kMaxRank + 1> legendre{};
    double yield = 0.0;
    double inv_err = 0.0;
  };

  const xsection::AngularModel* model_;
  std::vector<Point> points_;
  std::vector<std::size_t> offsets_;
};

/// sum over points of ((yield - norm sigma(theta))/err)^2. Throws
/// std::invalid_argument when norms and datasets differ in length.
double chi_square(const ShapeParams& params, std::span<const double> norms,
                  std::span<const AngularDataset> datasets,
                  const xsection::ChannelConfig& config = {});

/// Joint mode returns one result; per-bin mode one per dataset. Throws
/// Underdetermined for dof <= 0 and NoConvergence when no start converges.
std::vector<FitResult> fit_angular(std::span<const AngularDataset> datasets,
                                   const xsection::ChannelConfig& config,
                                   const FitOptions& options = {});

/// Portable normal deviates: std::mt19937_64 (fully specified by the
/// standard) feeding a polar Box-Muller transform, so a seed yields the
/// same stream on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1), 53 random bits
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// One dataset per norm, labelled "bin1", "bin2", ... Yields are
/// norm sigma(theta) (1 + noise_frac z); errors are noise_frac norm sigma,
/// or nominal_err_frac norm sigma when noise_frac is zero.
std::vector<AngularDataset> synth_dataset(const ShapeParams& params,
                                          std::span<const double> norms,
                                          std::span<const double> thetas_deg,
                                          double noise_frac, std::uint64_t seed,
                                          const xsection::ChannelConfig& config = {},
                                          double nominal_err_frac = 0.05);

}  // namespace xsym::fitkit
