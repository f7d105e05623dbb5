#pragma once

// GLRT detectors for harmonicity, cyclostationarity, and general
// nonstationarity, with chi-squared thresholding, SNR and
// degree-of-cyclostationarity measures, and the ROC experiment harness.

#include <vector>

#include "augspec/core.hpp"
#include "augspec/model.hpp"
#include "augspec/synthesis.hpp"

namespace augspec {

enum class TestKind { harmonic, cyclo, nonstat };
enum class DofMode { paper, calibrated };

struct GlrOutcome {
  double statistic = 0;  // lambda
  double dof = 0;        // nu
  double threshold = 0;  // gamma
  double p_value = 1;
  bool reject = false;
};

struct RocPoint {
  double threshold = 0;
  double p_fa = 0;
  double p_d = 0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by threshold
  TestKind kind = TestKind::harmonic;
  long long frames = 0;
  int trials = 0;
};

/// lambda = F * m^H R^{-1} m on the augmented estimate.
double glr_harmonic(const SpectralModel& estimate, long long num_frames);
/// lambda = F [ ln det diag(R) - ln det R + tr(diag(R)^{-1} R) - 2NM ].
double glr_cyclo(const SpectralModel& estimate, long long num_frames);
/// Cyclostationarity statistic with the mean folded into the trace term.
double glr_nonstat(const SpectralModel& estimate, long long num_frames);

double glr_statistic(TestKind kind, const SpectralModel& estimate,
                     long long num_frames);

/// Degrees of freedom: the closed-form parameter counts, or a Monte-Carlo
/// calibrated value (mean of lambda under the null).
double dof(TestKind kind, int num_channels, int num_bins, DofMode mode,
           long long num_frames = 500, int trials = 512,
           const SamplerSeed& seed = {12345, 0});

/// Upper-tail chi-squared quantile and survival function via the regularized
/// incomplete gamma function.
double chi2_quantile(double nu, double alpha);
double chi2_sf(double lambda, double nu);

GlrOutcome decide(double lambda, double nu, double alpha);

/// Multivariate SNR: m^H R^{-1} m on augmented quantities.
double snr(const AugmentedVector& mean, const AugmentedMatrix& cov);

/// Degree of multivariate cyclostationarity: 1 - det(R_bar)/det(diag R_bar).
double cyclo_degree(const AugmentedMatrix& cov);

RocCurve roc_curve(const SpectralModel& h0_model, const SpectralModel& h1_model,
                   TestKind kind, long long num_frames, int trials,
                   const std::vector<double>& thresholds, const SamplerSeed& seed);

/// Default geometric threshold sweep between the 0.999 and 0.001 upper-tail
/// quantiles.
std::vector<double> default_threshold_sweep(double nu, int points = 50);

}  // namespace augspec
