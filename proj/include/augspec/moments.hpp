#pragma once

// Approximate-ML and full-ML estimation of the augmented spectral moments,
// time-varying temporal statistics, absolute (non-centred) spectra, and
// statistical-consistency diagnostics.

#include <vector>

#include "augspec/core.hpp"
#include "augspec/model.hpp"
#include "augspec/synthesis.hpp"

namespace augspec {

/// Per-sample mean and covariance of the time-domain signal over a range of
/// sample indices.  Both are L-periodic.
struct TimeVaryingStats {
  std::vector<VectorXd> mean;  // N per t
  std::vector<MatrixXd> cov;   // N x N symmetric PSD per t
};

/// Empirical vs predicted estimation variances over a sweep of frame counts.
struct ConsistencyReport {
  std::vector<long long> frame_counts;
  std::vector<double> var_mean;       // empirical, aggregated over entries
  std::vector<double> var_hermitian;  // empirical var of R-hat entries
  std::vector<double> var_complementary;
  std::vector<double> pred_mean;      // closed-form i.i.d. rates at each F
  std::vector<double> pred_hermitian;
  std::vector<double> pred_complementary;
  double slope_mean = 0;  // log-log slope of empirical variance vs F
  double slope_hermitian = 0;
  double slope_complementary = 0;
};

/// Closed-form i.i.d.-frame estimator covariance predictions.
struct EstimatorCovariances {
  MatrixXcd cov_mean;           // R / F
  MatrixXcd cov_hermitian;      // (P P* + R R) / F
  MatrixXcd cov_complementary;  // 2 R R / F
};

/// Approximate-ML estimates: sample mean of per-frame projections and the
/// outer-product covariance of the centred per-frame spectra (two-pass).
SpectralModel estimate_moments(const RealSignal& signal);

struct MlResult {
  SpectralModel model;
  double log_likelihood = 0;
  int iterations = 0;
  bool converged = false;
};

/// Full-ML refinement: alternates the weighted-least-squares mean update and
/// the fixed-point covariance update, keeping the log-likelihood monotone.
MlResult ml_refine(const RealSignal& signal, const SpectralModel& init,
                   int max_iter = 200, double tol = 1e-8);

/// Per-sample Gaussian log-likelihood of the signal under the model.
double log_likelihood(const RealSignal& signal, const SpectralModel& model);

TimeVaryingStats time_varying_stats(const SpectralModel& model, long long t_begin,
                                    long long t_end);

/// R(t1,t2) = Re{ Phi_bar(t1) R_bar Phi_bar^H(t2) }; both indices must fall
/// in the same frame (cross-frame covariance is zero under i.i.d. frames).
MatrixXd temporal_autocovariance(const SpectralModel& model, long long t1,
                                 long long t2);
/// P(t1,t2) = Re{ Phi_bar(t1) R_bar Phi_bar^H(-t2) }.
MatrixXd temporal_autoconvolution(const SpectralModel& model, long long t1,
                                  long long t2);

/// Absolute (non-centred) spectra: R~ = m m^H + R, P~ = m m^T + P.
AugmentedMatrix absolute_moments(const SpectralModel& model);

EstimatorCovariances estimator_covariance_iid(const SpectralModel& model,
                                              long long num_frames);

ConsistencyReport consistency_study(const SpectralModel& model,
                                    const std::vector<long long>& frame_counts,
                                    int trials, const SamplerSeed& seed);

}  // namespace augspec
