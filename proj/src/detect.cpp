#include "augspec/detect.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "augspec/moments.hpp"

namespace augspec {

namespace {

// Eigenvalues of the full augmented matrix with a relative floor, shared by
// the inversion and log-determinant paths.
struct AugEig {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver;
  VectorXd floored;

  explicit AugEig(const AugmentedMatrix& cov)
      : solver(0.5 * (cov.full() + cov.full().adjoint())) {
    const double floor =
        1e-8 * std::max(solver.eigenvalues().cwiseAbs().maxCoeff(), 1e-300) /
        static_cast<double>(solver.eigenvalues().size());
    floored = solver.eigenvalues().cwiseMax(floor);
  }

  MatrixXcd inverse() const {
    return solver.eigenvectors() * floored.cwiseInverse().asDiagonal() *
           solver.eigenvectors().adjoint();
  }
  double log_det() const { return floored.array().log().sum(); }
};

VectorXd augmented_diagonal(const AugmentedMatrix& cov) {
  const VectorXd diag = cov.hermitian.diagonal().real();
  if (diag.minCoeff() <= 0.0)
    throw numerical_error("augmented diagonal must be strictly positive");
  VectorXd full(2 * diag.size());
  full << diag, diag;
  return full;
}

}  // namespace

double snr(const AugmentedVector& mean, const AugmentedMatrix& cov) {
  const AugEig eig(cov);
  const VectorXcd m = mean.full();
  const cplx q = m.dot(eig.inverse() * m);  // dot conjugates the left argument
  if (std::abs(q.imag()) > 1e-10 * std::max(1.0, std::abs(q.real())))
    throw numerical_error("SNR quadratic form has imaginary residue");
  return std::max(0.0, q.real());
}

double glr_harmonic(const SpectralModel& estimate, long long num_frames) {
  estimate.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  return static_cast<double>(num_frames) * snr(estimate.mean, estimate.cov);
}

double glr_cyclo(const SpectralModel& estimate, long long num_frames) {
  estimate.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  const AugEig eig(estimate.cov);
  const VectorXd diag = augmented_diagonal(estimate.cov);
  const double trace_term =
      (estimate.cov.full().diagonal().real().array() / diag.array()).sum();
  const double lambda = num_frames * (diag.array().log().sum() - eig.log_det() +
                                      trace_term - diag.size());
  if (lambda < -1e-8) throw numerical_error("negative GLR statistic");
  return std::max(0.0, lambda);
}

double glr_nonstat(const SpectralModel& estimate, long long num_frames) {
  estimate.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  const VectorXd diag = augmented_diagonal(estimate.cov);
  const VectorXcd m = estimate.mean.full();
  const double mean_term =
      (m.cwiseAbs2().array() / diag.array()).sum();
  return glr_cyclo(estimate, num_frames) + num_frames * mean_term;
}

double glr_statistic(TestKind kind, const SpectralModel& estimate,
                     long long num_frames) {
  switch (kind) {
    case TestKind::harmonic: return glr_harmonic(estimate, num_frames);
    case TestKind::cyclo: return glr_cyclo(estimate, num_frames);
    case TestKind::nonstat: return glr_nonstat(estimate, num_frames);
  }
  throw std::invalid_argument("unknown test kind");
}

double dof(TestKind kind, int num_channels, int num_bins, DofMode mode,
           long long num_frames, int trials, const SamplerSeed& seed) {
  if (num_channels < 1 || num_bins < 1)
    throw std::invalid_argument("dimensions must be positive");
  const double nm = static_cast<double>(num_channels) * num_bins;
  if (mode == DofMode::paper) {
    switch (kind) {
      case TestKind::harmonic: return nm;
      case TestKind::cyclo: return 0.5 * (3.0 * nm * nm - nm);
      case TestKind::nonstat: return 0.5 * (3.0 * nm * nm + nm);
    }
    throw std::invalid_argument("unknown test kind");
  }
  // Calibrated: E[lambda] under a WSS null equals the chi-squared dof.
  const FrameConfig cfg = make_frame_config(num_bins, num_channels);
  const SpectralModel null_model = make_wss(cfg, VectorXd::Ones(num_bins));
  double acc = 0;
  for (int trial = 0; trial < trials; ++trial) {
    SamplerSeed trial_seed{seed.seed, seed.stream + trial + 1};
    auto rng = trial_seed.engine();
    const RealSignal signal = sample_signal(null_model, num_frames, rng);
    acc += glr_statistic(kind, estimate_moments(signal), num_frames);
  }
  return acc / trials;
}

double chi2_quantile(double nu, double alpha) {
  if (nu <= 0.0) throw std::invalid_argument("nu must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  return 2.0 * boost::math::gamma_q_inv(0.5 * nu, alpha);
}

double chi2_sf(double lambda, double nu) {
  if (nu <= 0.0) throw std::invalid_argument("nu must be positive");
  if (lambda <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * nu, 0.5 * lambda);
}

GlrOutcome decide(double lambda, double nu, double alpha) {
  GlrOutcome outcome;
  outcome.statistic = lambda;
  outcome.dof = nu;
  outcome.threshold = chi2_quantile(nu, alpha);
  outcome.p_value = chi2_sf(lambda, nu);
  outcome.reject = lambda > outcome.threshold;
  return outcome;
}

double cyclo_degree(const AugmentedMatrix& cov) {
  const VectorXd diag = augmented_diagonal(cov);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(
      0.5 * (cov.full() + cov.full().adjoint()));
  // det ratio through eigenvalues without flooring so exactly singular
  // (rectilinear) matrices give rho = 1.
  const VectorXd vals = es.eigenvalues().cwiseMax(0.0);
  double log_ratio = 0;
  for (long i = 0; i < vals.size(); ++i) {
    if (vals(i) <= 0.0) return 1.0;
    log_ratio += std::log(vals(i));
  }
  log_ratio -= diag.array().log().sum();
  const double rho = 1.0 - std::exp(log_ratio);
  if (rho < -1e-8 || rho > 1.0 + 1e-8)
    throw numerical_error("degree of cyclostationarity out of range");
  return std::clamp(rho, 0.0, 1.0);
}

std::vector<double> default_threshold_sweep(double nu, int points) {
  const double lo = chi2_quantile(nu, 0.999);
  const double hi = chi2_quantile(nu, 0.001);
  std::vector<double> sweep(points);
  for (int i = 0; i < points; ++i)
    sweep[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return sweep;
}

RocCurve roc_curve(const SpectralModel& h0_model, const SpectralModel& h1_model,
                   TestKind kind, long long num_frames, int trials,
                   const std::vector<double>& thresholds,
                   const SamplerSeed& seed) {
  h0_model.check();
  h1_model.check();
  if (!(h0_model.cfg == h1_model.cfg))
    throw std::invalid_argument("hypothesis models must share a frame config");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (thresholds.empty()) throw std::invalid_argument("empty threshold sweep");

  std::vector<double> lambda0(trials), lambda1(trials);
  for (int trial = 0; trial < trials; ++trial) {
    SamplerSeed s0{seed.seed, seed.stream + 2 * trial + 1};
    SamplerSeed s1{seed.seed, seed.stream + 2 * trial + 2};
    auto rng0 = s0.engine();
    auto rng1 = s1.engine();
    lambda0[trial] = glr_statistic(
        kind, estimate_moments(sample_signal(h0_model, num_frames, rng0)),
        num_frames);
    lambda1[trial] = glr_statistic(
        kind, estimate_moments(sample_signal(h1_model, num_frames, rng1)),
        num_frames);
  }

  RocCurve curve;
  curve.kind = kind;
  curve.frames = num_frames;
  curve.trials = trials;
  std::vector<double> sorted = thresholds;
  std::sort(sorted.begin(), sorted.end());
  for (double gamma : sorted) {
    RocPoint point;
    point.threshold = gamma;
    point.p_fa = static_cast<double>(std::count_if(
                     lambda0.begin(), lambda0.end(),
                     [gamma](double l) { return l > gamma; })) /
                 trials;
    point.p_d = static_cast<double>(std::count_if(
                    lambda1.begin(), lambda1.end(),
                    [gamma](double l) { return l > gamma; })) /
                trials;
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace augspec
