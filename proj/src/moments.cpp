#include "augspec/moments.hpp"

#include <cmath>
#include <numbers>

namespace augspec {

namespace {

constexpr double kResidueTol = 1e-10;

// Per-phase adjoint bases, precomputed once per signal pass.
std::vector<MatrixXcd> phase_bases(const FrameConfig& cfg) {
  std::vector<MatrixXcd> bases(cfg.frame_len);
  for (int t = 0; t < cfg.frame_len; ++t) bases[t] = basis_at(cfg, t).matrix;
  return bases;
}

// Inverse with a relative eigenvalue floor; input must be symmetric.
MatrixXd floored_inverse(const MatrixXd& sym, double* log_det = nullptr) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  const double floor = 1e-8 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(),
                                       1e-300) /
                       static_cast<double>(sym.rows());
  const VectorXd vals = es.eigenvalues().cwiseMax(floor);
  if (log_det) *log_det = vals.array().log().sum();
  return es.eigenvectors() * vals.cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

// Time-varying covariance R(t) for each frame phase, as real matrices.
std::vector<MatrixXd> phase_covariances(const SpectralModel& model,
                                        const std::vector<MatrixXcd>& bases) {
  std::vector<MatrixXd> covs(bases.size());
  const MatrixXcd full = model.cov.full();
  for (std::size_t t = 0; t < bases.size(); ++t) {
    const MatrixXcd rt = bases[t] * full * bases[t].adjoint();
    MatrixXd real = rt.real();
    covs[t] = 0.5 * (real + real.transpose());
  }
  return covs;
}

void enforce_augmented_structure(AugmentedMatrix& aug) {
  aug.hermitian = 0.5 * (aug.hermitian + aug.hermitian.adjoint()).eval();
  aug.complementary =
      0.5 * (aug.complementary + aug.complementary.transpose()).eval();
}

double loglog_slope(const std::vector<long long>& xs,
                    const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(static_cast<double>(xs[i]));
    const double ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SpectralModel estimate_moments(const RealSignal& signal) {
  const FrameConfig& cfg = signal.cfg;
  const long long F = signal.num_frames();
  if (F < 2) throw std::invalid_argument("need at least 2 whole frames");
  const int L = cfg.frame_len;
  const int MN = cfg.coeff_dim();
  const auto bases = phase_bases(cfg);
  const double gain = 2.0 * cfg.num_bins / static_cast<double>(L);

  MatrixXcd spectra(MN, F);
  for (long long f = 0; f < F; ++f) {
    VectorXcd acc = VectorXcd::Zero(MN);
    for (int t = 0; t < L; ++t)
      acc.noalias() += bases[t].leftCols(MN).adjoint() *
                       signal.samples.row(f * L + t).transpose();
    spectra.col(f) = gain * acc;
  }

  SpectralModel model = zero_model(cfg);
  model.mean.top = spectra.rowwise().mean();
  spectra.colwise() -= model.mean.top;
  model.cov.hermitian = (spectra * spectra.adjoint()) / static_cast<double>(F);
  model.cov.complementary =
      (spectra * spectra.transpose()) / static_cast<double>(F);
  enforce_augmented_structure(model.cov);
  return model;
}

double log_likelihood(const RealSignal& signal, const SpectralModel& model) {
  model.check();
  const FrameConfig& cfg = signal.cfg;
  const int L = cfg.frame_len;
  const int N = cfg.num_channels;
  const auto bases = phase_bases(cfg);
  const auto covs = phase_covariances(model, bases);
  const VectorXcd mean_full = model.mean.full();

  std::vector<MatrixXd> inv(L);
  std::vector<double> log_det(L);
  std::vector<VectorXd> mean_t(L);
  for (int t = 0; t < L; ++t) {
    inv[t] = floored_inverse(covs[t], &log_det[t]);
    mean_t[t] = (bases[t] * mean_full).real();
  }

  const long long T = signal.samples.rows();
  double quad = 0, dets = 0;
  for (long long t = 0; t < T; ++t) {
    const int phase = static_cast<int>(t % L);
    const VectorXd s = signal.samples.row(t).transpose() - mean_t[phase];
    quad += s.dot(inv[phase] * s);
    dets += log_det[phase];
  }
  return -0.5 * (T * N * std::log(2.0 * std::numbers::pi) + dets + quad);
}

MlResult ml_refine(const RealSignal& signal, const SpectralModel& init,
                   int max_iter, double tol) {
  init.check();
  const FrameConfig& cfg = signal.cfg;
  const int L = cfg.frame_len;
  const int MN = cfg.coeff_dim();
  const auto bases = phase_bases(cfg);
  const long long T = signal.samples.rows();

  MlResult result;
  result.model = init;
  result.log_likelihood = log_likelihood(signal, result.model);

  for (int iter = 0; iter < max_iter; ++iter) {
    const auto covs = phase_covariances(result.model, bases);
    std::vector<MatrixXd> inv(L);
    for (int t = 0; t < L; ++t) inv[t] = floored_inverse(covs[t]);

    // Weighted-least-squares mean update.
    MatrixXcd normal = MatrixXcd::Zero(2 * MN, 2 * MN);
    VectorXcd rhs = VectorXcd::Zero(2 * MN);
    for (int t = 0; t < L; ++t)
      normal.noalias() +=
          bases[t].adjoint() * inv[t].cast<cplx>() * bases[t];
    // The phase-summed normal matrix repeats every frame.
    normal *= static_cast<double>(T / L);
    for (long long t = 0; t < T; ++t) {
      const int phase = static_cast<int>(t % L);
      rhs.noalias() += bases[phase].adjoint() *
                       (inv[phase] * signal.samples.row(t).transpose()).cast<cplx>();
    }
    const VectorXcd mean_full = normal.ldlt().solve(rhs);
    SpectralModel candidate = result.model;
    candidate.mean.top =
        0.5 * (mean_full.head(MN) + mean_full.tail(MN).conjugate());

    // Fixed-point covariance update on the centred signal.
    const VectorXcd cand_full = candidate.mean.full();
    std::vector<VectorXd> mean_t(L);
    for (int t = 0; t < L; ++t) mean_t[t] = (bases[t] * cand_full).real();
    MatrixXcd k = MatrixXcd::Zero(2 * MN, 2 * MN);
    for (long long t = 0; t < T; ++t) {
      const int phase = static_cast<int>(t % L);
      const VectorXd s = signal.samples.row(t).transpose() - mean_t[phase];
      const VectorXcd u = bases[phase].adjoint() * (inv[phase] * s).cast<cplx>();
      k.noalias() += u * u.adjoint();
    }
    k /= static_cast<double>(T);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (k + k.adjoint()));
    const double floor =
        1e-8 * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300) /
        static_cast<double>(2 * MN);
    const VectorXd vals = es.eigenvalues().cwiseMax(floor);
    const MatrixXcd cov_full = es.eigenvectors() *
                               vals.cwiseInverse().asDiagonal() *
                               es.eigenvectors().adjoint();
    candidate.cov.hermitian = 0.5 * (cov_full.topLeftCorner(MN, MN) +
                                     cov_full.bottomRightCorner(MN, MN).conjugate());
    candidate.cov.complementary =
        0.5 * (cov_full.topRightCorner(MN, MN) +
               cov_full.bottomLeftCorner(MN, MN).conjugate());
    enforce_augmented_structure(candidate.cov);

    double cand_ll = log_likelihood(signal, candidate);
    result.iterations = iter + 1;
    if (cand_ll < result.log_likelihood - 1e-9) {
      // The fixed-point covariance step decreased the likelihood; keep the
      // mean update alone if it helps, then stop.
      SpectralModel mean_only = result.model;
      mean_only.mean = candidate.mean;
      const double mean_ll = log_likelihood(signal, mean_only);
      if (mean_ll > result.log_likelihood) {
        result.model = mean_only;
        result.log_likelihood = mean_ll;
      }
      result.converged = true;
      return result;
    }
    const double gain = cand_ll - result.log_likelihood;
    result.model = candidate;
    result.log_likelihood = cand_ll;
    if (gain < tol * std::max(1.0, std::abs(cand_ll))) {
      result.converged = true;
      return result;
    }
  }
  result.converged = false;
  return result;
}

TimeVaryingStats time_varying_stats(const SpectralModel& model, long long t_begin,
                                    long long t_end) {
  model.check();
  if (t_end < t_begin) throw std::invalid_argument("empty time range");
  TimeVaryingStats stats;
  const VectorXcd mean_full = model.mean.full();
  const MatrixXcd cov_full = model.cov.full();
  for (long long t = t_begin; t < t_end; ++t) {
    const MatrixXcd basis = basis_at(model.cfg, t).matrix;
    const VectorXcd m = basis * mean_full;
    const MatrixXcd r = basis * cov_full * basis.adjoint();
    if (m.imag().cwiseAbs().maxCoeff() >
        kResidueTol * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw numerical_error("time-varying mean has imaginary residue");
    if (r.imag().cwiseAbs().maxCoeff() >
        kResidueTol * std::max(1.0, r.cwiseAbs().maxCoeff()))
      throw numerical_error("time-varying covariance has imaginary residue");
    stats.mean.push_back(m.real());
    const MatrixXd real = r.real();
    stats.cov.push_back(0.5 * (real + real.transpose()));
  }
  return stats;
}

namespace {

MatrixXd temporal_second_moment(const SpectralModel& model, long long t1,
                                long long t2) {
  const MatrixXcd b1 = basis_at(model.cfg, t1).matrix;
  const MatrixXcd b2 = basis_at(model.cfg, t2).matrix;
  const MatrixXcd r = b1 * model.cov.full() * b2.adjoint();
  if (r.imag().cwiseAbs().maxCoeff() >
      kResidueTol * std::max(1.0, r.cwiseAbs().maxCoeff()))
    throw numerical_error("temporal moment has imaginary residue");
  return r.real();
}

void check_same_frame(const FrameConfig& cfg, long long t1, long long t2) {
  auto frame_of = [&](long long t) {
    return t >= 0 ? t / cfg.frame_len : -((-t - 1) / cfg.frame_len) - 1;
  };
  if (frame_of(t1) != frame_of(t2))
    throw std::domain_error(
        "cross-frame temporal moments are zero under i.i.d. frames; "
        "both indices must fall in the same frame");
}

}  // namespace

MatrixXd temporal_autocovariance(const SpectralModel& model, long long t1,
                                 long long t2) {
  model.check();
  check_same_frame(model.cfg, t1, t2);
  return temporal_second_moment(model, t1, t2);
}

MatrixXd temporal_autoconvolution(const SpectralModel& model, long long t1,
                                  long long t2) {
  model.check();
  check_same_frame(model.cfg, t1, t2);
  return temporal_second_moment(model, t1, -t2);
}

AugmentedMatrix absolute_moments(const SpectralModel& model) {
  model.check();
  AugmentedMatrix abs;
  abs.hermitian =
      model.mean.top * model.mean.top.adjoint() + model.cov.hermitian;
  abs.complementary =
      model.mean.top * model.mean.top.transpose() + model.cov.complementary;
  return abs;
}

EstimatorCovariances estimator_covariance_iid(const SpectralModel& model,
                                              long long num_frames) {
  model.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  const double inv_f = 1.0 / static_cast<double>(num_frames);
  const MatrixXcd& r = model.cov.hermitian;
  const MatrixXcd& p = model.cov.complementary;
  EstimatorCovariances out;
  out.cov_mean = inv_f * r;
  out.cov_hermitian = inv_f * (p * p.conjugate() + r * r);
  out.cov_complementary = inv_f * (2.0 * r * r);
  return out;
}

ConsistencyReport consistency_study(const SpectralModel& model,
                                    const std::vector<long long>& frame_counts,
                                    int trials, const SamplerSeed& seed) {
  model.check();
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  for (std::size_t i = 1; i < frame_counts.size(); ++i)
    if (frame_counts[i] <= frame_counts[i - 1])
      throw std::invalid_argument("frame counts must be strictly increasing");
  if (frame_counts.empty() || frame_counts.front() < 2)
    throw std::invalid_argument("frame counts must start at 2 or more");

  const int MN = model.cfg.coeff_dim();
  const MatrixXcd& r = model.cov.hermitian;
  const MatrixXcd& p = model.cov.complementary;

  ConsistencyReport report;
  report.frame_counts = frame_counts;
  for (std::size_t i = 0; i < frame_counts.size(); ++i) {
    const long long F = frame_counts[i];
    double acc_m = 0, acc_r = 0, acc_p = 0;
    for (int trial = 0; trial < trials; ++trial) {
      SamplerSeed trial_seed{seed.seed,
                             seed.stream + (i * static_cast<std::size_t>(trials) +
                                            trial + 1)};
      auto rng = trial_seed.engine();
      const RealSignal signal = sample_signal(model, F, rng);
      const SpectralModel est = estimate_moments(signal);
      acc_m += (est.mean.top - model.mean.top).squaredNorm();
      acc_r += (est.cov.hermitian - r).squaredNorm();
      acc_p += (est.cov.complementary - p).squaredNorm();
    }
    const double denom = static_cast<double>(trials) * MN;
    report.var_mean.push_back(acc_m / denom);
    report.var_hermitian.push_back(acc_r / (denom * MN));
    report.var_complementary.push_back(acc_p / (denom * MN));

    // Entrywise Isserlis predictions, averaged over entries.
    double pred_r = 0, pred_p = 0;
    for (int k = 0; k < MN; ++k)
      for (int l = 0; l < MN; ++l) {
        pred_r += std::real(r(k, k)) * std::real(r(l, l)) + std::norm(p(k, l));
        pred_p += std::real(r(k, k)) * std::real(r(l, l)) + std::norm(r(k, l));
      }
    report.pred_mean.push_back(r.real().trace() / (MN * static_cast<double>(F)));
    report.pred_hermitian.push_back(pred_r / (MN * MN * static_cast<double>(F)));
    report.pred_complementary.push_back(pred_p / (MN * MN * static_cast<double>(F)));
  }
  report.slope_mean = loglog_slope(frame_counts, report.var_mean);
  report.slope_hermitian = loglog_slope(frame_counts, report.var_hermitian);
  report.slope_complementary = loglog_slope(frame_counts, report.var_complementary);
  return report;
}

}  // namespace augspec
