#include "augspec/synthesis.hpp"

#include <cmath>
#include <vector>

namespace augspec {

namespace {
constexpr double kFactorTol = 1e-8;

// Symmetric square root with negative eigenvalues floored at zero.  Strict
// Cholesky fails on exactly rank-deficient (rectilinear) covariances.
MatrixXd floored_sqrt(const MatrixXd& sym, double scale) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, scale))
    throw not_psd_error("augmented covariance is indefinite beyond tolerance");
  const VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}
}  // namespace

MatrixXcd WidelyLinearFactor::full() const {
  const long n = a.rows();
  MatrixXcd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, n) = b;
  m.bottomLeftCorner(n, n) = b.conjugate();
  m.bottomRightCorner(n, n) = a.conjugate();
  return m;
}

WidelyLinearFactor widely_linear_cholesky(const AugmentedMatrix& cov) {
  const long n = cov.hermitian.rows();
  const MatrixXd composite = to_real_composite(cov);
  const double scale = composite.cwiseAbs().maxCoeff();
  const MatrixXd root = floored_sqrt(composite, scale);
  // The analytic half of the augmented draw is a = G u with u real standard
  // normal and G = root_top + j root_bottom.  Rewriting in terms of a proper
  // complex white vector w = (u1 + j u2)/sqrt(2) gives a = A w + B w* with
  // A = (G1 - j G2)/sqrt(2), B = (G1 + j G2)/sqrt(2), where G = [G1 G2].
  const MatrixXcd g = root.topRows(n).cast<cplx>() +
                      cplx(0, 1) * root.bottomRows(n).cast<cplx>();
  const MatrixXcd g1 = g.leftCols(n);
  const MatrixXcd g2 = g.rightCols(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  WidelyLinearFactor factor;
  factor.a = inv_sqrt2 * (g1 - cplx(0, 1) * g2);
  factor.b = inv_sqrt2 * (g1 + cplx(0, 1) * g2);
  const MatrixXcd full = factor.full();
  const MatrixXcd target = cov.full();
  const double rel = (full * full.adjoint() - target).norm() /
                     std::max(1e-300, target.norm());
  if (target.norm() > 0 && rel > kFactorTol)
    throw numerical_error("widely linear factor reconstruction failed");
  return factor;
}

AugmentedVector sample_tfr(const SpectralModel& model,
                           const WidelyLinearFactor& factor, std::mt19937_64& rng) {
  const long n = model.cfg.coeff_dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXcd w(n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    w(i) = cplx(re * inv_sqrt2, im * inv_sqrt2);
  }
  AugmentedVector out;
  out.top = model.mean.top + factor.a * w + factor.b * w.conjugate();
  return out;
}

AugmentedVector sample_tfr(const SpectralModel& model, std::mt19937_64& rng) {
  return sample_tfr(model, widely_linear_cholesky(model.cov), rng);
}

namespace {

RealSignal sample_signal_impl(const SpectralModel& model, long long num_frames,
                              const WidelyLinearFactor& factor,
                              std::mt19937_64& rng) {
  const int L = model.cfg.frame_len;
  const int N = model.cfg.num_channels;
  // Per-phase bases are frame-periodic; precompute them once.
  std::vector<MatrixXcd> bases(L);
  for (int t = 0; t < L; ++t) bases[t] = basis_at(model.cfg, t).matrix;
  MatrixXd samples(num_frames * L, N);
  for (long long f = 0; f < num_frames; ++f) {
    const AugmentedVector ubx = sample_tfr(model, factor, rng);
    const VectorXcd full = ubx.full();
    for (int t = 0; t < L; ++t)
      samples.row(f * L + t) = (bases[t] * full).real().transpose();
  }
  return RealSignal{std::move(samples), model.cfg};
}

}  // namespace

RealSignal sample_signal(const SpectralModel& model, long long num_frames,
                         std::mt19937_64& rng) {
  model.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  return sample_signal_impl(model, num_frames, widely_linear_cholesky(model.cov), rng);
}

RealSignal sample_signal(const SpectralModel& model, long long num_frames,
                         const SamplerSeed& seed) {
  model.check();
  if (num_frames < 1) throw std::invalid_argument("num_frames must be >= 1");
  auto rng = seed.engine();
  return sample_signal_impl(model, num_frames, widely_linear_cholesky(model.cov), rng);
}

SpectralModel make_harmonic(const FrameConfig& cfg, int bin, double amplitude,
                            double phase) {
  if (bin < 1 || bin > cfg.num_bins) throw std::invalid_argument("bin out of range");
  SpectralModel model = zero_model(cfg);
  // Coefficient giving time-varying mean amplitude*cos(omega_m t + phase)
  // per channel under the 1/sqrt(2M) normalization.
  const cplx coeff = std::polar(amplitude * std::sqrt(2.0 * cfg.num_bins) / 2.0, phase);
  for (int n = 0; n < cfg.num_channels; ++n)
    model.mean.top((bin - 1) * cfg.num_channels + n) = coeff;
  return model;
}

SpectralModel make_wss(const FrameConfig& cfg, const VectorXd& spectrum) {
  if (spectrum.size() != cfg.num_bins)
    throw std::invalid_argument("spectrum must have one power per bin");
  if (spectrum.minCoeff() < 0.0)
    throw std::invalid_argument("spectrum powers must be nonnegative");
  SpectralModel model = zero_model(cfg);
  for (int m = 0; m < cfg.num_bins; ++m)
    for (int n = 0; n < cfg.num_channels; ++n)
      model.cov.hermitian(m * cfg.num_channels + n, m * cfg.num_channels + n) =
          spectrum(m);
  return model;
}

SpectralModel make_pure_cyclo(const FrameConfig& cfg, int bin, double power,
                              double phase) {
  if (bin < 1 || bin > cfg.num_bins) throw std::invalid_argument("bin out of range");
  if (power <= 0.0) throw std::invalid_argument("power must be positive");
  SpectralModel model = zero_model(cfg);
  for (int n = 0; n < cfg.num_channels; ++n) {
    const long i = (bin - 1) * cfg.num_channels + n;
    model.cov.hermitian(i, i) = power;
    model.cov.complementary(i, i) = std::polar(power, phase);
  }
  return model;
}

SpectralModel make_general_cyclo(const FrameConfig& cfg, const VectorXd& r_spec,
                                 const VectorXcd& p_spec) {
  if (r_spec.size() != cfg.num_bins || p_spec.size() != cfg.num_bins)
    throw std::invalid_argument("specs must have one entry per bin");
  for (int m = 0; m < cfg.num_bins; ++m)
    if (std::abs(p_spec(m)) > r_spec(m))
      throw std::invalid_argument("|P| must not exceed R at any bin");
  if (p_spec.cwiseAbs().maxCoeff() <= 0.0)
    throw std::invalid_argument("general cyclostationary model needs ||P|| > 0");
  if (p_spec.cwiseAbs().maxCoeff() >= r_spec.cwiseAbs().maxCoeff())
    throw std::invalid_argument("general cyclostationary model needs ||R|| > ||P||");
  SpectralModel model = zero_model(cfg);
  for (int m = 0; m < cfg.num_bins; ++m)
    for (int n = 0; n < cfg.num_channels; ++n) {
      const long i = m * cfg.num_channels + n;
      model.cov.hermitian(i, i) = r_spec(m);
      model.cov.complementary(i, i) = p_spec(m);
    }
  return model;
}

}  // namespace augspec
