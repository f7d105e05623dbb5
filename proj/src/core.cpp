#include "augspec/core.hpp"

#include <cmath>
#include <numbers>

namespace augspec {

namespace {
constexpr double kStructuralTol = 1e-12;
constexpr double kRoundTripTol = 1e-10;
}  // namespace

FrameConfig make_frame_config(int num_bins, int num_channels) {
  if (num_bins < 1) throw std::invalid_argument("num_bins must be >= 1");
  if (num_channels < 1) throw std::invalid_argument("num_channels must be >= 1");
  FrameConfig cfg;
  cfg.num_bins = num_bins;
  cfg.num_channels = num_channels;
  cfg.frame_len = 2 * num_bins + 1;
  return cfg;
}

FrequencyGrid frequency_grid(const FrameConfig& cfg) {
  FrequencyGrid grid;
  grid.omegas.resize(cfg.num_bins);
  for (int m = 1; m <= cfg.num_bins; ++m)
    grid.omegas(m - 1) = 2.0 * std::numbers::pi * m / cfg.frame_len;
  return grid;
}

SpectralBasis basis_at(const FrameConfig& cfg, long long t) {
  const int M = cfg.num_bins;
  const int N = cfg.num_channels;
  const double scale = 1.0 / std::sqrt(2.0 * M);
  SpectralBasis basis;
  basis.t = t;
  basis.matrix = MatrixXcd::Zero(N, 2 * M * N);
  // Evaluate phases modulo the frame so Phi(t+L) == Phi(t) exactly.
  const long long tm = ((t % cfg.frame_len) + cfg.frame_len) % cfg.frame_len;
  for (int m = 0; m < M; ++m) {
    const double phase = 2.0 * std::numbers::pi * (m + 1) * tm / cfg.frame_len;
    const cplx atom = scale * std::polar(1.0, phase);
    for (int n = 0; n < N; ++n) {
      basis.matrix(n, m * N + n) = atom;
      basis.matrix(n, (M + m) * N + n) = std::conj(atom);
    }
  }
  return basis;
}

MatrixXcd AugmentedMatrix::full() const {
  const long n = hermitian.rows();
  MatrixXcd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = hermitian;
  m.topRightCorner(n, n) = complementary;
  m.bottomLeftCorner(n, n) = complementary.conjugate();
  m.bottomRightCorner(n, n) = hermitian.conjugate();
  return m;
}

RealSignal make_real_signal(MatrixXd samples, const FrameConfig& cfg) {
  if (samples.rows() == 0 || samples.rows() % cfg.frame_len != 0)
    throw std::invalid_argument("signal length must be a positive multiple of the frame length");
  if (samples.cols() != cfg.num_channels)
    throw std::invalid_argument("channel count mismatch");
  if (!samples.allFinite())
    throw std::invalid_argument("signal contains non-finite entries");
  return RealSignal{std::move(samples), cfg};
}

VectorXd expand(const FrameConfig& cfg, const AugmentedVector& ubx, long long t) {
  if (ubx.top.size() != cfg.coeff_dim())
    throw structure_error("augmented vector dimension mismatch");
  const SpectralBasis basis = basis_at(cfg, t);
  const VectorXcd x = basis.matrix * ubx.full();
  const double residue = x.imag().cwiseAbs().maxCoeff();
  if (residue > kRoundTripTol)
    throw structure_error("expansion is not real: imaginary residue " +
                          std::to_string(residue));
  return x.real();
}

AugmentedVector project_frame(const FrameConfig& cfg,
                              const Eigen::Ref<const MatrixXd>& frame) {
  if (frame.rows() != cfg.frame_len)
    throw std::invalid_argument("frame must have exactly L rows");
  if (frame.cols() != cfg.num_channels)
    throw std::invalid_argument("channel count mismatch");
  const double gain = 2.0 * cfg.num_bins / cfg.frame_len;
  VectorXcd acc = VectorXcd::Zero(cfg.coeff_dim());
  for (int t = 0; t < cfg.frame_len; ++t) {
    const SpectralBasis basis = basis_at(cfg, t);
    // Top half of Phi_bar^H x; the bottom half is its conjugate.
    acc.noalias() +=
        basis.matrix.leftCols(cfg.coeff_dim()).adjoint() * frame.row(t).transpose();
  }
  return AugmentedVector{gain * acc};
}

AugmentedDiagnostics validate_augmented(const AugmentedMatrix& aug) {
  if (aug.hermitian.rows() != aug.hermitian.cols() ||
      aug.complementary.rows() != aug.complementary.cols() ||
      aug.hermitian.rows() != aug.complementary.rows())
    throw std::invalid_argument("blocks must be square and of matching size");
  AugmentedDiagnostics diag;
  diag.hermitian_residual =
      (aug.hermitian - aug.hermitian.adjoint()).cwiseAbs().maxCoeff();
  diag.symmetry_residual =
      (aug.complementary - aug.complementary.transpose()).cwiseAbs().maxCoeff();
  diag.norm_R = aug.hermitian.jacobiSvd().singularValues()(0);
  diag.norm_P = aug.complementary.jacobiSvd().singularValues()(0);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(aug.full());
  diag.min_eigenvalue = es.eigenvalues().minCoeff();
  const double tol = 1e-10 * std::max(1.0, diag.norm_R);
  diag.bound_violated = diag.norm_P > diag.norm_R + tol;
  diag.psd = diag.min_eigenvalue >= -tol && !diag.bound_violated &&
             diag.hermitian_residual <= kStructuralTol * std::max(1.0, diag.norm_R) &&
             diag.symmetry_residual <= kStructuralTol * std::max(1.0, diag.norm_P);
  return diag;
}

MatrixXd to_real_composite(const AugmentedMatrix& aug) {
  const long n = aug.hermitian.rows();
  const MatrixXd rr = aug.hermitian.real();
  const MatrixXd ri = aug.hermitian.imag();
  const MatrixXd pr = aug.complementary.real();
  const MatrixXd pi = aug.complementary.imag();
  MatrixXd c(2 * n, 2 * n);
  c.topLeftCorner(n, n) = 0.5 * (rr + pr);
  c.topRightCorner(n, n) = 0.5 * (pi - ri);
  c.bottomLeftCorner(n, n) = 0.5 * (pi + ri);
  c.bottomRightCorner(n, n) = 0.5 * (rr - pr);
  return c;
}

AugmentedMatrix from_real_composite(const Eigen::Ref<const MatrixXd>& composite) {
  if (composite.rows() != composite.cols() || composite.rows() % 2 != 0)
    throw std::invalid_argument("composite must be square with even dimension");
  const long n = composite.rows() / 2;
  const MatrixXd a = composite.topLeftCorner(n, n);
  const MatrixXd b = composite.topRightCorner(n, n);
  const MatrixXd c = composite.bottomLeftCorner(n, n);
  const MatrixXd d = composite.bottomRightCorner(n, n);
  AugmentedMatrix aug;
  aug.hermitian = (a + d).cast<cplx>() + cplx(0, 1) * (c - b).cast<cplx>();
  aug.complementary = (a - d).cast<cplx>() + cplx(0, 1) * (c + b).cast<cplx>();
  return aug;
}

}  // namespace augspec
