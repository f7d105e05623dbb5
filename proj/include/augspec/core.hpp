#pragma once

// Frequency grids, the normalized positive-frequency Fourier basis and its
// augmented form, augmented vectors/matrices with structural validation, and
// the exact frame-level expansion/projection pair.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace augspec {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

/// Input violates the conjugate-pair or block-symmetry structure of an
/// augmented quantity.
class structure_error : public std::runtime_error {
 public:
  explicit structure_error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix required to be positive semi-definite is indefinite beyond
/// tolerance.
class not_psd_error : public std::runtime_error {
 public:
  explicit not_psd_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (singularity, non-finite values) during a computation.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Discrete positive-frequency grid and frame length.
///
/// The frame length is fixed to L = 2M+1 (odd) with grid frequencies
/// omega_m = 2*pi*m/L, m = 1..M.  This excludes DC and Nyquist and makes all
/// pairwise frequency sums/differences nonzero modulo 2*pi, so per-frame
/// projection inverts the expansion exactly.
struct FrameConfig {
  int num_bins = 0;      // M
  int num_channels = 0;  // N
  int frame_len = 0;     // L = 2M+1

  int coeff_dim() const { return num_bins * num_channels; }        // MN
  int aug_dim() const { return 2 * num_bins * num_channels; }      // 2MN

  friend bool operator==(const FrameConfig& a, const FrameConfig& b) {
    return a.num_bins == b.num_bins && a.num_channels == b.num_channels &&
           a.frame_len == b.frame_len;
  }
};

/// Ordered angular frequencies in (0, pi), radians per sample.
struct FrequencyGrid {
  VectorXd omegas;  // omega_m = 2*pi*m/L, strictly increasing
};

FrameConfig make_frame_config(int num_bins, int num_channels);
FrequencyGrid frequency_grid(const FrameConfig& cfg);

/// The augmented spectral basis evaluated at one sample index.
/// matrix is N x 2MN with blocks (1/sqrt(2M)) * exp(+/- j*omega_m*t) * I_N.
struct SpectralBasis {
  long long t = 0;
  MatrixXcd matrix;  // N x 2MN
};

SpectralBasis basis_at(const FrameConfig& cfg, long long t);

/// Augmented vector [a; conj(a)].  Only the analytic (top) half is stored;
/// the bottom half is implied by conjugation.
struct AugmentedVector {
  VectorXcd top;  // MN

  VectorXcd full() const {
    VectorXcd v(2 * top.size());
    v.head(top.size()) = top;
    v.tail(top.size()) = top.conjugate();
    return v;
  }
};

/// Blocks of the augmented matrix [R P; P* R*].
struct AugmentedMatrix {
  MatrixXcd hermitian;      // R, MN x MN, Hermitian PSD
  MatrixXcd complementary;  // P, MN x MN, complex symmetric

  MatrixXcd full() const;
};

/// N-channel real time series made of whole frames.
struct RealSignal {
  MatrixXd samples;  // T x N, T a multiple of cfg.frame_len
  FrameConfig cfg;

  long long num_frames() const { return samples.rows() / cfg.frame_len; }
};

RealSignal make_real_signal(MatrixXd samples, const FrameConfig& cfg);

/// x(t) = Phi_bar(t) * ubx, checked real.
VectorXd expand(const FrameConfig& cfg, const AugmentedVector& ubx, long long t);

/// Exact per-frame left inverse of expand:
/// (2M/L) * sum_t Phi_bar^H(t) frame(t).
AugmentedVector project_frame(const FrameConfig& cfg,
                              const Eigen::Ref<const MatrixXd>& frame);

/// Structural diagnostics for an augmented matrix.
struct AugmentedDiagnostics {
  double hermitian_residual = 0;   // ||R - R^H||_max
  double symmetry_residual = 0;    // ||P - P^T||_max
  double min_eigenvalue = 0;       // of the full augmented matrix
  double norm_R = 0;               // ||R||_2
  double norm_P = 0;               // ||P||_2
  bool bound_violated = false;     // ||P||_2 > ||R||_2 beyond tolerance
  bool psd = false;
};

AugmentedDiagnostics validate_augmented(const AugmentedMatrix& aug);

/// Covariance of the stacked real vector [Re a; Im a] equivalent to the
/// augmented matrix; a linear bijection.
MatrixXd to_real_composite(const AugmentedMatrix& aug);
AugmentedMatrix from_real_composite(const Eigen::Ref<const MatrixXd>& composite);

}  // namespace augspec
