#pragma once

// Canonical time-frequency coordinates: spectral coherence, Takagi
// factorization, the strong uncorrelating transform, circularity
// coefficients, and the MMSE (elliptic-basis) TFR estimate.

#include "augspec/core.hpp"
#include "augspec/model.hpp"

namespace augspec {

/// Result of the strong uncorrelating transform:
/// transform * R * transform^H = I and transform * P * transform^T = diag(kappa).
struct CanonicalDecomposition {
  MatrixXcd transform;      // Psi, MN x MN
  MatrixXcd takagi_vectors; // V, unitary
  VectorXd coefficients;    // kappa, descending in [0, 1]
};

/// Pre-whitened complementary covariance C = R^{-1/2} P R^{-T/2}.
MatrixXcd coherence(const MatrixXcd& hermitian, const MatrixXcd& complementary);

/// Takagi factorization C = V K V^T of a complex symmetric matrix with V
/// unitary and K real nonnegative descending.
void takagi(const MatrixXcd& symmetric, MatrixXcd& vectors, VectorXd& values);

CanonicalDecomposition sut(const MatrixXcd& hermitian,
                           const MatrixXcd& complementary);

/// kappa of the model's covariance blocks; all-zero iff WSS-classifiable.
VectorXd circularity_spectrum(const SpectralModel& model);

/// c = Psi s.
VectorXcd canonical_coords(const CanonicalDecomposition& decomp,
                           const VectorXcd& coeffs);
/// Real N-vector at sample t from canonical coordinates:
/// s(t) = Phi_bar(t) Psi_bar^{-1} ubc.
VectorXd canonical_expand(const CanonicalDecomposition& decomp,
                          const FrameConfig& cfg, const VectorXcd& canonical,
                          long long t);

/// Least-squares TFR estimate over one frame in the multivariate elliptic
/// Fourier basis Phi(t) + Phi*(t) P* R^{-1}.
struct MmseTfr {
  VectorXcd coeffs;          // MN
  bool rank_deficient = false;
};

MmseTfr mmse_tfr(const SpectralModel& model,
                 const Eigen::Ref<const MatrixXd>& frame);

}  // namespace augspec
