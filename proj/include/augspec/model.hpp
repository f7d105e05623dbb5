#pragma once

// The full parameter set of the TFR distribution: augmented spectral mean
// and augmented spectral covariance on a fixed frequency grid.

#include "augspec/core.hpp"

namespace augspec {

struct SpectralModel {
  FrameConfig cfg;
  AugmentedVector mean;  // analytic half, MN
  AugmentedMatrix cov;   // blocks R and P, MN x MN

  void check() const {
    if (mean.top.size() != cfg.coeff_dim() ||
        cov.hermitian.rows() != cfg.coeff_dim() ||
        cov.complementary.rows() != cfg.coeff_dim())
      throw structure_error("model dimensions inconsistent with frame config");
  }
};

/// Zero-mean, zero-covariance model on the given grid.
inline SpectralModel zero_model(const FrameConfig& cfg) {
  SpectralModel model;
  model.cfg = cfg;
  model.mean.top = VectorXcd::Zero(cfg.coeff_dim());
  model.cov.hermitian = MatrixXcd::Zero(cfg.coeff_dim(), cfg.coeff_dim());
  model.cov.complementary = MatrixXcd::Zero(cfg.coeff_dim(), cfg.coeff_dim());
  return model;
}

}  // namespace augspec
