#pragma once

// Exact sampling from the nonstationary time-domain distribution via the
// widely linear Cholesky factor of the augmented spectral covariance, plus
// constructors for the canonical signal classes (harmonic, WSS, pure
// cyclostationary, general cyclostationary).

#include <cstdint>
#include <random>

#include "augspec/core.hpp"
#include "augspec/model.hpp"

namespace augspec {

/// Reproducible RNG identity: identical (seed, stream) pairs reproduce
/// identical output bit-for-bit on one build.  Normal variates come from
/// std::normal_distribution over std::mt19937_64, fixed per build.
struct SamplerSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::mt19937_64 engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
  }
};

/// Widely linear factor [A B; B* A*] with L L^H equal to the augmented
/// covariance.
struct WidelyLinearFactor {
  MatrixXcd a;  // MN x MN
  MatrixXcd b;  // MN x MN

  MatrixXcd full() const;
};

/// Factor computed through the real-composite isomorphism; semidefinite
/// input uses an eigenvalue-floored symmetric square root.
WidelyLinearFactor widely_linear_cholesky(const AugmentedMatrix& cov);

/// One draw ubx = ubm + L ubw with ubw a proper complex white vector.
AugmentedVector sample_tfr(const SpectralModel& model, std::mt19937_64& rng);
AugmentedVector sample_tfr(const SpectralModel& model,
                           const WidelyLinearFactor& factor, std::mt19937_64& rng);

/// One independent TFR draw per frame, expanded over the frame.
RealSignal sample_signal(const SpectralModel& model, long long num_frames,
                         const SamplerSeed& seed);

/// Single-engine variant for Monte Carlo loops: frames are drawn
/// sequentially from the given engine.
RealSignal sample_signal(const SpectralModel& model, long long num_frames,
                         std::mt19937_64& rng);

// Signal-class constructors.  Bin indices are 1-based.
SpectralModel make_harmonic(const FrameConfig& cfg, int bin, double amplitude,
                            double phase);
SpectralModel make_wss(const FrameConfig& cfg, const VectorXd& spectrum);
SpectralModel make_pure_cyclo(const FrameConfig& cfg, int bin, double power,
                              double phase);
/// Per-bin Hermitian powers and complementary values with ||R|| > ||P|| > 0.
SpectralModel make_general_cyclo(const FrameConfig& cfg, const VectorXd& r_spec,
                                 const VectorXcd& p_spec);

}  // namespace augspec
