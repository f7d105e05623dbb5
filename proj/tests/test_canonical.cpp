#include <doctest.h>

#include <cmath>
#include <random>

#include "augspec/canonical.hpp"
#include "augspec/moments.hpp"
#include "augspec/synthesis.hpp"

using namespace augspec;

namespace {

// Random feasible (R, P) pair: blocks of a random augmented PSD matrix.
void random_blocks(int n, std::mt19937_64& rng, MatrixXcd& r, MatrixXcd& p) {
  std::normal_distribution<double> normal;
  MatrixXcd g(2 * n, 2 * n);
  for (long i = 0; i < 2 * n; ++i)
    for (long j = 0; j < 2 * n; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  const MatrixXcd full = g * g.adjoint();
  r = 0.5 * (full.topLeftCorner(n, n) + full.bottomRightCorner(n, n).conjugate());
  p = 0.5 * (full.topRightCorner(n, n) + full.topRightCorner(n, n).transpose());
}

MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  MatrixXcd g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  return Eigen::HouseholderQR<MatrixXcd>(g).householderQ();
}

}  // namespace

TEST_CASE("coherence scalar closed forms") {
  CHECK(coherence(MatrixXcd::Identity(2, 2), MatrixXcd::Zero(2, 2))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  const MatrixXcd r1 = MatrixXcd::Constant(1, 1, 3.0);
  const MatrixXcd p1 = MatrixXcd::Constant(1, 1, std::polar(3.0, 0.8));
  CHECK(std::abs(coherence(r1, p1)(0, 0) - std::polar(1.0, 0.8)) <= 1e-12);

  const MatrixXcd r2 = MatrixXcd::Constant(1, 1, 2.0);
  const MatrixXcd p2 = MatrixXcd::Constant(1, 1, 1.0);
  CHECK(std::abs(coherence(r2, p2)(0, 0) - 0.5) <= 1e-12);

  CHECK_THROWS_AS(coherence(-MatrixXcd::Identity(1, 1), MatrixXcd::Zero(1, 1)),
                  not_psd_error);
}

TEST_CASE("takagi factorization") {
  MatrixXcd v;
  VectorXd k;

  SUBCASE("zero matrix") {
    takagi(MatrixXcd::Zero(3, 3), v, k);
    CHECK(k.cwiseAbs().maxCoeff() == 0.0);
    CHECK((v.adjoint() * v - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-12);
  }

  SUBCASE("scalar unit-modulus entry") {
    takagi(MatrixXcd::Constant(1, 1, std::polar(1.0, 0.6)), v, k);
    CHECK(k(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(v(0, 0) * v(0, 0) - std::polar(1.0, 0.6)) <= 1e-12);
  }

  SUBCASE("random symmetric matrices") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
      MatrixXcd c(4, 4);
      for (long i = 0; i < 4; ++i)
        for (long j = 0; j < 4; ++j) c(i, j) = cplx(normal(rng), normal(rng));
      c = 0.5 * (c + c.transpose()).eval();
      takagi(c, v, k);
      CHECK((c - v * k.asDiagonal() * v.transpose()).norm() <=
            1e-10 * std::max(1.0, c.norm()));
      CHECK((v.adjoint() * v - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
            1e-10);
      const VectorXd sv = Eigen::JacobiSVD<MatrixXcd>(c).singularValues();
      CHECK((k - sv).cwiseAbs().maxCoeff() <= 1e-10);
      for (long i = 1; i < k.size(); ++i) CHECK(k(i) <= k(i - 1) + 1e-12);
    }
  }

  SUBCASE("degenerate singular values") {
    // A unitary symmetric matrix has all singular values equal to 1.
    std::mt19937_64 rng(29);
    const MatrixXcd u = random_unitary(3, rng);
    const MatrixXcd c = u * u.transpose();
    takagi(c, v, k);
    CHECK((c - v * k.asDiagonal() * v.transpose()).norm() <= 1e-10);
    CHECK((k - VectorXd::Ones(3)).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("asymmetric input is rejected") {
    MatrixXcd bad(2, 2);
    bad << 0, 1, -1, 0;
    CHECK_THROWS_AS(takagi(bad, v, k), structure_error);
  }
}

TEST_CASE("strong uncorrelating transform identities") {
  SUBCASE("identity covariance") {
    const CanonicalDecomposition d =
        sut(MatrixXcd::Identity(2, 2), MatrixXcd::Zero(2, 2));
    CHECK(d.coefficients.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((d.transform * d.transform.adjoint() - MatrixXcd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
  }

  SUBCASE("rectilinear scalar") {
    const CanonicalDecomposition d =
        sut(MatrixXcd::Constant(1, 1, 2.0),
            MatrixXcd::Constant(1, 1, std::polar(2.0, 0.4)));
    CHECK(d.coefficients(0) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("random feasible pairs") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
      MatrixXcd r, p;
      random_blocks(4, rng, r, p);
      const CanonicalDecomposition d = sut(r, p);
      const MatrixXcd white = d.transform * r * d.transform.adjoint();
      const MatrixXcd diag = d.transform * p * d.transform.transpose();
      CHECK((white - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK((diag - MatrixXcd(d.coefficients.cast<cplx>().asDiagonal()))
                .cwiseAbs()
                .maxCoeff() <= 1e-8);
      for (long i = 0; i < 4; ++i) {
        CHECK(d.coefficients(i) >= 0.0);
        CHECK(d.coefficients(i) <= 1.0);
      }
    }
  }

  SUBCASE("kappa is invariant under unitary congruence") {
    std::mt19937_64 rng(41);
    MatrixXcd r, p;
    random_blocks(3, rng, r, p);
    const VectorXd base = sut(r, p).coefficients;
    for (int trial = 0; trial < 10; ++trial) {
      const MatrixXcd u = random_unitary(3, rng);
      const VectorXd rotated =
          sut(u * r * u.adjoint(), u * p * u.transpose()).coefficients;
      CHECK((rotated - base).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("circularity_spectrum classifies the signal classes") {
  const FrameConfig cfg = make_frame_config(2, 1);

  const VectorXd wss_kappa =
      circularity_spectrum(make_wss(cfg, VectorXd::Ones(2)));
  CHECK(wss_kappa.cwiseAbs().maxCoeff() <= 1e-8);

  const VectorXd pure_kappa =
      circularity_spectrum(make_pure_cyclo(cfg, 1, 1.0, 0.3));
  CHECK(pure_kappa.maxCoeff() == doctest::Approx(1.0).epsilon(1e-8));

  const FrameConfig scalar = make_frame_config(1, 1);
  const VectorXd gen_kappa = circularity_spectrum(make_general_cyclo(
      scalar, VectorXd::Ones(1), VectorXcd::Constant(1, 0.5)));
  CHECK(gen_kappa(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("canonical coordinates round trip") {
  std::mt19937_64 rng(43);
  const FrameConfig cfg = make_frame_config(2, 2);
  MatrixXcd r, p;
  random_blocks(cfg.coeff_dim(), rng, r, p);
  const CanonicalDecomposition d = sut(r, p);

  CHECK(canonical_coords(d, VectorXcd::Zero(cfg.coeff_dim())).cwiseAbs().maxCoeff() ==
        0.0);

  std::normal_distribution<double> normal;
  VectorXcd coeffs(cfg.coeff_dim());
  for (long i = 0; i < coeffs.size(); ++i)
    coeffs(i) = cplx(normal(rng), normal(rng));
  const VectorXcd canon = canonical_coords(d, coeffs);
  const AugmentedVector ubs{coeffs};
  for (long long t = 0; t < cfg.frame_len; ++t)
    CHECK((expand(cfg, ubs, t) - canonical_expand(d, cfg, canon, t))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
}

TEST_CASE("mmse_tfr") {
  const FrameConfig cfg = make_frame_config(1, 1);
  std::mt19937_64 rng(47);
  std::normal_distribution<double> normal;

  SUBCASE("proper model reduces to the analytic projection") {
    const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
    MatrixXd frame(cfg.frame_len, 1);
    for (int t = 0; t < cfg.frame_len; ++t) frame(t, 0) = normal(rng);
    const MmseTfr est = mmse_tfr(model, frame);
    const AugmentedVector proj = project_frame(cfg, frame);
    CHECK((est.coeffs - proj.top).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_FALSE(est.rank_deficient);
  }

  SUBCASE("scalar improper model matches the closed-form solution") {
    // With W = P* R^{-1}, the least-squares solution for a real frame built
    // from coefficients b0 is (I + W^H W)^{-1} (b0 + W^H b0*).
    const SpectralModel model = make_general_cyclo(
        cfg, VectorXd::Ones(1), VectorXcd::Constant(1, 0.5));
    const cplx b0(0.7, -0.3);
    const AugmentedVector ubs{VectorXcd::Constant(1, b0)};
    MatrixXd frame(cfg.frame_len, 1);
    for (int t = 0; t < cfg.frame_len; ++t) frame(t, 0) = expand(cfg, ubs, t)(0);
    const MmseTfr est = mmse_tfr(model, frame);
    const cplx w = 0.5;
    const cplx expected = (b0 + std::conj(w) * std::conj(b0)) /
                          (1.0 + std::norm(w));
    CHECK(std::abs(est.coeffs(0) - expected) <= 1e-8);
  }

  SUBCASE("rectilinear model recovers a real coefficient up to half the phase") {
    const double theta = 1.1;
    const SpectralModel model = make_pure_cyclo(cfg, 1, 1.0, theta);
    const cplx b0(0.4, 0.9);
    const AugmentedVector ubs{VectorXcd::Constant(1, b0)};
    MatrixXd frame(cfg.frame_len, 1);
    for (int t = 0; t < cfg.frame_len; ++t) frame(t, 0) = expand(cfg, ubs, t)(0);
    const MmseTfr est = mmse_tfr(model, frame);
    const cplx rotated = est.coeffs(0) * std::polar(1.0, -theta / 2);
    CHECK(std::abs(rotated.imag()) <= 1e-8);
  }

  SUBCASE("frame shape is validated") {
    const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
    CHECK_THROWS_AS(mmse_tfr(model, MatrixXd::Zero(2, 1)), std::invalid_argument);
  }
}

TEST_CASE("estimated pure-cyclostationary data has near-unit kappa") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const SpectralModel model = make_pure_cyclo(cfg, 1, 1.0, 0.5);
  const RealSignal signal = sample_signal(model, 10000, SamplerSeed{53, 0});
  const VectorXd kappa = circularity_spectrum(estimate_moments(signal));
  CHECK(kappa.maxCoeff() >= 0.9);
}
