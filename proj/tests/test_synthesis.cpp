#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "augspec/synthesis.hpp"

using namespace augspec;

namespace {

AugmentedMatrix random_psd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  MatrixXcd g(2 * n, 2 * n);
  for (long r = 0; r < 2 * n; ++r)
    for (long c = 0; c < 2 * n; ++c) g(r, c) = cplx(normal(rng), normal(rng));
  // Symmetrize into the augmented cone: average with the swapped conjugate.
  MatrixXcd full = g * g.adjoint();
  MatrixXcd swapped(2 * n, 2 * n);
  swapped.topLeftCorner(n, n) = full.bottomRightCorner(n, n).conjugate();
  swapped.topRightCorner(n, n) = full.bottomLeftCorner(n, n).conjugate();
  swapped.bottomLeftCorner(n, n) = full.topRightCorner(n, n).conjugate();
  swapped.bottomRightCorner(n, n) = full.topLeftCorner(n, n).conjugate();
  full = 0.5 * (full + swapped);
  AugmentedMatrix aug;
  aug.hermitian = full.topLeftCorner(n, n);
  aug.complementary = 0.5 * (full.topRightCorner(n, n) +
                             full.topRightCorner(n, n).transpose());
  return aug;
}

double correlation(const VectorXd& a, const VectorXd& b) {
  const VectorXd ac = a.array() - a.mean();
  const VectorXd bc = b.array() - b.mean();
  return ac.dot(bc) / std::sqrt(ac.squaredNorm() * bc.squaredNorm());
}

}  // namespace

TEST_CASE("widely linear cholesky identity and structure") {
  AugmentedMatrix id{MatrixXcd::Identity(2, 2), MatrixXcd::Zero(2, 2)};
  const WidelyLinearFactor f = widely_linear_cholesky(id);
  CHECK((f.a - MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(f.b.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("widely linear cholesky reconstructs random PSD input") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const AugmentedMatrix aug = random_psd(4, rng);
    const WidelyLinearFactor f = widely_linear_cholesky(aug);
    const MatrixXcd full = f.full();
    CHECK((full * full.adjoint() - aug.full()).norm() <= 1e-8 * aug.full().norm());
  }
}

TEST_CASE("rectilinear samples are purely real") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const SpectralModel model = make_pure_cyclo(cfg, 1, 1.0, 0.0);
  const WidelyLinearFactor f = widely_linear_cholesky(model.cov);
  std::mt19937_64 rng(5);
  double imag_power = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const AugmentedVector ubx = sample_tfr(model, f, rng);
    imag_power += ubx.top(0).imag() * ubx.top(0).imag();
  }
  CHECK(imag_power / draws <= 1e-8);
}

TEST_CASE("sample_tfr moments match the model") {
  const FrameConfig cfg = make_frame_config(1, 1);
  std::mt19937_64 rng(17);
  const int draws = 100000;

  SUBCASE("proper unit variance") {
    const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
    const WidelyLinearFactor f = widely_linear_cholesky(model.cov);
    cplx pseudo = 0;
    double herm = 0;
    for (int i = 0; i < draws; ++i) {
      const cplx z = sample_tfr(model, f, rng).top(0);
      herm += std::norm(z);
      pseudo += z * z;
    }
    CHECK(herm / draws == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(pseudo) / draws <= 0.02);
  }

  SUBCASE("improper pseudo-variance") {
    const SpectralModel model =
        make_general_cyclo(cfg, VectorXd::Ones(1), VectorXcd::Constant(1, 0.5));
    const WidelyLinearFactor f = widely_linear_cholesky(model.cov);
    cplx pseudo = 0;
    for (int i = 0; i < draws; ++i) {
      const cplx z = sample_tfr(model, f, rng).top(0);
      pseudo += z * z;
    }
    CHECK(std::abs(pseudo / static_cast<double>(draws) - 0.5) <= 0.03);
  }

  SUBCASE("zero covariance returns the mean exactly") {
    const SpectralModel model = make_harmonic(cfg, 1, 1.0, 0.3);
    const AugmentedVector ubx = sample_tfr(model, rng);
    CHECK((ubx.top - model.mean.top).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("harmonic signal is deterministic and periodic") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const double omega = frequency_grid(cfg).omegas(0);
  const SpectralModel model = make_harmonic(cfg, 1, 1.0, 0.25);
  const RealSignal signal = sample_signal(model, 100, SamplerSeed{9, 0});
  for (long long t = 0; t < signal.samples.rows(); ++t)
    CHECK(signal.samples(t, 0) ==
          doctest::Approx(std::cos(omega * (t % cfg.frame_len) + 0.25))
              .epsilon(1e-10));
}

TEST_CASE("WSS variance is phase independent") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
  const RealSignal signal = sample_signal(model, 10000, SamplerSeed{21, 0});
  VectorXd power = VectorXd::Zero(cfg.frame_len);
  for (long long t = 0; t < signal.samples.rows(); ++t)
    power(t % cfg.frame_len) += signal.samples(t, 0) * signal.samples(t, 0);
  CHECK(power.maxCoeff() / power.minCoeff() <= 1.2);
}

TEST_CASE("pure cyclostationary variance envelope") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const double omega = frequency_grid(cfg).omegas(0);
  const double theta = 0.7;
  const SpectralModel model = make_pure_cyclo(cfg, 1, 2.0, theta);
  const RealSignal signal = sample_signal(model, 10000, SamplerSeed{22, 0});
  VectorXd power = VectorXd::Zero(cfg.frame_len);
  for (long long t = 0; t < signal.samples.rows(); ++t)
    power(t % cfg.frame_len) += signal.samples(t, 0) * signal.samples(t, 0);
  power /= signal.num_frames();
  VectorXd envelope(cfg.frame_len);
  for (int t = 0; t < cfg.frame_len; ++t)
    envelope(t) = std::pow(std::cos(omega * t + theta / 2), 2);
  CHECK(correlation(power, envelope) >= 0.95);
}

TEST_CASE("signal class constructors") {
  const FrameConfig cfg = make_frame_config(2, 1);

  const SpectralModel wss = make_wss(cfg, VectorXd::Constant(2, 3.0));
  CHECK(wss.mean.top.cwiseAbs().maxCoeff() == 0.0);
  CHECK(wss.cov.complementary.cwiseAbs().maxCoeff() == 0.0);
  CHECK(wss.cov.hermitian.isDiagonal(0.0));

  const SpectralModel pure = make_pure_cyclo(cfg, 1, 2.0, 0.6);
  CHECK(std::real(pure.cov.hermitian(0, 0)) == 2.0);
  CHECK(std::abs(pure.cov.complementary(0, 0) - std::polar(2.0, 0.6)) <= 1e-15);

  CHECK_THROWS_AS(
      make_general_cyclo(cfg, VectorXd::Ones(2), VectorXcd::Constant(2, 1.5)),
      std::invalid_argument);
  CHECK_THROWS_AS(make_pure_cyclo(cfg, 3, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_pure_cyclo(cfg, 1, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("seeded determinism and stream independence") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));

  const RealSignal a = sample_signal(model, 1000, SamplerSeed{42, 0});
  const RealSignal b = sample_signal(model, 1000, SamplerSeed{42, 0});
  CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == 0.0);

  const RealSignal c = sample_signal(model, 1000, SamplerSeed{42, 1});
  const VectorXd x = a.samples.col(0);
  const VectorXd y = c.samples.col(0);
  CHECK(std::abs(correlation(x, y)) <= 0.05);
}
