#include <doctest.h>

#include <sstream>

#include "augspec/io.hpp"
#include "augspec/synthesis.hpp"

using namespace augspec;

TEST_CASE("model JSON round trip is exact") {
  const FrameConfig cfg = make_frame_config(2, 2);
  SpectralModel model = make_general_cyclo(
      cfg, (VectorXd(2) << 1.0, 0.37).finished(),
      (VectorXcd(2) << cplx(0.1, -0.2), cplx(0.05, 0.31)).finished());
  model.mean.top(0) = cplx(1.0 / 3.0, -2.0 / 7.0);

  const std::string text = model_to_json(model);
  const SpectralModel back = model_from_json(text);
  CHECK(back.cfg == model.cfg);
  CHECK((back.mean.top - model.mean.top).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.cov.hermitian - model.cov.hermitian).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.cov.complementary - model.cov.complementary).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("model JSON rejects bad documents") {
  const SpectralModel model = make_wss(make_frame_config(1, 1), VectorXd::Ones(1));
  std::string text = model_to_json(model);

  SUBCASE("unknown format version") {
    const std::string bad =
        text.replace(text.find("augspec-model-1"), 15, "augspec-model-9");
    CHECK_THROWS_AS(model_from_json(bad), std::invalid_argument);
  }

  SUBCASE("structure violation") {
    // ||P|| > ||R|| is infeasible for a covariance.
    SpectralModel broken = model;
    broken.cov.complementary(0, 0) = 2.0;
    CHECK_THROWS_AS(model_from_json(model_to_json(broken)), structure_error);
  }

  SUBCASE("not JSON at all") {
    CHECK_THROWS(model_from_json("not json"));
  }
}

TEST_CASE("signal CSV round trip is exact") {
  const FrameConfig cfg = make_frame_config(1, 2);
  const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
  const RealSignal signal = sample_signal(model, 20, SamplerSeed{83, 0});

  std::stringstream buf;
  write_signal(signal, buf, 83);
  const RealSignal back = read_signal(buf);
  CHECK(back.cfg == signal.cfg);
  CHECK((back.samples - signal.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("signal CSV header and schema") {
  const FrameConfig cfg = make_frame_config(1, 2);
  const SpectralModel model = make_wss(cfg, VectorXd::Ones(1));
  const RealSignal signal = sample_signal(model, 1, SamplerSeed{5, 0});

  std::stringstream buf;
  write_signal(signal, buf, 5);
  std::string line;
  std::getline(buf, line);
  CHECK(line == std::string("# format=") + kSignalFormatVersion);
  std::getline(buf, line);
  CHECK(line == "# bins=1 channels=2 frame_len=3 seed=5");
  std::getline(buf, line);
  CHECK(line == "t,x1,x2");
}

TEST_CASE("signal CSV rejects malformed input") {
  SUBCASE("missing header") {
    std::stringstream buf("t,x1\n0,1.0\n");
    CHECK_THROWS_AS(read_signal(buf), std::invalid_argument);
  }

  SUBCASE("unknown version") {
    std::stringstream buf("# format=augspec-signal-9\n# bins=1 channels=1 frame_len=3 seed=0\nt,x1\n");
    CHECK_THROWS_AS(read_signal(buf), std::invalid_argument);
  }

  SUBCASE("wrong column count") {
    std::stringstream buf(
        "# format=augspec-signal-1\n# bins=1 channels=2 frame_len=3 seed=0\n"
        "t,x1,x2\n0,1.0\n");
    CHECK_THROWS_AS(read_signal(buf), std::invalid_argument);
  }

  SUBCASE("frame misalignment") {
    std::stringstream buf(
        "# format=augspec-signal-1\n# bins=1 channels=1 frame_len=3 seed=0\n"
        "t,x1\n0,1.0\n1,2.0\n");
    CHECK_THROWS_AS(read_signal(buf), std::invalid_argument);
  }
}

TEST_CASE("file save/load round trip") {
  const FrameConfig cfg = make_frame_config(1, 1);
  const SpectralModel model = make_pure_cyclo(cfg, 1, 1.5, 0.4);

  const std::string model_path = "io_test_model.json";
  save_model(model, model_path);
  const SpectralModel back = load_model(model_path);
  CHECK((back.cov.complementary - model.cov.complementary).cwiseAbs().maxCoeff() ==
        0.0);

  const RealSignal signal = sample_signal(model, 5, SamplerSeed{11, 0});
  const std::string signal_path = "io_test_signal.csv";
  save_signal(signal, signal_path, 11);
  const RealSignal sig_back = load_signal(signal_path);
  CHECK((sig_back.samples - signal.samples).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS(load_model("missing_file.json"));
  std::remove(model_path.c_str());
  std::remove(signal_path.c_str());
}
