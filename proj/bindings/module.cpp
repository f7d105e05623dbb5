// Python bindings for the main operations: model construction, sampling,
// estimation, canonical coordinates, and the GLR detectors.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "augspec/canonical.hpp"
#include "augspec/detect.hpp"
#include "augspec/io.hpp"
#include "augspec/moments.hpp"
#include "augspec/synthesis.hpp"

namespace py = pybind11;
using namespace augspec;

PYBIND11_MODULE(_augspec, m) {
  m.doc() = "Probabilistic spectral analysis of nonstationary real signals";

  py::register_exception<structure_error>(m, "StructureError");
  py::register_exception<not_psd_error>(m, "NotPsdError");
  py::register_exception<numerical_error>(m, "NumericalError");

  py::class_<FrameConfig>(m, "FrameConfig")
      .def_readonly("num_bins", &FrameConfig::num_bins)
      .def_readonly("num_channels", &FrameConfig::num_channels)
      .def_readonly("frame_len", &FrameConfig::frame_len)
      .def("coeff_dim", &FrameConfig::coeff_dim)
      .def("aug_dim", &FrameConfig::aug_dim);

  py::class_<AugmentedVector>(m, "AugmentedVector")
      .def(py::init([](const VectorXcd& top) { return AugmentedVector{top}; }))
      .def_readwrite("top", &AugmentedVector::top)
      .def("full", &AugmentedVector::full);

  py::class_<AugmentedMatrix>(m, "AugmentedMatrix")
      .def(py::init([](const MatrixXcd& r, const MatrixXcd& p) {
        return AugmentedMatrix{r, p};
      }))
      .def_readwrite("hermitian", &AugmentedMatrix::hermitian)
      .def_readwrite("complementary", &AugmentedMatrix::complementary)
      .def("full", &AugmentedMatrix::full);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def_readwrite("cfg", &SpectralModel::cfg)
      .def_readwrite("mean", &SpectralModel::mean)
      .def_readwrite("cov", &SpectralModel::cov);

  py::class_<RealSignal>(m, "RealSignal")
      .def_readonly("samples", &RealSignal::samples)
      .def_readonly("cfg", &RealSignal::cfg)
      .def("num_frames", &RealSignal::num_frames);

  py::class_<SamplerSeed>(m, "SamplerSeed")
      .def(py::init([](std::uint64_t seed, std::uint64_t stream) {
             return SamplerSeed{seed, stream};
           }),
           py::arg("seed"), py::arg("stream") = 0)
      .def_readwrite("seed", &SamplerSeed::seed)
      .def_readwrite("stream", &SamplerSeed::stream);

  m.def("make_frame_config", &make_frame_config, py::arg("num_bins"),
        py::arg("num_channels"));
  m.def("frequency_grid",
        [](const FrameConfig& cfg) { return frequency_grid(cfg).omegas; });
  m.def("basis_at",
        [](const FrameConfig& cfg, long long t) { return basis_at(cfg, t).matrix; });
  m.def("expand", &expand);
  m.def("project_frame", &project_frame);

  m.def("make_harmonic", &make_harmonic);
  m.def("make_wss", &make_wss);
  m.def("make_pure_cyclo", &make_pure_cyclo);
  m.def("make_general_cyclo", &make_general_cyclo);

  m.def("sample_signal",
        [](const SpectralModel& model, long long frames, const SamplerSeed& seed) {
          return sample_signal(model, frames, seed);
        });
  m.def("make_real_signal", &make_real_signal);

  m.def("estimate_moments", &estimate_moments);
  py::class_<MlResult>(m, "MlResult")
      .def_readonly("model", &MlResult::model)
      .def_readonly("log_likelihood", &MlResult::log_likelihood)
      .def_readonly("iterations", &MlResult::iterations)
      .def_readonly("converged", &MlResult::converged);
  m.def("ml_refine", &ml_refine, py::arg("signal"), py::arg("init"),
        py::arg("max_iter") = 200, py::arg("tol") = 1e-8);
  m.def("log_likelihood", &log_likelihood);

  py::class_<CanonicalDecomposition>(m, "CanonicalDecomposition")
      .def_readonly("transform", &CanonicalDecomposition::transform)
      .def_readonly("takagi_vectors", &CanonicalDecomposition::takagi_vectors)
      .def_readonly("coefficients", &CanonicalDecomposition::coefficients);
  m.def("sut", &sut);
  m.def("circularity_spectrum", &circularity_spectrum);

  py::enum_<TestKind>(m, "TestKind")
      .value("harmonic", TestKind::harmonic)
      .value("cyclo", TestKind::cyclo)
      .value("nonstat", TestKind::nonstat);
  py::enum_<DofMode>(m, "DofMode")
      .value("paper", DofMode::paper)
      .value("calibrated", DofMode::calibrated);
  m.def("glr_statistic", &glr_statistic);
  m.def("dof", &dof, py::arg("kind"), py::arg("num_channels"),
        py::arg("num_bins"), py::arg("mode"), py::arg("num_frames") = 500,
        py::arg("trials") = 512, py::arg("seed") = SamplerSeed{12345, 0});
  m.def("chi2_quantile", &chi2_quantile);
  m.def("chi2_sf", &chi2_sf);
  m.def("snr", &snr);
  m.def("cyclo_degree", &cyclo_degree);

  m.def("model_to_json", &model_to_json);
  m.def("model_from_json", &model_from_json);
}
