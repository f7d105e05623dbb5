// Command-line front end: synthesis, estimation, canonical analysis,
// GLRT detection, ROC sweeps, and estimator-consistency sweeps.
//
// Exit codes: 0 success, 2 usage/validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "augspec/canonical.hpp"
#include "augspec/detect.hpp"
#include "augspec/io.hpp"
#include "augspec/moments.hpp"
#include "augspec/synthesis.hpp"

namespace {

using namespace augspec;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

TestKind parse_kind(const std::string& name) {
  if (name == "harmonic") return TestKind::harmonic;
  if (name == "cyclo") return TestKind::cyclo;
  if (name == "nonstat") return TestKind::nonstat;
  throw CLI::ValidationError("--test", "unknown test kind: " + name);
}

SpectralModel build_class_model(const std::string& cls, const FrameConfig& cfg,
                                int bin, double amp, double phase, double power,
                                const std::vector<double>& spectrum,
                                const std::vector<double>& p_abs,
                                const std::vector<double>& p_phase) {
  if (cls == "harmonic") return make_harmonic(cfg, bin, amp, phase);
  if (cls == "wss") {
    VectorXd spec = spectrum.empty()
                        ? VectorXd::Ones(cfg.num_bins).eval()
                        : Eigen::Map<const VectorXd>(spectrum.data(),
                                                     spectrum.size()).eval();
    return make_wss(cfg, spec);
  }
  if (cls == "pure-cyclo") return make_pure_cyclo(cfg, bin, power, phase);
  if (cls == "general-cyclo") {
    if (p_abs.size() != static_cast<std::size_t>(cfg.num_bins))
      throw CLI::ValidationError("--p-abs", "need one |P| entry per bin");
    VectorXd r = spectrum.empty()
                     ? VectorXd::Ones(cfg.num_bins).eval()
                     : Eigen::Map<const VectorXd>(spectrum.data(),
                                                  spectrum.size()).eval();
    VectorXcd p(cfg.num_bins);
    for (int m = 0; m < cfg.num_bins; ++m) {
      const double ph = m < static_cast<int>(p_phase.size()) ? p_phase[m] : 0.0;
      p(m) = std::polar(p_abs[m], ph);
    }
    return make_general_cyclo(cfg, r, p);
  }
  throw CLI::ValidationError("--class", "unknown signal class: " + cls);
}

json outcome_to_json(const std::string& name, const GlrOutcome& outcome) {
  json j;
  j["test"] = name;
  j["lambda"] = outcome.statistic;
  j["nu"] = outcome.dof;
  j["gamma"] = outcome.threshold;
  j["p_value"] = outcome.p_value;
  j["reject"] = outcome.reject;
  return j;
}

int run_synth(const std::string& cls, const std::string& model_path, int bins,
              int channels, int bin, double amp, double phase, double power,
              const std::vector<double>& spectrum, const std::vector<double>& p_abs,
              const std::vector<double>& p_phase, long long frames,
              std::uint64_t seed, const std::string& out) {
  SpectralModel model;
  if (!model_path.empty()) {
    model = load_model(model_path);
  } else {
    model = build_class_model(cls, make_frame_config(bins, channels), bin, amp,
                              phase, power, spectrum, p_abs, p_phase);
  }
  const RealSignal signal = sample_signal(model, frames, SamplerSeed{seed, 0});
  save_signal(signal, out, seed);
  return 0;
}

int run_estimate(const std::string& in, const std::string& out, bool refine) {
  const RealSignal signal = load_signal(in);
  SpectralModel model = estimate_moments(signal);
  if (refine) model = ml_refine(signal, model).model;
  if (!out.empty()) save_model(model, out);

  json summary;
  summary["frames"] = signal.num_frames();
  summary["snr"] = snr(model.mean, model.cov);
  summary["rho"] = cyclo_degree(model.cov);
  const VectorXd kappa = circularity_spectrum(model);
  summary["kappa"] = std::vector<double>(kappa.data(), kappa.data() + kappa.size());
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_sut(const std::string& model_path, const std::string& out) {
  const SpectralModel model = load_model(model_path);
  const CanonicalDecomposition decomp =
      sut(model.cov.hermitian, model.cov.complementary);
  json doc;
  doc["kappa"] = std::vector<double>(
      decomp.coefficients.data(),
      decomp.coefficients.data() + decomp.coefficients.size());
  json transform = json::array();
  for (long i = 0; i < decomp.transform.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < decomp.transform.cols(); ++j)
      row.push_back(json::array({decomp.transform(i, j).real(),
                                 decomp.transform(i, j).imag()}));
    transform.push_back(std::move(row));
  }
  doc["transform"] = std::move(transform);
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open for writing: " + out);
    file << doc.dump(2) << '\n';
  }
  return 0;
}

int run_detect(const std::string& in, const std::string& model_path,
               const std::string& test, double alpha, const std::string& dof_mode,
               const std::string& out) {
  SpectralModel model;
  long long frames = 0;
  if (!in.empty()) {
    const RealSignal signal = load_signal(in);
    frames = signal.num_frames();
    model = estimate_moments(signal);
  } else {
    model = load_model(model_path);
    frames = 1;
  }
  const DofMode mode =
      dof_mode == "calibrated" ? DofMode::calibrated : DofMode::paper;

  std::vector<std::pair<std::string, TestKind>> kinds;
  if (test == "all") {
    kinds = {{"harmonic", TestKind::harmonic},
             {"cyclo", TestKind::cyclo},
             {"nonstat", TestKind::nonstat}};
  } else {
    kinds = {{test, parse_kind(test)}};
  }
  json report = json::array();
  for (const auto& [name, kind] : kinds) {
    const double lambda = glr_statistic(kind, model, frames);
    const double nu =
        dof(kind, model.cfg.num_channels, model.cfg.num_bins, mode, frames);
    report.push_back(outcome_to_json(name, decide(lambda, nu, alpha)));
  }
  if (out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open for writing: " + out);
    file << report.dump(2) << '\n';
  }
  return 0;
}

int run_roc(const std::string& test, int bins, int channels, long long frames,
            int trials, std::uint64_t seed, const std::vector<double>& snr_db,
            const std::vector<double>& rho_list, const std::string& out) {
  if (trials < 1) throw CLI::ValidationError("--trials", "must be positive");
  const TestKind kind = parse_kind(test);
  const FrameConfig cfg = make_frame_config(bins, channels);
  const int mn = cfg.coeff_dim();
  const SpectralModel h0 = make_wss(cfg, VectorXd::Ones(bins));
  const double nu = dof(kind, channels, bins, DofMode::paper);
  const std::vector<double> sweep = default_threshold_sweep(nu);

  struct Condition {
    std::string label;
    double value;
    SpectralModel model;
  };
  std::vector<Condition> conditions;
  for (double db : snr_db) {
    const double target = std::pow(10.0, db / 10.0);
    // With unit noise the augmented quadratic form gives SNR = 2N|c|^2 where
    // c = amp*sqrt(2M)/2 is the per-channel coefficient.
    const double coeff = std::sqrt(target / (2.0 * channels));
    SpectralModel h1 =
        make_harmonic(cfg, 1, 2.0 * coeff / std::sqrt(2.0 * cfg.num_bins), 0.0);
    h1.cov = h0.cov;
    conditions.push_back({"snr_db", db, h1});
  }
  for (double rho : rho_list) {
    const double p = std::sqrt(1.0 - std::pow(1.0 - rho, 1.0 / mn));
    SpectralModel h1 =
        p > 0.0 ? make_general_cyclo(cfg, VectorXd::Ones(bins),
                                     VectorXcd::Constant(bins, cplx(p, 0)))
                : h0;
    conditions.push_back({"rho", rho, h1});
  }
  if (conditions.empty())
    throw CLI::ValidationError("--snr-db/--rho", "empty sweep specification");

  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot open for writing: " + out);
  file << "# format=augspec-roc-1 test=" << test << " bins=" << bins
       << " channels=" << channels << " frames=" << frames
       << " trials=" << trials << " seed=" << seed << '\n';
  file << "condition,value,threshold,p_fa,p_d\n";
  std::uint64_t stream = 0;
  for (const Condition& cond : conditions) {
    const RocCurve curve = roc_curve(h0, cond.model, kind, frames, trials, sweep,
                                     SamplerSeed{seed, stream});
    stream += 4ULL * trials;
    for (const RocPoint& pt : curve.points)
      file << cond.label << ',' << fmt(cond.value) << ',' << fmt(pt.threshold)
           << ',' << fmt(pt.p_fa) << ',' << fmt(pt.p_d) << '\n';
  }
  return 0;
}

int run_consistency(int bins, int channels, const std::vector<long long>& frames,
                    int trials, std::uint64_t seed, const std::string& out) {
  if (trials < 1) throw CLI::ValidationError("--trials", "must be positive");
  const FrameConfig cfg = make_frame_config(bins, channels);
  // Harmonic embedded in WSS noise, the reference consistency experiment.
  SpectralModel model = make_harmonic(cfg, 1, 1.0, 0.0);
  model.cov = make_wss(cfg, VectorXd::Ones(bins)).cov;
  const ConsistencyReport report =
      consistency_study(model, frames, trials, SamplerSeed{seed, 0});

  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot open for writing: " + out);
  file << "# format=augspec-consistency-1 bins=" << bins
       << " channels=" << channels << " trials=" << trials << " seed=" << seed
       << '\n';
  file << "estimator,frames,empirical_var,predicted_var,slope\n";
  for (std::size_t i = 0; i < report.frame_counts.size(); ++i) {
    file << "mean," << report.frame_counts[i] << ','
         << fmt(report.var_mean[i]) << ',' << fmt(report.pred_mean[i]) << ','
         << fmt(report.slope_mean) << '\n';
    file << "hermitian," << report.frame_counts[i] << ','
         << fmt(report.var_hermitian[i]) << ',' << fmt(report.pred_hermitian[i])
         << ',' << fmt(report.slope_hermitian) << '\n';
    file << "complementary," << report.frame_counts[i] << ','
         << fmt(report.var_complementary[i]) << ','
         << fmt(report.pred_complementary[i]) << ','
         << fmt(report.slope_complementary) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // AUGSPEC_THREADS caps linear-algebra parallelism; Monte Carlo loops are
  // serial by design so results never depend on scheduling.
  if (const char* threads = std::getenv("AUGSPEC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || n < 1) {
      std::cerr << "AUGSPEC_THREADS must be a positive integer\n";
      return kExitUsage;
    }
    Eigen::setNbThreads(static_cast<int>(n));
  }

  CLI::App app{"Probabilistic spectral analysis of multivariate real-valued "
               "nonstationary signals"};
  app.require_subcommand(1);

  // Common knobs (per subcommand instances below).
  int bins = 1, channels = 1, bin = 1, trials = 1000;
  long long frames = 100;
  std::uint64_t seed = 0;
  double alpha = 0.05, amp = 1.0, phase = 0.0, power = 1.0;
  std::string cls, model_path, in_path, out_path, test = "all",
              dof_mode = "paper";
  std::vector<double> spectrum, p_abs, p_phase, snr_db, rho_list;
  std::vector<long long> frames_list = {10, 100, 1000, 10000, 100000};
  bool refine = false;

  auto* synth = app.add_subcommand("synth", "sample a signal from a model");
  synth->add_option("--class", cls, "harmonic|wss|pure-cyclo|general-cyclo");
  synth->add_option("--model", model_path, "model document (JSON)");
  synth->add_option("--bins", bins);
  synth->add_option("--channels", channels);
  synth->add_option("--bin", bin);
  synth->add_option("--amp", amp);
  synth->add_option("--phase", phase);
  synth->add_option("--power", power);
  synth->add_option("--spectrum", spectrum)->delimiter(',');
  synth->add_option("--p-abs", p_abs)->delimiter(',');
  synth->add_option("--p-phase", p_phase)->delimiter(',');
  synth->add_option("--frames", frames);
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path)->required();

  auto* estimate = app.add_subcommand("estimate", "estimate spectral moments");
  estimate->add_option("--in", in_path)->required();
  estimate->add_option("--out", out_path);
  estimate->add_flag("--ml-refine", refine);

  auto* sut_cmd = app.add_subcommand("sut", "strong uncorrelating transform");
  sut_cmd->add_option("--model", model_path)->required();
  sut_cmd->add_option("--out", out_path);

  auto* detect = app.add_subcommand("detect", "GLRT detection");
  detect->add_option("--in", in_path);
  detect->add_option("--model", model_path);
  detect->add_option("--test", test, "harmonic|cyclo|nonstat|all");
  detect->add_option("--alpha", alpha)->check(CLI::Range(1e-12, 1.0 - 1e-12));
  detect->add_option("--dof-mode", dof_mode, "paper|calibrated");
  detect->add_option("--out", out_path);

  auto* roc = app.add_subcommand("roc", "empirical ROC sweep");
  roc->add_option("--test", test)->required();
  roc->add_option("--bins", bins);
  roc->add_option("--channels", channels);
  roc->add_option("--frames", frames);
  roc->add_option("--trials", trials);
  roc->add_option("--seed", seed);
  roc->add_option("--snr-db", snr_db)->delimiter(',');
  roc->add_option("--rho", rho_list)->delimiter(',');
  roc->add_option("--out", out_path)->required();

  auto* consistency = app.add_subcommand("consistency", "estimator variance sweep");
  consistency->add_option("--bins", bins);
  consistency->add_option("--channels", channels);
  consistency->add_option("--frames-list", frames_list)->delimiter(',');
  consistency->add_option("--trials", trials);
  consistency->add_option("--seed", seed);
  consistency->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      if (cls.empty() == model_path.empty()) {
        std::cerr << "synth: exactly one of --class and --model is required\n";
        return kExitUsage;
      }
      return run_synth(cls, model_path, bins, channels, bin, amp, phase, power,
                       spectrum, p_abs, p_phase, frames, seed, out_path);
    }
    if (estimate->parsed()) return run_estimate(in_path, out_path, refine);
    if (sut_cmd->parsed()) return run_sut(model_path, out_path);
    if (detect->parsed()) {
      if (in_path.empty() == model_path.empty()) {
        std::cerr << "detect: exactly one of --in and --model is required\n";
        return kExitUsage;
      }
      return run_detect(in_path, model_path, test, alpha, dof_mode, out_path);
    }
    if (roc->parsed())
      return run_roc(test, bins, channels, frames, trials, seed, snr_db,
                     rho_list, out_path);
    if (consistency->parsed())
      return run_consistency(bins, channels, frames_list, trials, seed, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const augspec::structure_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
