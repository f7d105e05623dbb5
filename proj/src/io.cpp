#include "augspec/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

namespace augspec {

namespace {

using nlohmann::json;

json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

json matrix_to_json(const MatrixXcd& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXcd matrix_from_json(const json& j, long n) {
  if (static_cast<long>(j.size()) != n)
    throw std::invalid_argument("model document: block dimension mismatch");
  MatrixXcd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < n; ++k) m(i, k) = complex_from_json(j.at(i).at(k));
  return m;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace

std::string model_to_json(const SpectralModel& model) {
  model.check();
  json doc;
  doc["format"] = kModelFormatVersion;
  doc["bins"] = model.cfg.num_bins;
  doc["channels"] = model.cfg.num_channels;
  doc["frame_len"] = model.cfg.frame_len;
  json mean = json::array();
  for (long i = 0; i < model.mean.top.size(); ++i)
    mean.push_back(complex_to_json(model.mean.top(i)));
  doc["mean"] = std::move(mean);
  doc["hermitian"] = matrix_to_json(model.cov.hermitian);
  doc["complementary"] = matrix_to_json(model.cov.complementary);
  return doc.dump(2);
}

SpectralModel model_from_json(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.at("format").get<std::string>() != kModelFormatVersion)
    throw std::invalid_argument("unknown model document format version");
  SpectralModel model;
  model.cfg = make_frame_config(doc.at("bins").get<int>(),
                                doc.at("channels").get<int>());
  if (doc.at("frame_len").get<int>() != model.cfg.frame_len)
    throw std::invalid_argument("model document: frame length inconsistent");
  const long n = model.cfg.coeff_dim();
  if (static_cast<long>(doc.at("mean").size()) != n)
    throw std::invalid_argument("model document: mean dimension mismatch");
  model.mean.top.resize(n);
  for (long i = 0; i < n; ++i)
    model.mean.top(i) = complex_from_json(doc.at("mean").at(i));
  model.cov.hermitian = matrix_from_json(doc.at("hermitian"), n);
  model.cov.complementary = matrix_from_json(doc.at("complementary"), n);
  const AugmentedDiagnostics diag = validate_augmented(model.cov);
  if (diag.hermitian_residual > 1e-8 * std::max(1.0, diag.norm_R) ||
      diag.symmetry_residual > 1e-8 * std::max(1.0, diag.norm_P) ||
      diag.bound_violated)
    throw structure_error("loaded model violates augmented structure");
  return model;
}

void save_model(const SpectralModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

SpectralModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

void write_signal(const RealSignal& signal, std::ostream& out, std::uint64_t seed) {
  out << "# format=" << kSignalFormatVersion << '\n';
  out << "# bins=" << signal.cfg.num_bins << " channels=" << signal.cfg.num_channels
      << " frame_len=" << signal.cfg.frame_len << " seed=" << seed << '\n';
  out << 't';
  for (int n = 1; n <= signal.cfg.num_channels; ++n) out << ",x" << n;
  out << '\n';
  for (long long t = 0; t < signal.samples.rows(); ++t) {
    out << t;
    for (int n = 0; n < signal.cfg.num_channels; ++n)
      out << ',' << format_double(signal.samples(t, n));
    out << '\n';
  }
}

RealSignal read_signal(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# format=", 0) != 0)
    throw std::invalid_argument("signal file: missing format header");
  if (line.substr(9) != kSignalFormatVersion)
    throw std::invalid_argument("signal file: unknown format version");
  if (!std::getline(in, line) || line.rfind("# bins=", 0) != 0)
    throw std::invalid_argument("signal file: missing config header");
  int bins = 0, channels = 0, frame_len = 0;
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# bins=%d channels=%d frame_len=%d seed=%llu",
                  &bins, &channels, &frame_len, &seed) != 4)
    throw std::invalid_argument("signal file: malformed config header");
  const FrameConfig cfg = make_frame_config(bins, channels);
  if (cfg.frame_len != frame_len)
    throw std::invalid_argument("signal file: frame length inconsistent");
  if (!std::getline(in, line))
    throw std::invalid_argument("signal file: missing column header");

  std::vector<double> values;
  long long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // sample index column
    int got = 0;
    while (std::getline(row, field, ',')) {
      values.push_back(std::stod(field));
      ++got;
    }
    if (got != channels)
      throw std::invalid_argument("signal file: wrong column count");
    ++rows;
  }
  MatrixXd samples(rows, channels);
  for (long long t = 0; t < rows; ++t)
    for (int n = 0; n < channels; ++n) samples(t, n) = values[t * channels + n];
  return make_real_signal(std::move(samples), cfg);
}

void save_signal(const RealSignal& signal, const std::string& path,
                 std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  write_signal(signal, out, seed);
  if (!out) throw std::runtime_error("write failed: " + path);
}

RealSignal load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open signal file: " + path);
  return read_signal(in);
}

}  // namespace augspec
