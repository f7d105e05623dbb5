#pragma once

// File formats owned by the command-line front end: JSON model documents and
// CSV signal tables.  Floats are encoded with 17 significant digits so a
// round trip is exact to 1 ulp.

#include <iosfwd>
#include <string>

#include "augspec/core.hpp"
#include "augspec/model.hpp"

namespace augspec {

inline constexpr const char* kModelFormatVersion = "augspec-model-1";
inline constexpr const char* kSignalFormatVersion = "augspec-signal-1";

void save_model(const SpectralModel& model, const std::string& path);
SpectralModel load_model(const std::string& path);

std::string model_to_json(const SpectralModel& model);
SpectralModel model_from_json(const std::string& text);

/// CSV schema: comment header lines (format version, cfg, seed), then
/// `t,x1,...,xN`, one row per sample.
void save_signal(const RealSignal& signal, const std::string& path,
                 std::uint64_t seed);
RealSignal load_signal(const std::string& path);

void write_signal(const RealSignal& signal, std::ostream& out, std::uint64_t seed);
RealSignal read_signal(std::istream& in);

}  // namespace augspec
