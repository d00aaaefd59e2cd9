#pragma once

#include <string>

#include "wgmkit/lineshape.hpp"

namespace wgm::io {

// Trace CSV: optional "# key=value" comment lines (source_dbm,
// temperature_mk, mode), then a header naming either the complex columns
// (freq_hz,s21_re,s21_im) or the scalar one (freq_hz,s21_mag), then data
// rows. Unknown comment keys are ignored; malformed rows raise ConfigError
// with the file and line.
lineshape::FrequencyTrace read_trace_csv(const std::string& path);

// Inverse of read_trace_csv; 17 significant digits, so a write/read round
// trip is bit-exact.
std::string trace_to_csv(const lineshape::FrequencyTrace& trace);
void write_trace_csv(const std::string& path, const lineshape::FrequencyTrace& trace);

}  // namespace wgm::io
