#pragma once

#include <string>

#include "wgmkit/json_writer.hpp"
#include "wgmkit/lineshape.hpp"
#include "wgmkit/material.hpp"
#include "wgmkit/mode_solver.hpp"

namespace wgm::io {

// Deterministic report documents: sorted keys, 17-digit floats, non-finite
// values as null. Identical inputs give identical bytes.
Json fit_report(const lineshape::FitResult& fit, const lineshape::FrequencyTrace& trace);
Json mode_report(const modes::ModeSolution& sol, const modes::FieldAmplitudes* unit_fields);
Json sweep_report(const material::SweepReport& rep, const material::MaterialSummary& summary,
                  const material::SaturationFit* saturation);

// Flat CSV view of the sweep rows, fixed column order.
std::string sweep_rows_csv(const material::SweepReport& rep);

}  // namespace wgm::io
