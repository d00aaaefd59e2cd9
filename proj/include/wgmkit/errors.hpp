#pragma once

#include <stdexcept>

namespace wgm {

// Trace shows no feature rising above the estimated noise floor.
struct NoResonanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares normal matrix is singular (or too few points for a fit).
struct DegenerateFitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Characteristic equation has no root in the scanned window.
struct ModeNotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exterior field is not evanescent for the requested mode/geometry.
struct UnconfinedModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Saturation curve fit failed or the data cannot identify the parameters.
struct SaturationFitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature failed to reach its tolerance.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (trace CSV or JSON config).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wgm
