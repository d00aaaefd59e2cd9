#pragma once

namespace wgm::bessel {

// Integer-order cylinder functions for x >= 0. Orders 0 and 1 come from the
// C++17 <cmath> special functions; higher orders use recurrences in the
// stable direction (Miller downward with series normalization for J and I,
// upward for K). Accuracy is validated against a high-precision fixture in
// the test suite.
double cyl_j(int order, double x);
double cyl_k(int order, double x);
double cyl_i(int order, double x);

// Value and derivative together (one ladder walk instead of three).
struct ValueDeriv {
  double value = 0.0;
  double deriv = 0.0;
};
ValueDeriv cyl_j_pair(int order, double x);
ValueDeriv cyl_k_pair(int order, double x);
ValueDeriv cyl_i_pair(int order, double x);

// First positive zero of J_m and of J_m' (m >= 1), by scan + bisection.
double first_zero_j(int order);
double first_zero_j_prime(int order);

}  // namespace wgm::bessel
