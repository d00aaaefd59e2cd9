#include "wgmkit/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace wgm::bessel {

namespace {

constexpr double kRescaleLimit = 1e250;
constexpr double kRescale = 1e-250;

void require_domain(int order, double x) {
  if (order < 0) throw std::domain_error("bessel: order must be >= 0");
  if (!(x >= 0.0)) throw std::domain_error("bessel: argument must be >= 0");
}

// J_{order-1}, J_order, J_{order+1}. For m <= 1 the std seeds are used
// directly; above that either upward recurrence (x comfortably above the
// order, no growth) or Miller's downward recurrence normalized with
// J_0 + 2*sum_{k even} J_2k = 1.
void j_window(int order, double x, double out[3]) {
  if (order <= 1) {
    const double j0 = std::cyl_bessel_j(0, x);
    const double j1 = std::cyl_bessel_j(1, x);
    if (order == 0) {
      out[0] = -j1;  // J_{-1}
      out[1] = j0;
      out[2] = j1;
    } else {
      out[0] = j0;
      out[1] = j1;
      out[2] = x > 0.0 ? (2.0 / x) * j1 - j0 : 0.0;
    }
    return;
  }
  if (x == 0.0) {
    out[0] = order == 1 ? 1.0 : 0.0;
    out[1] = 0.0;
    out[2] = 0.0;
    return;
  }
  if (x >= order + 2.0) {
    // Above the turning point the upward recurrence does not amplify error.
    double a = std::cyl_bessel_j(0, x);
    double b = std::cyl_bessel_j(1, x);
    for (int k = 1; k < order; ++k) {
      const double c = (2.0 * k / x) * b - a;
      a = b;
      b = c;
    }
    // a = J_{order-1}, b = J_order
    out[0] = a;
    out[1] = b;
    out[2] = (2.0 * order / x) * b - a;
    return;
  }

  // Miller downward.
  const int top = std::max(order + 1, static_cast<int>(x) + 1);
  const int start = top + 20 + static_cast<int>(std::sqrt(44.0 * (top + 2)));
  double bkp1 = 0.0;
  double bk = 1e-30;
  double sum = 0.0;
  double cap[3] = {0.0, 0.0, 0.0};
  for (int k = start; k >= 1; --k) {
    const double bkm1 = (2.0 * k / x) * bk - bkp1;
    bkp1 = bk;
    bk = bkm1;
    // bk is now J_{k-1} (unnormalized), bkp1 is J_k
    if (k - 1 == order + 1) cap[2] = bk;
    if (k - 1 == order) cap[1] = bk;
    if (k - 1 == order - 1) cap[0] = bk;
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * bk;
    if (std::abs(bk) > kRescaleLimit) {
      bk *= kRescale;
      bkp1 *= kRescale;
      sum *= kRescale;
      for (double& c : cap) c *= kRescale;
    }
  }
  sum += bk;  // bk holds the unnormalized J_0 after the final step
  const double norm = 1.0 / sum;
  out[0] = cap[0] * norm;
  out[1] = cap[1] * norm;
  out[2] = cap[2] * norm;
}

// K_{order-1}, K_order, K_{order+1} by upward recurrence (stable for K).
void k_window(int order, double x, double out[3]) {
  if (!(x > 0.0)) throw std::domain_error("bessel: K requires x > 0");
  const double k0 = std::cyl_bessel_k(0, x);
  const double k1 = std::cyl_bessel_k(1, x);
  if (order == 0) {
    out[0] = k1;  // K_{-1} = K_1
    out[1] = k0;
    out[2] = k1;
    return;
  }
  double a = k0, b = k1;
  for (int k = 1; k < order; ++k) {
    const double c = a + (2.0 * k / x) * b;
    a = b;
    b = c;
  }
  // a = K_{order-1}, b = K_order
  out[0] = a;
  out[1] = b;
  out[2] = a + (2.0 * order / x) * b;
}

// I_{order-1}, I_order, I_{order+1}, Miller downward normalized with
// e^x = I_0 + 2*sum_{k>=1} I_k.
void i_window(int order, double x, double out[3]) {
  if (order <= 1) {
    const double i0 = std::cyl_bessel_i(0, x);
    const double i1 = std::cyl_bessel_i(1, x);
    if (order == 0) {
      out[0] = i1;  // I_{-1} = I_1
      out[1] = i0;
      out[2] = i1;
    } else {
      out[0] = i0;
      out[1] = i1;
      out[2] = x > 0.0 ? i0 - (2.0 / x) * i1 : 0.0;
    }
    return;
  }
  if (x == 0.0) {
    out[0] = order == 1 ? 1.0 : 0.0;
    out[1] = 0.0;
    out[2] = 0.0;
    return;
  }
  const int top = std::max(order + 1, static_cast<int>(x) + 1);
  const int start = top + 20 + static_cast<int>(std::sqrt(44.0 * (top + 2)));
  double bkp1 = 0.0;
  double bk = 1e-30;
  double sum = 0.0;
  double cap[3] = {0.0, 0.0, 0.0};
  for (int k = start; k >= 1; --k) {
    const double bkm1 = (2.0 * k / x) * bk + bkp1;
    bkp1 = bk;
    bk = bkm1;
    if (k - 1 == order + 1) cap[2] = bk;
    if (k - 1 == order) cap[1] = bk;
    if (k - 1 == order - 1) cap[0] = bk;
    if (k - 1 > 0) sum += 2.0 * bk;
    if (std::abs(bk) > kRescaleLimit) {
      bk *= kRescale;
      bkp1 *= kRescale;
      sum *= kRescale;
      for (double& c : cap) c *= kRescale;
    }
  }
  sum += bk;
  const double norm = std::exp(x) / sum;
  out[0] = cap[0] * norm;
  out[1] = cap[1] * norm;
  out[2] = cap[2] * norm;
}

}  // namespace

double cyl_j(int order, double x) {
  require_domain(order, x);
  double w[3];
  j_window(order, x, w);
  return w[1];
}

double cyl_k(int order, double x) {
  require_domain(order, x);
  double w[3];
  k_window(order, x, w);
  return w[1];
}

double cyl_i(int order, double x) {
  require_domain(order, x);
  double w[3];
  i_window(order, x, w);
  return w[1];
}

ValueDeriv cyl_j_pair(int order, double x) {
  require_domain(order, x);
  double w[3];
  j_window(order, x, w);
  return {w[1], 0.5 * (w[0] - w[2])};
}

ValueDeriv cyl_k_pair(int order, double x) {
  require_domain(order, x);
  double w[3];
  k_window(order, x, w);
  return {w[1], -0.5 * (w[0] + w[2])};
}

ValueDeriv cyl_i_pair(int order, double x) {
  require_domain(order, x);
  double w[3];
  i_window(order, x, w);
  return {w[1], 0.5 * (w[0] + w[2])};
}

namespace {

template <typename F>
double scan_first_sign_change(F&& f, double x0, double step, double x_max) {
  double xa = x0;
  double fa = f(xa);
  for (double xb = xa + step; xb < x_max; xb += step) {
    const double fb = f(xb);
    if (fa == 0.0) return xa;
    if (fa * fb < 0.0) {
      // bisect
      double lo = xa, hi = xb, flo = fa;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
        if (hi - lo < 1e-14 * hi) break;
      }
      return 0.5 * (lo + hi);
    }
    xa = xb;
    fa = fb;
  }
  throw std::runtime_error("bessel: no zero located in scan range");
}

}  // namespace

double first_zero_j(int order) {
  if (order < 0) throw std::domain_error("bessel: order must be >= 0");
  const double step = 0.05 * std::max(1.0, std::cbrt(static_cast<double>(order) + 1.0));
  return scan_first_sign_change([order](double x) { return cyl_j(order, x); },
                                std::max(1e-3, static_cast<double>(order) * 0.5), step,
                                order + 200.0);
}

double first_zero_j_prime(int order) {
  if (order < 0) throw std::domain_error("bessel: order must be >= 0");
  const double step = 0.05 * std::max(1.0, std::cbrt(static_cast<double>(order) + 1.0));
  return scan_first_sign_change([order](double x) { return cyl_j_pair(order, x).deriv; },
                                std::max(1e-3, static_cast<double>(order) * 0.5), step,
                                order + 200.0);
}

}  // namespace wgm::bessel
