#pragma once

// Test-only reference computations. None of these call into the library's
// numerical paths; they restate the physics by independent routes.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <numbers>

namespace homprobe::testing {

// Coincidence rate exactly as printed, no refactoring.
inline double printed_rate(double p, double eta, double xi, double beta_sq, double T) {
  return 1.0 - xi * (2.0 - eta * p + 0.5 * eta * eta * p * beta_sq * T) * std::exp(-eta * beta_sq / 2.0) +
         xi * xi * (1.0 - eta * p) * std::exp(-eta * beta_sq);
}

inline double printed_correction_factor(double p, double eta, double xi, double beta_sq) {
  const double e = std::exp(-eta * beta_sq / 2.0);
  return xi * eta * eta * p * beta_sq * e / (2.0 * (1.0 - xi * (1.0 - eta * p) * e) * (1.0 - xi * e));
}

inline double printed_merit(double eta_p, double x, double xi) {
  return printed_correction_factor(eta_p, 1.0, xi, x) * std::sqrt(printed_rate(eta_p, 1.0, xi, x, 0.0));
}

// P(N > n) for N ~ Poisson(m) via the regularized incomplete gamma function.
inline double poisson_tail(double m, int n) {
  if (m == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n) + 1.0, m);
}

// |∫ |u(ω)|² e^{iωτ} dω|² for a Gaussian |u|² of width σ, by composite
// Simpson on a dense private grid.
inline double dense_gaussian_self_overlap(double sigma, double tau, int intervals = 40000) {
  const double lo = -14.0 * sigma, hi = 14.0 * sigma;
  const double h = (hi - lo) / intervals;
  double re = 0.0, im = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double w = lo + h * k;
    const double c = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double dens = std::exp(-w * w / (2.0 * sigma * sigma)) / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
    re += c * dens * std::cos(w * tau);
    im += c * dens * std::sin(w * tau);
  }
  re *= h / 3.0;
  im *= h / 3.0;
  return re * re + im * im;
}

struct GridArgmax {
  double x;
  double value;
};

// Exhaustive scan over lo, lo+step, ..., ≤ hi.
inline GridArgmax exhaustive_argmax(const std::function<double(double)>& f, double lo, double hi, double step) {
  GridArgmax best{lo, -INFINITY};
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long k = 0; k <= n; ++k) {
    const double x = lo + step * static_cast<double>(k);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

}  // namespace homprobe::testing
