#include "homprobe/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homprobe/errors.hpp"
#include "homprobe/parallel.hpp"

namespace homprobe::design {

void ScanRange::validate() const {
  std::ostringstream os;
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) os << "scan range needs finite lo < hi, got [" << lo << ", " << hi << "]";
  else if (steps < 2) os << "scan range needs at least 2 steps";
  else if (spacing == Spacing::Logarithmic && !(lo > 0.0)) os << "logarithmic scan range needs lo > 0";
  else return;
  throw InvalidArgument(os.str());
}

std::vector<double> ScanRange::values() const {
  validate();
  std::vector<double> v(steps);
  const double denom = static_cast<double>(steps - 1);
  if (spacing == Spacing::Linear) {
    for (std::size_t i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * (static_cast<double>(i) / denom);
  } else {
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < steps; ++i) v[i] = std::exp(a + (b - a) * (static_cast<double>(i) / denom));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

ContourGrid contour_grid(const ScanRange& eta_p_range, const ScanRange& intensity_range, double xi) {
  eta_p_range.validate();
  intensity_range.validate();
  if (!(xi > 0.0 && xi <= 1.0)) throw InvalidArgument("xi outside (0, 1]");
  if (eta_p_range.lo < 0.0 || eta_p_range.hi > 1.0) throw InvalidArgument("eta_p range must lie within [0, 1]");
  if (intensity_range.lo < 0.0) throw InvalidArgument("intensity range must be >= 0");
  if (xi == 1.0 && intensity_range.lo == 0.0)
    throw InvalidArgument("intensity range must exclude 0 when xi = 1 (correction factor undefined there)");

  ContourGrid g;
  g.xi = xi;
  g.eta_p = eta_p_range.values();
  g.eta_beta_sq = intensity_range.values();
  const std::size_t ny = g.eta_beta_sq.size();
  g.correction_factor.resize(g.eta_p.size() * ny);
  g.rc0.resize(g.eta_p.size() * ny);

  parallel_for(g.eta_p.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const EffectiveParams e{g.eta_p[i], g.eta_beta_sq[j], xi};
      g.correction_factor[i * ny + j] = correction_factor(e);
      g.rc0[i * ny + j] = coincidence_rate(e, 0.0);
    }
  });
  return g;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(hi > lo)) return lo;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

CorrectionFactorMax max_correction_factor(double xi, const ScanRange& eta_p_range, const ScanRange& intensity_range) {
  const ContourGrid g = contour_grid(eta_p_range, intensity_range, xi);
  const std::size_t ny = g.eta_beta_sq.size();
  const auto best = static_cast<std::size_t>(
      std::distance(g.correction_factor.begin(), std::max_element(g.correction_factor.begin(), g.correction_factor.end())));
  const std::size_t bi = best / ny, bj = best % ny;

  CorrectionFactorMax out;
  out.eta_p = g.eta_p[bi];
  if (xi == 1.0) {
    // c_f → 1 as η|β|² → 0 for every ηp > 0: a supremum, never attained
    out.cf_max = 1.0;
    out.eta_beta_sq = 0.0;
    out.boundary = true;
    return out;
  }

  const double lo = g.eta_beta_sq[bj == 0 ? 0 : bj - 1];
  const double hi = g.eta_beta_sq[std::min(bj + 1, ny - 1)];
  auto cf = [&](double x) { return correction_factor(EffectiveParams{out.eta_p, x, xi}); };
  const double x = golden_section_maximize(cf, lo, hi, 1e-10);
  const double refined = cf(x);
  if (refined >= g.correction_factor[best]) {
    out.cf_max = refined;
    out.eta_beta_sq = x;
  } else {
    out.cf_max = g.correction_factor[best];
    out.eta_beta_sq = g.eta_beta_sq[bj];
  }
  const double edge_tol = 1e-8 * (intensity_range.hi - intensity_range.lo);
  out.boundary = out.eta_beta_sq - intensity_range.lo <= edge_tol || intensity_range.hi - out.eta_beta_sq <= edge_tol;
  return out;
}

OptimalIntensity optimal_intensity(double eta_p, double xi, double x_hi) {
  if (!(eta_p > 0.0 && eta_p <= 1.0)) throw InvalidArgument("eta_p outside (0, 1]");
  if (!(xi > 0.0 && xi <= 1.0)) throw InvalidArgument("xi outside (0, 1]");
  if (!(x_hi > 0.0) || !std::isfinite(x_hi)) throw InvalidArgument("intensity ceiling must be finite and > 0");

  auto merit = [&](double x) { return figure_of_merit(EffectiveParams{eta_p, x, xi}); };

  const ScanRange coarse{x_hi * 1e-6, x_hi, 1000, ScanRange::Spacing::Logarithmic};
  const std::vector<double> xs = coarse.values();
  std::size_t best = 0;
  double best_g = -1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double g = merit(xs[i]);
    if (!std::isfinite(g)) {
      std::ostringstream os;
      os << "figure of merit not finite at eta_beta_sq = " << xs[i];
      throw NumericalError(os.str());
    }
    if (g > best_g) {
      best_g = g;
      best = i;
    }
  }

  const double lo = xs[best == 0 ? 0 : best - 1];
  const double hi = xs[std::min(best + 1, xs.size() - 1)];
  const double x = golden_section_maximize(merit, lo, hi, 1e-7);
  const double g = merit(x);
  if (g >= best_g) return {x, g};
  return {xs[best], best_g};
}

std::vector<DipRow> dip_scan(const SpectralDensityMatrix& rho, const ModeFunction& u0, const ScanRange& delays,
                             const SetupParams& s) {
  s.validate();
  if (!same_grid(rho.grid(), u0.grid())) throw GridMismatch();
  const std::vector<double> taus = delays.values();
  std::vector<DipRow> rows(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    DipRow r;
    r.delay = taus[i];
    r.overlap = overlap_T(rho, delay_mode(u0, taus[i]));
    r.visibility = visibility(s, r.overlap);
    r.coincidence_rate = coincidence_rate(s, r.overlap);
    rows[i] = r;
  });
  return rows;
}

}  // namespace homprobe::design
