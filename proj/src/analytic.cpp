#include "homprobe/analytic.hpp"

#include <cmath>
#include <sstream>

#include "homprobe/errors.hpp"

namespace homprobe {
namespace {

bool in_closed_unit(double v) { return v >= 0.0 && v <= 1.0; }

void require_overlap(double T) {
  if (!in_closed_unit(T)) {
    std::ostringstream os;
    os << "overlap T = " << T << " outside [0, 1]";
    throw InvalidArgument(os.str());
  }
}

// Shared pieces of every rate expression, with e = exp(−η|β|²/2):
//   R_C(0) = (1 − ξe)(1 − ξ(1−ηp)e)
//   R_C(T) = R_C(0) − ½ξ·ηp·η|β|²·e·T
// The 1 − ξe factors go through expm1 so small intensities keep precision.
struct RateTerms {
  double rc0;
  double slope;      // −dR_C/dT
  double log_slope;  // log of slope, finite when slope > 0
};

RateTerms rate_terms(const EffectiveParams& e) {
  const double x = e.eta_beta_sq;
  const double em1 = std::expm1(-0.5 * x);  // e − 1
  const double ex = std::exp(-0.5 * x);
  const double q = 1.0 - e.eta_p;
  const double bright = (1.0 - e.xi) - e.xi * em1;          // 1 − ξe
  const double heralded = (1.0 - e.xi * q) - e.xi * q * em1;  // 1 − ξ(1−ηp)e

  RateTerms t{};
  t.rc0 = bright * heralded;
  const double prefactor = 0.5 * e.xi * e.eta_p * x;
  if (prefactor > 0.0) {
    t.log_slope = std::log(prefactor) - 0.5 * x;
    t.slope = x > 500.0 ? std::exp(t.log_slope) : prefactor * ex;
  } else {
    t.log_slope = -INFINITY;
    t.slope = 0.0;
  }
  return t;
}

bool visibility_undefined(const EffectiveParams& e) { return e.eta_beta_sq == 0.0 && e.xi == 1.0; }

}  // namespace

void SetupParams::validate() const {
  std::ostringstream os;
  if (!in_closed_unit(p)) os << "p = " << p << " outside [0, 1]";
  else if (!(eta > 0.0 && eta <= 1.0)) os << "eta = " << eta << " outside (0, 1]";
  else if (!(xi > 0.0 && xi <= 1.0)) os << "xi = " << xi << " outside (0, 1]";
  else if (!(beta_sq >= 0.0) || !std::isfinite(beta_sq)) os << "beta_sq = " << beta_sq << " must be finite and >= 0";
  else return;
  throw InvalidArgument(os.str());
}

void EffectiveParams::validate() const {
  std::ostringstream os;
  if (!in_closed_unit(eta_p)) os << "eta_p = " << eta_p << " outside [0, 1]";
  else if (!(eta_beta_sq >= 0.0) || !std::isfinite(eta_beta_sq))
    os << "eta_beta_sq = " << eta_beta_sq << " must be finite and >= 0";
  else if (!(xi > 0.0 && xi <= 1.0)) os << "xi = " << xi << " outside (0, 1]";
  else return;
  throw InvalidArgument(os.str());
}

EffectiveParams reparameterize(const SetupParams& s) {
  s.validate();
  return {s.eta * s.p, s.eta * s.beta_sq, s.xi};
}

double z_expectation(const SetupParams& s, double eta_c, double eta_d, double T) {
  s.validate();
  if (!in_closed_unit(eta_c) || !in_closed_unit(eta_d))
    throw InvalidArgument("z_expectation: efficiencies must lie in [0, 1]");
  require_overlap(T);
  const double sum = eta_c + eta_d;
  const double diff = eta_c - eta_d;
  return (1.0 - 0.5 * sum * s.p + 0.25 * diff * diff * s.p * s.beta_sq * T) * std::exp(-0.5 * sum * s.beta_sq);
}

double coincidence_rate(const EffectiveParams& e, double T) {
  e.validate();
  require_overlap(T);
  const RateTerms t = rate_terms(e);
  const double rc = t.rc0 - t.slope * T;
  if (rc < -1e-12 || rc > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "coincidence rate " << rc << " outside [0, 1]";
    throw InternalError(os.str());
  }
  return rc;
}

double coincidence_rate(const SetupParams& s, double T) { return coincidence_rate(reparameterize(s), T); }

double coincidence_rate_composed(const SetupParams& s, double T) {
  s.validate();
  require_overlap(T);
  const double z_c = z_expectation(s, s.eta, 0.0, T);
  const double z_d = z_expectation(s, 0.0, s.eta, T);
  const double z_cd = z_expectation(s, s.eta, s.eta, T);
  return 1.0 - s.xi * (z_c + z_d) + s.xi * s.xi * z_cd;
}

double visibility(const EffectiveParams& e, double T) {
  e.validate();
  require_overlap(T);
  if (visibility_undefined(e)) throw UndefinedVisibility();
  const double rc0 = coincidence_rate(e, 0.0);
  return (rc0 - coincidence_rate(e, T)) / rc0;
}

double visibility(const SetupParams& s, double T) { return visibility(reparameterize(s), T); }

double correction_factor(const EffectiveParams& e) {
  e.validate();
  if (visibility_undefined(e))
    throw NumericalError(
        "correction factor undefined: beta_sq = 0 with xi = 1 (the limit 1 is given by the small-beta expansion)");
  const RateTerms t = rate_terms(e);
  if (t.slope == 0.0) return 0.0;
  if (e.eta_beta_sq > 500.0) return std::exp(t.log_slope - std::log(t.rc0));
  return t.slope / t.rc0;
}

double correction_factor(const SetupParams& s) { return correction_factor(reparameterize(s)); }

double correction_factor_small_beta(const EffectiveParams& e) {
  e.validate();
  if (e.xi != 1.0) throw InvalidArgument("small-beta expansion of the correction factor requires xi = 1");
  if (!(e.eta_p > 0.0)) throw InvalidArgument("small-beta expansion requires eta_p > 0");
  return 1.0 - (1.0 / (2.0 * e.eta_p) - 0.25) * e.eta_beta_sq;
}

double correction_factor_small_beta(const SetupParams& s) { return correction_factor_small_beta(reparameterize(s)); }

double figure_of_merit(const EffectiveParams& e) {
  return correction_factor(e) * std::sqrt(coincidence_rate(e, 0.0));
}

double figure_of_merit(const SetupParams& s) { return figure_of_merit(reparameterize(s)); }

}  // namespace homprobe
