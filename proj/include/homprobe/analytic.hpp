#pragma once

namespace homprobe {

/// Physical setup: preparation probability p, detector efficiency η,
/// no-dark-count probability ξ (dark-count probability is 1 − ξ) and probe
/// intensity |β|². The phase of β never enters any observable.
struct SetupParams {
  double p = 1.0;
  double eta = 1.0;
  double xi = 1.0;
  double beta_sq = 1.0;

  /// Throws InvalidArgument unless p ∈ [0,1], η ∈ (0,1], ξ ∈ (0,1], |β|² ≥ 0.
  void validate() const;
};

/// The triple every detection statistic depends on: (ηp, η|β|², ξ).
struct EffectiveParams {
  double eta_p = 1.0;
  double eta_beta_sq = 1.0;
  double xi = 1.0;

  void validate() const;
};

EffectiveParams reparameterize(const SetupParams& s);

/// Normally ordered no-click expectation ⟨:exp(−η_c n_c − η_d n_d):⟩ for
/// the output state with overlap T.
double z_expectation(const SetupParams& s, double eta_c, double eta_d, double T);

/// Coincidence probability per pulse pair, R_C(T).
double coincidence_rate(const SetupParams& s, double T);
double coincidence_rate(const EffectiveParams& e, double T);

/// R_C assembled from the Z expectations, 1 − ξ[Z(η,0)+Z(0,η)] + ξ²Z(η,η).
/// Independent route used as a regression guard on coincidence_rate.
double coincidence_rate_composed(const SetupParams& s, double T);

/// Dip visibility (R_C(0) − R_C(T))/R_C(0). Throws UndefinedVisibility when
/// R_C(0) = 0, i.e. no probe light and no dark counts.
double visibility(const SetupParams& s, double T);
double visibility(const EffectiveParams& e, double T);

/// Proportionality constant between visibility and overlap, V = c_f·T.
double correction_factor(const SetupParams& s);
double correction_factor(const EffectiveParams& e);

/// First-order expansion 1 − (1/(2ηp) − ¼)·η|β|², valid only for ξ = 1.
double correction_factor_small_beta(const SetupParams& s);
double correction_factor_small_beta(const EffectiveParams& e);

/// c_f·√R_C(0). Larger is better: the relative uncertainty of the overlap
/// scales as its reciprocal.
double figure_of_merit(const SetupParams& s);
double figure_of_merit(const EffectiveParams& e);

}  // namespace homprobe
