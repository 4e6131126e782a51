#pragma once

#include <cstdint>
#include <vector>

#include "homprobe/analytic.hpp"

namespace homprobe::mc {

struct TrialPlan {
  std::uint64_t n_pulses = 1'000'000;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Setting { Matched, Unmatched };

/// Coincidences observed over n_pulses pulse pairs at one delay setting.
struct CountRecord {
  Setting setting = Setting::Matched;
  double overlap = 0.0;
  std::uint64_t coincidences = 0;
  std::uint64_t n_pulses = 0;
};

/// One Bernoulli draw per pulse pair with probability R_C(T). T = 0 is
/// recorded as the unmatched (distinguishable) setting.
CountRecord simulate_counts(const SetupParams& s, double T, const TrialPlan& plan);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// V̂ = 1 − (k_T/n_T)/(k_0/n_0) with first-order propagated binomial errors.
Estimate estimate_visibility(const CountRecord& matched, const CountRecord& unmatched);

struct OverlapEstimate {
  double value = 0.0;
  double std_error = 0.0;
  /// Set when the estimate falls outside [0, 1].
  bool out_of_range = false;
};

/// T̂ = V̂/c_f, ΔT̂ = ΔV̂/c_f. No clamping.
OverlapEstimate estimate_overlap(double v_hat, double v_stderr, const SetupParams& s);

/// Matched/unmatched pair simulated with seeds derived from plan.seed.
struct DipReplica {
  CountRecord matched;
  CountRecord unmatched;
  Estimate visibility;
  OverlapEstimate overlap;
};

DipReplica simulate_dip(const SetupParams& s, double T, const TrialPlan& plan);

/// `replicas` independent dip measurements; replica r uses
/// derive_seed(plan.seed, r). Output order is replica order.
std::vector<DipReplica> simulate_replicas(const SetupParams& s, double T, const TrialPlan& plan,
                                          std::size_t replicas);

struct UncertaintyRow {
  SetupParams params;
  double mean_overlap = 0.0;
  double empirical_stderr = 0.0;  // sample std of T̂ across replicas
  double predicted_scale = 0.0;   // 1/(c_f·√(n·R_C(0)))
};

/// Empirical spread of T̂ for each parameter set; cell k draws its replica
/// seeds from derive_seed(plan.seed, k).
std::vector<UncertaintyRow> uncertainty_scan(const std::vector<SetupParams>& family, double T,
                                             const TrialPlan& plan, std::size_t replicas);

/// Least-squares constant k in empirical ≈ k·predicted.
double fit_scaling_constant(const std::vector<UncertaintyRow>& rows);

}  // namespace homprobe::mc
