#include "homprobe/montecarlo.hpp"

#include <cmath>
#include <sstream>

#include "homprobe/errors.hpp"
#include "homprobe/parallel.hpp"
#include "homprobe/random.hpp"

namespace homprobe::mc {
namespace {

double binomial_variance_of_rate(const CountRecord& r) {
  const double n = static_cast<double>(r.n_pulses);
  const double f = static_cast<double>(r.coincidences) / n;
  return f * (1.0 - f) / n;
}

}  // namespace

void TrialPlan::validate() const {
  if (n_pulses < 1) throw InvalidArgument("trial plan needs at least one pulse");
}

CountRecord simulate_counts(const SetupParams& s, double T, const TrialPlan& plan) {
  plan.validate();
  const double rate = coincidence_rate(s, T);
  CountRecord rec;
  rec.setting = T == 0.0 ? Setting::Unmatched : Setting::Matched;
  rec.overlap = T;
  rec.n_pulses = plan.n_pulses;

  Rng rng(plan.seed);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < plan.n_pulses; ++i) hits += uniform01(rng) < rate ? 1 : 0;
  rec.coincidences = hits;
  return rec;
}

Estimate estimate_visibility(const CountRecord& matched, const CountRecord& unmatched) {
  if (matched.n_pulses == 0 || unmatched.n_pulses == 0) throw InvalidArgument("count record with zero pulses");
  if (unmatched.coincidences == 0)
    throw NumericalError("cannot normalize visibility: zero coincidences in the unmatched setting");
  const double r_t = static_cast<double>(matched.coincidences) / static_cast<double>(matched.n_pulses);
  const double r_0 = static_cast<double>(unmatched.coincidences) / static_cast<double>(unmatched.n_pulses);
  Estimate e;
  e.value = 1.0 - r_t / r_0;
  // ∂V/∂r_T = −1/r_0, ∂V/∂r_0 = r_T/r_0²
  const double var = binomial_variance_of_rate(matched) / (r_0 * r_0) +
                     (r_t * r_t) / (r_0 * r_0 * r_0 * r_0) * binomial_variance_of_rate(unmatched);
  e.std_error = std::sqrt(var);
  return e;
}

OverlapEstimate estimate_overlap(double v_hat, double v_stderr, const SetupParams& s) {
  const double cf = correction_factor(s);
  if (!(cf > 0.0)) throw NumericalError("correction factor is zero; overlap cannot be inferred");
  OverlapEstimate o;
  o.value = v_hat / cf;
  o.std_error = v_stderr / cf;
  o.out_of_range = o.value < 0.0 || o.value > 1.0;
  return o;
}

DipReplica simulate_dip(const SetupParams& s, double T, const TrialPlan& plan) {
  DipReplica r;
  r.matched = simulate_counts(s, T, {plan.n_pulses, derive_seed(plan.seed, 0)});
  r.unmatched = simulate_counts(s, 0.0, {plan.n_pulses, derive_seed(plan.seed, 1)});
  r.matched.setting = Setting::Matched;
  r.visibility = estimate_visibility(r.matched, r.unmatched);
  r.overlap = estimate_overlap(r.visibility.value, r.visibility.std_error, s);
  return r;
}

std::vector<DipReplica> simulate_replicas(const SetupParams& s, double T, const TrialPlan& plan,
                                          std::size_t replicas) {
  plan.validate();
  std::vector<DipReplica> out(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    out[r] = simulate_dip(s, T, {plan.n_pulses, derive_seed(plan.seed, r)});
  });
  return out;
}

std::vector<UncertaintyRow> uncertainty_scan(const std::vector<SetupParams>& family, double T,
                                             const TrialPlan& plan, std::size_t replicas) {
  plan.validate();
  if (replicas < 2) throw InvalidArgument("uncertainty scan needs at least 2 replicas");

  const std::size_t cells = family.size();
  std::vector<double> estimates(cells * replicas);
  parallel_for(cells * replicas, [&](std::size_t job) {
    const std::size_t cell = job / replicas;
    const std::size_t rep = job % replicas;
    const TrialPlan p{plan.n_pulses, derive_seed(derive_seed(plan.seed, cell), rep)};
    estimates[job] = simulate_dip(family[cell], T, p).overlap.value;
  });

  std::vector<UncertaintyRow> rows(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) mean += estimates[c * replicas + r];
    mean /= static_cast<double>(replicas);
    double ss = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
      const double d = estimates[c * replicas + r] - mean;
      ss += d * d;
    }
    rows[c].params = family[c];
    rows[c].mean_overlap = mean;
    rows[c].empirical_stderr = std::sqrt(ss / static_cast<double>(replicas - 1));
    rows[c].predicted_scale =
        1.0 / (correction_factor(family[c]) *
               std::sqrt(static_cast<double>(plan.n_pulses) * coincidence_rate(family[c], 0.0)));
  }
  return rows;
}

double fit_scaling_constant(const std::vector<UncertaintyRow>& rows) {
  double num = 0.0, den = 0.0;
  for (const auto& r : rows) {
    num += r.empirical_stderr * r.predicted_scale;
    den += r.predicted_scale * r.predicted_scale;
  }
  if (!(den > 0.0)) throw NumericalError("no usable rows to fit the scaling constant");
  return num / den;
}

}  // namespace homprobe::mc
