#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "homprobe/analytic.hpp"

namespace homprobe::oracle {

using Complex = std::complex<double>;

struct OracleConfig {
  int n_max = 14;                // photon-number cutoff per mode
  double tail_tolerance = 1e-8;  // acceptable truncated coherent weight

  void validate() const;
};

/// The photon compressed onto the probe mode u and a single mode v spanning
/// the orthogonal complement. Either a coherent superposition
/// amp_u|u⟩ + amp_v|v⟩ or an incoherent mixture with populations (T, 1−T).
struct EffectivePhotonState {
  enum class Representation { PureSuperposition, IncoherentMixture };

  Complex amp_u{1.0, 0.0};
  Complex amp_v{0.0, 0.0};
  Representation representation = Representation::PureSuperposition;
  double population_u = 1.0;  // mixture only

  /// amp_u = √T, amp_v = e^{iφ}√(1−T).
  static EffectivePhotonState superposition(double T, double phase);
  static EffectivePhotonState mixture(double T);

  /// Weight of the photon in the probe mode.
  double overlap() const;
  void validate() const;
};

enum class PortLabels { Input, Output };

/// Dense amplitude tensor over four bosonic modes. Index order is
/// (port 1, u), (port 1, v), (port 2, u), (port 2, v): (a_u, a_v, b_u, b_v)
/// at the input and (c_u, c_v, d_u, d_v) after the beam splitter.
class FockState {
 public:
  using Occupation = std::array<int, 4>;

  explicit FockState(int n_max, PortLabels labels = PortLabels::Input);

  int n_max() const noexcept { return n_max_; }
  PortLabels labels() const noexcept { return labels_; }
  std::size_t dimension() const noexcept { return amps_.size(); }

  Complex& operator()(const Occupation& n) { return amps_[index(n)]; }
  Complex operator()(const Occupation& n) const { return amps_[index(n)]; }
  Complex amplitude(int n0, int n1, int n2, int n3) const { return (*this)({n0, n1, n2, n3}); }

  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  std::vector<Complex>& amplitudes() noexcept { return amps_; }

  Occupation occupation(std::size_t flat) const;
  std::size_t index(const Occupation& n) const;

  double norm_squared() const;
  /// Probability mass lost to truncation so far.
  double norm_deficit() const noexcept { return norm_deficit_; }
  void set_norm_deficit(double d) noexcept { norm_deficit_ = d; }

 private:
  int n_max_;
  PortLabels labels_;
  std::vector<Complex> amps_;
  double norm_deficit_ = 0.0;
};

struct WeightedBranch {
  double weight;
  FockState state;
};

/// Poisson weight of photon numbers above n_max, Σ_{n>n_max} e^{−m} mⁿ/n!.
double coherent_tail(double mean_photons, int n_max);

/// Smallest cutoff whose coherent tail is within tolerance.
int required_n_max(double mean_photons, double tolerance);

/// Input density operator as pure branches: vacuum (weight 1−p) and the
/// photon (weight p, or p·T and p·(1−T) for a mixture) in port a, each
/// times the truncated coherent state |β⟩ in mode b_u.
std::vector<WeightedBranch> prepare_input(const SetupParams& s, const EffectivePhotonState& photon,
                                          const OracleConfig& cfg);

/// Balanced beam splitter a = (c − d)/√2, b = (c + d)/√2 applied in each
/// spectral sector. Amplitude pushed past the cutoff is added to the norm
/// deficit.
FockState apply_beam_splitter(const FockState& state);

struct ClickProbabilities {
  double p_c = 0.0;
  double p_d = 0.0;
  double p_cd = 0.0;
};

/// Click statistics from the no-click operators ξ(1−η)^{n_c} and
/// ξ(1−η)^{n_d} on output-labelled branches.
ClickProbabilities click_probabilities(const std::vector<WeightedBranch>& branches, const SetupParams& s);

/// Full pipeline: prepare, split, detect. Accurate to the coherent tail.
double oracle_coincidence_rate(
    const SetupParams& s, double T, double phase, const OracleConfig& cfg,
    EffectivePhotonState::Representation rep = EffectivePhotonState::Representation::PureSuperposition);

/// Max entrywise residual of c·Z − (1−η)·Z·c with Z = :exp(−η c†c):,
/// over columns n < n_max of a single truncated mode.
double verify_commutation(const OracleConfig& cfg, double eta);

struct SweepResult {
  std::size_t evaluated = 0;
  double max_abs_difference = 0.0;
  SetupParams worst_params{};
  double worst_overlap = 0.0;
};

/// Randomized oracle-versus-closed-form sweep: p ∈ [0,1], η ∈ (0,1],
/// ξ ∈ [0.9,1], |β|² ∈ [0,2], T ∈ {0, ¼, ½, ¾, 1}. Deterministic in seed.
SweepResult agreement_sweep(std::size_t tuples, std::uint64_t seed, const OracleConfig& cfg);

}  // namespace homprobe::oracle
