#include "homprobe/fock_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "homprobe/errors.hpp"
#include "homprobe/parallel.hpp"
#include "homprobe/random.hpp"

namespace homprobe::oracle {
namespace {

constexpr std::size_t kModes = 4;

// Two-mode beam-splitter image of |n_a, n_b⟩ as amplitudes on |n_c, N − n_c⟩.
struct SectorTerm {
  int n_c;
  double coefficient;
};

using SectorTable = std::vector<std::vector<std::vector<SectorTerm>>>;  // [n_a][n_b]

double binomial(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

SectorTable build_sector_table(int n_max) {
  SectorTable table(n_max + 1, std::vector<std::vector<SectorTerm>>(n_max + 1));
  for (int na = 0; na <= n_max; ++na) {
    for (int nb = 0; nb <= n_max; ++nb) {
      const int total = na + nb;
      // (a†)^na (b†)^nb = 2^{−N/2} Σ_k Σ_l C(na,k)(−1)^{na−k} C(nb,l) (c†)^{k+l} (d†)^{N−k−l}
      std::vector<double> poly(total + 1, 0.0);
      for (int k = 0; k <= na; ++k) {
        const double ck = binomial(na, k) * (((na - k) % 2) ? -1.0 : 1.0);
        for (int l = 0; l <= nb; ++l) poly[k + l] += ck * binomial(nb, l);
      }
      auto& terms = table[na][nb];
      for (int nc = 0; nc <= total; ++nc) {
        const int nd = total - nc;
        if (poly[nc] == 0.0 || nc > n_max || nd > n_max) continue;
        const double log_scale = 0.5 * (std::lgamma(nc + 1.0) + std::lgamma(nd + 1.0) - std::lgamma(na + 1.0) -
                                        std::lgamma(nb + 1.0)) -
                                 0.5 * total * std::numbers::ln2;
        terms.push_back({nc, poly[nc] * std::exp(log_scale)});
      }
    }
  }
  return table;
}

}  // namespace

void OracleConfig::validate() const {
  if (n_max < 1) throw InvalidArgument("oracle n_max must be >= 1");
  if (!(tail_tolerance > 0.0 && tail_tolerance <= 1e-3))
    throw InvalidArgument("oracle tail tolerance must lie in (0, 1e-3]");
}

// --- EffectivePhotonState ---------------------------------------------------

EffectivePhotonState EffectivePhotonState::superposition(double T, double phase) {
  if (!(T >= 0.0 && T <= 1.0)) throw InvalidArgument("overlap T outside [0, 1]");
  EffectivePhotonState st;
  st.amp_u = {std::sqrt(T), 0.0};
  st.amp_v = std::polar(std::sqrt(1.0 - T), phase);
  st.representation = Representation::PureSuperposition;
  st.population_u = T;
  return st;
}

EffectivePhotonState EffectivePhotonState::mixture(double T) {
  if (!(T >= 0.0 && T <= 1.0)) throw InvalidArgument("overlap T outside [0, 1]");
  EffectivePhotonState st;
  st.representation = Representation::IncoherentMixture;
  st.population_u = T;
  st.amp_u = {1.0, 0.0};
  st.amp_v = {1.0, 0.0};
  return st;
}

double EffectivePhotonState::overlap() const {
  return representation == Representation::PureSuperposition ? std::norm(amp_u) : population_u;
}

void EffectivePhotonState::validate() const {
  if (representation == Representation::PureSuperposition) {
    if (std::abs(std::norm(amp_u) + std::norm(amp_v) - 1.0) > 1e-12)
      throw InvalidArgument("photon superposition amplitudes are not normalized");
  } else if (!(population_u >= 0.0 && population_u <= 1.0)) {
    throw InvalidArgument("photon mixture population outside [0, 1]");
  }
}

// --- FockState --------------------------------------------------------------

FockState::FockState(int n_max, PortLabels labels) : n_max_(n_max), labels_(labels) {
  if (n_max < 1) throw InvalidArgument("Fock cutoff must be >= 1");
  const std::size_t d = static_cast<std::size_t>(n_max + 1);
  amps_.assign(d * d * d * d, Complex{0.0, 0.0});
}

std::size_t FockState::index(const Occupation& n) const {
  const auto d = static_cast<std::size_t>(n_max_ + 1);
  std::size_t flat = 0;
  for (int k : n) {
    if (k < 0 || k > n_max_) throw InvalidArgument("occupation number outside the truncated space");
    flat = flat * d + static_cast<std::size_t>(k);
  }
  return flat;
}

FockState::Occupation FockState::occupation(std::size_t flat) const {
  const auto d = static_cast<std::size_t>(n_max_ + 1);
  Occupation n{};
  for (std::size_t m = kModes; m-- > 0;) {
    n[m] = static_cast<int>(flat % d);
    flat /= d;
  }
  return n;
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

// --- truncation -------------------------------------------------------------

double coherent_tail(double mean_photons, int n_max) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
    throw InvalidArgument("mean photon number must be finite and >= 0");
  if (mean_photons == 0.0) return 0.0;
  // sum the tail directly; 1 − (head sum) would cancel catastrophically
  const double log_m = std::log(mean_photons);
  double tail = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = std::exp(-mean_photons + n * log_m - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean_photons && term <= 1e-17 * tail) break;
    if (n > n_max + 100000) break;
  }
  return std::min(tail, 1.0);
}

int required_n_max(double mean_photons, double tolerance) {
  int n = 1;
  while (coherent_tail(mean_photons, n) > tolerance) ++n;
  return n;
}

// --- pipeline ---------------------------------------------------------------

std::vector<WeightedBranch> prepare_input(const SetupParams& s, const EffectivePhotonState& photon,
                                          const OracleConfig& cfg) {
  s.validate();
  cfg.validate();
  photon.validate();

  const double tail = coherent_tail(s.beta_sq, cfg.n_max);
  if (tail > cfg.tail_tolerance) {
    const int need = required_n_max(s.beta_sq, cfg.tail_tolerance);
    std::ostringstream os;
    os << "coherent-state truncation tail " << tail << " exceeds tolerance " << cfg.tail_tolerance
       << " at n_max = " << cfg.n_max << "; use n_max >= " << need;
    throw TruncationError(os.str(), need);
  }

  // c_n = e^{−|β|²/2} βⁿ/√n!, β taken real
  std::vector<double> coherent(static_cast<std::size_t>(cfg.n_max + 1));
  const double beta = std::sqrt(s.beta_sq);
  coherent[0] = std::exp(-0.5 * s.beta_sq);
  for (int n = 1; n <= cfg.n_max; ++n) coherent[n] = coherent[n - 1] * beta / std::sqrt(static_cast<double>(n));

  auto with_photon = [&](Complex amp_u, Complex amp_v) {
    FockState st(cfg.n_max, PortLabels::Input);
    for (int n = 0; n <= cfg.n_max; ++n) {
      if (amp_u != Complex{}) st({1, 0, n, 0}) = amp_u * coherent[n];
      if (amp_v != Complex{}) st({0, 1, n, 0}) = amp_v * coherent[n];
    }
    st.set_norm_deficit(tail);
    return st;
  };

  std::vector<WeightedBranch> branches;
  if (s.p < 1.0) {
    FockState vac(cfg.n_max, PortLabels::Input);
    for (int n = 0; n <= cfg.n_max; ++n) vac({0, 0, n, 0}) = coherent[n];
    vac.set_norm_deficit(tail);
    branches.push_back({1.0 - s.p, std::move(vac)});
  }
  if (s.p > 0.0) {
    if (photon.representation == EffectivePhotonState::Representation::PureSuperposition) {
      branches.push_back({s.p, with_photon(photon.amp_u, photon.amp_v)});
    } else {
      const double t = photon.population_u;
      if (t > 0.0) branches.push_back({s.p * t, with_photon({1.0, 0.0}, {})});
      if (t < 1.0) branches.push_back({s.p * (1.0 - t), with_photon({}, {1.0, 0.0})});
    }
  }
  return branches;
}

FockState apply_beam_splitter(const FockState& state) {
  const int n_max = state.n_max();
  const SectorTable table = build_sector_table(n_max);
  FockState out(n_max, PortLabels::Output);

  const auto& in = state.amplitudes();
  for (std::size_t flat = 0; flat < in.size(); ++flat) {
    const Complex amp = in[flat];
    if (amp == Complex{}) continue;
    const auto [p1u, p1v, p2u, p2v] = state.occupation(flat);
    const int total_u = p1u + p2u;
    const int total_v = p1v + p2v;
    for (const auto& tu : table[p1u][p2u]) {
      for (const auto& tv : table[p1v][p2v]) {
        out({tu.n_c, tv.n_c, total_u - tu.n_c, total_v - tv.n_c}) += amp * (tu.coefficient * tv.coefficient);
      }
    }
  }
  const double lost = std::max(0.0, state.norm_squared() - out.norm_squared());
  out.set_norm_deficit(state.norm_deficit() + lost);
  return out;
}

ClickProbabilities click_probabilities(const std::vector<WeightedBranch>& branches, const SetupParams& s) {
  s.validate();
  ClickProbabilities acc;
  for (const auto& [weight, st] : branches) {
    if (st.labels() != PortLabels::Output)
      throw InvalidArgument("click probabilities need beam-splitter output states");
    const int n_max = st.n_max();
    std::vector<double> dark_free(static_cast<std::size_t>(2 * n_max + 1));
    for (std::size_t n = 0; n < dark_free.size(); ++n) dark_free[n] = std::pow(1.0 - s.eta, static_cast<double>(n));

    double norm = 0.0, no_c = 0.0, no_d = 0.0, no_cd = 0.0;
    const auto& amps = st.amplitudes();
    for (std::size_t flat = 0; flat < amps.size(); ++flat) {
      const double prob = std::norm(amps[flat]);
      if (prob == 0.0) continue;
      const auto [cu, cv, du, dv] = st.occupation(flat);
      const double qc = dark_free[static_cast<std::size_t>(cu + cv)];
      const double qd = dark_free[static_cast<std::size_t>(du + dv)];
      norm += prob;
      no_c += prob * qc;
      no_d += prob * qd;
      no_cd += prob * qc * qd;
    }
    acc.p_c += weight * (norm - s.xi * no_c);
    acc.p_d += weight * (norm - s.xi * no_d);
    acc.p_cd += weight * (norm - s.xi * no_c - s.xi * no_d + s.xi * s.xi * no_cd);
  }
  acc.p_c = std::clamp(acc.p_c, 0.0, 1.0);
  acc.p_d = std::clamp(acc.p_d, 0.0, 1.0);
  acc.p_cd = std::clamp(acc.p_cd, 0.0, 1.0);
  return acc;
}

double oracle_coincidence_rate(const SetupParams& s, double T, double phase, const OracleConfig& cfg,
                               EffectivePhotonState::Representation rep) {
  const auto photon = rep == EffectivePhotonState::Representation::PureSuperposition
                          ? EffectivePhotonState::superposition(T, phase)
                          : EffectivePhotonState::mixture(T);
  auto branches = prepare_input(s, photon, cfg);
  for (auto& b : branches) b.state = apply_beam_splitter(b.state);
  return click_probabilities(branches, s).p_cd;
}

double verify_commutation(const OracleConfig& cfg, double eta) {
  if (cfg.n_max < 1) throw InvalidArgument("oracle n_max must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta outside [0, 1]");
  const int dim = cfg.n_max + 1;

  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    z(n, n) = std::pow(1.0 - eta, static_cast<double>(n));
    if (n > 0) lower(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  const Eigen::MatrixXd residual = lower * z - (1.0 - eta) * z * lower;
  // the top column touches the truncation edge
  return residual.leftCols(dim - 1).cwiseAbs().maxCoeff();
}

SweepResult agreement_sweep(std::size_t tuples, std::uint64_t seed, const OracleConfig& cfg) {
  cfg.validate();
  constexpr double kOverlaps[] = {0.0, 0.25, 0.5, 0.75, 1.0};

  struct Cell {
    SetupParams s;
    double T;
    double diff;
  };
  std::vector<Cell> cells(tuples);
  parallel_for(tuples, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    Cell c{};
    c.s.p = uniform01(rng);
    c.s.eta = 1.0 - uniform01(rng);
    c.s.xi = 0.9 + 0.1 * uniform01(rng);
    c.s.beta_sq = 2.0 * uniform01(rng);
    c.T = kOverlaps[rng() % 5];
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    c.diff = std::abs(oracle_coincidence_rate(c.s, c.T, phase, cfg) - coincidence_rate(c.s, c.T));
    cells[i] = c;
  });

  SweepResult r;
  r.evaluated = tuples;
  for (const auto& c : cells) {
    if (c.diff >= r.max_abs_difference) {
      r.max_abs_difference = c.diff;
      r.worst_params = c.s;
      r.worst_overlap = c.T;
    }
  }
  return r;
}

}  // namespace homprobe::oracle
