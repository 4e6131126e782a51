#pragma once

#include <functional>
#include <vector>

#include "homprobe/analytic.hpp"
#include "homprobe/spectral.hpp"

namespace homprobe::design {

struct ScanRange {
  enum class Spacing { Linear, Logarithmic };

  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 2;
  Spacing spacing = Spacing::Linear;

  void validate() const;
  /// Inclusive of both ends.
  std::vector<double> values() const;
};

/// Correction factor and unmatched coincidence rate over (ηp, η|β|²) at
/// fixed ξ. Cells are row-major: cell (i, j) at i·y.size() + j with i
/// indexing eta_p.
struct ContourGrid {
  double xi = 1.0;
  std::vector<double> eta_p;
  std::vector<double> eta_beta_sq;
  std::vector<double> correction_factor;
  std::vector<double> rc0;

  double cf_at(std::size_t i, std::size_t j) const { return correction_factor[i * eta_beta_sq.size() + j]; }
  double rc0_at(std::size_t i, std::size_t j) const { return rc0[i * eta_beta_sq.size() + j]; }
};

ContourGrid contour_grid(const ScanRange& eta_p_range, const ScanRange& intensity_range, double xi);

struct CorrectionFactorMax {
  double cf_max = 0.0;
  double eta_p = 0.0;
  double eta_beta_sq = 0.0;
  /// The maximum sits on the intensity-range boundary (supremum, not an
  /// interior maximum).
  bool boundary = false;
};

/// Grid argmax of c_f, refined by golden-section search in η|β|² at the
/// best ηp. For ξ = 1 reports the boundary supremum 1 at η|β|² → 0.
CorrectionFactorMax max_correction_factor(double xi, const ScanRange& eta_p_range, const ScanRange& intensity_range);

struct OptimalIntensity {
  double eta_beta_sq = 0.0;
  double figure_of_merit = 0.0;
};

inline constexpr double kDefaultIntensityCeiling = 10.0;

/// Maximizes c_f·√R_C(0) over η|β|² ∈ (0, x_hi]: 1000-point log grid, then
/// golden-section refinement to |Δx| ≤ 1e-6 around the best grid point.
OptimalIntensity optimal_intensity(double eta_p, double xi, double x_hi = kDefaultIntensityCeiling);

/// Maximizer of f on [lo, hi] by golden-section search, stopping once the
/// bracket is narrower than tol. Assumes f unimodal on the bracket.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol);

struct DipRow {
  double delay = 0.0;
  double overlap = 0.0;
  double visibility = 0.0;
  double coincidence_rate = 0.0;
};

/// Overlap, visibility and coincidence rate as the probe u0 is delayed.
std::vector<DipRow> dip_scan(const SpectralDensityMatrix& rho, const ModeFunction& u0, const ScanRange& delays,
                             const SetupParams& s);

}  // namespace homprobe::design
