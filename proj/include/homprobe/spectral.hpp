#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace homprobe {

using Complex = std::complex<double>;

/// Discretized angular-frequency axis (rad/s) with trapezoidal quadrature
/// weights. Immutable; shared between the spectral objects defined on it.
class FrequencyGrid {
 public:
  /// Validates the invariants: at least two points, strictly increasing,
  /// positive weights of matching length.
  FrequencyGrid(std::vector<double> points, std::vector<double> weights);

  /// Trapezoidal weights for an arbitrary increasing set of points.
  static std::shared_ptr<const FrequencyGrid> from_points(std::vector<double> points);
  static std::shared_ptr<const FrequencyGrid> uniform(double lo, double hi, std::size_t n);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double front() const noexcept { return points_.front(); }
  double back() const noexcept { return points_.back(); }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.points_ == b.points_ && a.weights_ == b.weights_;
  }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const FrequencyGrid>;

bool same_grid(const GridPtr& a, const GridPtr& b);

/// Complex spectral amplitude u(ω) sampled on a grid, unit quadrature norm.
class ModeFunction {
 public:
  static constexpr double kNormTolerance = 1e-10;

  /// Requires Σ wᵢ|uᵢ|² = 1 within kNormTolerance.
  ModeFunction(GridPtr grid, Eigen::VectorXcd amplitudes);

  /// Rescales arbitrary nonzero samples to unit norm.
  static ModeFunction normalized(GridPtr grid, Eigen::VectorXcd amplitudes);

  const GridPtr& grid() const noexcept { return grid_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  double norm_squared() const;

 private:
  GridPtr grid_;
  Eigen::VectorXcd amplitudes_;
};

/// Single-photon spectral state ρᵢⱼ = ρ(ωᵢ, ωⱼ): Hermitian, PSD, unit trace.
class SpectralDensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPsdTolerance = 1e-10;

  SpectralDensityMatrix(GridPtr grid, Eigen::MatrixXcd entries);

  /// Divides by the quadrature trace before validating.
  static SpectralDensityMatrix normalized(GridPtr grid, Eigen::MatrixXcd entries);

  const GridPtr& grid() const noexcept { return grid_; }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  double trace() const;

  /// Spectrum of S = W^{1/2} ρ W^{1/2}, ascending.
  Eigen::VectorXd weighted_eigenvalues() const;

 private:
  GridPtr grid_;
  Eigen::MatrixXcd entries_;
};

/// Gaussian test pulse: |u(ω)|² has mean `center` and standard deviation
/// `width`; `delay` adds the phase exp(iωτ).
struct GaussianPulseSpec {
  double center = 0.0;
  double width = 1.0;
  double delay = 0.0;
};

/// Minimum grid points per pulse width σ accepted by make_gaussian_mode.
inline constexpr double kMinPointsPerWidth = 8.0;

ModeFunction make_gaussian_mode(const GaussianPulseSpec& spec, const GridPtr& grid);

/// u(ω)·exp(iωτ).
ModeFunction delay_mode(const ModeFunction& u, double delay);

SpectralDensityMatrix pure_state(const ModeFunction& u);

SpectralDensityMatrix mix_states(const std::vector<std::pair<double, SpectralDensityMatrix>>& components);

/// T = Σᵢⱼ wᵢwⱼ conj(uᵢ) ρᵢⱼ uⱼ.
///
/// Imaginary residue up to 1e-10 is dropped silently, up to 1e-8 with a
/// warning; anything larger throws NumericalError.
double overlap_T(const SpectralDensityMatrix& rho, const ModeFunction& u);

/// Tr(ρ²) = Σᵢⱼ wᵢwⱼ|ρᵢⱼ|².
double purity(const SpectralDensityMatrix& rho);

/// Inner product Σ wᵢ conj(aᵢ) bᵢ.
Complex inner_product(const ModeFunction& a, const ModeFunction& b);

}  // namespace homprobe
