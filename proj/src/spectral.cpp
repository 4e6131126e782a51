#include "homprobe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homprobe/diagnostics.hpp"
#include "homprobe/errors.hpp"

namespace homprobe {
namespace {

Eigen::VectorXd weight_vector(const FrequencyGrid& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.weights().data(), static_cast<Eigen::Index>(g.size()));
}

void require_grid(const GridPtr& grid) {
  if (!grid) throw InvalidArgument("null frequency grid");
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() < 2) throw InvalidArgument("frequency grid needs at least 2 points");
  if (points_.size() != weights_.size())
    throw InvalidArgument("frequency grid: points and weights differ in length");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw InvalidArgument("frequency grid: non-finite point");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw InvalidArgument("frequency grid: points must be strictly increasing");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw InvalidArgument("frequency grid: weights must be positive");
  }
}

GridPtr FrequencyGrid::from_points(std::vector<double> points) {
  if (points.size() < 2) throw InvalidArgument("frequency grid needs at least 2 points");
  const std::size_t n = points.size();
  std::vector<double> w(n);
  w.front() = 0.5 * (points[1] - points[0]);
  w.back() = 0.5 * (points[n - 1] - points[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (points[i + 1] - points[i - 1]);
  return std::make_shared<const FrequencyGrid>(std::move(points), std::move(w));
}

GridPtr FrequencyGrid::uniform(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw InvalidArgument("uniform grid needs lo < hi and n >= 2");
  std::vector<double> pts(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = lo + step * static_cast<double>(i);
  pts.back() = hi;
  return from_points(std::move(pts));
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  return a && b && *a == *b;
}

// --- ModeFunction ----------------------------------------------------------

ModeFunction::ModeFunction(GridPtr grid, Eigen::VectorXcd amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
  require_grid(grid_);
  if (static_cast<std::size_t>(amplitudes_.size()) != grid_->size())
    throw GridMismatch();
  if (!amplitudes_.allFinite()) throw InvalidArgument("mode function has non-finite amplitudes");
  const double n2 = norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << "mode function not normalized: norm^2 = " << n2;
    throw InvalidArgument(os.str());
  }
}

ModeFunction ModeFunction::normalized(GridPtr grid, Eigen::VectorXcd amplitudes) {
  require_grid(grid);
  if (static_cast<std::size_t>(amplitudes.size()) != grid->size()) throw GridMismatch();
  const double n2 = weight_vector(*grid).dot(amplitudes.cwiseAbs2());
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidArgument("mode function has zero or non-finite norm");
  amplitudes /= std::sqrt(n2);
  return ModeFunction(std::move(grid), std::move(amplitudes));
}

double ModeFunction::norm_squared() const { return weight_vector(*grid_).dot(amplitudes_.cwiseAbs2()); }

// --- SpectralDensityMatrix --------------------------------------------------

SpectralDensityMatrix::SpectralDensityMatrix(GridPtr grid, Eigen::MatrixXcd entries)
    : grid_(std::move(grid)), entries_(std::move(entries)) {
  require_grid(grid_);
  const auto n = static_cast<Eigen::Index>(grid_->size());
  if (entries_.rows() != n || entries_.cols() != n) throw GridMismatch();
  if (!entries_.allFinite()) throw InvalidArgument("density matrix has non-finite entries");

  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    std::ostringstream os;
    os << "density matrix not Hermitian: max |rho_ij - conj(rho_ji)| = " << asym;
    throw InvalidArgument(os.str());
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " != 1";
    throw InvalidArgument(os.str());
  }
  const double min_eig = weighted_eigenvalues().minCoeff();
  if (min_eig < -kPsdTolerance) {
    std::ostringstream os;
    os << "density matrix not positive semidefinite: smallest eigenvalue " << min_eig;
    throw InvalidArgument(os.str());
  }
}

SpectralDensityMatrix SpectralDensityMatrix::normalized(GridPtr grid, Eigen::MatrixXcd entries) {
  require_grid(grid);
  const auto n = static_cast<Eigen::Index>(grid->size());
  if (entries.rows() != n || entries.cols() != n) throw GridMismatch();
  const double tr = weight_vector(*grid).dot(entries.diagonal().real());
  if (!(tr > 0.0) || !std::isfinite(tr)) throw InvalidArgument("density matrix has non-positive trace");
  entries /= tr;
  return SpectralDensityMatrix(std::move(grid), std::move(entries));
}

double SpectralDensityMatrix::trace() const { return weight_vector(*grid_).dot(entries_.diagonal().real()); }

Eigen::VectorXd SpectralDensityMatrix::weighted_eigenvalues() const {
  const Eigen::VectorXd sw = weight_vector(*grid_).cwiseSqrt();
  Eigen::MatrixXcd s = sw.asDiagonal() * entries_ * sw.asDiagonal();
  // symmetrize away sub-tolerance roundoff before the Hermitian solver
  s = 0.5 * (s + s.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed on density matrix");
  return solver.eigenvalues();
}

// --- operations -------------------------------------------------------------

ModeFunction make_gaussian_mode(const GaussianPulseSpec& spec, const GridPtr& grid) {
  require_grid(grid);
  if (!(spec.width > 0.0) || !std::isfinite(spec.width)) throw InvalidArgument("Gaussian width must be > 0");
  const double lo = spec.center - 5.0 * spec.width;
  const double hi = spec.center + 5.0 * spec.width;
  const auto& pts = grid->points();

  if (grid->front() > lo || grid->back() < hi) {
    std::ostringstream os;
    os << "grid [" << grid->front() << ", " << grid->back() << "] does not span center +/- 5 width ["
       << lo << ", " << hi << "]";
    warn(os.str());
  }

  // largest spacing touching the pulse support
  double max_step = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] < lo || pts[i - 1] > hi) continue;
    max_step = std::max(max_step, pts[i] - pts[i - 1]);
  }
  if (max_step == 0.0 || spec.width / max_step < kMinPointsPerWidth) {
    std::ostringstream os;
    os << "grid too coarse: " << (max_step > 0.0 ? spec.width / max_step : 0.0)
       << " points per width, need at least " << kMinPointsPerWidth;
    throw ResolutionError(os.str());
  }

  Eigen::VectorXcd amps(static_cast<Eigen::Index>(pts.size()));
  const double inv4s2 = 1.0 / (4.0 * spec.width * spec.width);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = pts[i] - spec.center;
    amps[static_cast<Eigen::Index>(i)] = std::exp(-d * d * inv4s2) * std::polar(1.0, pts[i] * spec.delay);
  }
  return ModeFunction::normalized(grid, std::move(amps));
}

ModeFunction delay_mode(const ModeFunction& u, double delay) {
  const auto& pts = u.grid()->points();
  Eigen::VectorXcd amps = u.amplitudes();
  for (std::size_t i = 0; i < pts.size(); ++i) amps[static_cast<Eigen::Index>(i)] *= std::polar(1.0, pts[i] * delay);
  return ModeFunction::normalized(u.grid(), std::move(amps));
}

SpectralDensityMatrix pure_state(const ModeFunction& u) {
  Eigen::MatrixXcd rho = u.amplitudes() * u.amplitudes().adjoint();
  return SpectralDensityMatrix(u.grid(), std::move(rho));
}

SpectralDensityMatrix mix_states(const std::vector<std::pair<double, SpectralDensityMatrix>>& components) {
  if (components.empty()) throw InvalidArgument("mixture needs at least one component");
  const GridPtr& grid = components.front().second.grid();
  double total = 0.0;
  for (const auto& [q, rho] : components) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw InvalidArgument("mixture probabilities must be >= 0");
    if (!same_grid(rho.grid(), grid)) throw GridMismatch();
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "mixture probabilities sum to " << total << ", expected 1";
    throw InvalidArgument(os.str());
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(components.front().second.entries().rows(),
                                                components.front().second.entries().cols());
  for (const auto& [q, rho] : components) acc += q * rho.entries();
  return SpectralDensityMatrix(grid, std::move(acc));
}

Complex inner_product(const ModeFunction& a, const ModeFunction& b) {
  if (!same_grid(a.grid(), b.grid())) throw GridMismatch();
  const Eigen::VectorXd w = weight_vector(*a.grid());
  return a.amplitudes().dot(w.cast<Complex>().cwiseProduct(b.amplitudes()));
}

double overlap_T(const SpectralDensityMatrix& rho, const ModeFunction& u) {
  if (!same_grid(rho.grid(), u.grid())) throw GridMismatch();
  const Eigen::VectorXcd wu = weight_vector(*u.grid()).cast<Complex>().cwiseProduct(u.amplitudes());
  const Complex t = wu.dot(rho.entries() * wu);
  const double im = std::abs(t.imag());
  if (im > 1e-8) {
    std::ostringstream os;
    os << "overlap has imaginary part " << t.imag() << " (corrupted inputs?)";
    throw NumericalError(os.str());
  }
  if (im > 1e-10) {
    std::ostringstream os;
    os << "overlap imaginary residue " << t.imag() << " clamped";
    warn(os.str());
  }
  return std::clamp(t.real(), 0.0, 1.0);
}

double purity(const SpectralDensityMatrix& rho) {
  const Eigen::VectorXd w = weight_vector(*rho.grid());
  return w.dot(rho.entries().cwiseAbs2() * w);
}

}  // namespace homprobe
