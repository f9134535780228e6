#pragma once

// Observable distributions of the two-atom states and the EPR widths.
//
// Joint densities are evaluated on rectangular grids:
//   position  P(x1, x2) = sum_m w_m |sum_jl c_jl w(x1 - x_j) w(x2 - x_l)|^2
//   momentum  P(p1, p2) = sum_m w_m |w(p1) w(p2) sum_jl c_jl exp(-i(p1 x_j + p2 x_l))|^2
// with x_j the site centres around the state's centre site (ring minimal image).
// Grids are normalized so that sum(density) * d1 * d2 = 1; the pre-normalization
// integral is kept in `raw_scale`.
//
// Width convention: the half-width at half-maximum of the dominant peak, divided
// by sqrt(2 ln 2) = 1.1774 when compared with a Gaussian standard deviation.

#include "lattice_epr/core.hpp"
#include "lattice_epr/diatom.hpp"
#include "lattice_epr/estimates.hpp"
#include "lattice_epr/lattice.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_epr {

// ---------------------------------------------------------------------------
//  Grids
// ---------------------------------------------------------------------------

struct Axis {
  double start = 0.0;
  double step = 1.0;
  int count = 0;

  double at(int i) const { return start + step * i; }
  double end() const { return at(count - 1); }

  /// Nearest index to `value`; throws DomainError outside the axis.
  int index_of(double value) const {
    const double f = (value - start) / step;
    if (f < -0.5 || f > count - 0.5) {
      throw DomainError("coordinate lies outside the grid");
    }
    return std::clamp(static_cast<int>(std::lround(f)), 0, count - 1);
  }

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      v[static_cast<std::size_t>(i)] = at(i);
    }
    return v;
  }
};

struct DistributionGrid {
  Axis axis1, axis2;
  Eigen::MatrixXd density; // [i1, i2]
  double raw_scale = 1.0;

  double integral() const { return density.sum() * axis1.step * axis2.step; }
};

struct Distribution1D {
  Axis axis;
  std::vector<double> density;

  double integral() const {
    double s = 0.0;
    for (double d : density) {
      s += d;
    }
    return s * axis.step;
  }

  void normalize() {
    const double s = integral();
    if (!(s > 0.0)) {
      throw NumericalError("cannot normalize an empty distribution");
    }
    for (auto &d : density) {
      d /= s;
    }
  }
};

// ---------------------------------------------------------------------------
//  Peaks
// ---------------------------------------------------------------------------

struct PeakMetrics {
  double hwhm = 0.0;            // of the dominant peak
  double dominant = 0.0;        // its position
  std::vector<double> peaks;    // all local maxima above the threshold, ascending
  double spacing = std::numeric_limits<double>::quiet_NaN(); // median neighbour distance
  bool truncated = false;       // half maximum not reached inside the grid

  double gaussian_sigma() const { return hwhm / constants::hwhm_per_sigma; }
};

inline PeakMetrics peak_metrics(const Distribution1D &dist, double rel_threshold = 0.1) {
  const auto &d = dist.density;
  const int n = static_cast<int>(d.size());
  if (n < 3) {
    throw NoPeakError("distribution has fewer than three points");
  }
  const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
  const double top = *hi_it;
  if (!(top > 0.0) || top - *lo_it <= 1e-14 * top) {
    throw NoPeakError("distribution is flat");
  }

  std::vector<int> idx;
  for (int i = 1; i + 1 < n; ++i) {
    if (d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] >= rel_threshold * top) {
      idx.push_back(i);
    }
  }
  if (idx.empty()) {
    // Monotone distribution: the maximum sits on an edge.
    idx.push_back(static_cast<int>(hi_it - d.begin()));
  }

  PeakMetrics m;
  int dom = idx.front();
  for (int i : idx) {
    m.peaks.push_back(dist.axis.at(i));
    if (d[i] > d[dom]) {
      dom = i;
    }
  }
  m.dominant = dist.axis.at(dom);

  const double half = 0.5 * d[dom];
  double left = dist.axis.at(0), right = dist.axis.at(n - 1);
  int i = dom;
  while (i > 0 && d[i - 1] >= half) {
    --i;
  }
  if (i == 0) {
    m.truncated = true;
  } else {
    const double f = (d[i] - half) / (d[i] - d[i - 1]);
    left = dist.axis.at(i) - f * dist.axis.step;
  }
  i = dom;
  while (i < n - 1 && d[i + 1] >= half) {
    ++i;
  }
  if (i == n - 1) {
    m.truncated = true;
  } else {
    const double f = (d[i] - half) / (d[i] - d[i + 1]);
    right = dist.axis.at(i) + f * dist.axis.step;
  }
  m.hwhm = 0.5 * (right - left);

  if (m.peaks.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < m.peaks.size(); ++k) {
      gaps.push_back(m.peaks[k] - m.peaks[k - 1]);
    }
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    m.spacing = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
  }
  return m;
}

// ---------------------------------------------------------------------------
//  Orbitals
// ---------------------------------------------------------------------------

/// Single-site orbital used to dress the lattice amplitudes: the exact Wannier
/// function or a Gaussian whose density has standard deviation sigma.
class Orbital {
public:
  static Orbital wannier(const BlochSpectrum &spec, int points_per_site = 32) {
    Orbital o;
    o.kind_ = Kind::wannier;
    o.config_ = spec.config;
    o.samples_ = lattice_epr::wannier(spec, 0, points_per_site);
    o.sigma_ = wannier_gaussian_width(spec.config.depth).harmonic;
    return o;
  }

  static Orbital gaussian(double sigma) {
    detail::require_positive(sigma, "orbital width");
    Orbital o;
    o.kind_ = Kind::gaussian;
    o.sigma_ = sigma;
    return o;
  }

  bool is_gaussian() const { return kind_ == Kind::gaussian; }

  /// Length scale used for the grid-resolution check (a).
  double width() const { return sigma_; }

  /// Position amplitude at displacement dx (a) from the orbital's site.
  std::complex<double> position(double dx) const {
    if (kind_ == Kind::gaussian) {
      const double norm = std::pow(2.0 * constants::pi * sigma_ * sigma_, -0.25);
      return norm * std::exp(-dx * dx / (4.0 * sigma_ * sigma_));
    }
    const double f = dx * samples_.points_per_site;
    const double r = std::round(f);
    if (std::abs(f - r) < 1e-9) {
      return samples_.at_offset(static_cast<long>(r));
    }
    const double fl = std::floor(f);
    const double t = f - fl;
    const long i = static_cast<long>(fl);
    return (1.0 - t) * samples_.at_offset(i) + t * samples_.at_offset(i + 1);
  }

  /// Momentum amplitude, integral of |w(k)|^2 dk = 1, k in 1/a.
  double momentum(double k) const {
    if (kind_ == Kind::gaussian) {
      return std::pow(2.0 * sigma_ * sigma_ / constants::pi, 0.25) *
             std::exp(-sigma_ * sigma_ * k * k);
    }
    return wannier_momentum_amplitude(config_, k);
  }

  /// Overlap integral of the orbital with a copy displaced by d sites.
  double overlap(double d) const {
    if (kind_ == Kind::gaussian) {
      return std::exp(-d * d / (8.0 * sigma_ * sigma_));
    }
    return std::abs(d) < 0.5 ? 1.0 : 0.0;
  }

private:
  enum class Kind { wannier, gaussian };
  Kind kind_ = Kind::gaussian;
  double sigma_ = 0.0;
  LatticeConfig config_;
  WannierState samples_;
};

// ---------------------------------------------------------------------------
//  Joint densities
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> site_positions(const TwoAtomState &s) {
  std::vector<double> x(static_cast<std::size_t>(s.sites));
  for (int j = 0; j < s.sites; ++j) {
    x[static_cast<std::size_t>(j)] = s.site_position(j);
  }
  return x;
}

inline DistributionGrid finish_grid(Axis a1, Axis a2, Eigen::MatrixXd density) {
  DistributionGrid g{a1, a2, std::move(density), 1.0};
  const double raw = g.integral();
  if (!(raw > 0.0)) {
    throw NumericalError("joint density vanishes on the grid");
  }
  g.density /= raw;
  g.raw_scale = raw;
  return g;
}

inline DistributionGrid joint_density(const TwoAtomState &state, const Axis &a1, const Axis &a2,
                                      const Eigen::MatrixXcd &m1, const Eigen::MatrixXcd &m2) {
  state.validate();
  Eigen::MatrixXd density = Eigen::MatrixXd::Zero(a1.count, a2.count);
  for (const auto &member : state.members) {
    const Eigen::MatrixXcd amp = m1 * member.amplitudes * m2.transpose();
    density += member.weight * amp.cwiseAbs2();
  }
  return finish_grid(a1, a2, std::move(density));
}

/// Minimal-image displacement on the ring of `sites` sites.
inline double ring_offset(double dx, int sites) {
  const double n = sites;
  double d = std::fmod(dx + 0.5 * n, n);
  if (d < 0.0) {
    d += n;
  }
  return d - 0.5 * n;
}

} // namespace detail

/// Position grid [x_min, x_max] in a with `points_per_site` points per lattice constant.
struct PositionGridSpec {
  double x_min = -4.0;
  double x_max = 4.0;
  int points_per_site = 32;

  Axis axis() const {
    if (!(x_max > x_min) || points_per_site < 1) {
      throw DomainError("position grid needs x_max > x_min and points_per_site >= 1");
    }
    const double step = 1.0 / points_per_site;
    return {x_min, step, static_cast<int>(std::lround((x_max - x_min) / step)) + 1};
  }
};

inline DistributionGrid joint_position_density(const TwoAtomState &state, const Orbital &orbital,
                                               const PositionGridSpec &spec) {
  const Axis ax = spec.axis();
  if (ax.step > orbital.width() / 4.0) {
    std::ostringstream msg;
    msg << "position grid step " << ax.step << " a exceeds sigma/4 = " << orbital.width() / 4.0;
    throw ResolutionError(msg.str());
  }
  const auto x = detail::site_positions(state);
  Eigen::MatrixXcd w(ax.count, state.sites);
  for (int i = 0; i < ax.count; ++i) {
    for (int j = 0; j < state.sites; ++j) {
      w(i, j) = orbital.position(detail::ring_offset(ax.at(i) - x[j], state.sites));
    }
  }
  return detail::joint_density(state, ax, ax, w, w);
}

/// Momentum grid on k = k_min + i * step (1/a). The step must be 2 pi / (N r)
/// for a whole number r of subdivisions, and k_min a multiple of the step.
struct MomentumGridSpec {
  double k_min = 0.0;
  double step = 0.0;
  int count = 0;

  /// Symmetric grid spanning +-zones Brillouin zones (2 pi / a each).
  static MomentumGridSpec zones(int sites, double zones, int subdivisions) {
    if (subdivisions < 1 || !(zones > 0.0)) {
      throw DomainError("momentum grid needs subdivisions >= 1 and zones > 0");
    }
    const double step = 2.0 * constants::pi / (sites * subdivisions);
    const int half = static_cast<int>(std::lround(zones * sites * subdivisions));
    return {-half * step, step, 2 * half + 1};
  }

  Axis axis(int sites) const {
    if (count < 3 || !(step > 0.0)) {
      throw DomainError("momentum grid needs >= 3 points and a positive step");
    }
    const double r = 2.0 * constants::pi / (sites * step);
    const double offset = k_min / step;
    if (std::abs(r - std::round(r)) > 1e-9 * r || std::round(r) < 1.0 ||
        std::abs(offset - std::round(offset)) > 1e-9 * std::max(1.0, std::abs(offset))) {
      throw AliasingError("momentum grid is not commensurate with 2 pi hbar / (N a)");
    }
    return {k_min, step, count};
  }
};

namespace detail {

inline Eigen::MatrixXcd momentum_kernel(const Axis &ax, const std::vector<double> &x,
                                        const std::vector<double> &orbital) {
  Eigen::MatrixXcd e(ax.count, static_cast<Eigen::Index>(x.size()));
  for (int i = 0; i < ax.count; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      e(i, static_cast<Eigen::Index>(j)) = std::polar(orbital[i], -ax.at(i) * x[j]);
    }
  }
  return e;
}

inline std::vector<double> orbital_momenta(const Orbital &orbital, const Axis &ax) {
  std::vector<double> v(static_cast<std::size_t>(ax.count));
  for (int i = 0; i < ax.count; ++i) {
    v[static_cast<std::size_t>(i)] = orbital.momentum(ax.at(i));
  }
  return v;
}

} // namespace detail

inline DistributionGrid joint_momentum_density(const TwoAtomState &state, const Orbital &orbital,
                                               const MomentumGridSpec &spec) {
  const Axis ax = spec.axis(state.sites);
  const auto x = detail::site_positions(state);
  const auto wk = detail::orbital_momenta(orbital, ax);
  const Eigen::MatrixXcd e = detail::momentum_kernel(ax, x, wk);
  return detail::joint_density(state, ax, ax, e, e);
}

// ---------------------------------------------------------------------------
//  Slices and marginals
// ---------------------------------------------------------------------------

struct ConditionalSlice {
  Distribution1D distribution;
  double condition = 0.0; // grid coordinate actually used
  PeakMetrics metrics;
};

/// Density along the other axis given the coordinate `value` on `axis` (1 or 2).
inline ConditionalSlice conditional_density(const DistributionGrid &joint, int axis, double value,
                                            double rel_threshold = 0.1) {
  if (axis != 1 && axis != 2) {
    throw DomainError("axis must be 1 or 2");
  }
  const Axis &fixed = axis == 1 ? joint.axis1 : joint.axis2;
  const Axis &free = axis == 1 ? joint.axis2 : joint.axis1;
  const int idx = fixed.index_of(value);
  ConditionalSlice out;
  out.condition = fixed.at(idx);
  out.distribution.axis = free;
  out.distribution.density.resize(static_cast<std::size_t>(free.count));
  for (int i = 0; i < free.count; ++i) {
    out.distribution.density[static_cast<std::size_t>(i)] =
        axis == 1 ? joint.density(idx, i) : joint.density(i, idx);
  }
  const double raw = out.distribution.integral() * joint.raw_scale;
  if (!(raw >= 1e-12)) {
    throw ConditioningError("conditioning on a value of (numerically) zero probability");
  }
  out.distribution.normalize();
  out.metrics = peak_metrics(out.distribution, rel_threshold);
  return out;
}

/// Marginal of the joint for the coordinate on `keep` (1 or 2).
inline Distribution1D marginal(const DistributionGrid &joint, int keep) {
  if (keep != 1 && keep != 2) {
    throw DomainError("axis must be 1 or 2");
  }
  Distribution1D out;
  if (keep == 1) {
    out.axis = joint.axis1;
    const Eigen::VectorXd s = joint.density.rowwise().sum() * joint.axis2.step;
    out.density.assign(s.data(), s.data() + s.size());
  } else {
    out.axis = joint.axis2;
    const Eigen::VectorXd s = joint.density.colwise().sum().transpose() * joint.axis1.step;
    out.density.assign(s.data(), s.data() + s.size());
  }
  return out;
}

/// Slice divided by the single-orbital momentum density |w(k)|^2, leaving the
/// lattice structure factor whose ridges sit exactly on the 2 pi / a comb.
/// Points where |w(k)|^2 drops below `floor` times its maximum are zeroed.
inline Distribution1D divide_orbital_envelope(const Distribution1D &dist, const Orbital &orbital,
                                              double floor = 1e-6) {
  Distribution1D out = dist;
  std::vector<double> env(dist.density.size());
  double top = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double w = orbital.momentum(dist.axis.at(static_cast<int>(i)));
    env[i] = w * w;
    top = std::max(top, env[i]);
  }
  for (std::size_t i = 0; i < env.size(); ++i) {
    out.density[i] = env[i] >= floor * top ? dist.density[i] / env[i] : 0.0;
  }
  out.normalize();
  return out;
}

namespace detail {

/// Integrates the other atom out analytically:
/// rho(y) = sum_m w_m sum_{j j'} b_j(y) conj(b_j'(y)) S(x_j - x_j'), with b_j(y) the
/// amplitude of the kept atom when the other atom sits on site j.
inline Distribution1D reduced_density(const TwoAtomState &state, const Orbital &orbital,
                                      const Axis &ax, const Eigen::MatrixXcd &kernel, int atom) {
  const auto x = detail::site_positions(state);
  const int n = state.sites;
  Eigen::MatrixXd overlap(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      overlap(j, k) = orbital.overlap(ring_offset(x[j] - x[k], n));
    }
  }
  Distribution1D out;
  out.axis = ax;
  out.density.assign(static_cast<std::size_t>(ax.count), 0.0);
  for (const auto &m : state.members) {
    // b(y, j): rows are grid points, columns the other atom's site.
    const Eigen::MatrixXcd b = atom == 2 ? Eigen::MatrixXcd(kernel * m.amplitudes.transpose())
                                         : Eigen::MatrixXcd(kernel * m.amplitudes);
    const Eigen::MatrixXcd bs = b * overlap;
    for (int i = 0; i < ax.count; ++i) {
      out.density[static_cast<std::size_t>(i)] += m.weight * bs.row(i).dot(b.row(i)).real();
    }
  }
  out.normalize();
  return out;
}

} // namespace detail

/// Single-atom momentum density of atom 1 or 2 computed directly from the state.
inline Distribution1D single_momentum_density(const TwoAtomState &state, const Orbital &orbital,
                                              const MomentumGridSpec &spec, int atom = 2) {
  state.validate();
  const Axis ax = spec.axis(state.sites);
  const auto wk = detail::orbital_momenta(orbital, ax);
  const Eigen::MatrixXcd e = detail::momentum_kernel(ax, detail::site_positions(state), wk);
  return detail::reduced_density(state, orbital, ax, e, atom);
}

/// Single-atom position density of atom 1 or 2 computed directly from the state.
inline Distribution1D single_position_density(const TwoAtomState &state, const Orbital &orbital,
                                              const PositionGridSpec &spec, int atom = 2) {
  state.validate();
  const Axis ax = spec.axis();
  const auto x = detail::site_positions(state);
  Eigen::MatrixXcd w(ax.count, state.sites);
  for (int i = 0; i < ax.count; ++i) {
    for (int j = 0; j < state.sites; ++j) {
      w(i, j) = orbital.position(detail::ring_offset(ax.at(i) - x[j], state.sites));
    }
  }
  return detail::reduced_density(state, orbital, ax, w, atom);
}

/// Distribution of the lattice sum quasimomentum K = (p1 + p2) a / hbar mod 2 pi,
/// on [-pi, pi) with `subdivisions` points per ring quantum 2 pi / N.
inline Distribution1D sum_momentum_distribution(const TwoAtomState &state, int subdivisions = 1) {
  state.validate();
  if (subdivisions < 1) {
    throw DomainError("subdivisions must be >= 1");
  }
  const int n = state.sites;
  const int count = n * subdivisions;
  const auto x = detail::site_positions(state);
  Distribution1D out;
  out.axis = {-constants::pi, 2.0 * constants::pi / count, count};
  out.density.assign(static_cast<std::size_t>(count), 0.0);
  for (const auto &m : state.members) {
    for (int i = 0; i < count; ++i) {
      const double k = out.axis.at(i);
      double acc = 0.0;
      for (int r = 0; r < n; ++r) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < n; ++j) {
          s += std::polar(1.0, -k * x[j]) * m.amplitudes(j, (j + r) % n);
        }
        acc += std::norm(s);
      }
      out.density[static_cast<std::size_t>(i)] += m.weight * acc;
    }
  }
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
//  Lattice Fourier transforms
// ---------------------------------------------------------------------------

/// A(n1, n2) = sum_jl c_jl exp(-i (k1 x_j + k2 x_l)) on k_n = 2 pi (n - N/2) / N,
/// evaluated by direct summation.
inline Eigen::MatrixXcd lattice_fourier_direct(const Eigen::MatrixXcd &c,
                                               const std::vector<double> &positions) {
  const int n = static_cast<int>(c.rows());
  Eigen::MatrixXcd e(n, n);
  for (int a = 0; a < n; ++a) {
    const double k = 2.0 * constants::pi * (a - n / 2) / n;
    for (int j = 0; j < n; ++j) {
      e(a, j) = std::polar(1.0, -k * positions[static_cast<std::size_t>(j)]);
    }
  }
  return e * c * e.transpose();
}

/// Same quantity through two passes of 1D FFTs.
inline Eigen::MatrixXcd lattice_fourier_fft(const Eigen::MatrixXcd &c) {
  const int n = static_cast<int>(c.rows());
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd rows(n, n), out(n, n);
  std::vector<std::complex<double>> in(static_cast<std::size_t>(n)), res;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      in[static_cast<std::size_t>(l)] = c(j, l);
    }
    fft.fwd(res, in);
    for (int b = 0; b < n; ++b) {
      rows(j, b) = res[static_cast<std::size_t>(b)];
    }
  }
  for (int b = 0; b < n; ++b) {
    for (int j = 0; j < n; ++j) {
      in[static_cast<std::size_t>(j)] = rows(j, b);
    }
    fft.fwd(res, in);
    for (int a = 0; a < n; ++a) {
      out(a, b) = res[static_cast<std::size_t>(a)];
    }
  }
  // Reorder bins so that index n corresponds to k_n = 2 pi (n - N/2) / N.
  Eigen::MatrixXcd shifted(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      shifted(a, b) = out((a + n / 2) % n, (b + n / 2) % n);
    }
  }
  return shifted;
}

/// |sum |A|^2 / N^2 - sum |c|^2| for the FFT of an amplitude matrix.
inline double parseval_defect(const Eigen::MatrixXcd &c) {
  const double n = static_cast<double>(c.rows());
  return std::abs(lattice_fourier_fft(c).squaredNorm() / (n * n) - c.squaredNorm());
}

// ---------------------------------------------------------------------------
//  EPR report
// ---------------------------------------------------------------------------

struct EprReport {
  double dx_minus = 0.0;            // a
  double dp_plus = 0.0;             // hbar / a
  double s = 0.0;
  double position_spacing = std::numeric_limits<double>::quiet_NaN(); // a
  double momentum_spacing = std::numeric_limits<double>::quiet_NaN(); // hbar / a
  double ridge_hwhm = std::numeric_limits<double>::quiet_NaN();       // hbar / a
  double ridge_expected = std::numeric_limits<double>::quiet_NaN();   // pi / N
  double grid_cell = std::numeric_limits<double>::quiet_NaN();        // momentum step
  bool position_spacing_ok = false;
  bool momentum_spacing_ok = false;
  bool tight_diatom = false;   // |V_hop| << |V_dd|
  bool thermal_in_regime = false; // k_B T <= V_B^(2at)

  /// Fills s from the widths so that s = 1 / (2 dx dp) holds exactly.
  static EprReport from_widths(double dx_minus, double dp_plus) {
    EprReport r;
    r.dx_minus = dx_minus;
    r.dp_plus = dp_plus;
    r.s = s_parameter(dx_minus, dp_plus);
    return r;
  }

  bool consistent() const { return s == s_parameter(dx_minus, dp_plus); }

  std::string to_text() const {
    std::ostringstream o;
    o.precision(10);
    o << "dx_minus_a = " << dx_minus << '\n'
      << "dp_plus_hbar_per_a = " << dp_plus << '\n'
      << "s = " << s << '\n'
      << "position_spacing_a = " << position_spacing << '\n'
      << "momentum_spacing_hbar_per_a = " << momentum_spacing << '\n'
      << "ridge_hwhm_hbar_per_a = " << ridge_hwhm << '\n'
      << "ridge_expected_hbar_per_a = " << ridge_expected << '\n'
      << "position_spacing_ok = " << position_spacing_ok << '\n'
      << "momentum_spacing_ok = " << momentum_spacing_ok << '\n'
      << "tight_diatom = " << tight_diatom << '\n'
      << "thermal_in_regime = " << thermal_in_regime << '\n';
    return o.str();
  }
};

} // namespace lattice_epr
