#pragma once

// Single-particle physics of the 1D lattice H = (U0/2) cos(2 pi x / a) + p^2 / (2m).
//
// Bands come from plane-wave diagonalization: at quasimomentum q the basis is
// exp(i (q + 2 pi s / a) x) for s = -M..M, the kinetic diagonal is
// (q a + 2 pi s)^2 / pi^2 E_rec and the potential couples s <-> s +- 1 with U0/4.
//
// Site j sits at a potential minimum. Because the printed potential has its
// minima at x = a/2 (mod a), Bloch coefficients are stored in the site-centred
// gauge c'_s = (-1)^s c_s, i.e. with the origin moved onto a well.

#include "lattice_epr/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_epr {

struct LatticeConfig {
  double lattice_wavelength = 0.0; // m, lambda_L (informational; a = lambda_L / 2)
  double depth = 0.0;              // U0 in E_rec
  int sites = 64;                  // N, periodic ring
  int cutoff = 16;                 // M, plane waves s = -M..M
  int bands = 3;

  double lattice_constant() const { return lattice_wavelength / 2.0; }

  void validate() const {
    if (sites < 8 || sites % 2 != 0) {
      throw DomainError("lattice needs an even site count N >= 8");
    }
    if (cutoff < 8) {
      throw DomainError("plane-wave cutoff M must be >= 8");
    }
    if (!(depth >= 0.0) || !std::isfinite(depth)) {
      throw DomainError("lattice depth U0 must be non-negative");
    }
    if (bands < 1 || bands > 2 * cutoff + 1) {
      throw DomainError("band count out of range");
    }
  }
};

/// Band energies on the ring's quasimomentum grid q_n = 2 pi n / N, n = -N/2..N/2-1.
struct BlochSpectrum {
  LatticeConfig config;
  std::vector<double> quasimomenta;        // q a
  Eigen::MatrixXd energies;                // [q index, band], E_rec
  Eigen::MatrixXd lowest_coefficients;     // [q index, s + M], site-centred gauge

  int sites() const { return config.sites; }
  int cutoff() const { return config.cutoff; }
  double lowest(int qi) const { return energies(qi, 0); }
};

namespace detail {

inline Eigen::MatrixXd plane_wave_matrix(double q, double depth, int cutoff) {
  const int dim = 2 * cutoff + 1;
  const double pi = constants::pi;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double k = q + 2.0 * pi * (i - cutoff);
    h(i, i) = k * k / (pi * pi);
    if (i + 1 < dim) {
      h(i, i + 1) = depth / 4.0;
      h(i + 1, i) = depth / 4.0;
    }
  }
  return h;
}

struct PlaneWaveSolution {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors; // columns, site-centred gauge
};

inline PlaneWaveSolution solve_plane_waves(double q, double depth, int cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(plane_wave_matrix(q, depth, cutoff));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("plane-wave eigensolver failed");
  }
  PlaneWaveSolution out{solver.eigenvalues(), solver.eigenvectors()};
  for (int i = 0; i < out.vectors.rows(); ++i) {
    if ((i - cutoff) % 2 != 0) {
      out.vectors.row(i) *= -1.0;
    }
  }
  return out;
}

/// Lowest-band coefficients with the sign fixed so the Bloch function is
/// positive at the well centre (sum of coefficients > 0).
inline Eigen::VectorXd lowest_gauge_fixed(const PlaneWaveSolution &sol) {
  Eigen::VectorXd c = sol.vectors.col(0);
  if (c.sum() < 0.0) {
    c = -c;
  }
  return c;
}

} // namespace detail

/// Diagonalizes the lattice Hamiltonian on every quasimomentum of the ring.
/// Throws ConvergenceError when the outermost plane waves still carry weight.
inline BlochSpectrum band_structure(const LatticeConfig &cfg) {
  cfg.validate();
  const int n = cfg.sites;
  const int dim = 2 * cfg.cutoff + 1;
  BlochSpectrum spec;
  spec.config = cfg;
  spec.quasimomenta.resize(n);
  spec.energies.resize(n, cfg.bands);
  spec.lowest_coefficients.resize(n, dim);

  double edge_weight = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = 2.0 * constants::pi * (i - n / 2) / n;
    spec.quasimomenta[i] = q;
    const auto sol = detail::solve_plane_waves(q, cfg.depth, cfg.cutoff);
    spec.energies.row(i) = sol.energies.head(cfg.bands).transpose();
    spec.lowest_coefficients.row(i) = detail::lowest_gauge_fixed(sol).transpose();
    for (int b = 0; b < cfg.bands; ++b) {
      edge_weight = std::max({edge_weight, sol.vectors(0, b) * sol.vectors(0, b),
                              sol.vectors(dim - 1, b) * sol.vectors(dim - 1, b)});
    }
  }
  if (edge_weight > 1e-12) {
    std::ostringstream msg;
    msg << "plane-wave cutoff M=" << cfg.cutoff << " too small for U0=" << cfg.depth
        << " E_rec: weight " << edge_weight << " left in |s|=M (need < 1e-12)";
    throw ConvergenceError(msg.str());
  }
  return spec;
}

/// Lowest-band energy at an arbitrary quasimomentum (q a), E_rec.
inline double lowest_band_energy(const LatticeConfig &cfg, double q) {
  return detail::solve_plane_waves(q, cfg.depth, cfg.cutoff).energies(0);
}

// ---------------------------------------------------------------------------
//  Hopping
// ---------------------------------------------------------------------------

struct HoppingResult {
  double v_hop = 0.0;           // E_rec, negative for U0 > 0
  double bandwidth = 0.0;       // V_B = E0(pi/a) - E0(0)
  double bandwidth_ratio = 0.0; // V_B / (4 |V_hop|)
  bool tight_binding = false;   // ratio within [0.9, 1.1]
  std::vector<std::string> warnings;
};

/// Nearest-neighbour Fourier coefficient of the lowest band,
/// V_hop = (1/N) sum_q E0(q) exp(i q a).
inline HoppingResult hopping_exact(const BlochSpectrum &spec) {
  const int n = spec.sites();
  double re = 0.0;
  for (int i = 0; i < n; ++i) {
    re += spec.lowest(i) * std::cos(spec.quasimomenta[i]);
  }
  HoppingResult r;
  r.v_hop = re / n;
  const auto lowest = spec.energies.col(0);
  r.bandwidth = lowest.maxCoeff() - lowest.minCoeff();
  r.bandwidth_ratio = r.bandwidth / (4.0 * std::abs(r.v_hop));
  r.tight_binding = r.bandwidth_ratio >= 0.9 && r.bandwidth_ratio <= 1.1;
  if (!r.tight_binding) {
    r.warnings.emplace_back("lowest band is not cosine-like; V_hop has no tight-binding meaning");
  }
  return r;
}

struct ApproxHopping {
  double value = 0.0; // E_rec
  bool within_validity = true;
};

/// E_rec exp(-0.26 U0 / E_rec). Numerically this tracks the bandwidth 4|V_hop|
/// rather than V_hop itself (0.145 vs 0.142 E_rec at U0 = 7.42 E_rec).
inline ApproxHopping hopping_approx(double depth) {
  if (!(depth >= 0.0)) {
    throw DomainError("lattice depth must be non-negative");
  }
  return {std::exp(-0.26 * depth), depth <= 15.0};
}

// ---------------------------------------------------------------------------
//  Wannier functions
// ---------------------------------------------------------------------------

struct WannierState {
  int sites = 0;
  int points_per_site = 0;
  int home_site = 0;
  std::vector<double> positions;                 // x / a on [-N/2, N/2)
  std::vector<std::complex<double>> amplitudes;  // sqrt(1/a) units

  double step() const { return 1.0 / points_per_site; }

  double norm() const {
    double s = 0.0;
    for (const auto &w : amplitudes) {
      s += std::norm(w);
    }
    return s * step();
  }

  /// Amplitude at the grid offset `offset` points from the home-site centre,
  /// wrapped around the ring.
  std::complex<double> at_offset(long offset) const {
    const long total = static_cast<long>(amplitudes.size());
    const long centre = static_cast<long>(home_site + sites / 2) * points_per_site;
    long idx = (centre + offset) % total;
    if (idx < 0) {
      idx += total;
    }
    return amplitudes[static_cast<std::size_t>(idx)];
  }
};

/// Lowest-band Wannier function of site j on the ring grid with
/// `points_per_site` samples per lattice constant.
inline WannierState wannier(const BlochSpectrum &spec, int site, int points_per_site = 32) {
  const int n = spec.sites();
  const int m = spec.cutoff();
  if (points_per_site < 1) {
    throw DomainError("points_per_site must be positive");
  }
  if (spec.config.depth <= 0.0 || spec.energies.cols() < 2) {
    throw DegenerateLimitError("Wannier phase fixing needs a gapped lowest band (U0 > 0)");
  }
  // Zone-edge gap between bands 0 and 1.
  if (spec.energies(0, 1) - spec.energies(0, 0) < 1e-9) {
    throw DegenerateLimitError("lowest band touches the next band at the zone edge");
  }

  const int p = points_per_site;
  const double pi = constants::pi;
  // Periodic Bloch parts u_q(xi) on one cell, xi = t / p.
  Eigen::MatrixXcd cell(n, p);
  for (int qi = 0; qi < n; ++qi) {
    for (int t = 0; t < p; ++t) {
      std::complex<double> u = 0.0;
      const double xi = static_cast<double>(t) / p;
      for (int s = -m; s <= m; ++s) {
        u += spec.lowest_coefficients(qi, s + m) * std::polar(1.0, 2.0 * pi * s * xi);
      }
      cell(qi, t) = u;
    }
  }

  WannierState w;
  w.sites = n;
  w.points_per_site = p;
  w.home_site = site;
  const int total = n * p;
  w.positions.resize(total);
  std::vector<std::complex<double>> home(total);
  for (int i = 0; i < total; ++i) {
    const int shifted = i - total / 2;
    const double x = static_cast<double>(shifted) / p;
    w.positions[i] = x;
    const int t = ((shifted % p) + p) % p;
    std::complex<double> sum = 0.0;
    for (int qi = 0; qi < n; ++qi) {
      sum += std::polar(1.0, spec.quasimomenta[qi] * x) * cell(qi, t);
    }
    home[i] = sum / static_cast<double>(n);
  }

  // Phase fixing: real and positive at the well centre.
  const std::complex<double> centre = home[total / 2];
  const std::complex<double> phase = std::conj(centre) / std::abs(centre);
  w.amplitudes.resize(total);
  const long shift = static_cast<long>(((site % n) + n) % n) * p;
  for (int i = 0; i < total; ++i) {
    const long src = ((i - shift) % total + total) % total;
    w.amplitudes[i] = home[static_cast<std::size_t>(src)] * phase;
  }
  return w;
}

/// Momentum-space lowest-band Wannier amplitude of the infinite lattice at
/// wavenumber k (units 1/a), normalized so that the integral of |w(k)|^2 dk is 1.
/// Site-centred gauge; real and even in k.
inline double wannier_momentum_amplitude(const LatticeConfig &cfg, double k) {
  const double two_pi = 2.0 * constants::pi;
  const double folds = std::round(k / two_pi);
  const double q = k - two_pi * folds;
  const int s = static_cast<int>(folds);
  if (std::abs(s) > cfg.cutoff) {
    return 0.0;
  }
  const auto sol = detail::solve_plane_waves(q, cfg.depth, cfg.cutoff);
  const Eigen::VectorXd c = detail::lowest_gauge_fixed(sol);
  return c(s + cfg.cutoff) / std::sqrt(two_pi);
}

// ---------------------------------------------------------------------------
//  Widths and masses
// ---------------------------------------------------------------------------

struct WannierWidth {
  double harmonic = 0.0; // sigma / a, harmonic-well ground state (canonical)
  double literal = 0.0;  // sigma / a from hbar lambda_L / (4 pi sqrt(m U0))
};

/// Gaussian half-width of the lowest-band orbital. The harmonic value uses
/// omega = (pi/a) sqrt(2 U0 / m), giving sigma^2 = a^2 sqrt(E_rec/U0) / (2 pi^2).
/// The literal printed expression is larger by 2^(1/4) in sigma.
inline WannierWidth wannier_gaussian_width(double depth) {
  if (!(depth > 0.0)) {
    throw SingularityError("Wannier width diverges at U0 = 0");
  }
  const double pi = constants::pi;
  const double harmonic_sq = std::sqrt(1.0 / depth) / (2.0 * pi * pi);
  return {std::sqrt(harmonic_sq), std::sqrt(std::sqrt(2.0) * harmonic_sq)};
}

/// Tight-binding effective mass hbar^2 / (2 |V_hop| a^2), in units of the atomic mass.
inline double effective_mass_single(double v_hop) {
  if (v_hop == 0.0) {
    throw SingularityError("effective mass diverges for zero hopping");
  }
  return 1.0 / (constants::pi * constants::pi * std::abs(v_hop));
}

/// Band-bottom curvature mass 2 / (pi^2 E0''(0)) from the exact lowest band,
/// in units of the atomic mass.
inline double curvature_mass_single(const LatticeConfig &cfg) {
  const double h = 2e-3;
  const double curvature =
      (lowest_band_energy(cfg, h) + lowest_band_energy(cfg, -h) - 2.0 * lowest_band_energy(cfg, 0.0)) /
      (h * h);
  if (!(curvature > 0.0)) {
    throw NumericalError("non-positive band curvature at q = 0");
  }
  return 2.0 / (constants::pi * constants::pi * curvature);
}

} // namespace lattice_epr
