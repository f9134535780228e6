#pragma once

// Two atoms, one per tube, on N-site rings. The basis is |j>_1 |l>_2 with
// hopping V_hop for either atom and a diagonal V_dd(j - l).
//
// Production path: block-diagonalize by the centre-of-mass quasimomentum K.
// With r = l - j and |K, r> = N^-1/2 sum_j exp(iKj) |j, j + r>, each block is
// an N x N ring in r with <r+1|H_K|r> = V_hop (1 + exp(iK)) and diagonal
// V_dd(-r). The dense N^2 x N^2 matrix is kept for N <= 24 as an oracle.

#include "lattice_epr/core.hpp"
#include "lattice_epr/dipole.hpp"
#include "lattice_epr/estimates.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_epr {

struct TwoAtomHamiltonian {
  int sites = 0;
  double v_hop = 0.0;
  InteractionProfile profile;
  bool include_offsite = true;

  /// Minimal-image offset on the ring, in (-N/2, N/2].
  int wrap(int d) const {
    int w = ((d % sites) + sites) % sites;
    if (w > sites / 2) {
      w -= sites;
    }
    return w;
  }

  /// Diagonal energy for atom 1 at j and atom 2 at l, dj = j - l.
  double interaction(int dj) const {
    const int w = wrap(dj);
    if (!include_offsite && w != 0) {
      return 0.0;
    }
    return profile.at(w);
  }

  Eigen::MatrixXcd block(double k) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(sites, sites);
    const std::complex<double> hop = v_hop * (1.0 + std::polar(1.0, k));
    for (int r = 0; r < sites; ++r) {
      h(r, r) = interaction(-r);
      const int up = (r + 1) % sites;
      h(up, r) += hop;
      h(r, up) += std::conj(hop);
    }
    return h;
  }

  /// Dense matrix on |j, l>, index j * N + l. Oracle only.
  Eigen::MatrixXd dense() const {
    if (sites > 24) {
      throw SizeError("dense two-atom matrix is limited to N <= 24");
    }
    const int n = sites;
    const int dim = n * n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const int i = j * n + l;
        h(i, i) = interaction(j - l);
        for (int step : {-1, 1}) {
          const int jj = ((j + step) % n + n) % n;
          const int ll = ((l + step) % n + n) % n;
          h(jj * n + l, i) += v_hop;
          h(j * n + ll, i) += v_hop;
        }
      }
    }
    return h;
  }
};

namespace detail {

struct BlockSolution {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
};

inline BlockSolution solve_block(const TwoAtomHamiltonian &h, double k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.block(k));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("two-atom block eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Phase so that the largest-magnitude component among r = 0 and its
/// neighbours is real positive; r = 0 normally dominates.
inline Eigen::VectorXcd fix_relative_phase(Eigen::VectorXcd v) {
  Eigen::Index idx = 0;
  if (std::abs(v(0)) < 1e-8) {
    v.cwiseAbs().maxCoeff(&idx);
  }
  const std::complex<double> c = v(idx);
  return v * (std::conj(c) / std::abs(c));
}

inline double relative_rms(const TwoAtomHamiltonian &h, const Eigen::VectorXcd &v) {
  double acc = 0.0;
  for (int r = 0; r < h.sites; ++r) {
    const double d = h.wrap(r);
    acc += d * d * std::norm(v(r));
  }
  return std::sqrt(acc);
}

inline double ring_distance(double k, double k0) {
  const double two_pi = 2.0 * constants::pi;
  double d = std::fmod(k - k0, two_pi);
  if (d >= constants::pi) {
    d -= two_pi;
  } else if (d < -constants::pi) {
    d += two_pi;
  }
  return d;
}

} // namespace detail

/// Assembles the two-atom model. Throws SizeError when the K = 0 bound
/// cluster (4 x rms relative separation) is wider than N/4.
inline TwoAtomHamiltonian build_hamiltonian(int sites, double v_hop, const InteractionProfile &profile,
                                            bool include_offsite = true) {
  if (sites < 8 || sites % 2 != 0) {
    throw DomainError("two-atom model needs an even N >= 8");
  }
  if (v_hop > 0.0) {
    throw DomainError("V_hop must follow the lattice-module convention V_hop <= 0");
  }
  if (profile.values.empty()) {
    throw DomainError("interaction profile is empty");
  }
  TwoAtomHamiltonian h{sites, v_hop, profile, include_offsite};
  const auto sol = detail::solve_block(h, 0.0);
  const double width = 4.0 * detail::relative_rms(h, sol.vectors.col(0));
  if (width > sites / 4.0) {
    std::ostringstream msg;
    msg << "bound cluster width " << width << " sites exceeds N/4 = " << sites / 4.0;
    throw SizeError(msg.str());
  }
  return h;
}

// ---------------------------------------------------------------------------
//  States
// ---------------------------------------------------------------------------

struct StateMember {
  double weight = 1.0;
  Eigen::MatrixXcd amplitudes; // [j, l]
};

/// Pure state (one member) or a weighted ensemble over the N x N site pairs.
struct TwoAtomState {
  int sites = 0;
  int center_site = 0;
  std::vector<StateMember> members;
  std::optional<double> temperature;    // k_B T, E_rec
  std::optional<double> envelope_width; // sigma_E, a
  std::vector<std::string> warnings;

  bool is_pure() const { return members.size() == 1; }

  const Eigen::MatrixXcd &amplitudes() const {
    if (!is_pure()) {
      throw DomainError("ensemble state has no single amplitude matrix");
    }
    return members.front().amplitudes;
  }

  double weight_sum() const {
    double s = 0.0;
    for (const auto &m : members) {
      s += m.weight;
    }
    return s;
  }

  /// Ensemble-averaged probability of j != l.
  double off_diagonal_weight() const {
    double acc = 0.0;
    for (const auto &m : members) {
      const double diag = m.amplitudes.diagonal().squaredNorm();
      acc += m.weight * (m.amplitudes.squaredNorm() - diag);
    }
    return acc;
  }

  /// Ring position of site j relative to the state's centre: centre + minimal image.
  double site_position(int j) const {
    int d = ((j - center_site) % sites + sites) % sites;
    if (d >= sites / 2) {
      d -= sites;
    }
    return center_site + d;
  }

  void validate(double tol = 1e-10) const {
    if (members.empty()) {
      throw DomainError("state has no members");
    }
    if (std::abs(weight_sum() - 1.0) > tol) {
      throw NumericalError("ensemble weights do not sum to 1");
    }
    for (const auto &m : members) {
      if (m.amplitudes.rows() != sites || m.amplitudes.cols() != sites) {
        throw DomainError("amplitude matrix does not match site count");
      }
      if (std::abs(m.amplitudes.squaredNorm() - 1.0) > tol) {
        throw NumericalError("state member is not normalized");
      }
    }
  }
};

namespace detail {

/// c_{j, j+r} = exp(iKj) phi(r) / sqrt(N).
inline Eigen::MatrixXcd bloch_amplitudes(int n, double k, const Eigen::VectorXcd &relative) {
  Eigen::MatrixXcd c(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const std::complex<double> phase = std::polar(norm, k * j);
    for (int r = 0; r < n; ++r) {
      c(j, (j + r) % n) = phase * relative(r);
    }
  }
  return c;
}

} // namespace detail

inline TwoAtomState pure_state(int sites, Eigen::MatrixXcd amplitudes, int center = 0) {
  TwoAtomState s;
  s.sites = sites;
  s.center_site = center;
  s.members.push_back({1.0, std::move(amplitudes)});
  return s;
}

/// Lowest K = 0 eigenstate. For V_hop = 0 this is the symmetric sum of |j, j>.
inline TwoAtomState ground_state(const TwoAtomHamiltonian &h) {
  const auto sol = detail::solve_block(h, 0.0);
  const Eigen::VectorXcd phi = detail::fix_relative_phase(sol.vectors.col(0));
  TwoAtomState s = pure_state(h.sites, detail::bloch_amplitudes(h.sites, 0.0, phi));
  const double onsite = h.interaction(0);
  if (onsite != 0.0 && std::abs(h.v_hop / onsite) > 0.1) {
    s.warnings.emplace_back("|V_hop / V_dd| > 0.1: not a tightly bound diatom");
  }
  return s;
}

/// Diagonal Gaussian pair state c_jj ~ exp[-(j - j0)^2 / (2 sigma_E^2)].
/// An infinite width gives the uniform lattice-EPR state sum_j |j, j>.
inline TwoAtomState envelope_state(int sites, double sigma_e, int center = 0) {
  if (sites < 2) {
    throw DomainError("envelope state needs sites");
  }
  const bool uniform = std::isinf(sigma_e) && sigma_e > 0.0;
  if (!uniform) {
    detail::require_positive(sigma_e, "sigma_E");
  }
  if (!uniform && 3.0 * sigma_e >= sites / 2.0) {
    throw SizeError("envelope clipped by the ring: need 3 sigma_E < N a / 2");
  }
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(sites, sites);
  TwoAtomState s;
  s.sites = sites;
  s.center_site = center;
  for (int j = 0; j < sites; ++j) {
    const double d = s.site_position(j) - center;
    c(j, j) = uniform ? 1.0 : std::exp(-d * d / (2.0 * sigma_e * sigma_e));
  }
  c /= c.norm();
  s.members.push_back({1.0, std::move(c)});
  if (!uniform) {
    s.envelope_width = sigma_e;
  }
  return s;
}

inline TwoAtomState uniform_diagonal_state(int sites) {
  return envelope_state(sites, std::numeric_limits<double>::infinity());
}

/// Ensemble spread of the centre of mass (x1 + x2) / 2 using site centres, in a.
inline double center_of_mass_spread(const TwoAtomState &state) {
  double mean = 0.0, second = 0.0;
  for (const auto &m : state.members) {
    for (int j = 0; j < state.sites; ++j) {
      for (int l = 0; l < state.sites; ++l) {
        const double p = m.weight * std::norm(m.amplitudes(j, l));
        const double x = 0.5 * (state.site_position(j) + state.site_position(l));
        mean += p * x;
        second += p * x * x;
      }
    }
  }
  return std::sqrt(std::max(second - mean * mean, 0.0));
}

// ---------------------------------------------------------------------------
//  Bound band
// ---------------------------------------------------------------------------

struct DiatomBand {
  TwoAtomHamiltonian hamiltonian;
  std::vector<double> quasimomenta;            // K a, -pi .. pi - 2pi/N
  std::vector<double> bound_energy;            // E_bound(K)
  std::vector<Eigen::VectorXcd> bound_vectors; // relative wavefunctions phi_K(r)
  Eigen::MatrixXd energies;                    // [K index, level], all levels
  double bandwidth = 0.0;       // V_B^(2at), max - min of E_bound
  double v_hop_fit = 0.0;       // V_hop^(2at) from E = c + 2 J cos(K a)
  double fit_offset = 0.0;
  double fit_residual = 0.0;    // rms of E_bound - fit
  double gap = 0.0;             // continuum floor - bound-branch top
  double curvature = 0.0;       // E_bound''(0), E_rec a^2
  double mass_curvature = 0.0;  // m_eff^(2at) / m from curvature
  double mass_fit = 0.0;        // m_eff^(2at) / m from the fitted hopping

  int sites() const { return hamiltonian.sites; }
  double min_energy() const {
    return *std::min_element(bound_energy.begin(), bound_energy.end());
  }
};

/// Solves every K block, extracts the lowest (bound) branch and fits it to a
/// cosine. Throws RegimeError when the branch touches the scattering continuum.
inline DiatomBand diatom_band_exact(const TwoAtomHamiltonian &h) {
  const int n = h.sites;
  DiatomBand band;
  band.hamiltonian = h;
  band.quasimomenta.resize(n);
  band.bound_energy.resize(n);
  band.bound_vectors.resize(n);
  band.energies.resize(n, n);
  double continuum_floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double k = 2.0 * constants::pi * (i - n / 2) / n;
    band.quasimomenta[i] = k;
    const auto sol = detail::solve_block(h, k);
    band.energies.row(i) = sol.energies.transpose();
    band.bound_energy[i] = sol.energies(0);
    band.bound_vectors[i] = detail::fix_relative_phase(sol.vectors.col(0));
    continuum_floor = std::min(continuum_floor, sol.energies(1));
  }
  const auto [lo, hi] = std::minmax_element(band.bound_energy.begin(), band.bound_energy.end());
  band.bandwidth = *hi - *lo;
  band.gap = continuum_floor - *hi;
  if (!(band.gap > 0.0)) {
    std::ostringstream msg;
    msg << "bound branch merges with the continuum (gap " << band.gap
        << " E_rec); need |V_dd| well above 4|V_hop|";
    throw RegimeError(msg.str());
  }

  double mean = 0.0, cosine = 0.0;
  for (int i = 0; i < n; ++i) {
    mean += band.bound_energy[i];
    cosine += band.bound_energy[i] * std::cos(band.quasimomenta[i]);
  }
  band.fit_offset = mean / n;
  band.v_hop_fit = cosine / n;
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fit = band.fit_offset + 2.0 * band.v_hop_fit * std::cos(band.quasimomenta[i]);
    res += (band.bound_energy[i] - fit) * (band.bound_energy[i] - fit);
  }
  band.fit_residual = std::sqrt(res / n);

  const double step = 1e-2;
  const double e0 = detail::solve_block(h, 0.0).energies(0);
  const double ep = detail::solve_block(h, step).energies(0);
  const double em = detail::solve_block(h, -step).energies(0);
  band.curvature = (ep + em - 2.0 * e0) / (step * step);
  const double pi2 = constants::pi * constants::pi;
  band.mass_curvature = 2.0 / (pi2 * band.curvature);
  band.mass_fit = band.v_hop_fit != 0.0 ? 1.0 / (pi2 * std::abs(band.v_hop_fit))
                                        : std::numeric_limits<double>::infinity();
  return band;
}

/// All N^2 eigenvalues from the K blocks, ascending.
inline std::vector<double> block_spectrum(const TwoAtomHamiltonian &h) {
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(h.sites) * h.sites);
  for (int i = 0; i < h.sites; ++i) {
    const double k = 2.0 * constants::pi * (i - h.sites / 2) / h.sites;
    const auto sol = detail::solve_block(h, k);
    for (int e = 0; e < sol.energies.size(); ++e) {
      all.push_back(sol.energies(e));
    }
  }
  std::sort(all.begin(), all.end());
  return all;
}

/// Brute-force dense spectrum, ascending (N <= 24).
inline std::vector<double> dense_spectrum(const TwoAtomHamiltonian &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense eigensolver did not converge");
  }
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Adiabatic-elimination pair hopping 2 V_hop^2 / V_dd.
inline double hopping_two_atom(double v_hop, double v_dd) {
  if (v_dd == 0.0) {
    throw SingularityError("pair hopping diverges for V_dd = 0");
  }
  return 2.0 * v_hop * v_hop / v_dd;
}

/// hbar^2 |V_dd| / (4 V_hop^2 a^2) in units of the atomic mass.
inline double effective_mass_two_atom(double v_hop, double v_dd) {
  if (v_hop == 0.0 || v_dd == 0.0) {
    throw SingularityError("pair effective mass needs non-zero V_hop and V_dd");
  }
  return std::abs(v_dd) / (2.0 * constants::pi * constants::pi * v_hop * v_hop);
}

/// m_eff^(2at) / m_eff = |V_dd| / (2 |V_hop|).
inline double effective_mass_ratio(double v_hop, double v_dd) {
  if (v_hop == 0.0) {
    throw SingularityError("mass ratio needs non-zero V_hop");
  }
  return std::abs(v_dd) / (2.0 * std::abs(v_hop));
}

// ---------------------------------------------------------------------------
//  Thermal states
// ---------------------------------------------------------------------------

enum class ThermalModel {
  /// Boltzmann weights exp(-E_bound(K) / k_B T) on the diatom band.
  band,
  /// Sum-momentum spread fixed by the trap temperature during preparation
  /// (delta_p_plus_prep); the band does not thermalize.
  preparation,
};

struct Envelope {
  double width = 6.0; // sigma_E, a
  int center = 0;
  ThermalModel model = ThermalModel::preparation;
};

namespace detail {

/// Gaussian wavepacket of bound-branch states centred on `centre` with mean
/// quasimomentum k0: amplitudes ~ exp[-(K - k0)^2 sigma_E^2 / 2] exp(-iK j0).
inline Eigen::MatrixXcd bound_wavepacket(const DiatomBand &band, double sigma_e, int centre,
                                         double k0) {
  const int n = band.sites();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double k = band.quasimomenta[i];
    const double d = ring_distance(k, k0);
    const double amp = std::exp(-0.5 * d * d * sigma_e * sigma_e);
    if (amp < 1e-300) {
      continue;
    }
    c += std::polar(amp, -k * centre) * bloch_amplitudes(n, k, band.bound_vectors[i]);
  }
  return c / c.norm();
}

inline double bound_occupancy(const DiatomBand &band, double kt) {
  if (kt <= 0.0) {
    return 1.0;
  }
  const double emin = band.min_energy();
  double bound = 0.0, total = 0.0;
  for (int i = 0; i < band.energies.rows(); ++i) {
    for (int e = 0; e < band.energies.cols(); ++e) {
      const double w = std::exp(-(band.energies(i, e) - emin) / kt);
      total += w;
      if (e == 0) {
        bound += w;
      }
    }
  }
  return bound / total;
}

} // namespace detail

/// Thermal ensemble over the bound branch. Without an envelope the members are
/// K Bloch states with Boltzmann weights. With an envelope each member is a
/// Gaussian wavepacket of width sigma_E boosted to K', and the K' weights come
/// from the chosen thermal model. k_B T = 0 yields the pure K = 0 state (or
/// the unboosted wavepacket).
inline TwoAtomState thermal_diatom_state(const DiatomBand &band, double kt,
                                         std::optional<Envelope> envelope = std::nullopt) {
  if (!(kt >= 0.0)) {
    throw DomainError("temperature must be non-negative");
  }
  const int n = band.sites();
  if (envelope) {
    detail::require_positive(envelope->width, "sigma_E");
    if (3.0 * envelope->width >= n / 2.0) {
      throw SizeError("envelope clipped by the ring: need 3 sigma_E < N a / 2");
    }
  }

  std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
  const int zero = n / 2; // index of K = 0
  const double emin = band.min_energy();
  if (kt == 0.0) {
    weights[zero] = 1.0;
  } else if (envelope && envelope->model == ThermalModel::preparation) {
    const double spread = delta_p_plus_prep(envelope->width, kt);
    const double intrinsic = 1.0 / (2.0 * envelope->width * envelope->width);
    const double boost_var = std::max(spread * spread - intrinsic, 0.0);
    if (boost_var <= 0.0) {
      weights[zero] = 1.0;
    } else {
      for (int i = 0; i < n; ++i) {
        const double k = band.quasimomenta[i];
        weights[i] = std::exp(-0.5 * k * k / boost_var);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      weights[i] = std::exp(-(band.bound_energy[i] - emin) / kt);
    }
  }

  const double wmax = *std::max_element(weights.begin(), weights.end());
  double total = 0.0;
  for (auto &w : weights) {
    if (w < 1e-14 * wmax) {
      w = 0.0;
    }
    total += w;
  }

  TwoAtomState state;
  state.sites = n;
  state.center_site = envelope ? envelope->center : 0;
  state.temperature = kt;
  if (envelope) {
    state.envelope_width = envelope->width;
  }
  for (int i = 0; i < n; ++i) {
    if (weights[i] == 0.0) {
      continue;
    }
    const double k = band.quasimomenta[i];
    Eigen::MatrixXcd amps =
        envelope ? detail::bound_wavepacket(band, envelope->width, envelope->center, k)
                 : detail::bloch_amplitudes(n, k, band.bound_vectors[i]);
    state.members.push_back({weights[i] / total, std::move(amps)});
  }

  const double occupancy = detail::bound_occupancy(band, kt);
  if (occupancy < 0.9) {
    std::ostringstream msg;
    msg << "bound-branch occupancy " << occupancy << " < 0.9 of the full thermal state";
    state.warnings.push_back(msg.str());
  }
  if (kt > band.bandwidth) {
    state.warnings.emplace_back("k_B T exceeds the diatom bandwidth V_B^(2at)");
  }
  return state;
}

} // namespace lattice_epr
