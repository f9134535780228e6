#pragma once

// Laser-induced dipole-dipole interaction V_dd = -V_C F_theta(kR) between atoms
// of the two displaced lattices. The coupling laser propagates along x and is
// polarized along y; theta is the angle between the interatomic axis and the
// laser wavevector.

#include "lattice_epr/core.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace lattice_epr {

/// Angular/radial kernel parametrized by cos(theta):
///   F = cos(kR cos t) { (2 - 3 cos^2 t) [cos kR / (kR)^3 + sin kR / (kR)^2]
///                       + cos^2 t cos kR / kR }.
inline double f_theta_cos(double kr, double cos_theta) {
  if (kr == 0.0) {
    throw SingularityError("dipole kernel diverges at kR = 0");
  }
  if (!(kr > 0.0)) {
    throw DomainError("kR must be positive");
  }
  const double c2 = cos_theta * cos_theta;
  const double ckr = std::cos(kr);
  const double skr = std::sin(kr);
  const double near = ckr / (kr * kr * kr) + skr / (kr * kr);
  return std::cos(kr * cos_theta) * ((2.0 - 3.0 * c2) * near + c2 * ckr / kr);
}

inline double f_theta(double kr, double theta) { return f_theta_cos(kr, std::cos(theta)); }

/// Dynamic polarizability 2 omega_A |mu|^2 / [hbar (omega_A^2 - omega^2)], SI.
inline double polarizability(double dipole_sq, double transition_frequency,
                             double laser_frequency) {
  detail::require_positive(dipole_sq, "dipole moment squared");
  detail::require_positive(transition_frequency, "transition frequency");
  const double denom = transition_frequency * transition_frequency -
                       laser_frequency * laser_frequency;
  if (denom == 0.0) {
    throw SingularityError("polarizability diverges on resonance");
  }
  return 2.0 * transition_frequency * dipole_sq / (constants::hbar * denom);
}

/// Coupling scale V_C = alpha^2 k^3 I_C / (4 pi eps0^2 c), joules.
inline double coupling_scale(double alpha, double wavevector, double intensity) {
  detail::require_positive(wavevector, "wavevector");
  if (!(intensity >= 0.0)) {
    throw DomainError("coupling intensity must be non-negative");
  }
  const double eps0 = constants::vacuum_permittivity;
  return alpha * alpha * wavevector * wavevector * wavevector * intensity /
         (4.0 * constants::pi * eps0 * eps0 * constants::speed_of_light);
}

/// V_C in joules from coupling-laser parameters: two-level polarizability at
/// omega = omega_A + delta with |mu|^2 from the linewidth.
inline AnnotatedValue coupling_scale_from_laser(const LaserConfig &laser,
                                                const AtomSpecies &species) {
  laser.validate();
  species.validate();
  if (laser.detuning == 0.0) {
    throw SingularityError("polarizability diverges at zero detuning");
  }
  const double omega_a = species.coupling_transition_frequency();
  const double mu_sq = dipole_moment_sq_from_linewidth(species.coupling_linewidth, omega_a);
  const double omega = omega_a + laser.detuning;
  const double alpha = polarizability(mu_sq, omega_a, omega);
  return {coupling_scale(alpha, omega / constants::speed_of_light, laser.intensity),
          "two-level polarizability at omega_A + delta, single-beam intensity"};
}

/// Near-zone nearest-site estimate -V_C (lambda_C / l)^3 / (4 pi^3).
/// Any consistent energy and length units.
inline double v_dd_nearest(double v_c, double coupling_wavelength, double displacement) {
  if (displacement == 0.0) {
    throw SingularityError("nearest-site interaction diverges at l = 0");
  }
  detail::require_positive(displacement, "lattice displacement");
  detail::require_positive(coupling_wavelength, "coupling wavelength");
  const double ratio = coupling_wavelength / displacement;
  const double pi = constants::pi;
  return -v_c * ratio * ratio * ratio / (4.0 * pi * pi * pi);
}

/// Coupling geometry in internal units.
struct DipoleCoupling {
  double v_c = 0.0;           // E_rec
  double wavevector = 0.0;    // k a
  double displacement = 0.0;  // l / a
  double polarizability = 0.0; // SI, informational

  std::vector<std::string> validate() const {
    if (!(v_c >= 0.0)) {
      throw DomainError("V_C must be non-negative");
    }
    detail::require_positive(wavevector, "coupling wavevector");
    detail::require_positive(displacement, "lattice displacement");
    std::vector<std::string> warnings;
    if (displacement > 0.25) {
      warnings.emplace_back("lattice displacement l exceeds a/4; nearest-tube picture is marginal");
    }
    return warnings;
  }
};

/// V_C that makes the on-site profile value equal `v_dd0` (must be attractive).
inline double coupling_for_onsite(double v_dd0, double wavevector, double displacement) {
  if (!(v_dd0 < 0.0)) {
    throw DomainError("on-site V_dd must be negative (attractive) to back out V_C >= 0");
  }
  return -v_dd0 / f_theta_cos(wavevector * displacement, 0.0);
}

struct InteractionProfile {
  int max_offset = 0;
  std::vector<double> values;     // V_dd(dj), index dj + max_offset, E_rec
  std::vector<double> separation; // R / a
  std::vector<double> cos_theta;

  double at(int dj) const {
    if (dj < -max_offset || dj > max_offset) {
      return 0.0;
    }
    return values[static_cast<std::size_t>(dj + max_offset)];
  }
  double onsite() const { return at(0); }

  /// Only the dj = 0 entry kept.
  InteractionProfile onsite_only() const {
    InteractionProfile p = *this;
    for (int dj = -max_offset; dj <= max_offset; ++dj) {
      if (dj != 0) {
        p.values[static_cast<std::size_t>(dj + max_offset)] = 0.0;
      }
    }
    return p;
  }

  InteractionProfile shifted(double offset) const {
    InteractionProfile p = *this;
    for (auto &v : p.values) {
      v += offset;
    }
    return p;
  }
};

/// Site-pair interaction V_dd(dj) = -V_C F(kR) with R = sqrt(l^2 + dj^2) and
/// cos(theta) = dj / R, treating atoms as point dipoles at the Wannier centres.
inline InteractionProfile interaction_profile(const DipoleCoupling &c, int max_offset = 4) {
  c.validate();
  if (max_offset < 1) {
    throw DomainError("profile range must be >= 1");
  }
  InteractionProfile p;
  p.max_offset = max_offset;
  const std::size_t count = static_cast<std::size_t>(2 * max_offset + 1);
  p.values.resize(count);
  p.separation.resize(count);
  p.cos_theta.resize(count);
  for (int dj = -max_offset; dj <= max_offset; ++dj) {
    const auto i = static_cast<std::size_t>(dj + max_offset);
    const double r = std::hypot(c.displacement, static_cast<double>(dj));
    const double ct = dj == 0 ? 0.0 : dj / r;
    p.separation[i] = r;
    p.cos_theta[i] = ct;
    p.values[i] = -c.v_c * f_theta_cos(c.wavevector * r, ct);
  }
  return p;
}

} // namespace lattice_epr
