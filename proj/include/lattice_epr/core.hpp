#pragma once

// Physical constants, the internal unit system and species/laser records.
//
// Internal units used throughout the library:
//   energy       E_rec = 2 pi^2 hbar^2 / (m lambda_L^2)
//   length       a = lambda_L / 2
//   momentum     hbar / a        (so a quasimomentum q is stored as q*a)
//   temperature  k_B T / E_rec
//   mass         atomic mass m   (hbar = a = E_rec = 1 implies m = pi^2 / 2)
// SI appears only at API boundaries.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lattice_epr {

// ---------------------------------------------------------------------------
//  Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Formula evaluated at a pole (zero separation, resonance, zero coupling).
class SingularityError : public DomainError {
public:
  using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

/// Box too small for the requested state or bound cluster.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Parameters outside the physical regime the model describes.
class RegimeError : public Error {
public:
  using Error::Error;
};

class DegenerateLimitError : public Error {
public:
  using Error::Error;
};

class ResolutionError : public Error {
public:
  using Error::Error;
};

class AliasingError : public Error {
public:
  using Error::Error;
};

class ConditioningError : public Error {
public:
  using Error::Error;
};

class NoPeakError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
//  Constants (CODATA 2018, SI)
// ---------------------------------------------------------------------------

namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double planck = 6.62607015e-34;           // J s (exact)
inline constexpr double hbar = planck / (2.0 * pi);        // J s
inline constexpr double boltzmann = 1.380649e-23;          // J/K (exact)
inline constexpr double speed_of_light = 299792458.0;      // m/s (exact)
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;   // kg

/// Gaussian HWHM / standard deviation, sqrt(2 ln 2).
inline const double hwhm_per_sigma = std::sqrt(2.0 * std::numbers::ln2);

/// Atomic mass in internal units (hbar = a = E_rec = 1).
inline constexpr double mass_internal = pi * pi / 2.0;

} // namespace constants

namespace detail {

inline void require_positive(double value, const char *what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

} // namespace detail

// ---------------------------------------------------------------------------
//  Species and lasers
// ---------------------------------------------------------------------------

struct AtomSpecies {
  std::string name;
  double mass = 0.0;                 // kg
  double lattice_wavelength = 0.0;   // m, lambda_L
  double lattice_linewidth = 0.0;    // 1/s, gamma_L
  double coupling_wavelength = 0.0;  // m, lambda_C
  double coupling_linewidth = 0.0;   // 1/s, gamma_C

  /// omega_A of the coupling transition.
  double coupling_transition_frequency() const {
    return 2.0 * constants::pi * constants::speed_of_light / coupling_wavelength;
  }

  double lattice_transition_frequency() const {
    return 2.0 * constants::pi * constants::speed_of_light / lattice_wavelength;
  }

  void validate() const {
    detail::require_positive(mass, "species mass");
    detail::require_positive(lattice_wavelength, "lattice wavelength");
    detail::require_positive(lattice_linewidth, "lattice linewidth");
    detail::require_positive(coupling_wavelength, "coupling wavelength");
    detail::require_positive(coupling_linewidth, "coupling linewidth");
  }
};

/// ⁷Li with the lattice on 2s-3p (323 nm) and the coupling on 2s-2p (670.8 nm).
inline AtomSpecies lithium7() {
  AtomSpecies li;
  li.name = "lithium-7";
  li.mass = 7.0160034366 * constants::atomic_mass_unit;
  li.lattice_wavelength = 323e-9;
  li.lattice_linewidth = 1.2e6;
  li.coupling_wavelength = 670.8e-9;
  li.coupling_linewidth = 3.7e7;
  return li;
}

enum class LaserRole { lattice, coupling };

struct LaserConfig {
  LaserRole role = LaserRole::lattice;
  double intensity = 0.0;   // W/m^2
  double detuning = 0.0;    // 1/s, angular, laser minus transition
  double wavelength = 0.0;  // m

  double wavevector() const { return 2.0 * constants::pi / wavelength; }
  double angular_frequency() const {
    return constants::speed_of_light * wavevector();
  }

  void validate() const {
    if (!(intensity >= 0.0)) {
      throw DomainError("laser intensity must be non-negative");
    }
    detail::require_positive(wavelength, "laser wavelength");
  }
};

// ---------------------------------------------------------------------------
//  Unit system
// ---------------------------------------------------------------------------

/// Recoil energy 2 pi^2 hbar^2 / (m lambda_L^2) in joules.
inline double recoil_energy(double mass, double lattice_wavelength) {
  detail::require_positive(mass, "mass");
  detail::require_positive(lattice_wavelength, "lattice wavelength");
  const double pi = constants::pi;
  return 2.0 * pi * pi * constants::hbar * constants::hbar /
         (mass * lattice_wavelength * lattice_wavelength);
}

inline double recoil_energy(const AtomSpecies &species, double lattice_wavelength) {
  return recoil_energy(species.mass, lattice_wavelength);
}

/// Recoil energy expressed as a temperature E_rec / k_B in kelvin.
inline double recoil_temperature(const AtomSpecies &species, double lattice_wavelength) {
  return recoil_energy(species, lattice_wavelength) / constants::boltzmann;
}

class UnitSystem {
public:
  UnitSystem(double mass, double lattice_wavelength)
      : mass_(mass), lattice_wavelength_(lattice_wavelength),
        recoil_(recoil_energy(mass, lattice_wavelength)) {}

  explicit UnitSystem(const AtomSpecies &species)
      : UnitSystem(species.mass, species.lattice_wavelength) {}

  double recoil_energy_si() const { return recoil_; }
  double lattice_constant_si() const { return lattice_wavelength_ / 2.0; }
  double momentum_unit_si() const { return constants::hbar / lattice_constant_si(); }
  double mass_si() const { return mass_; }

  double energy_to_internal(double joules) const { return joules / recoil_; }
  double energy_to_si(double erec) const { return erec * recoil_; }

  double length_to_internal(double metres) const { return metres / lattice_constant_si(); }
  double length_to_si(double sites) const { return sites * lattice_constant_si(); }

  double momentum_to_internal(double si) const { return si / momentum_unit_si(); }
  double momentum_to_si(double internal) const { return internal * momentum_unit_si(); }

  /// Temperature in kelvin -> k_B T in E_rec.
  double temperature_to_internal(double kelvin) const {
    return constants::boltzmann * kelvin / recoil_;
  }
  double temperature_to_si(double kt_erec) const {
    return kt_erec * recoil_ / constants::boltzmann;
  }

  double mass_to_internal(double kg) const { return kg / mass_; }
  double mass_to_si(double ratio) const { return ratio * mass_; }

private:
  double mass_;
  double lattice_wavelength_;
  double recoil_;
};

// ---------------------------------------------------------------------------
//  Conversions from laser parameters
// ---------------------------------------------------------------------------

/// |mu|^2 = 3 pi eps0 hbar c^3 gamma / omega_A^3 (two-level spontaneous emission).
inline double dipole_moment_sq_from_linewidth(double linewidth, double transition_frequency) {
  detail::require_positive(linewidth, "linewidth");
  detail::require_positive(transition_frequency, "transition frequency");
  const double c = constants::speed_of_light;
  return 3.0 * constants::pi * constants::vacuum_permittivity * constants::hbar * c * c * c *
         linewidth / std::pow(transition_frequency, 3);
}

/// A value that came out of an approximate conversion chain, with a note on
/// the convention used to produce it.
struct AnnotatedValue {
  double value = 0.0;
  std::string convention;
};

/// Lattice depth from the two-level AC Stark shift, U0 = hbar Omega^2 / (4 |delta|)
/// with Omega^2 = gamma^2 I / (2 I_sat) and I_sat = pi h c gamma / (3 lambda^3).
/// Returns joules. This chain does not reproduce the 7.42 E_rec quoted for the
/// lithium example; scenarios supply U0 directly when matching it.
inline AnnotatedValue lattice_depth_from_laser(const LaserConfig &laser,
                                               const AtomSpecies &species) {
  laser.validate();
  if (laser.detuning == 0.0) {
    throw SingularityError("light shift diverges at zero detuning");
  }
  const double gamma = species.lattice_linewidth;
  const double lambda = species.lattice_wavelength;
  detail::require_positive(gamma, "lattice linewidth");
  const double saturation = constants::pi * constants::planck * constants::speed_of_light *
                            gamma / (3.0 * lambda * lambda * lambda);
  const double rabi_sq = gamma * gamma * laser.intensity / (2.0 * saturation);
  return {constants::hbar * rabi_sq / (4.0 * std::abs(laser.detuning)),
          "two-level light shift hbar*Omega^2/(4|delta|) at the quoted single-beam "
          "intensity; no standing-wave factor"};
}

} // namespace lattice_epr
