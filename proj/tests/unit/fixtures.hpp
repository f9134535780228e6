#pragma once

#include "lattice_epr/diatom.hpp"
#include "lattice_epr/dipole.hpp"
#include "lattice_epr/lattice.hpp"

namespace fixtures {

inline constexpr double example_depth = 7.42;
inline constexpr double example_v_dd = -2.16;

inline double example_wavevector() { return 2.0 * M_PI * 161.5 / 670.8; }
inline double example_displacement() { return 40.0 / 161.5; }

inline lattice_epr::InteractionProfile example_profile(double v_dd = example_v_dd) {
  using namespace lattice_epr;
  const double vc = coupling_for_onsite(v_dd, example_wavevector(), example_displacement());
  return interaction_profile(DipoleCoupling{vc, example_wavevector(), example_displacement(), 0.0}, 4);
}

/// Profile with only the on-site value U.
inline lattice_epr::InteractionProfile onsite_profile(double u) {
  lattice_epr::InteractionProfile p;
  p.max_offset = 1;
  p.values = {0.0, u, 0.0};
  p.separation = {1.0, 0.0, 1.0};
  p.cos_theta = {-1.0, 0.0, 1.0};
  return p;
}

inline double example_v_hop() {
  using namespace lattice_epr;
  static const double v = hopping_exact(band_structure(LatticeConfig{323e-9, example_depth, 64, 16, 3})).v_hop;
  return v;
}

/// k_B T in E_rec for lithium in the 323 nm lattice.
inline double lithium_kt(double kelvin) {
  using namespace lattice_epr;
  return UnitSystem(lithium7()).temperature_to_internal(kelvin);
}

} // namespace fixtures

namespace fixtures {

inline const lattice_epr::BlochSpectrum &example_spectrum() {
  static const auto spec = lattice_epr::band_structure(lattice_epr::LatticeConfig{323e-9, example_depth, 64, 16, 3});
  return spec;
}

inline const lattice_epr::DiatomBand &example_band() {
  using namespace lattice_epr;
  static const auto band = diatom_band_exact(build_hamiltonian(64, example_v_hop(), example_profile(), true));
  return band;
}

} // namespace fixtures
