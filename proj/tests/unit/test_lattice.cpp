#include "lattice_epr/lattice.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

using namespace lattice_epr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

LatticeConfig config(double depth, int sites = 64) {
  return LatticeConfig{323e-9, depth, sites, 16, 3};
}

// Finite-difference oracle: lowest eigenvalue of -(1/pi^2) d^2/dx^2 + (U0/2) cos(2 pi x)
// on one cell with Bloch phase exp(i q).
double fd_lowest(double depth, double q, int points = 1200) {
  const double h = 1.0 / points;
  const double pi = M_PI;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(points, points);
  const double t = 1.0 / (pi * pi * h * h);
  for (int i = 0; i < points; ++i) {
    m(i, i) = 2.0 * t + 0.5 * depth * std::cos(2.0 * pi * i * h);
    const int j = (i + 1) % points;
    const std::complex<double> phase = j == 0 ? std::polar(1.0, q) : 1.0;
    m(j, i) += -t * phase;
    m(i, j) += -t * std::conj(phase);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> s(m, Eigen::EigenvaluesOnly);
  return s.eigenvalues()(0);
}

} // namespace

TEST_CASE("free particle bands are parabolas", "[lattice]") {
  const auto spec = band_structure(config(0.0, 16));
  for (int i = 0; i < spec.sites(); ++i) {
    const double q = spec.quasimomenta[i];
    CHECK_THAT(spec.lowest(i), WithinAbs(q * q / (M_PI * M_PI), 1e-12));
  }
}

TEST_CASE("plane-wave bands agree with a finite-difference oracle", "[lattice][oracle]") {
  for (double depth : {3.0, 7.42, 15.0}) {
    const auto cfg = config(depth);
    for (double q : {0.0, M_PI / 2, M_PI}) {
      CHECK_THAT(lowest_band_energy(cfg, q), WithinAbs(fd_lowest(depth, q), 2e-5));
    }
  }
}

TEST_CASE("hopping of the worked example", "[lattice]") {
  const auto spec = band_structure(config(7.42));
  const auto hop = hopping_exact(spec);
  CHECK_THAT(hop.v_hop, WithinRel(-0.0355, 0.05));
  CHECK(hop.tight_binding);
  CHECK_THAT(hop.bandwidth_ratio, WithinAbs(1.0, 0.02));
  // The exponential formula tracks the bandwidth, not V_hop.
  CHECK_THAT(hopping_approx(7.42).value, WithinRel(4.0 * std::abs(hop.v_hop), 0.05));
  CHECK(hopping_approx(7.42).within_validity);
  CHECK_FALSE(hopping_approx(20.0).within_validity);
}

TEST_CASE("deep-lattice hopping approaches the Mathieu asymptote", "[lattice]") {
  const double u0 = 30.0;
  const auto hop = hopping_exact(band_structure(config(u0)));
  const double asymptote = 4.0 / std::sqrt(M_PI) * std::pow(u0, 0.75) * std::exp(-2.0 * std::sqrt(u0));
  CHECK_THAT(std::abs(hop.v_hop), WithinRel(asymptote, 0.10));
}

TEST_CASE("bandwidth is four times the hopping in the tight-binding range", "[lattice][property]") {
  for (double u0 = 5.0; u0 <= 20.0; u0 += 2.5) {
    const auto hop = hopping_exact(band_structure(config(u0, 32)));
    CHECK_THAT(hop.bandwidth_ratio, WithinAbs(1.0, 0.1));
  }
}

TEST_CASE("band structure validates its inputs", "[lattice]") {
  CHECK_THROWS_AS(band_structure(LatticeConfig{323e-9, 5.0, 15, 16, 3}), DomainError);
  CHECK_THROWS_AS(band_structure(LatticeConfig{323e-9, -1.0, 16, 16, 3}), DomainError);
  CHECK_THROWS_AS(band_structure(LatticeConfig{323e-9, 400.0, 16, 8, 3}), ConvergenceError);
}

TEST_CASE("Wannier function of the worked example", "[lattice]") {
  const auto spec = band_structure(config(7.42, 32));
  const auto w = wannier(spec, 0, 32);
  CHECK_THAT(w.norm(), WithinAbs(1.0, 1e-10));
  double imag = 0.0, top = 0.0;
  for (const auto &v : w.amplitudes) {
    imag = std::max(imag, std::abs(v.imag()));
    top = std::max(top, std::abs(v));
  }
  CHECK(imag < 1e-10);
  CHECK(w.at_offset(0).real() > 0.0);
  // Even about the well centre.
  for (long k = 1; k < 64; ++k) {
    CHECK_THAT(std::abs(w.at_offset(k) - w.at_offset(-k)), WithinAbs(0.0, 1e-10));
  }
  // Exponential localization.
  CHECK(std::abs(w.at_offset(3 * 32)) < 1e-4 * top);

  // Orthogonal to its neighbour.
  const auto w1 = wannier(spec, 1, 32);
  std::complex<double> overlap = 0.0;
  for (std::size_t i = 0; i < w.amplitudes.size(); ++i) {
    overlap += std::conj(w.amplitudes[i]) * w1.amplitudes[i];
  }
  CHECK(std::abs(overlap) * w.step() < 1e-8);

  // Density half-width against the harmonic Gaussian width.
  const double peak = std::norm(w.at_offset(0));
  long k = 0;
  while (std::norm(w.at_offset(k + 1)) >= 0.5 * peak) {
    ++k;
  }
  const double a = std::norm(w.at_offset(k)), b = std::norm(w.at_offset(k + 1));
  const double hwhm = (k + (a - 0.5 * peak) / (a - b)) * w.step();
  CHECK_THAT(hwhm / constants::hwhm_per_sigma, WithinRel(wannier_gaussian_width(7.42).harmonic, 0.15));
}

TEST_CASE("Wannier functions need a gapped band", "[lattice]") {
  CHECK_THROWS_AS(wannier(band_structure(config(0.0, 16)), 0), DegenerateLimitError);
}

TEST_CASE("momentum Wannier amplitude is normalized", "[lattice]") {
  const auto cfg = config(7.42);
  double sum = 0.0;
  const double dk = 0.01;
  for (double k = -40.0; k <= 40.0; k += dk) {
    const double w = wannier_momentum_amplitude(cfg, k);
    sum += w * w * dk;
  }
  CHECK_THAT(sum, WithinAbs(1.0, 1e-6));
  CHECK_THAT(wannier_momentum_amplitude(cfg, 1.3), WithinAbs(wannier_momentum_amplitude(cfg, -1.3), 1e-12));
}

TEST_CASE("Gaussian widths of the lowest orbital", "[lattice]") {
  const auto w = wannier_gaussian_width(7.42);
  CHECK_THAT(w.harmonic, WithinRel(0.136, 0.02));
  CHECK_THAT(w.harmonic * 161.5, WithinRel(22.0, 0.02));
  CHECK_THAT(w.literal, WithinRel(std::pow(2.0, 0.25) * w.harmonic, 1e-12));
  CHECK_THROWS_AS(wannier_gaussian_width(0.0), SingularityError);
}

TEST_CASE("single-atom effective mass", "[lattice]") {
  const auto cfg = config(7.42);
  const auto hop = hopping_exact(band_structure(cfg));
  const double tb = effective_mass_single(hop.v_hop);
  CHECK_THAT(tb, WithinRel(1.0 / (M_PI * M_PI * 0.0355), 0.05));
  CHECK_THROWS_AS(effective_mass_single(0.0), SingularityError);
  for (double depth : {15.0, 30.0}) {
    const auto deep = config(depth);
    CHECK_THAT(curvature_mass_single(deep),
               WithinRel(effective_mass_single(hopping_exact(band_structure(deep)).v_hop), 0.05));
  }
}

// Known failure at U0 = 7.42: the curvature mass is 9.9% above the nearest-neighbour value.
TEST_CASE("nearest-neighbour mass matches the band curvature at the example depth",
          "[lattice][!shouldfail]") {
  const auto cfg = config(7.42);
  const double tb = effective_mass_single(hopping_exact(band_structure(cfg)).v_hop);
  CHECK_THAT(curvature_mass_single(cfg), WithinRel(tb, 0.05));
}

TEST_CASE("next-nearest hopping accounts for the curvature mass", "[lattice]") {
  const auto cfg = config(7.42);
  const double t1 = hopping_exact(band_structure(cfg)).v_hop;
  double t2 = 0.0;
  for (int i = 0; i < cfg.sites; ++i) {
    const double q = 2.0 * M_PI * (i - cfg.sites / 2) / cfg.sites;
    t2 += lowest_band_energy(cfg, q) * std::cos(2.0 * q) / cfg.sites;
  }
  // E(q) = E0 + 2 t1 cos q + 2 t2 cos 2q has curvature -2 t1 - 8 t2 at q = 0.
  CHECK(t2 > 0.0);
  CHECK_THAT(curvature_mass_single(cfg), WithinRel(2.0 / (M_PI * M_PI * (-2.0 * t1 - 8.0 * t2)), 0.02));
}
