#include "fixtures.hpp"

#include "lattice_epr/estimates.hpp"

#include <catch_amalgamated.hpp>

using namespace lattice_epr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("s estimate for lithium", "[estimates]") {
  const double kt10 = fixtures::lithium_kt(10e-9);
  const double kt100 = fixtures::lithium_kt(100e-9);
  CHECK_THAT(1.0 / (M_PI * M_PI * 36.0 * kt10), WithinRel(3.68, 0.01));
  CHECK_THAT(s_estimate(6.0, 0.136, kt10), WithinRel(31.2, 0.005));
  CHECK_THAT(s_estimate(6.0, 0.136, kt100), WithinRel(11.0, 0.01));
  CHECK_THAT(s_estimate(6.0, 0.136, 0.0), WithinRel(6.0 / (std::sqrt(2.0) * 0.136), 1e-12));
}

TEST_CASE("s estimate decreases with temperature", "[estimates][property]") {
  double previous = s_estimate(6.0, 0.136, 0.0);
  for (double kt = 1e-3; kt < 1.0; kt *= 1.7) {
    const double s = s_estimate(6.0, 0.136, kt);
    CHECK(s < previous);
    previous = s;
  }
}

TEST_CASE("preparation-limited sum momentum", "[estimates]") {
  CHECK_THAT(delta_p_plus_prep(6.0, 0.0), WithinRel(1.0 / (std::sqrt(2.0) * 6.0), 1e-15));
  CHECK_THAT(delta_p_plus_prep(6.0, 1e-9), WithinRel(1.0 / (std::sqrt(2.0) * 6.0), 1e-12));
  const double kt100 = fixtures::lithium_kt(100e-9);
  const double ratio = delta_p_plus_prep(6.0, kt100) / delta_p_plus_prep(6.0, 0.0);
  CHECK_THAT(ratio, WithinRel(2.9, 0.05));
  // With Delta x_- = sigma the generic s formula reproduces the tanh estimate.
  CHECK_THAT(s_parameter(0.136, delta_p_plus_prep(6.0, kt100)),
             WithinRel(s_estimate(6.0, 0.136, kt100), 1e-12));
  double previous = delta_p_plus_prep(6.0, 0.0);
  for (double kt = 1e-3; kt < 1.0; kt *= 2.0) {
    const double p = delta_p_plus_prep(6.0, kt);
    CHECK(p > previous);
    previous = p;
  }
  CHECK_THROWS_AS(delta_p_plus_prep(0.0, 1e-3), SingularityError);
}

TEST_CASE("s parameter", "[estimates]") {
  CHECK_THAT(s_parameter(0.3, 1.0 / 0.6), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(s_parameter(0.0, 1.0), SingularityError);
  CHECK_THROWS_AS(s_parameter(1.0, 0.0), SingularityError);
}

TEST_CASE("relative position width", "[estimates]") {
  CHECK(delta_x_minus(0.136, 0.0, -2.16) == 0.136);
  const double dx = delta_x_minus(0.136, -0.0355, -2.16);
  CHECK_THAT(dx * dx - 0.136 * 0.136, WithinRel(5.4e-4, 0.01));
  CHECK_THROWS_AS(delta_x_minus(0.136, -0.0355, 0.0), SingularityError);
}

TEST_CASE("thermal sum momentum", "[estimates]") {
  CHECK(delta_p_plus_thermal(-2.16, -0.0355, 0.0).value == 0.0);
  const double p1 = delta_p_plus_thermal(-2.16, -0.0355, 1e-4).value;
  CHECK_THAT(delta_p_plus_thermal(-2.16, -0.0355, 4e-4).value, WithinRel(2.0 * p1, 1e-12));
  CHECK(delta_p_plus_thermal(-2.16, -0.0355, 1e-3).in_regime);
  CHECK_FALSE(delta_p_plus_thermal(-2.16, -0.0355, 1e-2).in_regime);
}

TEST_CASE("pair fraction", "[estimates]") {
  CHECK_THAT(pair_fraction(6.0).value, WithinRel(1.0 / 6.0, 1e-15));
  CHECK(pair_fraction(1.0).value == 1.0);
  CHECK(pair_fraction(1.0).meaningful);
  CHECK_FALSE(pair_fraction(0.5).meaningful);
  CHECK_THAT(pair_fraction(3.0).value, WithinRel(2.0 * pair_fraction(6.0).value, 1e-15));
}

TEST_CASE("envelope optimizer against a dense grid scan", "[estimates][oracle]") {
  const double kt = fixtures::lithium_kt(100e-9);
  const double sigma = 0.136;
  const auto opt = optimize_sigma_e(sigma, kt, 1.0, 30.0);
  // Oracle: 10^5-point scan (half-step 1.5e-4 a).
  double best = 1.0, best_s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = 1.0 + 29.0 * i / 99999.0;
    const double s = s_estimate(x, sigma, kt);
    if (s > best_s) {
      best_s = s;
      best = x;
    }
  }
  CHECK_THAT(opt.sigma_e, WithinAbs(best, 1e-3));
  CHECK_THAT(opt.s, WithinRel(best_s, 1e-8));
  CHECK_FALSE(opt.on_boundary);
  CHECK(opt.s >= s_estimate(6.0, sigma, kt));
  // Stationarity of x tanh(c / x^2): sinh(2u) = 4u with u = 1 / (pi^2 sigma_E^2 k_B T).
  const double u = 1.0 / (M_PI * M_PI * opt.sigma_e * opt.sigma_e * kt);
  CHECK_THAT(std::sinh(2.0 * u), WithinRel(4.0 * u, 1e-3));
  CHECK_THAT(opt.sigma_e, WithinRel(3.49, 0.01));
}

TEST_CASE("optimizer reports boundary solutions", "[estimates]") {
  const auto cold = optimize_sigma_e(0.136, 1e-7, 1.0, 30.0);
  CHECK(cold.on_boundary);
  CHECK(cold.sigma_e == 30.0);
  CHECK_THROWS_AS(optimize_sigma_e(0.136, 1e-3, 5.0, 1.0), DomainError);
  CHECK_THROWS_AS(optimize_sigma_e(0.136, 0.0, 1.0, 30.0), DomainError);
}
