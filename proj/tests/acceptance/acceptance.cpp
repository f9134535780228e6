#include "lattice_epr.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace lattice_epr;

namespace {

int failures = 0;

bool rel_ok(double value, double reference, double tol) {
  return std::abs(value - reference) <= tol * std::abs(reference);
}

void verdict(const char *id, bool ok, const std::string &what) {
  std::printf("%s %s: %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) {
    ++failures;
  }
}

std::string format(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(const Distribution1D &a, const Distribution1D &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.density.size(); ++i) {
    m = std::max(m, std::abs(a.density[i] - b.density[i]));
  }
  return m;
}

} // namespace

int main() {
  const Scenario sc = load_scenario("builtin:lithium-example").first;
  const Model m = build_model(sc);
  const double v_hop = m.hopping.v_hop;
  const double v_dd = m.profile.onsite();
  const double sigma = wannier_gaussian_width(sc.lattice.depth).harmonic;
  const UnitSystem units = sc.units();
  const double kt10 = units.temperature_to_internal(10e-9);
  const double kt100 = units.temperature_to_internal(100e-9);

  {
    const double approx = hopping_approx(sc.lattice.depth).value;
    const bool ok = rel_ok(v_hop, -0.0355, 0.05) && rel_ok(approx, 4.0 * std::abs(v_hop), 0.05);
    verdict("AC1", ok,
            format("V_hop = %.6f Erec (ref -0.0355, 5%%); exp(-0.26 U0) = %.6f vs 4|V_hop| = %.6f",
                   v_hop, approx, 4.0 * std::abs(v_hop)));
  }

  const DiatomBand band32 = diatom_band_exact(build_hamiltonian(32, v_hop, m.profile, true));
  {
    const double pert = hopping_two_atom(v_hop, v_dd);
    const bool ok = rel_ok(pert, -0.0012, 0.05) && rel_ok(band32.v_hop_fit, pert, 0.15);
    verdict("AC2", ok,
            format("2 V_hop^2 / V_dd = %.6f Erec (ref -0.0012, 5%%); N = 32 band fit %.6f (15%%)",
                   pert, band32.v_hop_fit));
  }

  {
    const double ratio = effective_mass_ratio(v_hop, v_dd);
    const double closed = effective_mass_two_atom(v_hop, v_dd);
    const bool ok = rel_ok(ratio, 30.0, 0.05) && rel_ok(band32.mass_curvature, closed, 0.15);
    verdict("AC3", ok,
            format("mass ratio %.3f (ref 30, 5%%); curvature mass %.3f m vs closed form %.3f m (15%%)",
                   ratio, band32.mass_curvature, closed));
  }

  // Full simulated distributions for both temperatures of the worked example.
  const Orbital orbital = scenario_orbital(sc, m);
  std::vector<LabeledState> states = scenario_states(sc, m);
  std::vector<StateAnalysis> analyses;
  for (const auto &ls : states) {
    analyses.push_back(analyze_state(sc, m, orbital, ls));
  }

  {
    const double nm = units.length_to_si(sigma) * 1e9;
    bool ok = rel_ok(sigma, 0.136, 0.02) && rel_ok(nm, 22.0, 0.05);
    std::string detail = format("sigma = %.5f a = %.2f nm", sigma, nm);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const double slice = analyses[i].position_slice.metrics.gaussian_sigma();
      ok = ok && rel_ok(slice, sigma, 0.15);
      detail += format("; %s slice HWHM/1.1774 = %.5f a", states[i].label.c_str(), slice);
    }
    verdict("AC4", ok, detail + " (15%)");
  }

  {
    const double s10 = s_estimate(sc.sigma_e, sigma, kt10);
    const double s100 = s_estimate(sc.sigma_e, sigma, kt100);
    const bool ok = rel_ok(s10, 30.0, 0.10) && rel_ok(s100, 11.0, 0.10) && rel_ok(s10, 31.2, 0.005) &&
                    rel_ok(s100, 11.0, 0.01);
    verdict("AC5", ok, format("s(10 nK) = %.3f (ref 30), s(100 nK) = %.3f (ref 11), 10%%", s10, s100));
  }

  {
    const int n = 32;
    const auto state = uniform_diagonal_state(n);
    const auto gauss = Orbital::gaussian(sigma);
    const auto grid = MomentumGridSpec::zones(n, 1.0, 16);
    const auto joint = joint_momentum_density(state, gauss, grid);
    const auto slice = conditional_density(joint, 1, sc.p1_measured, 0.05);
    const auto metrics = peak_metrics(divide_orbital_envelope(slice.distribution, gauss), 0.5);
    const double two_pi = 2.0 * constants::pi;
    bool on_comb = metrics.peaks.size() >= 2;
    for (double p : metrics.peaks) {
      const double f = (p + slice.condition) / two_pi;
      on_comb = on_comb && std::abs(f - std::round(f)) * two_pi <= grid.step + 1e-12;
    }
    const double expected = constants::pi / n;
    const bool ok = on_comb && std::abs(metrics.spacing - two_pi) <= grid.step + 1e-12 &&
                    rel_ok(metrics.hwhm, expected, 0.20);
    verdict("AC6", ok,
            format("N = %d uniform state: ridge spacing %.6f vs 2 pi (cell %.4f), HWHM %.5f vs pi/N = %.5f "
                   "(ratio %.3f, 20%%)",
                   n, metrics.spacing, grid.step, metrics.hwhm, expected, metrics.hwhm / expected));
  }

  {
    // Bloch-state ensemble on the bound band; Delta p_+ is the sum quasimomentum spread.
    const DiatomBand &band = m.band;
    const double mass = band.mass_curvature * constants::mass_internal;
    bool ok = true;
    std::string detail = "Delta p_+^2 / (2 M) / (kT / 2) at kT/V_B =";
    for (double frac : {0.1, 0.2, 0.3, 0.4}) {
      const double kt = frac * band.bandwidth;
      const auto state = thermal_diatom_state(band, kt);
      const auto k = sum_momentum_distribution(state, 1);
      double k2 = 0.0;
      for (int i = 0; i < k.axis.count; ++i) {
        k2 += k.density[static_cast<std::size_t>(i)] * k.axis.step * k.axis.at(i) * k.axis.at(i);
      }
      const double ratio = (k2 / (2.0 * mass)) / (0.5 * kt);
      ok = ok && rel_ok(ratio, 1.0, 0.10);
      detail += format(" %.1f: %.4f;", frac, ratio);
    }
    verdict("AC7", ok, detail + " (10%)");
  }

  {
    const auto h = build_hamiltonian(16, v_hop, m.profile, true);
    const auto dense = dense_spectrum(h);
    const auto block = block_spectrum(h);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
      worst = std::max(worst, std::abs(dense[static_cast<std::size_t>(i)] - block[static_cast<std::size_t>(i)]));
    }
    verdict("AC8", worst <= 1e-9,
            format("N = 16 dense vs block, lowest 32 eigenvalues: max deviation %.3e Erec (1e-9)", worst));
  }

  {
    double norm_dev = 0.0, marginal_dev = 0.0;
    for (const auto &a : analyses) {
      norm_dev = std::max({norm_dev, std::abs(a.position.integral() - 1.0),
                           std::abs(a.momentum.integral() - 1.0),
                           std::abs(a.position_slice.distribution.integral() - 1.0),
                           std::abs(a.momentum_slice.distribution.integral() - 1.0),
                           std::abs(a.momentum_marginal.integral() - 1.0)});
    }
    {
      const auto h = build_hamiltonian(16, -0.05, m.profile.onsite_only(), true);
      const auto st = thermal_diatom_state(diatom_band_exact(h), 0.01, Envelope{1.5, 0, ThermalModel::preparation});
      const auto g = Orbital::gaussian(sigma);
      const auto grid = MomentumGridSpec::zones(16, 4.0, 1);
      marginal_dev = max_abs_diff(marginal(joint_momentum_density(st, g, grid), 1),
                                   single_momentum_density(st, g, grid, 1));
    }
    Eigen::MatrixXcd c = states.front().state.members.front().amplitudes;
    const double parseval = parseval_defect(c);
    const double x = 0.05;
    const double asym_side = f_theta(x, constants::pi / 2) / (2.0 / (x * x * x)) - 1.0;
    const double asym_axis = f_theta(x, 0.0) / (-1.0 / (x * x * x)) - 1.0;
    const double kl = m.coupling.wavevector * m.coupling.displacement;
    const double nearest = v_dd_nearest(m.coupling.v_c, sc.coupling_wavelength / units.lattice_constant_si(),
                                        m.coupling.displacement);
    const double identity = std::abs(nearest * (std::cos(kl) + kl * std::sin(kl)) - v_dd) / std::abs(v_dd);
    bool reports_ok = true;
    for (const auto &a : analyses) {
      reports_ok = reports_ok && a.report.consistent();
    }
    double opt_dev = 0.0;
    for (double kt : sc.temperatures) {
      const auto opt = optimize_sigma_e(sigma, kt, sc.optimizer_lower, sc.optimizer_upper);
      opt_dev = std::max(opt_dev, std::abs(opt.sigma_e - grid_scan_optimum(sigma, kt, sc.optimizer_lower,
                                                                           sc.optimizer_upper, 100001)));
    }
    const bool ok = norm_dev <= 1e-6 && marginal_dev <= 1e-6 && parseval <= 1e-8 &&
                    std::abs(asym_side) <= 0.01 && std::abs(asym_axis) <= 0.01 && identity <= 1e-12 &&
                    reports_ok && opt_dev < 1e-3;
    verdict("AC9", ok,
            format("normalization %.1e, marginal vs direct %.1e, Parseval %.1e, kernel asymptote %.2e/%.2e, "
                   "nearest-site identity %.1e, s identity %s, optimizer vs grid %.1e a",
                   norm_dev, marginal_dev, parseval, asym_side, asym_axis, identity,
                   reports_ok ? "exact" : "broken", opt_dev));
  }

  {
    std::string detail = "logged only:";
    if (sc.reference_lattice_laser) {
      const auto u0 = lattice_depth_from_laser(*sc.reference_lattice_laser, sc.species);
      detail += format(" U0 from laser %.4g Erec (quoted 7.42, %s);", units.energy_to_internal(u0.value),
                       u0.convention.c_str());
    }
    if (sc.reference_coupling_laser) {
      const auto vc = coupling_scale_from_laser(*sc.reference_coupling_laser, sc.species);
      const double vc_int = units.energy_to_internal(vc.value);
      detail += format(" V_C from laser %.4g Erec, V_dd(0) %.4g Erec (quoted -2.16);", vc_int,
                       -vc_int * f_theta_cos(sc.coupling_wavevector() * sc.displacement, 0.0));
    }
    bool shapes = true;
    const int np = static_cast<int>(std::lround(2.0 * sc.position_window * sc.points_per_site)) + 1;
    const int nk = 2 * static_cast<int>(std::lround(sc.momentum_zones * sc.lattice.sites *
                                                    sc.momentum_subdivisions)) + 1;
    for (const auto &a : analyses) {
      shapes = shapes && a.position.density.rows() == np && a.position.density.cols() == np &&
               a.momentum.density.rows() == nk && a.momentum.density.cols() == nk &&
               std::abs(a.momentum.axis1.step - 2.0 * constants::pi / (sc.lattice.sites * sc.momentum_subdivisions)) < 1e-12 &&
               a.position.density.minCoeff() >= 0.0 && a.momentum.density.minCoeff() >= 0.0;
    }
    verdict("AC10", shapes,
            detail + format(" grid shapes %dx%d position, %dx%d momentum", np, np, nk, nk));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
