#pragma once

// Subcommand pipelines behind the command-line tool. Each subcommand reads a
// Scenario, runs the modules and writes CSV/TSV tables into an output
// directory. Files carry comment headers with the tool version and the FNV-1a
// hash of the scenario text. Any failure removes the files written so far.

#include "lattice_epr/analysis.hpp"
#include "lattice_epr/diatom.hpp"
#include "lattice_epr/dipole.hpp"
#include "lattice_epr/estimates.hpp"
#include "lattice_epr/lattice.hpp"
#include "lattice_epr/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lattice_epr {

inline constexpr const char *tool_version = "0.1.0";

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
//  Model assembly
// ---------------------------------------------------------------------------

struct Model {
  BlochSpectrum spectrum;
  HoppingResult hopping;
  DipoleCoupling coupling;
  InteractionProfile profile;
  TwoAtomHamiltonian hamiltonian;
  DiatomBand band;
  std::string coupling_convention; // set when V_C came from the laser block
};

inline Model build_model(const Scenario &sc) {
  Model m;
  m.spectrum = band_structure(sc.lattice);
  m.hopping = hopping_exact(m.spectrum);
  const double ka = sc.coupling_wavevector();
  m.coupling.wavevector = ka;
  m.coupling.displacement = sc.displacement;
  if (sc.v_dd) {
    m.coupling.v_c = coupling_for_onsite(*sc.v_dd, ka, sc.displacement);
  } else {
    const auto vc = coupling_scale_from_laser(*sc.coupling_laser, sc.species);
    m.coupling.v_c = sc.units().energy_to_internal(vc.value);
    m.coupling_convention = vc.convention;
  }
  m.profile = interaction_profile(m.coupling, sc.max_offset);
  m.hamiltonian =
      build_hamiltonian(sc.lattice.sites, m.hopping.v_hop, m.profile, sc.include_offsite);
  m.band = diatom_band_exact(m.hamiltonian);
  return m;
}

inline bool is_lithium_example(const Scenario &sc) {
  const double l_nm = sc.units().length_to_si(sc.displacement) * 1e9;
  return sc.species.name == "lithium-7" && std::abs(sc.lattice.depth - 7.42) < 1e-9 &&
         sc.v_dd && std::abs(*sc.v_dd + 2.16) < 1e-9 && std::abs(l_nm - 40.0) < 1e-6 &&
         std::abs(sc.sigma_e - 6.0) < 1e-9;
}

// ---------------------------------------------------------------------------
//  States and their analysis
// ---------------------------------------------------------------------------

struct LabeledState {
  std::string label;
  std::optional<double> kelvin;
  std::optional<double> kt;
  TwoAtomState state;
};

inline std::string temperature_label(double kelvin) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "T%gnK", kelvin * 1e9);
  return buf;
}

inline std::vector<LabeledState> scenario_states(const Scenario &sc, const Model &m) {
  std::vector<LabeledState> out;
  switch (sc.mode) {
  case StateMode::ground:
    out.push_back({"ground", std::nullopt, std::nullopt, ground_state(m.hamiltonian)});
    break;
  case StateMode::envelope:
    out.push_back({"envelope", std::nullopt, std::nullopt,
                   envelope_state(sc.lattice.sites, sc.sigma_e, sc.center)});
    break;
  case StateMode::thermal: {
    const ThermalModel model =
        sc.thermal_model == "band" ? ThermalModel::band : ThermalModel::preparation;
    for (std::size_t i = 0; i < sc.temperatures.size(); ++i) {
      const double kt = sc.temperatures[i];
      out.push_back({temperature_label(sc.temperatures_kelvin[i]), sc.temperatures_kelvin[i], kt,
                     thermal_diatom_state(m.band, kt, Envelope{sc.sigma_e, sc.center, model})});
    }
    break;
  }
  }
  return out;
}

inline Orbital scenario_orbital(const Scenario &sc, const Model &m) {
  if (sc.orbital == OrbitalKind::gaussian) {
    return Orbital::gaussian(wannier_gaussian_width(sc.lattice.depth).harmonic);
  }
  return Orbital::wannier(m.spectrum, sc.points_per_site);
}

struct StateAnalysis {
  DistributionGrid position;
  DistributionGrid momentum;
  ConditionalSlice position_slice;
  std::optional<ConditionalSlice> gaussian_slice; // Gaussian-orbital comparison
  ConditionalSlice momentum_slice;
  Distribution1D position_marginal;
  Distribution1D momentum_marginal;
  Distribution1D momentum_direct;
  Distribution1D structure;     // momentum slice without the orbital envelope
  PeakMetrics structure_metrics;
  EprReport report;
};

inline StateAnalysis analyze_state(const Scenario &sc, const Model &m, const Orbital &orbital,
                                   const LabeledState &ls) {
  StateAnalysis a;
  const double centre = sc.mode == StateMode::ground ? 0.0 : sc.center;
  const PositionGridSpec pgrid{centre - sc.position_window, centre + sc.position_window,
                               sc.points_per_site};
  a.position = joint_position_density(ls.state, orbital, pgrid);
  a.position_slice = conditional_density(a.position, 1, centre);
  if (!orbital.is_gaussian()) {
    const auto gauss = Orbital::gaussian(wannier_gaussian_width(sc.lattice.depth).harmonic);
    a.gaussian_slice = conditional_density(joint_position_density(ls.state, gauss, pgrid), 1, centre);
  }
  a.position_marginal = marginal(a.position, 2);

  const auto mgrid =
      MomentumGridSpec::zones(sc.lattice.sites, sc.momentum_zones, sc.momentum_subdivisions);
  a.momentum = joint_momentum_density(ls.state, orbital, mgrid);
  a.momentum_slice = conditional_density(a.momentum, 1, sc.p1_measured, 0.05);
  a.momentum_marginal = marginal(a.momentum, 2);
  a.momentum_direct = single_momentum_density(ls.state, orbital, mgrid, 2);
  a.structure = divide_orbital_envelope(a.momentum_slice.distribution, orbital);
  a.structure_metrics = peak_metrics(a.structure, 0.5);

  a.report = EprReport::from_widths(a.position_slice.metrics.gaussian_sigma(),
                                    a.momentum_slice.metrics.gaussian_sigma());
  const double two_pi = 2.0 * constants::pi;
  a.report.grid_cell = a.momentum.axis1.step;
  a.report.momentum_spacing = a.structure_metrics.spacing;
  a.report.momentum_spacing_ok =
      std::abs(a.structure_metrics.spacing - two_pi) <= a.report.grid_cell + 1e-12;
  a.report.ridge_hwhm = a.structure_metrics.hwhm;
  a.report.ridge_expected = constants::pi / sc.lattice.sites;
  try {
    const auto comb = peak_metrics(a.position_marginal, 0.05);
    a.report.position_spacing = comb.spacing;
    a.report.position_spacing_ok = std::abs(comb.spacing - 1.0) <= pgrid.axis().step + 1e-12;
  } catch (const NoPeakError &) {
    a.report.position_spacing_ok = false;
  }
  const double onsite = m.profile.onsite();
  a.report.tight_diatom = std::abs(m.hopping.v_hop / onsite) < 0.1;
  a.report.thermal_in_regime =
      !ls.kt || delta_p_plus_thermal(onsite, m.hopping.v_hop, *ls.kt).in_regime;
  return a;
}

// ---------------------------------------------------------------------------
//  Output
// ---------------------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Writes tables into one directory; removes everything it wrote unless
/// commit() is reached.
class OutputWriter {
public:
  OutputWriter(std::filesystem::path dir, const Scenario &sc, const std::string &format)
      : dir_(std::move(dir)), name_(sc.name), hash_(sc.source_hash) {
    if (format == "csv") {
      sep_ = ',';
      ext_ = ".csv";
    } else if (format == "tsv") {
      sep_ = '\t';
      ext_ = ".tsv";
    } else {
      throw DomainError("unknown output format '" + format + "'");
    }
    std::filesystem::create_directories(dir_);
  }

  OutputWriter(const OutputWriter &) = delete;
  OutputWriter &operator=(const OutputWriter &) = delete;

  ~OutputWriter() {
    if (!committed_) {
      for (const auto &p : written_) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
      }
    }
  }

  std::filesystem::path table(const std::string &stem, const std::string &description,
                              const Table &t) {
    const auto path = dir_ / (stem + ext_);
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    header(out, description);
    write_row(out, t.columns);
    for (const auto &r : t.rows) {
      write_row(out, r);
    }
    if (!out) {
      throw Error("failed writing " + path.string());
    }
    return path;
  }

  /// Long-format heatmap table (axis1, axis2, density).
  std::filesystem::path grid(const std::string &stem, const std::string &description,
                             const DistributionGrid &g, const std::string &c1,
                             const std::string &c2) {
    const auto path = dir_ / (stem + ext_);
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    header(out, description);
    out << c1 << sep_ << c2 << sep_ << "density\n";
    for (int i = 0; i < g.axis1.count; ++i) {
      const std::string x1 = fmt(g.axis1.at(i));
      for (int j = 0; j < g.axis2.count; ++j) {
        out << x1 << sep_ << fmt(g.axis2.at(j)) << sep_ << fmt(g.density(i, j)) << '\n';
      }
    }
    if (!out) {
      throw Error("failed writing " + path.string());
    }
    return path;
  }

  std::filesystem::path text(const std::string &filename, const std::string &description,
                             const std::string &body) {
    const auto path = dir_ / filename;
    written_.push_back(path);
    std::ofstream out(path, std::ios::binary);
    header(out, description);
    out << body;
    if (!out) {
      throw Error("failed writing " + path.string());
    }
    return path;
  }

  void commit() { committed_ = true; }
  const std::vector<std::filesystem::path> &written() const { return written_; }

private:
  void header(std::ostream &out, const std::string &description) const {
    out << "# lattice-epr " << tool_version << '\n'
        << "# scenario " << name_ << " fnv1a:" << hash_ << '\n'
        << "# " << description << '\n';
  }

  void write_row(std::ostream &out, const std::vector<std::string> &row) const {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out << sep_;
      }
      out << row[i];
    }
    out << '\n';
  }

  std::filesystem::path dir_;
  std::string name_;
  std::string hash_;
  char sep_ = ',';
  std::string ext_ = ".csv";
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

inline Table distribution_table(const Distribution1D &d, const std::string &axis_name) {
  Table t{{axis_name, "density"}, {}};
  for (int i = 0; i < d.axis.count; ++i) {
    t.add({fmt(d.axis.at(i)), fmt(d.density[static_cast<std::size_t>(i)])});
  }
  return t;
}

// ---------------------------------------------------------------------------
//  Subcommands
// ---------------------------------------------------------------------------

inline void run_bands(const Scenario &sc, OutputWriter &w) {
  const auto spec = band_structure(sc.lattice);
  const auto hop = hopping_exact(spec);
  Table bands{{"q_a"}, {}};
  for (int b = 0; b < sc.lattice.bands; ++b) {
    bands.columns.push_back("E" + std::to_string(b) + "_Erec");
  }
  for (int i = 0; i < spec.sites(); ++i) {
    std::vector<std::string> row{fmt(spec.quasimomenta[static_cast<std::size_t>(i)])};
    for (int b = 0; b < sc.lattice.bands; ++b) {
      row.push_back(fmt(spec.energies(i, b)));
    }
    bands.add(row);
  }
  w.table("bands", "Bloch band energies on the ring quasimomentum grid", bands);

  const auto wf = wannier(spec, 0, sc.points_per_site);
  Table wt{{"x_a", "re", "im", "density"}, {}};
  for (std::size_t i = 0; i < wf.positions.size(); ++i) {
    const auto v = wf.amplitudes[i];
    wt.add({fmt(wf.positions[i]), fmt(v.real()), fmt(v.imag()), fmt(std::norm(v))});
  }
  w.table("wannier", "lowest-band Wannier function of site 0", wt);

  const auto width = wannier_gaussian_width(sc.lattice.depth);
  const auto approx = hopping_approx(sc.lattice.depth);
  const double a_nm = sc.units().lattice_constant_si() * 1e9;
  Table s{{"quantity", "value", "unit"}, {}};
  s.add({"depth", fmt(sc.lattice.depth), "Erec"});
  s.add({"v_hop", fmt(hop.v_hop), "Erec"});
  s.add({"bandwidth", fmt(hop.bandwidth), "Erec"});
  s.add({"bandwidth_over_4abs_v_hop", fmt(hop.bandwidth_ratio), "1"});
  s.add({"tight_binding", hop.tight_binding ? "true" : "false", ""});
  s.add({"exp_minus_0.26_depth", fmt(approx.value), "Erec"});
  s.add({"sigma_harmonic", fmt(width.harmonic), "a"});
  s.add({"sigma_harmonic_nm", fmt(width.harmonic * a_nm), "nm"});
  s.add({"sigma_literal", fmt(width.literal), "a"});
  s.add({"effective_mass", fmt(effective_mass_single(hop.v_hop)), "m"});
  s.add({"curvature_mass", fmt(curvature_mass_single(sc.lattice)), "m"});
  s.add({"recoil_energy", fmt(sc.units().recoil_energy_si()), "J"});
  s.add({"lattice_constant", fmt(a_nm), "nm"});
  w.table("lattice_summary", "single-atom lattice quantities", s);
}

inline void run_diatom(const Scenario &sc, OutputWriter &w) {
  const Model m = build_model(sc);
  const auto &band = m.band;
  Table bt{{"K_a", "E_bound_Erec", "E_fit_Erec", "E_next_Erec"}, {}};
  for (int i = 0; i < band.sites(); ++i) {
    const double k = band.quasimomenta[static_cast<std::size_t>(i)];
    bt.add({fmt(k), fmt(band.bound_energy[static_cast<std::size_t>(i)]),
            fmt(band.fit_offset + 2.0 * band.v_hop_fit * std::cos(k)), fmt(band.energies(i, 1))});
  }
  w.table("diatom_band", "bound branch E(K) with cosine fit and the next level", bt);

  Table st{{"index", "E_Erec"}, {}};
  const auto all = block_spectrum(m.hamiltonian);
  for (std::size_t i = 0; i < all.size(); ++i) {
    st.add({std::to_string(i), fmt(all[i])});
  }
  w.table("diatom_spectrum", "all two-atom eigenvalues from the K blocks", st);

  Table pt{{"dj", "separation_a", "cos_theta", "V_dd_Erec"}, {}};
  for (int dj = -m.profile.max_offset; dj <= m.profile.max_offset; ++dj) {
    const auto i = static_cast<std::size_t>(dj + m.profile.max_offset);
    pt.add({std::to_string(dj), fmt(m.profile.separation[i]), fmt(m.profile.cos_theta[i]),
            fmt(m.profile.values[i])});
  }
  w.table("interaction_profile", "site-pair interaction V_dd(j - l)", pt);

  const double onsite = m.profile.onsite();
  const double pert = hopping_two_atom(m.hopping.v_hop, onsite);
  const auto ground = ground_state(m.hamiltonian);
  auto other = m.hamiltonian;
  other.include_offsite = !sc.include_offsite;
  const auto other_band = diatom_band_exact(other);

  Table s{{"quantity", "value", "unit"}, {}};
  s.add({"v_hop", fmt(m.hopping.v_hop), "Erec"});
  s.add({"v_c", fmt(m.coupling.v_c), "Erec"});
  s.add({"v_dd_onsite", fmt(onsite), "Erec"});
  s.add({"v_hop_2at_perturbative", fmt(pert), "Erec"});
  s.add({"v_hop_2at_fit", fmt(band.v_hop_fit), "Erec"});
  s.add({"fit_residual", fmt(band.fit_residual), "Erec"});
  s.add({"bandwidth_2at", fmt(band.bandwidth), "Erec"});
  s.add({"gap_to_continuum", fmt(band.gap), "Erec"});
  s.add({"mass_ratio_closed_form", fmt(effective_mass_ratio(m.hopping.v_hop, onsite)), "1"});
  s.add({"mass_2at_closed_form", fmt(effective_mass_two_atom(m.hopping.v_hop, onsite)), "m"});
  s.add({"mass_2at_curvature", fmt(band.mass_curvature), "m"});
  s.add({"mass_2at_fit", fmt(band.mass_fit), "m"});
  s.add({"ground_off_diagonal_weight", fmt(ground.off_diagonal_weight()), "1"});
  s.add({"include_offsite", sc.include_offsite ? "true" : "false", ""});
  s.add({"v_hop_2at_fit_other_offsite_setting", fmt(other_band.v_hop_fit), "Erec"});
  s.add({"offsite_setting_difference", fmt(band.v_hop_fit - other_band.v_hop_fit), "Erec"});
  w.table("diatom_summary", "two-atom model summary", s);
}

inline void write_state_analysis(OutputWriter &w, const LabeledState &ls, const StateAnalysis &a) {
  const std::string tag = ls.label;
  w.grid("position_joint_" + tag, "joint position density P(x1, x2)", a.position, "x1_a", "x2_a");
  w.table("position_slice_" + tag, "P(x2 | x1 at the centre site), Wannier orbital",
          distribution_table(a.position_slice.distribution, "x2_a"));
  if (a.gaussian_slice) {
    w.table("position_slice_gaussian_" + tag, "P(x2 | x1 at the centre site), Gaussian orbital",
            distribution_table(a.gaussian_slice->distribution, "x2_a"));
  }
  w.grid("momentum_joint_" + tag, "joint momentum density P(p1, p2)", a.momentum,
         "p1_hbar_per_a", "p2_hbar_per_a");
  w.table("momentum_slice_" + tag, "P(p2 | p1 = p1_measured)",
          distribution_table(a.momentum_slice.distribution, "p2_hbar_per_a"));
  Table mt{{"p2_hbar_per_a", "marginal", "direct"}, {}};
  for (int i = 0; i < a.momentum_marginal.axis.count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    mt.add({fmt(a.momentum_marginal.axis.at(i)), fmt(a.momentum_marginal.density[k]),
            fmt(a.momentum_direct.density[k])});
  }
  w.table("momentum_marginal_" + tag, "single-atom momentum density: grid marginal and direct",
          mt);
}

inline void run_distributions(const Scenario &sc, OutputWriter &w) {
  const Model m = build_model(sc);
  const Orbital orbital = scenario_orbital(sc, m);
  Table summary{{"state", "T_nK", "dx_minus_a", "dp_plus_hbar_per_a", "s", "members",
                 "position_integral", "momentum_integral"},
                {}};
  for (const auto &ls : scenario_states(sc, m)) {
    const auto a = analyze_state(sc, m, orbital, ls);
    write_state_analysis(w, ls, a);
    summary.add({ls.label, ls.kelvin ? fmt(*ls.kelvin * 1e9) : "", fmt(a.report.dx_minus),
                 fmt(a.report.dp_plus), fmt(a.report.s), std::to_string(ls.state.members.size()),
                 fmt(a.position.integral()), fmt(a.momentum.integral())});
  }
  w.table("distributions_summary", "grid-measured EPR widths per state", summary);
}

struct Comparison {
  std::string quantity;
  std::string unit;
  double computed = 0.0;
  std::optional<double> reference;
  std::optional<double> tolerance; // relative; absent = logged only
};

inline std::string verdict(const Comparison &c) {
  if (!c.reference) {
    return "n/a";
  }
  if (!c.tolerance) {
    return "logged";
  }
  return std::abs(c.computed - *c.reference) <= *c.tolerance * std::abs(*c.reference) ? "pass"
                                                                                       : "fail";
}

inline void run_report(const Scenario &sc, OutputWriter &w, std::ostream &log) {
  const Model m = build_model(sc);
  const bool worked = is_lithium_example(sc);
  auto ref = [&](double v) { return worked ? std::optional<double>(v) : std::nullopt; };
  const auto units = sc.units();
  const double onsite = m.profile.onsite();
  const double v_hop = m.hopping.v_hop;
  const double sigma = wannier_gaussian_width(sc.lattice.depth).harmonic;
  const double pert = hopping_two_atom(v_hop, onsite);
  const double kt10 = units.temperature_to_internal(10e-9);
  const double kt100 = units.temperature_to_internal(100e-9);

  std::vector<Comparison> rows;
  rows.push_back({"V_hop", "Erec", v_hop, ref(-0.0355), 0.05});
  rows.push_back({"4|V_hop| vs exp(-0.26 U0)", "Erec", 4.0 * std::abs(v_hop),
                  ref(hopping_approx(sc.lattice.depth).value), 0.05});
  rows.push_back({"V_hop^(2at) perturbative", "Erec", pert, ref(-0.0012), 0.05});
  rows.push_back({"V_hop^(2at) band fit vs perturbative", "Erec", m.band.v_hop_fit,
                  worked ? std::optional<double>(pert) : std::nullopt, 0.15});
  rows.push_back({"m_eff^(2at)/m_eff", "1", effective_mass_ratio(v_hop, onsite), ref(30.0), 0.05});
  rows.push_back({"m_eff^(2at) curvature vs closed form", "m", m.band.mass_curvature,
                  worked ? std::optional<double>(effective_mass_two_atom(v_hop, onsite))
                        : std::nullopt,
                  0.15});
  rows.push_back({"sigma", "a", sigma, ref(0.136), 0.02});
  rows.push_back({"sigma", "nm", units.length_to_si(sigma) * 1e9, ref(22.0), 0.05});
  rows.push_back({"s estimate at 10 nK", "1", s_estimate(sc.sigma_e, sigma, kt10), ref(30.0), 0.10});
  rows.push_back({"s estimate at 100 nK", "1", s_estimate(sc.sigma_e, sigma, kt100), ref(11.0), 0.10});

  const Orbital orbital = scenario_orbital(sc, m);
  for (const auto &ls : scenario_states(sc, m)) {
    const auto a = analyze_state(sc, m, orbital, ls);
    w.text("epr_report_" + ls.label + ".txt", "EPR report for state " + ls.label,
           a.report.to_text());
    std::optional<double> reference_s;
    if (worked && ls.kelvin) {
      if (std::abs(*ls.kelvin - 10e-9) < 1e-15) {
        reference_s = 30.0;
      } else if (std::abs(*ls.kelvin - 100e-9) < 1e-15) {
        reference_s = 11.0;
      }
    }
    rows.push_back({"s simulated " + ls.label, "1", a.report.s, reference_s, 0.15});
    rows.push_back({"Delta x_- simulated " + ls.label + " vs sigma", "a", a.report.dx_minus,
                    worked ? std::optional<double>(sigma) : std::nullopt, 0.15});
    if (ls.kt) {
      rows.push_back({"Delta p_+ simulated " + ls.label + " vs preparation formula", "hbar/a",
                      a.report.dp_plus,
                      worked ? std::optional<double>(delta_p_plus_prep(sc.sigma_e, *ls.kt))
                            : std::nullopt,
                      0.15});
    }
  }

  // Laser conversion chains: reported for reference, never asserted.
  if (sc.reference_lattice_laser) {
    AtomSpecies sp = sc.species;
    const auto u0 = lattice_depth_from_laser(*sc.reference_lattice_laser, sp);
    rows.push_back({"U0 from lattice laser", "Erec", units.energy_to_internal(u0.value),
                    ref(7.42), std::nullopt});
  }
  if (sc.reference_coupling_laser) {
    const auto vc = coupling_scale_from_laser(*sc.reference_coupling_laser, sc.species);
    const double vc_int = units.energy_to_internal(vc.value);
    const double vdd = -vc_int * f_theta_cos(sc.coupling_wavevector() * sc.displacement, 0.0);
    rows.push_back({"V_C from coupling laser", "Erec", vc_int, std::nullopt, std::nullopt});
    rows.push_back({"V_dd(0) from coupling laser", "Erec", vdd, ref(-2.16), std::nullopt});
  }
  rows.push_back({"pair fraction a/sigma_E", "1", pair_fraction(sc.sigma_e).value, std::nullopt,
                  std::nullopt});

  Table t{{"quantity", "unit", "computed", "reference", "tolerance", "verdict"}, {}};
  for (const auto &r : rows) {
    t.add({r.quantity, r.unit, fmt(r.computed), r.reference ? fmt(*r.reference) : "",
           r.tolerance && r.reference ? fmt(*r.tolerance) : "", verdict(r)});
    log << r.quantity << " [" << r.unit << "]: " << fmt(r.computed);
    if (r.reference) {
      log << "  reference " << fmt(*r.reference) << "  " << verdict(r);
    }
    log << '\n';
  }
  w.table("report", "comparison with the worked example", t);
}

inline double grid_scan_optimum(double sigma, double kt, double lower, double upper, int points,
                                double *best_s = nullptr) {
  double best = lower, bs = -1.0;
  for (int i = 0; i < points; ++i) {
    const double x = lower + (upper - lower) * i / (points - 1);
    const double v = s_estimate(x, sigma, kt);
    if (v > bs) {
      bs = v;
      best = x;
    }
  }
  if (best_s) {
    *best_s = bs;
  }
  return best;
}

inline void run_optimize(const Scenario &sc, OutputWriter &w) {
  if (sc.temperatures.empty()) {
    throw ValidationError("optimize needs at least one temperature in [state]");
  }
  const double sigma = wannier_gaussian_width(sc.lattice.depth).harmonic;
  Table t{{"T_nK", "kT_Erec", "sigma_E_opt_a", "s_opt", "sigma_E_grid_a", "s_grid",
           "s_at_scenario_sigma_E", "on_boundary"},
          {}};
  for (std::size_t i = 0; i < sc.temperatures.size(); ++i) {
    const double kt = sc.temperatures[i];
    const auto opt = optimize_sigma_e(sigma, kt, sc.optimizer_lower, sc.optimizer_upper);
    double s_grid = 0.0;
    const double x_grid =
        grid_scan_optimum(sigma, kt, sc.optimizer_lower, sc.optimizer_upper, 100001, &s_grid);
    t.add({fmt(sc.temperatures_kelvin[i] * 1e9), fmt(kt), fmt(opt.sigma_e), fmt(opt.s), fmt(x_grid),
           fmt(s_grid), fmt(s_estimate(sc.sigma_e, sigma, kt)), opt.on_boundary ? "true" : "false"});
  }
  w.table("optimize", "envelope width maximizing the s estimate", t);
}

inline void run_sweep(const Scenario &sc, OutputWriter &w, int jobs) {
  if (!sc.sweep) {
    throw ValidationError("sweep needs a [sweep] section");
  }
  const SweepSpec &sw = *sc.sweep;
  const std::size_t count = sw.values.size();
  std::vector<std::vector<std::string>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        Scenario s = sc;
        double kt = s.temperatures.empty() ? 0.0 : s.temperatures.front();
        const double v = sw.values[i];
        if (sw.parameter == "depth") {
          s.lattice.depth = v;
        } else if (sw.parameter == "v_dd") {
          s.v_dd = v;
          s.coupling_laser.reset();
        } else if (sw.parameter == "sigma_e") {
          s.sigma_e = v;
        } else if (sw.parameter == "displacement") {
          s.displacement = v;
        } else {
          kt = v;
        }
        const Model m = build_model(s);
        const double onsite = m.profile.onsite();
        const double sigma = wannier_gaussian_width(s.lattice.depth).harmonic;
        rows[i] = {std::to_string(i),
                   fmt(v),
                   fmt(s.lattice.depth),
                   fmt(onsite),
                   fmt(m.hopping.v_hop),
                   fmt(hopping_two_atom(m.hopping.v_hop, onsite)),
                   fmt(m.band.v_hop_fit),
                   fmt(effective_mass_ratio(m.hopping.v_hop, onsite)),
                   fmt(sigma),
                   fmt(s.sigma_e),
                   fmt(kt),
                   kt > 0.0 ? fmt(s_estimate(s.sigma_e, sigma, kt)) : ""};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool) {
    t.join();
  }
  for (const auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  Table t{{"index", sw.parameter, "depth_Erec", "v_dd_onsite_Erec", "v_hop_Erec",
           "v_hop_2at_perturbative_Erec", "v_hop_2at_fit_Erec", "mass_ratio", "sigma_a",
           "sigma_E_a", "kT_Erec", "s_estimate"},
          std::move(rows)};
  w.table("sweep", "parameter sweep over " + sw.parameter, t);
}

// ---------------------------------------------------------------------------
//  Entry point
// ---------------------------------------------------------------------------

struct RunOptions {
  std::string subcommand;
  std::string scenario;
  std::string out_dir;
  int jobs = 0; // 0 = hardware concurrency
  std::string format = "csv";
};

enum ExitCode { exit_ok = 0, exit_runtime = 1, exit_usage = 2 };

inline int run(const RunOptions &opt, std::ostream &out, std::ostream &err) {
  static const std::vector<std::string> known = {"bands",  "diatom",   "distributions",
                                                 "report", "optimize", "sweep"};
  if (std::find(known.begin(), known.end(), opt.subcommand) == known.end()) {
    err << "unknown subcommand '" << opt.subcommand << "'\n";
    return exit_usage;
  }
  if (opt.format != "csv" && opt.format != "tsv") {
    err << "unknown format '" << opt.format << "'\n";
    return exit_usage;
  }
  Scenario sc;
  try {
    sc = load_scenario(opt.scenario).first;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ValidationError &e) {
    err << "invalid scenario: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  std::string dir = opt.out_dir.empty() ? sc.output_directory : opt.out_dir;
  if (dir.empty()) {
    dir = "out";
  }
  try {
    OutputWriter w(dir, sc, opt.format);
    if (opt.subcommand == "bands") {
      run_bands(sc, w);
    } else if (opt.subcommand == "diatom") {
      run_diatom(sc, w);
    } else if (opt.subcommand == "distributions") {
      run_distributions(sc, w);
    } else if (opt.subcommand == "report") {
      run_report(sc, w, out);
    } else if (opt.subcommand == "optimize") {
      run_optimize(sc, w);
    } else {
      const int jobs =
          opt.jobs > 0 ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
      run_sweep(sc, w, jobs);
    }
    w.commit();
    for (const auto &p : w.written()) {
      out << "wrote " << p.string() << '\n';
    }
  } catch (const ValidationError &e) {
    err << "invalid scenario: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}

} // namespace lattice_epr
