#pragma once

// Scenario files: INI-style sections with `key = value` lines. Every physical
// number carries a unit suffix ("323 nm", "0.35 W/cm^2", "10 nK", "-2.16 Erec").
// Comments start with '#'. Lists are comma separated.
//
// Recognized units
//   length       nm um m a            (a = lattice constant)
//   energy       Erec J
//   temperature  nK uK K
//   intensity    W/cm^2 mW/cm^2 W/m^2
//   rate         s^-1 gamma           (gamma = the transition linewidth)
//   mass         u kg
//   momentum     hbar/a G             (G = 2 pi hbar / a)

#include "lattice_epr/core.hpp"
#include "lattice_epr/dipole.hpp"
#include "lattice_epr/lattice.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lattice_epr {

class ParseError : public Error {
public:
  ParseError(int line, int column, const std::string &what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

enum class StateMode { ground, envelope, thermal };
enum class OrbitalKind { wannier, gaussian };

struct SweepSpec {
  std::string parameter; // depth | v_dd | sigma_e | temperature | displacement
  std::vector<double> values; // internal units
};

/// Fully resolved scenario, internal units unless noted.
struct Scenario {
  std::string name = "scenario";
  std::string source_hash; // FNV-1a of the scenario text, hex

  AtomSpecies species;
  LatticeConfig lattice;                 // depth resolved
  std::optional<LaserConfig> lattice_laser;
  std::string depth_convention;          // set when depth came from the laser block

  double coupling_wavelength = 0.0;      // m
  double displacement = 0.0;             // a
  std::optional<double> v_dd;            // E_rec, on-site value
  std::optional<LaserConfig> coupling_laser;
  int max_offset = 4;
  bool include_offsite = true;

  StateMode mode = StateMode::ground;
  double sigma_e = 6.0;                  // a
  std::vector<double> temperatures;      // k_B T in E_rec
  std::vector<double> temperatures_kelvin;
  int center = 0;

  OrbitalKind orbital = OrbitalKind::wannier;
  int points_per_site = 32;
  double position_window = 4.0;          // a, half-width around the centre
  double momentum_zones = 2.0;           // Brillouin zones either side
  int momentum_subdivisions = 4;
  double p1_measured = 0.0;              // hbar / a
  double optimizer_lower = 1.0;          // a
  double optimizer_upper = 30.0;         // a
  std::string thermal_model = "preparation";

  std::optional<LaserConfig> reference_lattice_laser;  // logged-only chains
  std::optional<LaserConfig> reference_coupling_laser;

  std::optional<SweepSpec> sweep;
  std::string output_directory;

  UnitSystem units() const { return UnitSystem(species.mass, lattice.lattice_wavelength); }
  double coupling_wavevector() const {
    return 2.0 * constants::pi * units().lattice_constant_si() / coupling_wavelength;
  }
};

namespace detail {

inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream o;
  o << std::hex;
  o.width(16);
  o.fill('0');
  o << h;
  return o.str();
}

struct Entry {
  std::string value;
  int line = 0;
  int column = 0; // of the value
};

struct RawScenario {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> section_lines;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
}

inline const std::map<std::string, std::set<std::string>> &known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name"}},
      {"species",
       {"preset", "name", "mass", "lattice_wavelength", "lattice_linewidth", "coupling_wavelength",
        "coupling_linewidth"}},
      {"lattice", {"wavelength", "depth", "sites", "cutoff", "bands"}},
      {"lattice.laser", {"intensity", "detuning"}},
      {"coupling", {"wavelength", "displacement", "v_dd", "max_offset", "include_offsite"}},
      {"coupling.laser", {"intensity", "detuning"}},
      {"state", {"mode", "sigma_e", "temperatures", "center", "thermal_model"}},
      {"analysis",
       {"orbital", "points_per_site", "position_window", "momentum_zones",
        "momentum_subdivisions", "p1_measured", "optimizer_lower", "optimizer_upper"}},
      {"reference",
       {"lattice_intensity", "lattice_detuning", "coupling_intensity", "coupling_detuning"}},
      {"sweep", {"parameter", "values"}},
      {"output", {"directory"}},
  };
  return keys;
}

inline RawScenario tokenize(std::string_view text) {
  RawScenario raw;
  std::string current;
  int line_no = 0;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      continue;
    }
    const int col = static_cast<int>(first) + 1;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string_view::npos) {
        throw ParseError(line_no, col, "unterminated section header");
      }
      if (!trim(line.substr(close + 1)).empty()) {
        throw ParseError(line_no, static_cast<int>(close) + 2, "text after section header");
      }
      current = trim(line.substr(first + 1, close - first - 1));
      if (current.empty()) {
        throw ParseError(line_no, col + 1, "empty section name");
      }
      for (std::size_t i = 0; i < current.size(); ++i) {
        if (!is_name_char(current[i])) {
          throw ParseError(line_no, col + 1, "invalid character in section name");
        }
      }
      if (!known_keys().count(current)) {
        throw ParseError(line_no, col, "unknown section [" + current + "]");
      }
      if (raw.section_lines.count(current)) {
        throw ParseError(line_no, col, "duplicate section [" + current + "]");
      }
      raw.sections[current];
      raw.section_lines[current] = line_no;
      any = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, col, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(first, eq - first));
    if (key.empty()) {
      throw ParseError(line_no, col, "missing key before '='");
    }
    for (char c : key) {
      if (!is_name_char(c) || c == '.') {
        throw ParseError(line_no, col, "invalid key '" + key + "'");
      }
    }
    if (current.empty()) {
      throw ParseError(line_no, col, "key '" + key + "' outside any section");
    }
    if (!known_keys().at(current).count(key)) {
      throw ParseError(line_no, col, "unknown key '" + key + "' in [" + current + "]");
    }
    std::string_view rest = line.substr(eq + 1);
    const auto vfirst = rest.find_first_not_of(" \t\r");
    const std::string value = trim(rest);
    if (value.empty()) {
      throw ParseError(line_no, static_cast<int>(eq) + 2, "missing value for '" + key + "'");
    }
    auto &section = raw.sections[current];
    if (section.count(key)) {
      throw ParseError(line_no, col, "duplicate key '" + key + "'");
    }
    section[key] = {value, line_no, static_cast<int>(eq + 1 + vfirst) + 1};
    any = true;
  }
  if (!any) {
    throw ParseError(1, 1, "empty scenario");
  }
  return raw;
}

struct Quantity {
  double value = 0.0;
  std::string unit;
};

inline Quantity split_quantity(const Entry &e, std::string_view token, int column) {
  const std::string t = trim(token);
  double v = 0.0;
  const char *begin = t.data();
  const char *end = t.data() + t.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || !std::isfinite(v)) {
    throw ParseError(e.line, column, "expected a number in '" + t + "'");
  }
  return {v, trim(std::string_view(res.ptr, static_cast<std::size_t>(end - res.ptr)))};
}

inline std::vector<std::pair<Quantity, int>> split_list(const Entry &e) {
  std::vector<std::pair<Quantity, int>> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = e.value.find(',', start);
    const std::string_view tok =
        std::string_view(e.value).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const int col = e.column + static_cast<int>(start);
    if (trim(tok).empty()) {
      throw ParseError(e.line, col, "empty list element");
    }
    out.emplace_back(split_quantity(e, tok, col), col);
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

enum class Dimension { length, energy, temperature, intensity, rate, mass, momentum };

struct UnitContext {
  double lattice_constant = 0.0; // m
  double recoil = 0.0;           // J
  double mass = 0.0;             // kg
  double linewidth = 0.0;        // 1/s, for "gamma"
};

/// Converts to: length -> a, energy -> E_rec, temperature -> kelvin,
/// intensity -> W/m^2, rate -> 1/s, mass -> kg, momentum -> hbar/a.
inline double convert(const Entry &e, const Quantity &q, int column, Dimension dim,
                      const UnitContext &ctx) {
  const std::string &u = q.unit;
  auto bad = [&]() -> double {
    if (u.empty()) {
      throw ParseError(e.line, column, "missing unit suffix");
    }
    throw ParseError(e.line, column, "unit '" + u + "' not valid here");
  };
  switch (dim) {
  case Dimension::length: {
    double metres;
    if (u == "a" && ctx.lattice_constant > 0.0) {
      return q.value;
    } else if (u == "nm") {
      metres = q.value * 1e-9;
    } else if (u == "um") {
      metres = q.value * 1e-6;
    } else if (u == "m") {
      metres = q.value;
    } else {
      return bad();
    }
    return ctx.lattice_constant > 0.0 ? metres / ctx.lattice_constant : metres;
  }
  case Dimension::energy:
    if (u == "Erec") {
      return q.value;
    } else if (u == "J") {
      return q.value / ctx.recoil;
    }
    return bad();
  case Dimension::temperature:
    if (u == "nK") {
      return q.value * 1e-9;
    } else if (u == "uK") {
      return q.value * 1e-6;
    } else if (u == "K") {
      return q.value;
    }
    return bad();
  case Dimension::intensity:
    if (u == "W/cm^2") {
      return q.value * 1e4;
    } else if (u == "mW/cm^2") {
      return q.value * 10.0;
    } else if (u == "W/m^2") {
      return q.value;
    }
    return bad();
  case Dimension::rate:
    if (u == "s^-1") {
      return q.value;
    } else if (u == "gamma" && ctx.linewidth > 0.0) {
      return q.value * ctx.linewidth;
    }
    return bad();
  case Dimension::mass:
    if (u == "u") {
      return q.value * constants::atomic_mass_unit;
    } else if (u == "kg") {
      return q.value;
    }
    return bad();
  case Dimension::momentum:
    if (u == "hbar/a") {
      return q.value;
    } else if (u == "G") {
      return q.value * 2.0 * constants::pi;
    }
    return bad();
  }
  return bad();
}

class Reader {
public:
  explicit Reader(const RawScenario &raw) : raw_(raw) {}

  const Entry *find(const std::string &section, const std::string &key) const {
    const auto s = raw_.sections.find(section);
    if (s == raw_.sections.end()) {
      return nullptr;
    }
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has_section(const std::string &section) const { return raw_.sections.count(section) > 0; }

  std::optional<double> quantity(const std::string &section, const std::string &key, Dimension dim,
                                 const UnitContext &ctx) const {
    const Entry *e = find(section, key);
    if (!e) {
      return std::nullopt;
    }
    const auto list = split_list(*e);
    if (list.size() != 1) {
      throw ParseError(e->line, e->column, "expected a single value for '" + key + "'");
    }
    return convert(*e, list[0].first, list[0].second, dim, ctx);
  }

  std::vector<double> quantities(const std::string &section, const std::string &key, Dimension dim,
                                 const UnitContext &ctx) const {
    std::vector<double> out;
    if (const Entry *e = find(section, key)) {
      for (const auto &[q, col] : split_list(*e)) {
        out.push_back(convert(*e, q, col, dim, ctx));
      }
    }
    return out;
  }

  std::optional<long> integer(const std::string &section, const std::string &key) const {
    const Entry *e = find(section, key);
    if (!e) {
      return std::nullopt;
    }
    long v = 0;
    const auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (res.ec != std::errc() || res.ptr != e->value.data() + e->value.size()) {
      throw ParseError(e->line, e->column, "expected an integer for '" + key + "'");
    }
    return v;
  }

  std::optional<bool> boolean(const std::string &section, const std::string &key) const {
    const Entry *e = find(section, key);
    if (!e) {
      return std::nullopt;
    }
    if (e->value == "true" || e->value == "on" || e->value == "yes") {
      return true;
    }
    if (e->value == "false" || e->value == "off" || e->value == "no") {
      return false;
    }
    throw ParseError(e->line, e->column, "expected true or false for '" + key + "'");
  }

  std::optional<std::string> word(const std::string &section, const std::string &key,
                                  std::initializer_list<const char *> allowed = {}) const {
    const Entry *e = find(section, key);
    if (!e) {
      return std::nullopt;
    }
    if (allowed.size() == 0) {
      return e->value;
    }
    for (const char *a : allowed) {
      if (e->value == a) {
        return e->value;
      }
    }
    throw ParseError(e->line, e->column, "unexpected value '" + e->value + "' for '" + key + "'");
  }

private:
  const RawScenario &raw_;
};

inline void require(bool ok, const std::string &what) {
  if (!ok) {
    throw ValidationError(what);
  }
}

} // namespace detail

/// Parses and validates scenario text; all quantities end up in internal units.
inline Scenario parse_scenario(std::string_view text) {
  using detail::Dimension;
  const detail::RawScenario raw = detail::tokenize(text);
  const detail::Reader rd(raw);
  Scenario sc;
  sc.source_hash = detail::fnv1a_hex(text);
  if (auto n = rd.word("scenario", "name")) {
    sc.name = *n;
  }

  // Species: preset first, inline keys override.
  detail::UnitContext si{};
  if (auto preset = rd.word("species", "preset", {"lithium-7"})) {
    sc.species = lithium7();
  }
  if (auto n = rd.word("species", "name")) {
    sc.species.name = *n;
  }
  if (auto v = rd.quantity("species", "mass", Dimension::mass, si)) {
    sc.species.mass = *v;
  }
  if (auto v = rd.quantity("species", "lattice_wavelength", Dimension::length, si)) {
    sc.species.lattice_wavelength = *v;
  }
  if (auto v = rd.quantity("species", "lattice_linewidth", Dimension::rate, si)) {
    sc.species.lattice_linewidth = *v;
  }
  if (auto v = rd.quantity("species", "coupling_wavelength", Dimension::length, si)) {
    sc.species.coupling_wavelength = *v;
  }
  if (auto v = rd.quantity("species", "coupling_linewidth", Dimension::rate, si)) {
    sc.species.coupling_linewidth = *v;
  }
  double lattice_wavelength = sc.species.lattice_wavelength;
  if (auto v = rd.quantity("lattice", "wavelength", Dimension::length, si)) {
    lattice_wavelength = *v;
  }
  detail::require(sc.species.mass > 0.0, "species mass must be given and positive");
  detail::require(lattice_wavelength > 0.0, "lattice wavelength must be given and positive");

  detail::UnitContext ctx;
  ctx.lattice_constant = lattice_wavelength / 2.0;
  ctx.recoil = recoil_energy(sc.species.mass, lattice_wavelength);
  ctx.mass = sc.species.mass;

  // Lattice.
  sc.lattice.lattice_wavelength = lattice_wavelength;
  if (auto v = rd.integer("lattice", "sites")) {
    sc.lattice.sites = static_cast<int>(*v);
  }
  if (auto v = rd.integer("lattice", "cutoff")) {
    sc.lattice.cutoff = static_cast<int>(*v);
  }
  if (auto v = rd.integer("lattice", "bands")) {
    sc.lattice.bands = static_cast<int>(*v);
  }
  const auto depth = rd.quantity("lattice", "depth", Dimension::energy, ctx);
  const bool lattice_laser = rd.has_section("lattice.laser");
  detail::require(depth.has_value() != lattice_laser,
                  "exactly one of lattice depth and [lattice.laser] must be given");
  if (depth) {
    sc.lattice.depth = *depth;
  } else {
    auto lctx = ctx;
    lctx.linewidth = sc.species.lattice_linewidth;
    LaserConfig laser;
    laser.role = LaserRole::lattice;
    laser.wavelength = lattice_wavelength;
    laser.intensity = rd.quantity("lattice.laser", "intensity", Dimension::intensity, lctx).value_or(-1.0);
    laser.detuning = rd.quantity("lattice.laser", "detuning", Dimension::rate, lctx).value_or(0.0);
    detail::require(laser.intensity >= 0.0, "[lattice.laser] needs a non-negative intensity");
    detail::require(laser.detuning != 0.0, "[lattice.laser] needs a non-zero detuning");
    AtomSpecies sp = sc.species;
    sp.lattice_wavelength = lattice_wavelength;
    const auto u0 = lattice_depth_from_laser(laser, sp);
    sc.lattice.depth = u0.value / ctx.recoil;
    sc.depth_convention = u0.convention;
    sc.lattice_laser = laser;
  }
  try {
    sc.lattice.validate();
  } catch (const DomainError &e) {
    throw ValidationError(e.what());
  }

  // Coupling.
  sc.coupling_wavelength = sc.species.coupling_wavelength;
  if (const auto *e = rd.find("coupling", "wavelength")) {
    const auto list = detail::split_list(*e);
    detail::require(list.size() == 1, "coupling wavelength must be a single value");
    sc.coupling_wavelength = ctx.lattice_constant *
        detail::convert(*e, list[0].first, list[0].second, Dimension::length, ctx);
  }
  if (auto v = rd.quantity("coupling", "displacement", Dimension::length, ctx)) {
    sc.displacement = *v;
  }
  if (auto v = rd.integer("coupling", "max_offset")) {
    sc.max_offset = static_cast<int>(*v);
  }
  if (auto v = rd.boolean("coupling", "include_offsite")) {
    sc.include_offsite = *v;
  }
  sc.v_dd = rd.quantity("coupling", "v_dd", Dimension::energy, ctx);
  const bool coupling_laser = rd.has_section("coupling.laser");
  detail::require(sc.v_dd.has_value() != coupling_laser,
                  "exactly one of coupling v_dd and [coupling.laser] must be given");
  if (coupling_laser) {
    auto cctx = ctx;
    cctx.linewidth = sc.species.coupling_linewidth;
    LaserConfig laser;
    laser.role = LaserRole::coupling;
    laser.wavelength = sc.coupling_wavelength;
    laser.intensity = rd.quantity("coupling.laser", "intensity", Dimension::intensity, cctx).value_or(-1.0);
    laser.detuning = rd.quantity("coupling.laser", "detuning", Dimension::rate, cctx).value_or(0.0);
    detail::require(laser.intensity >= 0.0, "[coupling.laser] needs a non-negative intensity");
    detail::require(laser.detuning != 0.0, "[coupling.laser] needs a non-zero detuning");
    sc.coupling_laser = laser;
  }
  detail::require(sc.coupling_wavelength > 0.0, "coupling wavelength must be given and positive");
  detail::require(sc.displacement > 0.0, "coupling displacement must be positive");
  detail::require(sc.max_offset >= 1, "max_offset must be >= 1");
  if (sc.v_dd) {
    detail::require(*sc.v_dd < 0.0, "v_dd must be negative (attractive)");
  }

  // State.
  if (auto m = rd.word("state", "mode", {"ground", "envelope", "thermal"})) {
    sc.mode = *m == "ground" ? StateMode::ground
                             : (*m == "envelope" ? StateMode::envelope : StateMode::thermal);
  }
  if (auto v = rd.quantity("state", "sigma_e", Dimension::length, ctx)) {
    sc.sigma_e = *v;
  }
  sc.temperatures_kelvin = rd.quantities("state", "temperatures", Dimension::temperature, ctx);
  for (double t : sc.temperatures_kelvin) {
    detail::require(t >= 0.0, "temperatures must be non-negative");
    sc.temperatures.push_back(constants::boltzmann * t / ctx.recoil);
  }
  if (auto v = rd.integer("state", "center")) {
    sc.center = static_cast<int>(*v);
  }
  if (auto v = rd.word("state", "thermal_model", {"preparation", "band"})) {
    sc.thermal_model = *v;
  }
  detail::require(sc.sigma_e > 0.0, "sigma_e must be positive");
  detail::require(sc.mode != StateMode::thermal || !sc.temperatures.empty(),
                  "thermal mode needs at least one temperature");

  // Analysis.
  if (auto v = rd.word("analysis", "orbital", {"wannier", "gaussian"})) {
    sc.orbital = *v == "wannier" ? OrbitalKind::wannier : OrbitalKind::gaussian;
  }
  if (auto v = rd.integer("analysis", "points_per_site")) {
    sc.points_per_site = static_cast<int>(*v);
  }
  if (auto v = rd.quantity("analysis", "position_window", Dimension::length, ctx)) {
    sc.position_window = *v;
  }
  if (const auto *e = rd.find("analysis", "momentum_zones")) {
    const auto list = detail::split_list(*e);
    detail::require(list.size() == 1 && list[0].first.unit.empty(),
                    "momentum_zones is a plain number of Brillouin zones");
    sc.momentum_zones = list[0].first.value;
  }
  if (auto v = rd.integer("analysis", "momentum_subdivisions")) {
    sc.momentum_subdivisions = static_cast<int>(*v);
  }
  if (auto v = rd.quantity("analysis", "p1_measured", Dimension::momentum, ctx)) {
    sc.p1_measured = *v;
  } else {
    sc.p1_measured = 0.4 * 2.0 * constants::pi;
  }
  if (auto v = rd.quantity("analysis", "optimizer_lower", Dimension::length, ctx)) {
    sc.optimizer_lower = *v;
  }
  if (auto v = rd.quantity("analysis", "optimizer_upper", Dimension::length, ctx)) {
    sc.optimizer_upper = *v;
  }
  detail::require(sc.points_per_site >= 1, "points_per_site must be >= 1");
  detail::require(sc.position_window > 0.0, "position_window must be positive");
  detail::require(sc.momentum_zones > 0.0, "momentum_zones must be positive");
  detail::require(sc.momentum_subdivisions >= 1, "momentum_subdivisions must be >= 1");
  detail::require(sc.optimizer_lower > 0.0 && sc.optimizer_upper > sc.optimizer_lower,
                  "optimizer bounds must satisfy 0 < lower < upper");

  // Reference laser parameters (logged-only conversions).
  if (rd.has_section("reference")) {
    auto lctx = ctx;
    lctx.linewidth = sc.species.lattice_linewidth;
    auto cctx = ctx;
    cctx.linewidth = sc.species.coupling_linewidth;
    const auto li = rd.quantity("reference", "lattice_intensity", Dimension::intensity, lctx);
    const auto ld = rd.quantity("reference", "lattice_detuning", Dimension::rate, lctx);
    if (li && ld) {
      sc.reference_lattice_laser = LaserConfig{LaserRole::lattice, *li, *ld, lattice_wavelength};
    }
    const auto ci = rd.quantity("reference", "coupling_intensity", Dimension::intensity, cctx);
    const auto cd = rd.quantity("reference", "coupling_detuning", Dimension::rate, cctx);
    if (ci && cd) {
      sc.reference_coupling_laser = LaserConfig{LaserRole::coupling, *ci, *cd, sc.coupling_wavelength};
    }
  }

  // Sweep.
  if (rd.has_section("sweep")) {
    SweepSpec sw;
    sw.parameter = rd.word("sweep", "parameter",
                           {"depth", "v_dd", "sigma_e", "temperature", "displacement"})
                       .value_or("");
    detail::require(!sw.parameter.empty(), "[sweep] needs a parameter");
    const Dimension dim = sw.parameter == "depth" || sw.parameter == "v_dd"
                              ? Dimension::energy
                              : (sw.parameter == "temperature" ? Dimension::temperature
                                                               : Dimension::length);
    sw.values = rd.quantities("sweep", "values", dim, ctx);
    detail::require(!sw.values.empty(), "[sweep] needs values");
    if (sw.parameter == "temperature") {
      for (auto &v : sw.values) {
        v = constants::boltzmann * v / ctx.recoil;
      }
    }
    sc.sweep = sw;
  }

  if (auto v = rd.word("output", "directory")) {
    sc.output_directory = *v;
  }
  return sc;
}

/// Text of the built-in lithium worked example.
inline std::string builtin_scenario_text(std::string_view name) {
  if (name != "lithium-example") {
    throw DomainError("unknown built-in scenario '" + std::string(name) + "'");
  }
  return R"(# Lithium-7 worked example: lattice on 2s-3p (323 nm), coupling on 2s-2p.
[scenario]
name = lithium-example

[species]
preset = lithium-7

[lattice]
depth = 7.42 Erec
sites = 64
cutoff = 16

[coupling]
displacement = 40 nm
v_dd = -2.16 Erec
max_offset = 4
include_offsite = true

[state]
mode = thermal
sigma_e = 6 a
temperatures = 10 nK, 100 nK
center = 0
thermal_model = preparation

[analysis]
orbital = wannier
points_per_site = 32
position_window = 4 a
momentum_zones = 2
momentum_subdivisions = 4
p1_measured = 0.4 G
optimizer_lower = 1 a
optimizer_upper = 30 a

# Laser parameters as quoted; their conversions are reported, not used.
[reference]
lattice_intensity = 0.35 W/cm^2
lattice_detuning = 50 gamma
coupling_intensity = 0.1 W/cm^2
coupling_detuning = 100 gamma
)";
}

/// Loads "builtin:NAME" or a file path.
inline std::pair<Scenario, std::string> load_scenario(const std::string &ref) {
  std::string text;
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) == 0) {
    text = builtin_scenario_text(ref.substr(prefix.size()));
  } else {
    std::ifstream in(ref, std::ios::binary);
    if (!in) {
      throw Error("cannot open scenario file '" + ref + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return {parse_scenario(text), text};
}

} // namespace lattice_epr
