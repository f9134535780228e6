#include "lattice_epr/pipeline.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lattice_epr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

const std::string toy = std::string(LATTICE_EPR_SOURCE_DIR) + "/scenarios/toy-ring.ini";

fs::path scratch(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("lattice_epr_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path &p) {
  std::ifstream in(p);
  Csv c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (c.header.empty()) {
      c.header = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto &s : cells) {
      row.push_back(s == "true" ? 1.0 : (s == "false" ? 0.0 : std::stod(s)));
    }
    c.rows.push_back(row);
  }
  return c;
}

int run_cli(const std::string &sub, const std::string &scenario, const fs::path &dir, int jobs = 1,
            std::string *err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run({sub, scenario, dir.string(), jobs, "csv"}, out, err);
  if (err_text) {
    *err_text = err.str();
  }
  return code;
}

} // namespace

TEST_CASE("toy ring runs every subcommand", "[pipeline]") {
  const auto dir = scratch("toy");
  for (const char *sub : {"bands", "diatom", "distributions", "optimize", "sweep", "report"}) {
    INFO(sub);
    CHECK(run_cli(sub, toy, dir) == exit_ok);
  }
  for (const char *f : {"bands.csv", "wannier.csv", "diatom_band.csv", "interaction_profile.csv",
                        "distributions_summary.csv", "optimize.csv", "sweep.csv", "report.csv"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto head = slurp(dir / "bands.csv");
  CHECK(head.rfind("# lattice-epr 0.1.0\n# scenario toy-ring fnv1a:", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("distribution tables are normalized", "[pipeline]") {
  const auto dir = scratch("dist");
  REQUIRE(run_cli("distributions", toy, dir) == exit_ok);
  for (const char *label : {"T10nK", "T100nK"}) {
    const auto joint = read_csv(dir / (std::string("position_joint_") + label + ".csv"));
    REQUIRE(joint.header.size() == 3);
    const double step = 1.0 / 32.0;
    double sum = 0.0;
    for (const auto &r : joint.rows) {
      sum += r[2];
    }
    CHECK_THAT(sum * step * step, WithinAbs(1.0, 1e-6));

    const auto slice = read_csv(dir / (std::string("momentum_slice_") + label + ".csv"));
    const double dk = slice.rows[1][0] - slice.rows[0][0];
    double s1 = 0.0;
    for (const auto &r : slice.rows) {
      s1 += r[1];
    }
    CHECK_THAT(s1 * dk, WithinAbs(1.0, 1e-6));
    CHECK_THAT(dk, WithinRel(2.0 * constants::pi / (8 * 4), 1e-9));

    const auto marg = read_csv(dir / (std::string("momentum_marginal_") + label + ".csv"));
    for (const auto &r : marg.rows) {
      CHECK_THAT(r[1], WithinAbs(r[2], 1e-6));
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("optimize table matches the grid oracle", "[pipeline]") {
  const auto dir = scratch("opt");
  REQUIRE(run_cli("optimize", "builtin:lithium-example", dir) == exit_ok);
  const auto t = read_csv(dir / "optimize.csv");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.header[2] == "sigma_E_opt_a");
  for (const auto &r : t.rows) {
    CHECK_THAT(r[2], WithinAbs(r[4], 1e-3));
    CHECK(r[3] >= r[6]);
  }
  CHECK_THAT(t.rows[0][2], WithinRel(std::sqrt(10.0) * t.rows[1][2], 1e-3));
  CHECK(t.rows[0][7] == 0.0);
  CHECK(t.rows[1][7] == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("sweep output is independent of the worker count", "[pipeline]") {
  const auto a = scratch("sweep1");
  const auto b = scratch("sweep3");
  REQUIRE(run_cli("sweep", toy, a, 1) == exit_ok);
  REQUIRE(run_cli("sweep", toy, b, 3) == exit_ok);
  const auto sa = slurp(a / "sweep.csv");
  CHECK(sa == slurp(b / "sweep.csv"));
  CHECK(read_csv(a / "sweep.csv").rows.size() == 4);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("report is deterministic", "[pipeline]") {
  const auto a = scratch("rep1");
  const auto b = scratch("rep2");
  REQUIRE(run_cli("report", toy, a) == exit_ok);
  REQUIRE(run_cli("report", toy, b) == exit_ok);
  CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("uncommitted output is removed", "[pipeline]") {
  const auto dir = scratch("writer");
  const auto sc = load_scenario(toy).first;
  fs::path written;
  {
    OutputWriter w(dir, sc, "tsv");
    written = w.table("partial", "never committed", Table{{"a", "b"}, {{"1", "2"}}});
    CHECK(fs::exists(written));
    CHECK(written.extension() == ".tsv");
  }
  CHECK_FALSE(fs::exists(written));
  CHECK_THROWS_AS(OutputWriter(dir, sc, "xml"), DomainError);
  fs::remove_all(dir);
}

TEST_CASE("exit codes", "[pipeline]") {
  const auto dir = scratch("codes");
  std::string err;
  CHECK(run_cli("frobnicate", toy, dir, 1, &err) == exit_usage);
  CHECK(run_cli("bands", "/nonexistent/scenario.ini", dir, 1, &err) == exit_usage);

  const auto bad = dir.parent_path() / "lattice_epr_test_bad.ini";
  std::ofstream(bad) << "[lattice]\ndepth = 7.42 Erec\nsites = 8\n[coupling]\nfoo = 1\n";
  CHECK(run_cli("bands", bad.string(), dir, 1, &err) == exit_usage);
  CHECK(err.find("line 5") != std::string::npos);

  // Weak binding on a short ring fails at run time, not at parse time.
  const auto weak = dir.parent_path() / "lattice_epr_test_weak.ini";
  std::ofstream(weak) << "[species]\npreset = lithium-7\n[lattice]\ndepth = 7.42 Erec\nsites = 8\n"
                         "[coupling]\ndisplacement = 40 nm\nv_dd = -0.02 Erec\n";
  CHECK(run_cli("diatom", weak.string(), dir, 1, &err) == exit_runtime);
  CHECK_FALSE(fs::exists(dir / "interaction_profile.csv"));
  fs::remove(bad);
  fs::remove(weak);
  fs::remove_all(dir);
}

TEST_CASE("model summary for the worked example", "[pipeline]") {
  const auto sc = load_scenario("builtin:lithium-example").first;
  CHECK(is_lithium_example(sc));
  const Model m = build_model(sc);
  CHECK_THAT(m.hopping.v_hop, WithinRel(-0.0355, 0.01));
  CHECK_THAT(m.profile.onsite(), WithinAbs(-2.16, 1e-12));
  CHECK(temperature_label(10e-9) == "T10nK");
  CHECK(temperature_label(100e-9) == "T100nK");
}
