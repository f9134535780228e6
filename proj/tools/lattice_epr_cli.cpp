#include "lattice_epr/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"Two-atom lattice EPR simulator"};
  app.require_subcommand(1);
  lattice_epr::RunOptions opt;

  const std::vector<std::pair<const char *, const char *>> subcommands = {
      {"bands", "band structure, Wannier function and hopping"},
      {"diatom", "two-atom spectrum, bound band and effective masses"},
      {"distributions", "joint and conditional position/momentum grids"},
      {"report", "EPR report and comparison with the worked example"},
      {"optimize", "envelope width maximizing s for each temperature"},
      {"sweep", "parallel parameter sweep from the [sweep] section"},
  };
  for (const auto &[name, help] : subcommands) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opt.scenario, "scenario file or builtin:lithium-example")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--jobs", opt.jobs, "worker threads for sweep (default: all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--format", opt.format, "csv or tsv")->check(CLI::IsMember({"csv", "tsv"}));
    sub->callback([&opt, name = std::string(name)] { opt.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lattice_epr::exit_usage;
  }
  return lattice_epr::run(opt, std::cout, std::cerr);
}
