#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

using closedexact::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--emit", cfg.emit, "Report style")->check(CLI::IsMember({"human", "machine"}));
  sub->add_option("--out", cfg.out, "Write the report to this file");
  sub->add_option("--tol", cfg.tol, "Tolerance override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed and exact functions on the lattice Fock space"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* orbits = app.add_subcommand("orbits", "List cone points (orbit representatives)");
  orbits->add_option("--degree", cfg.degree)->required();
  orbits->add_option("--bound", cfg.bound)->required();

  auto* region = app.add_subcommand("region", "List the points of the truncation region P_i");
  region->add_option("--degree", cfg.degree)->required();
  region->add_option("--truncate", cfg.truncate, "Region index i")->required();

  auto* check = app.add_subcommand("check-closed", "Check closedness of coefficients or an expansion");
  check->add_option("--field", cfg.field)->required();
  auto* c1 = check->add_option("--coeffs", cfg.coeffs);
  auto* c2 = check->add_option("--expansion", cfg.expansion);
  c1->excludes(c2);
  check->add_option("--window", cfg.window, "Treat the data as zero out to this window (never shrinks)");
  check->add_option("--range", cfg.range, "Shift range for the symbolic check");

  auto* gen = app.add_subcommand("gen-exact", "Generate an exact function from an orbit function");
  gen->add_option("--field", cfg.field)->required();
  gen->add_option("--orbit-fn", cfg.orbit_fn)->required();
  gen->add_option("--window", cfg.window);

  auto* roots = app.add_subcommand("roots", "Unit-circle roots of the symbol");
  roots->add_option("--field", cfg.field)->required();

  auto* approx = app.add_subcommand("approximate", "Approximate a closed function by exact ones");
  approx->add_option("--field", cfg.field)->required();
  approx->add_option("--coeffs", cfg.coeffs)->required();
  approx->add_option("--schedule", cfg.schedule, "'default' or n:M:i[,n:M:i...]");
  approx->add_option("--mask", cfg.mask);
  approx->add_option("--grid", cfg.grid);
  approx->add_option("--truncate", cfg.truncate);

  auto* graph = app.add_subcommand("graph", "Orbit graph and cycle sums");
  graph->add_option("--degree", cfg.degree)->required();
  graph->add_option("--bound", cfg.bound)->required();
  graph->add_option("--coeffs", cfg.coeffs, "Edge weights");
  graph->add_option("--window", cfg.window, "Window for the edge/label bijection check");

  auto* validate = app.add_subcommand("validate", "Run the built-in invariant suites");
  validate->add_option("--field", cfg.field);
  validate->add_option("--degree", cfg.degree);

  for (auto* sub : {orbits, region, check, gen, roots, approx, graph, validate}) add_common(sub, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return closedexact::cli::kParseError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return closedexact::cli::run(cfg, std::cout, std::cerr);
}
