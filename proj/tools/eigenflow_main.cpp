// Command-line front end: counterexample experiments, inequality fuzzing,
// and flow computations on user-supplied matrix families.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "eigenflow/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"eigenflow: a numerical laboratory for eigenvalue stability"};
  app.require_subcommand(1);

  eigenflow::cli::ExampleConfig ex;
  CLI::App* example = app.add_subcommand("example", "run a counterexample experiment");
  example->add_option("--id", ex.id, "experiment id: exA | exUcq | exAuc | exA2")->required();
  example->add_option("--n", ex.n, "family index (>= 1)")->required();
  example->add_option("--q", ex.q, "integrability exponent (default 2)");
  example->add_option("--alpha", ex.alpha, "Holder exponent in (0,1) (exAuc, default 0.5)");
  example->add_option("--grid", ex.gridNodes, "grid node count (default per id)");
  example->add_option("--out", ex.outDir, "output directory (default: reports)");

  eigenflow::cli::FuzzConfig fz;
  CLI::App* fuzz = app.add_subcommand("fuzz", "stress a perturbation inequality");
  fuzz->add_option("--kind", fz.kind, "inequality: weyl | loewner | hw | sv | bdm")->required();
  fuzz->add_option("--d", fz.d, "matrix size in [1, 16] (default 4)");
  fuzz->add_option("--trials", fz.trials, "number of random pairs (default 10000)");
  fuzz->add_option("--seed", fz.seed, "RNG seed (default 7)");
  fuzz->add_option("--out", fz.outDir, "output directory (default: reports)");

  eigenflow::cli::FlowConfig fl;
  CLI::App* flow = app.add_subcommand("flow", "compute a flow of a matrix family");
  flow->add_option("--input", fl.input, "family directory or manifest path")->required();
  flow->add_option("--map", fl.map, "flow map: ordered | unordered | kappa | area");
  flow->add_option("--q", fl.q, "integrability exponent (default 2)");
  flow->add_option("--out", fl.outDir, "output directory (default: reports)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error.
    return rc == 0 ? 0 : eigenflow::cli::kExitValidation;
  }

  if (example->parsed()) return eigenflow::cli::cmd_example(ex);
  if (fuzz->parsed()) return eigenflow::cli::cmd_fuzz(fz);
  return eigenflow::cli::cmd_flow(fl);
}
