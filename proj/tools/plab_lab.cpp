// Command-line front end for the experiments. Exit status is 0 iff every
// budget check of the selected subcommand passes, 1 on a failed check and 2 on
// invalid input or a solver failure.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plab/config.hpp"
#include "plab/experiments.hpp"
#include "plab/pde_solver.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::int64_t> seed;
  std::optional<std::string> out;
  std::vector<int> grid;
  std::vector<double> eps_list;
};

const std::map<std::string, std::string> kAbout = {
    {"verify-cordes", "randomized sweeps of the Cordes matrix inequalities"},
    {"verify-identities", "finite-difference residuals of the divergence identities and key-inequality slack"},
    {"solve", "regularized p-energy Dirichlet problem by damped Newton"},
    {"global-estimate", "W^{1,2} norm of Du against the data as eps -> 0"},
    {"boundary-suite", "boundary identity, capacity, K(r), rearrangements and the weighted trace check"},
};

int run(const std::string& name, const Flags& f) {
  plab::KeyValueConfig cfg = f.config.empty() ? plab::KeyValueConfig{} : plab::KeyValueConfig::load(f.config);
  if (f.seed) cfg.set("seed", std::to_string(*f.seed));
  if (f.out) cfg.set("out", *f.out);
  plab::ExperimentConfig ec = plab::ExperimentConfig::from_config(name, cfg);
  if (!f.grid.empty()) ec.grids = f.grid;
  if (!f.eps_list.empty()) ec.eps_list = f.eps_list;
  ec.validate();

  const plab::ExperimentReport rep = plab::run_experiment(ec);
  rep.write(ec.out_dir);
  for (const auto& c : rep.checks) std::cout << plab::format_check(c) << '\n';
  std::cout << (rep.passed() ? "ALL PASSED" : "SOME CHECKS FAILED") << " (" << rep.checks.size() << " checks, output in "
            << ec.out_dir << ")\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-Laplacian regularity lab: matrix sweeps, identity checks, Dirichlet solves and boundary geometry"};
  app.require_subcommand(1);

  Flags flags;
  for (const auto& name : plab::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, kAbout.count(name) ? kAbout.at(name) : "");
    sub->add_option("--config", flags.config, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--grid", flags.grid, "grid sizes N (h = 1/N), strictly increasing")->delimiter(',');
    sub->add_option("--eps-list", flags.eps_list, "regularization values, strictly decreasing")->delimiter(',');
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(name, flags);
  } catch (const plab::SolveError& e) {
    std::cerr << "solver failure: " << e.what() << " (iterations " << e.report().iterations << ", gradient norm "
              << e.report().gradient_norm << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
