// pcopula: simulate, sweep, eval, verify and pitfall commands.

#include <CLI11.hpp>

#include <iostream>

#include "pcopula/app.hpp"

namespace {

// Flag values land here; only flags that were given override the config.
struct Flags {
  std::string scenario, family, params, out, grid, mutate, only;
  int rotation = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::vector<double> sigma;
};

void apply_flags(const CLI::App& sub, const Flags& f, pcop::RunConfig& cfg) {
  auto given = [&](const char* name) {
    const CLI::Option* o = sub.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--scenario")) cfg.scenario = f.scenario;
  if (given("--family")) cfg.family = f.family;
  if (given("--theta-fn")) cfg.params = f.params;
  if (given("--rotation")) cfg.rotation = f.rotation;
  if (given("--n")) cfg.n = f.n;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--out")) cfg.out_dir = f.out;
  if (given("--workers")) cfg.workers = f.workers;
  if (given("--sigma")) cfg.sigma = f.sigma;
  if (given("--mutate")) cfg.mutate = f.mutate;
  if (given("--only")) cfg.only = f.only;
  if (given("--grid")) pcop::apply_config_text("grid=" + f.grid, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial copulas: vine simulation, analytic evaluation and bound certificates"};
  app.set_version_flag("--version", pcop::kArtifactVersion);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags override its values")
      ->check(CLI::ExistingFile);
  app.require_subcommand(0, 1);

  Flags f;
  auto* simulate = app.add_subcommand("simulate", "simulate one scenario (every family unless --family)");
  simulate->add_option("--scenario", f.scenario, "1..10, 11a, 11b or 11c");
  simulate->add_option("--family", f.family, "frank, gumbel, clayton or gaussian");

  auto* sweep = app.add_subcommand("sweep", "simulate every scenario configuration");
  auto* eval = app.add_subcommand("eval", "analytic partial copula of a conditional family");
  eval->add_option("--family", f.family, "indep, gaussian, frank, clayton, gumbel or fgm");
  eval->add_option("--theta-fn", f.params, "const:v, exp, negexp, one-minus-2z or table:z:t,...");
  eval->add_option("--rotation", f.rotation, "0, 90, 180 or 270");
  eval->add_option("--grid", f.grid, "grid overrides, e.g. kdd=101,z=129");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--mutate", f.mutate, "dev hook: gumbel-h2 corrupts the Gumbel h2");
  verify->add_option("--only", f.only, "run checks whose name starts with this prefix");

  auto* pitfall = app.add_subcommand("pitfall", "regression partial correlation vs partial copula");
  pitfall->add_option("--sigma", f.sigma, "noise level (repeatable); default 0.1 0.5 1 2")
      ->take_all();

  for (CLI::App* sub : {simulate, sweep, eval, verify, pitfall}) {
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--n", f.n, "sample size");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--workers", f.workers, "OpenMP threads (0 = default)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pcop::RunConfig cfg;
    if (!config_path.empty()) pcop::apply_config_file(config_path, cfg);
    for (CLI::App* sub : app.get_subcommands()) {
      cfg.command = sub->get_name();
      apply_flags(*sub, f, cfg);
    }
    if (cfg.command.empty()) {
      std::cerr << "no command given (simulate, sweep, eval, verify, pitfall)\n" << app.help();
      return 2;
    }
    return pcop::run_command(cfg, std::cout);
  } catch (const pcop::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
