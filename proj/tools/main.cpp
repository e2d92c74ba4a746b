#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sweepvi/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sweepvi: implicit sweeping-process / quasistatic friction solver"};
  app.require_subcommand(1);

  sweepvi::cli::CommonOptions common;
  std::string config_arg, out_arg;
  int steps_arg = 0;
  double tol_arg = 0.0;
  std::string ns_arg;

  auto add_common = [&](CLI::App* sub, bool with_overrides) {
    sub->add_option("--config", config_arg, "problem configuration file")->required();
    if (with_overrides) {
      sub->add_option("--out", out_arg, "output directory (overrides [output] dir)");
      sub->add_option("--n", steps_arg, "number of time steps (overrides [time] n)");
      sub->add_option("--tol", tol_arg, "step tolerance (overrides [solver] tol)");
    }
  };

  CLI::App* validate = app.add_subcommand("validate", "check a configuration and report");
  add_common(validate, false);

  CLI::App* run = app.add_subcommand("run", "solve the evolution and write trajectory.csv");
  add_common(run, true);

  CLI::App* crosscheck =
      app.add_subcommand("crosscheck", "solve both formulations and compare them");
  add_common(crosscheck, true);

  CLI::App* converge =
      app.add_subcommand("converge", "grid-refinement study; writes convergence.csv");
  add_common(converge, true);
  converge->add_option("--ns", ns_arg, "comma-separated doubling grid sizes, e.g. 250,500,1000");

  sweepvi::cli::ContactDemoOptions demo_opts;
  CLI::App* demo = app.add_subcommand("contact-demo", "built-in frictional contact demo");
  std::string demo_out;
  int demo_steps = 0;
  double demo_tol = 0.0;
  demo->add_option("--out", demo_out, "output directory (default: out)");
  demo->add_option("--n", demo_steps, "number of time steps (default: 200)");
  demo->add_option("--tol", demo_tol, "step tolerance (default: 1e-10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sweepvi::cli::kExitUsage;
  }

  auto fill_common = [&](CLI::App* sub) {
    common.config = config_arg;
    // Not every subcommand registers the overrides; count() throws on
    // options that do not exist.
    auto given = [&](const std::string& name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--out")) common.out_dir = out_arg;
    if (given("--n")) common.steps = steps_arg;
    if (given("--tol")) common.tol = tol_arg;
  };

  if (validate->parsed()) {
    fill_common(validate);
    return sweepvi::cli::cmd_validate(common, std::cout, std::cerr);
  }
  if (run->parsed()) {
    fill_common(run);
    return sweepvi::cli::cmd_run(common, std::cout, std::cerr);
  }
  if (crosscheck->parsed()) {
    fill_common(crosscheck);
    return sweepvi::cli::cmd_crosscheck(common, std::cout, std::cerr);
  }
  if (converge->parsed()) {
    fill_common(converge);
    std::vector<int> ns;
    if (converge->count("--ns")) {
      std::stringstream ss(ns_arg);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          ns.push_back(std::stoi(cell));
        } catch (const std::exception&) {
          std::cerr << "parse error [--ns]: not an integer: '" << cell << "'\n";
          return sweepvi::cli::kExitUsage;
        }
      }
    }
    return sweepvi::cli::cmd_converge(common, ns, std::cout, std::cerr);
  }
  if (demo->parsed()) {
    if (demo->count("--out")) demo_opts.out_dir = demo_out;
    if (demo->count("--n")) demo_opts.steps = demo_steps;
    if (demo->count("--tol")) demo_opts.tol = demo_tol;
    return sweepvi::cli::cmd_contact_demo(demo_opts, std::cout, std::cerr);
  }
  return sweepvi::cli::kExitUsage;
}
