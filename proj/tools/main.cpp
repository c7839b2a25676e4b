#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracstab/cli.hpp"

namespace cli = fracstab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulation and gradient stabilization of Caputo "
               "time-fractional diffusion systems"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir = ".";
  int truncation = -1;
  bool dump = false;
  unsigned seed = 0;  // reserved: all computations are deterministic
  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--truncation", truncation, "Override mode truncation N");
  app.add_option("--seed", seed, "Reserved (computations are deterministic)");
  app.add_flag("--dump-config", dump, "Print the effective config and exit");

  auto* mlf_cmd = app.add_subcommand("mlf", "Mittag-Leffler evaluation");
  auto* eval = mlf_cmd->add_subcommand("eval", "Evaluate E_q or E_{q,alpha}");
  double q = 0.0, alpha = 0.0, z = 0.0;
  eval->add_option("--q", q, "Fractional order in (0,1]")->required();
  auto* alpha_opt = eval->add_option("--alpha", alpha,
                                     "Second parameter (omit for E_q)");
  eval->add_option("--z", z, "Argument")->required();

  auto* classify = app.add_subcommand("classify", "Theorem 1/2 verdict");
  auto* simulate = app.add_subcommand("simulate", "Closed-loop run, CSV output");
  auto* table1 = app.add_subcommand("table1", "Gradient error sweep over q");

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw fracstab::ConfigError("cannot open " + config_path);
      cfg = cli::parse_config(in);
    }
    if (truncation > 0) cfg.truncation = truncation;
    cfg.output_dir = out_dir;
    if (dump) {
      cli::dump_config(cfg, std::cout);
      return 0;
    }
    if (eval->parsed())
      return cli::cmd_mlf(q, alpha_opt->count() > 0, alpha, z);
    if (classify->parsed()) return cli::cmd_classify(cfg);
    if (simulate->parsed()) return cli::cmd_simulate(cfg);
    if (table1->parsed()) return cli::cmd_table1(cfg);
    std::cerr << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
