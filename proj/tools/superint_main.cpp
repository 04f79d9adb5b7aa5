// Command-line front end: verification suites, trajectory runs and
// published-vs-fitted comparison reports for the deformed-oscillator
// family. Exit codes: 0 pass, 1 failed suite or runtime error, 2 usage or
// configuration error.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "superint/superint.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "configuration file (key = value sections)");
  cmd->add_option("--preset", opts.preset,
                  "compiled-in preset: fig1, fig2, fig3, fig4");
  cmd->add_option("--seed", opts.seed, "sampling seed override");
  cmd->add_option("--out", opts.out_dir, "output directory override");
  cmd->add_option("--tol", opts.tol, "integration tolerance override");
}

superint::RunConfig load(const CommonOpts& opts) {
  using superint::ConfigError;
  if (!opts.config_path.empty() && !opts.preset.empty())
    throw ConfigError("give either --config or --preset, not both");
  superint::RunConfig cfg;
  if (!opts.config_path.empty()) {
    std::string text;
    try {
      text = superint::read_file(opts.config_path);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    cfg = superint::parse_config(text);
  } else {
    cfg = superint::preset_config(opts.preset.empty() ? "fig1" : opts.preset);
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ConfigError("--tol must be > 0");
    cfg.tolerance = *opts.tol;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "superint: integrals of motion from ladder operators, verified "
      "numerically"};
  app.require_subcommand(1);

  CommonOpts vopts, sopts, ropts;
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  add_common(verify, vopts);
  auto* simulate = app.add_subcommand(
      "simulate", "integrate a trajectory and write CSV/SVG outputs");
  add_common(simulate, sopts);
  auto* report = app.add_subcommand(
      "report", "published-vs-fitted coefficient comparison tables");
  add_common(report, ropts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      const auto cfg = load(vopts);
      const auto rep = superint::run_verification(cfg);
      std::cout << rep.text;
      return rep.all_pass ? 0 : 1;
    }
    if (simulate->parsed()) {
      const auto cfg = load(sopts);
      const auto sim = superint::run_simulation(cfg);
      std::cout << sim.text;
      return 0;
    }
    if (report->parsed()) {
      const auto cfg = load(ropts);
      std::cout << superint::comparison_report(cfg);
      return 0;
    }
  } catch (const superint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
