// Command-line front end. All numerical work lives in the library; this file
// only maps options and config files onto a RunConfig and dispatches.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "glc/config.hpp"
#include "glc/oracles.hpp"
#include "glc/runner.hpp"

namespace {

// Maps "[grid] nx = 24" onto the option named "--grid.nx": the stock reader
// routes section items to same-named subcommands, which the blocks are not.
class FlatSectionConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> out;
    for (CLI::ConfigItem& item : CLI::ConfigTOML::from_config(input)) {
      if (item.name == "++" || item.name == "--") continue;  // section markers
      std::string flat;
      for (const std::string& p : item.parents) {
        flat += p;
        flat += '.';
      }
      flat += item.name;
      item.parents.clear();
      item.name = std::move(flat);
      out.push_back(std::move(item));
    }
    return out;
  }
};

void bind_options(CLI::App& app, glc::RunConfig& cfg) {
  app.add_option("--grid.nx", cfg.grid.nx, "cells in x")->capture_default_str();
  app.add_option("--grid.ny", cfg.grid.ny, "cells in y")->capture_default_str();
  app.add_option("--grid.lx", cfg.grid.lx, "domain length in x")->capture_default_str();
  app.add_option("--grid.ly", cfg.grid.ly, "domain length in y")->capture_default_str();
  app.add_option("--grid.contacts", cfg.grid.contacts,
                 "contact segments, edge:lo:hi[:polarity] (e.g. left:0.25:0.75:+1)")
      ->delimiter(',');

  app.add_option("--params.epsilon", cfg.params.epsilon, "coherence parameter, in (0,1]")
      ->capture_default_str();
  app.add_option("--params.sigma", cfg.params.sigma, "normal conductivity")
      ->capture_default_str();
  app.add_option("--params.amplitude", cfg.params.amplitude, "raw current amplitude")
      ->capture_default_str();
  app.add_option("--params.delta", cfg.params.delta,
                 "target epsilon*||J||; >= 0 overrides the amplitude")
      ->capture_default_str();
  app.add_option("--params.shape", cfg.params.shape, "contact profile: uniform|cosine")
      ->capture_default_str();

  app.add_option("--solver.tol", cfg.solver.tol, "iteration tolerance")
      ->capture_default_str();
  app.add_option("--solver.max_iter", cfg.solver.max_iter, "fixed-point iteration cap")
      ->capture_default_str();
  app.add_option("--solver.delta_guard", cfg.solver.delta_guard,
                 "refuse drives with delta past this")
      ->capture_default_str();
  app.add_option("--solver.dt", cfg.solver.dt, "time step (0 = auto)")
      ->capture_default_str();
  app.add_option("--solver.T", cfg.solver.t_final, "evolution horizon")
      ->capture_default_str();
  app.add_option("--solver.sample_every", cfg.solver.sample_every,
                 "steps between trajectory samples")
      ->capture_default_str();
  app.add_option("--solver.margin", cfg.solver.margin, "stability verdict band")
      ->capture_default_str();
  app.add_option("--solver.perturb", cfg.solver.perturb,
                 "relative size of the initial kick in evolve")
      ->capture_default_str();
  app.add_option("--solver.seed", cfg.solver.seed, "perturbation RNG seed")
      ->capture_default_str();
  app.add_option("--solver.fit_t0", cfg.solver.fit_t0, "decay-fit window start (<0 = auto)")
      ->capture_default_str();
  app.add_option("--solver.fit_t1", cfg.solver.fit_t1, "decay-fit window end (<0 = auto)")
      ->capture_default_str();

  app.add_option("--sweep.axis", cfg.sweep.axis, "swept parameter: delta|epsilon|sigma")
      ->capture_default_str();
  app.add_option("--sweep.values", cfg.sweep.values, "swept values, ascending")
      ->delimiter(',');
  app.add_option("--sweep.metric", cfg.sweep.metric,
                 "fitted metric: correction|rho0-deviation")
      ->capture_default_str();
  app.add_option("--sweep.expected_slope", cfg.sweep.expected_slope,
                 "asserted log-log slope (0 = no assertion)")
      ->capture_default_str();
  app.add_option("--sweep.slope_tol", cfg.sweep.slope_tol, "slope assertion tolerance")
      ->capture_default_str();
  app.add_option("--sweep.threads", cfg.sweep.threads, "worker threads for sweep points")
      ->capture_default_str();

  app.add_option("--output.dir", cfg.output.dir, "output directory")
      ->capture_default_str();
  app.add_flag("--output.dump_fields", cfg.output.dump_fields, "write field CSVs");
  app.add_option("--output.k", cfg.output.k, "eigenpairs requested")
      ->capture_default_str();
  app.add_option("--output.mode", cfg.output.mode, "spectrum mode: auto|dense|iterative")
      ->capture_default_str();
  app.add_flag("--output.with_spectrum", cfg.output.with_spectrum,
               "attach a spectrum section to evolve reports");
}

int print_oracles(bool full) {
  for (const auto& c : glc::oracle_catalogue()) {
    std::cout << c.name << "\n";
    if (!full) continue;
    std::cout << "  config: " << c.config << "\n";
    for (const auto& e : c.expected)
      std::cout << "  " << e.label << " = " << e.value << " +/- " << e.tolerance << "\n";
    std::cout << "  " << c.derivation << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "glc: steady states, spectra, and relaxation dynamics of a current-driven\n"
      "order parameter on a rectangular sample"};
  app.footer(
      "exit codes:\n"
      "  0   success (steady converged / verdict stable / assertions pass)\n"
      "  1   solver failure or internal error\n"
      "  2   physical outcome: supercritical drive, lost contraction, blow-up\n"
      "  3   unstable/marginal verdict, or a failed sweep assertion\n"
      "  64  bad command line or configuration");

  glc::RunConfig cfg;
  bind_options(app, cfg);
  app.set_config("--config", "", "read options from a TOML file (sections = blocks)");
  app.config_formatter(std::make_shared<FlatSectionConfig>());

  std::string out_override;
  app.add_option("--out", out_override, "override output.dir");
  int threads_override = 0;
  app.add_option("--threads", threads_override, "override sweep.threads");

  app.add_subcommand("steady", "solve the steady state, report norms and residuals");
  app.add_subcommand("stability", "linearize around the steady state and report the spectrum");
  app.add_subcommand("evolve", "relax a perturbed steady state and fit the decay rate");
  app.add_subcommand("sweep", "repeat the steady pipeline over a parameter range");
  auto* oracles_cmd = app.add_subcommand("oracles", "built-in ground-truth catalogue");
  bool oracles_full = false;
  oracles_cmd->add_flag("--list", oracles_full, "print expected values and derivations");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return glc::kExitUsage;
  }

  if (!out_override.empty()) cfg.output.dir = out_override;
  if (threads_override > 0) cfg.sweep.threads = threads_override;

  for (const CLI::App* sub : app.get_subcommands()) {
    if (sub->get_name() == "oracles") return print_oracles(oracles_full);
    return glc::run_command(sub->get_name(), cfg);
  }
  return glc::kExitUsage;
}
