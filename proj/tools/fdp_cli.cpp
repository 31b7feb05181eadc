// Command-line front end: run a configuration, run a convergence study, or
// list the built-in presets.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "fdp/config_io.hpp"
#include "fdp/convergence.hpp"
#include "fdp/integrator.hpp"
#include "fdp/output.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config_path;
  std::string preset_name;
  std::string delta;
  std::string t_end;
  std::string snapshots;
  std::optional<double> safety;
  bool no_cutoff = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  auto* src = cmd->add_option("--config", o.config_path, "configuration file");
  cmd->add_option("--preset", o.preset_name, "built-in configuration (see 'presets list')")
      ->excludes(src);
  cmd->add_option("--t-end", o.t_end, "final time (fractions such as 1/500 accepted)");
  cmd->add_option("--safety", o.safety, "time-step safety factor in (0, 1]");
  cmd->add_flag("--no-cutoff", o.no_cutoff, "evaluate the diffusion sum over all pairs");
}

fdp::SimulationConfig resolve(const Overrides& o) {
  fdp::SimulationConfig cfg;
  if (!o.config_path.empty()) cfg = fdp::load_config(o.config_path);
  else if (!o.preset_name.empty()) cfg = fdp::preset(o.preset_name);
  else throw fdp::ConfigError("one of --config or --preset is required");
  if (!o.delta.empty()) cfg.delta = fdp::parse_number(o.delta);
  if (!o.t_end.empty()) {
    cfg.final_time = fdp::parse_number(o.t_end);
    std::erase_if(cfg.snapshot_times, [&](double t) { return t > cfg.final_time; });
  }
  if (!o.snapshots.empty()) cfg.snapshot_times = fdp::parse_number_list(o.snapshots);
  if (o.safety) cfg.safety_factor = *o.safety;
  if (o.no_cutoff) cfg.kernel_cutoff = false;
  return fdp::validate(cfg);
}

int do_run(const Overrides& o, const std::string& out, bool quiet) {
  const fdp::SimulationConfig cfg = resolve(o);
  std::size_t steps = 0;
  auto observer = [&](const fdp::Simulation&, const fdp::StepRecord& r) {
    ++steps;
    if (!quiet && steps % 50 == 0)
      std::fprintf(stderr, "step %zu  t=%.6e  dt=%.3e  maxrho=%.4e %.4e\n", steps, r.t, r.dt,
                   r.max_rho[0], r.max_rho[1]);
  };
  try {
    const fdp::RunResult res = fdp::run(cfg, observer);
    fdp::emit(res.snapshots, res.series, out, &cfg);
    const fdp::StepRecord& last = res.series.back();
    std::printf("%s: %zu steps to t=%.6g, max rho = %.6e / %.6e, max c = %.6e; wrote %s\n",
                cfg.name.c_str(), res.series.size() - 1, last.t, last.max_rho[0], last.max_rho[1],
                last.max_c, out.c_str());
    return 0;
  } catch (const fdp::RunAborted& e) {
    fdp::emit(e.partial().snapshots, e.partial().series, out, &cfg);
    std::fprintf(stderr, "numerical failure: %s (partial output in %s)\n", e.what(), out.c_str());
    return kExitNumerical;
  }
}

int do_converge(const Overrides& o, const std::string& deltas, const std::string& out) {
  fdp::SimulationConfig cfg = resolve(o);
  const auto list = fdp::parse_number_list(deltas);
  const auto rows = fdp::convergence_study(cfg, list, cfg.final_time, [](double d, const auto&) {
    std::fprintf(stderr, "finished delta = %.6g\n", d);
  });
  const std::string table = fdp::format_convergence_table(rows);
  std::cout << table;
  if (!out.empty()) {
    std::filesystem::create_directories(std::filesystem::path(out).parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : std::filesystem::path(out).parent_path());
    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open '" + out + "' for writing");
    std::fputs(table.c_str(), f);
    std::fclose(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid finite-difference / sticky-particle chemotaxis solver"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_out = "out";
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "integrate one configuration and write snapshots");
  add_common(run_cmd, run_o);
  run_cmd->add_option("--delta", run_o.delta, "finite-difference mesh size");
  run_cmd->add_option("--snapshots", run_o.snapshots, "comma-separated snapshot times");
  run_cmd->add_option("--out", run_out, "output directory");
  run_cmd->add_flag("--quiet", quiet, "no progress lines");

  Overrides conv_o;
  std::string conv_deltas = "2/15,2/30,2/60";
  std::string conv_out;
  auto* conv_cmd = app.add_subcommand("converge", "Runge error and rate table over nested meshes");
  add_common(conv_cmd, conv_o);
  conv_cmd->add_option("--delta", conv_deltas, "comma-separated mesh sizes (D, D/2, D/4, ...)");
  conv_cmd->add_option("--out", conv_out, "also write the table to this file");

  auto* presets_cmd = app.add_subcommand("presets", "built-in configurations");
  auto* list_cmd = presets_cmd->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show_cmd = presets_cmd->add_subcommand("show", "print a preset as a config file");
  show_cmd->add_option("name", show_name)->required();
  presets_cmd->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run_o, run_out, quiet);
    if (*conv_cmd) return do_converge(conv_o, conv_deltas, conv_out);
    if (*list_cmd) {
      for (const auto& n : fdp::preset_names())
        std::printf("%-10s %s\n", n.c_str(), fdp::preset_summary(n).c_str());
      return 0;
    }
    if (*show_cmd) {
      std::cout << fdp::format_config(fdp::preset(show_name));
      return 0;
    }
  } catch (const fdp::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const fdp::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
