// Command-line driver: single runs, sweeps, the acceptance suite and
// spectrum inspection.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zoomcons/acceptance.hpp"
#include "zoomcons/experiment.hpp"

namespace fs = std::filesystem;
using namespace zoomcons;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true) {
  cmd->add_option("--config", o.config_path, "Key/value config file")->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--seed", o.seed, "Base seed for graph sampling and x0");
  cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
}

KeyValueConfig build_config(const CommonOptions& o) {
  auto c = KeyValueConfig::defaults();
  if (!o.config_path.empty()) c.load(o.config_path);
  if (o.seed) {
    c.set("graph.seed", std::to_string(*o.seed));
    c.set("x0.seed", std::to_string(*o.seed));
  }
  for (const auto& kv : o.overrides) c.apply_override(kv);
  return c;
}

int cmd_run(const CommonOptions& o, bool trace) {
  auto c = build_config(o);
  if (trace) c.set("run.trace", "true");
  if (!ExperimentSpec{c}.axes().empty()) {
    std::cerr << "run: config contains sweep lists; use `sweep`\n";
    return 1;
  }
  const auto outcome = execute(c);
  const fs::path dir = o.out_dir.empty() ? fs::path("run_out") : fs::path(o.out_dir);
  write_run_artifacts(dir, c, outcome);
  const auto& r = outcome.result;
  std::cout << "status: " << to_string(r.status) << '\n'
            << "steps: " << r.steps << '\n'
            << "rho: " << std::setprecision(10) << outcome.run.sim.matrix.rho() << '\n'
            << "zoom_out_count: " << r.zoom_out_count << '\n'
            << "final_disagreement: " << r.history.back().disagreement << '\n'
            << "artifacts: " << dir.string() << '\n';
  return exit_code(r.status);
}

int cmd_sweep(const CommonOptions& o, unsigned workers) {
  const ExperimentSpec spec{build_config(o)};
  const auto axes = spec.axes();
  const auto rows = run_sweep(spec, workers);
  const fs::path dir = o.out_dir.empty() ? fs::path("sweep_out") : fs::path(o.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "sweep.csv");
    write_sweep_csv(csv, axes, rows);
  }
  {
    std::ofstream manifest(dir / "manifest.txt");
    manifest << "meta.version: " << version() << '\n' << "meta.command: sweep\n";
    spec.config.write(manifest);
    manifest << "resolved.cells: " << rows.size() << '\n';
  }
  std::size_t converged = 0;
  for (const auto& r : rows) converged += r.converged ? 1 : 0;
  std::cout << rows.size() << " cells, " << converged << " converged; " << (dir / "sweep.csv").string()
            << '\n';
  return 0;
}

int cmd_verify(std::optional<int> only) {
  const auto results = run_acceptance(only);
  if (results.empty()) {
    std::cerr << "verify: no criterion with that id\n";
    return 1;
  }
  return print_acceptance_report(std::cout, results) ? 0 : 1;
}

int cmd_spectrum(const CommonOptions& o) {
  const auto c = build_config(o);
  const auto run = resolve(c);
  const auto& m = run.sim.matrix;
  const auto& norms = m.norms();
  std::cout << std::setprecision(17) << "n: " << m.size() << '\n'
            << "edges: " << run.graph.edge_count() << '\n'
            << "graph_seed: " << run.graph_seed << '\n'
            << "rho: " << m.rho() << '\n'
            << "norm_p: " << norms.norm_p << '\n'
            << "norm_p_disagreement: " << norms.norm_p_disagreement << '\n'
            << "norm_k: " << norms.norm_k << '\n'
            << "norm_k_minus_i: " << norms.norm_k_minus_i << '\n'
            << "eigenvalues:\n";
  for (const auto& lambda : eigenvalues(m.perron())) {
    std::cout << "  " << lambda.real();
    if (lambda.imag() != 0.0) std::cout << (lambda.imag() < 0 ? " - " : " + ") << std::abs(lambda.imag()) << "i";
    std::cout << '\n';
  }
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    std::ofstream csv(fs::path(o.out_dir) / "matrix.csv");
    write_csv(csv, m.perron());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zooming-in/zooming-out quantized average consensus simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  CommonOptions run_opts;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Run one simulation and write artifacts");
  add_common(run, run_opts);
  run->add_flag("--trace", trace, "Also write symbols.bin and symbols.csv");

  CommonOptions sweep_opts;
  unsigned workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Run the cross product of up to two swept keys");
  add_common(sweep, sweep_opts);
  sweep->add_option("--workers", workers, "Concurrent simulations")->check(CLI::PositiveNumber);

  std::optional<int> only;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", only, "Run a single criterion by id");

  CommonOptions spectrum_opts;
  auto* spectrum = app.add_subcommand("spectrum", "Print rho, norms and eigenvalues for a graph");
  add_common(spectrum, spectrum_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, trace);
    if (*sweep) return cmd_sweep(sweep_opts, workers);
    if (*verify) return cmd_verify(only);
    if (*spectrum) return cmd_spectrum(spectrum_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
