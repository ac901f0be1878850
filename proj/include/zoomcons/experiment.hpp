#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zoomcons/analysis.hpp"
#include "zoomcons/engine.hpp"
#include "zoomcons/graph.hpp"

namespace zoomcons {

std::string_view version();

/// Flat namespaced key/value configuration (`graph.family`, `params.k_in`,
/// ...). Lines are `key = value` or `key: value`; `#` starts a comment.
/// Only known keys are accepted; keys under `meta.`, `resolved.`, `result.`
/// and `theorem.` are skipped when parsing so a run manifest can be loaded
/// back as a config.
class KeyValueConfig {
 public:
  /// Every known key with its default value.
  static KeyValueConfig defaults();

  void parse(std::istream& in);
  void load(const std::filesystem::path& path);

  /// Throws std::invalid_argument for unknown keys.
  void set(const std::string& key, std::string value);
  /// `key=value`.
  void apply_override(std::string_view assignment);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

  /// `key: value` lines in key order.
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Keys that may carry a comma-separated sweep list.
bool is_sweepable(std::string_view key);

/// A configuration possibly carrying sweep lists on up to two axes.
struct ExperimentSpec {
  KeyValueConfig config;

  /// Swept keys (those whose value lists more than one entry), in key order.
  /// Throws std::invalid_argument if more than two axes are swept or a list
  /// sits on a key that cannot be swept.
  std::vector<std::string> axes() const;

  /// Cross product of the axes, first axis outermost. With
  /// `sweep.vary_seeds = true`, unswept graph/x0 seeds are derived from the
  /// base seeds and the cell index.
  std::vector<KeyValueConfig> cells() const;
};

/// Deterministic per-cell seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell_index);

/// Scalar config turned into concrete objects.
struct ResolvedRun {
  Digraph graph;
  std::uint64_t graph_seed = 0;
  std::size_t graph_attempts = 1;
  SimulationConfig sim;
  std::size_t rate_window = 100;
};

/// Builds graph, matrix, x0 and parameters. A geometric sample that is not
/// strongly connected is redrawn with derive_seed(seed, 1), derive_seed(seed,
/// 2), ..., at most kMaxGraphAttempts draws in all. Throws
/// std::invalid_argument (or InfeasibleParameters) on a bad config.
ResolvedRun resolve(const KeyValueConfig& config);

inline constexpr std::size_t kMaxGraphAttempts = 100;

struct RunOutcome {
  ResolvedRun run;
  SimulationResult result;
  TheoremCertificate certificate;
  std::optional<double> rate;
};

RunOutcome execute(const KeyValueConfig& config);

/// 0 converged, 2 horizon exhausted, 3 diverged.
int exit_code(RunStatus status);

/// history.csv, manifest.txt, graph.txt, matrix.csv and, when `run.trace`
/// is set, symbols.bin / symbols.csv.
void write_run_artifacts(const std::filesystem::path& dir, const KeyValueConfig& config,
                         const RunOutcome& outcome);

void write_manifest(std::ostream& out, const KeyValueConfig& config, const RunOutcome& outcome);

struct SweepRow {
  std::size_t cell = 0;
  std::vector<std::string> axis_values;
  std::optional<double> rho;
  bool converged = false;
  std::optional<std::uint64_t> steps_to_tol;
  std::optional<double> rate;
  std::optional<double> zoom_out_fraction;
  std::string status;
  std::string error;
};

/// Runs every cell; failures are recorded in the row. Rows are returned in
/// cell order whatever the worker count.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned workers = 1);

/// Header `cell,<axes...>,rho,converged,steps_to_tol,rate,zoom_out_fraction,status,error`.
void write_sweep_csv(std::ostream& out, const std::vector<std::string>& axes,
                     const std::vector<SweepRow>& rows);

}  // namespace zoomcons
