#include "zoomcons/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zoomcons/errors.hpp"

#ifndef ZOOMCONS_VERSION
#define ZOOMCONS_VERSION "dev"
#endif

namespace zoomcons {

std::string_view version() { return ZOOMCONS_VERSION; }

namespace {

const std::map<std::string, std::string>& default_entries() {
  static const std::map<std::string, std::string> d{
      {"graph.family", "ring"},      // ring | complete | geometric | file
      {"graph.n", "20"},
      {"graph.radius", "0.5"},
      {"graph.seed", "1"},
      {"graph.file", ""},
      {"matrix.rule", "max_degree"},  // max_degree | file
      {"matrix.file", ""},
      {"params.m", "6"},
      {"params.k_in", "0.9"},   // number, or `<f>rho`
      {"params.k_out", "2"},    // number, or `inv` for 1/k_in
      {"params.l0", "1"},       // number, or `<f>x0` for f * ||x0||
      {"x0.source", "gaussian"},  // gaussian | file | constant
      {"x0.seed", "1"},
      {"x0.file", ""},
      {"x0.value", "1"},
      {"x0.zero_mean", "false"},
      {"x0.normalize", "false"},
      {"run.max_steps", "10000"},
      {"run.tol", ""},  // absolute; empty means run.tol_rel * ||x0||
      {"run.tol_rel", "1e-9"},
      {"run.rate_window", "100"},
      {"run.trace", "false"},
      {"sweep.vary_seeds", "false"},
  };
  return d;
}

constexpr std::string_view kSweepable[] = {"graph.n",   "graph.radius", "graph.seed",
                                           "params.m",  "params.k_in",  "params.k_out",
                                           "params.l0", "x0.seed"};

constexpr std::string_view kSkippedPrefixes[] = {"meta.", "resolved.", "result.", "theorem."};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (out.empty()) out.emplace_back();
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string(key) + ": not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument(std::string(key) + ": not a non-negative integer: '" + s + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << v;
  return s.str();
}

// `<factor><suffix>` such as `0.5rho`; nullopt when the suffix is absent.
std::optional<double> suffixed_factor(std::string_view key, const std::string& text,
                                      std::string_view suffix) {
  if (text.size() < suffix.size() || text.compare(text.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  const auto head = trim(std::string_view(text).substr(0, text.size() - suffix.size()));
  return head.empty() ? 1.0 : parse_double(key, head);
}

std::ifstream open_input(const std::string& key, const std::string& path) {
  if (path.empty()) {
    throw std::invalid_argument(key + " must name a file");
  }
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(key + ": cannot open '" + path + "'");
  }
  return in;
}

std::vector<double> initial_state(const KeyValueConfig& c, std::size_t n) {
  const auto& source = c.get("x0.source");
  std::vector<double> x;
  if (source == "gaussian") {
    std::mt19937_64 rng(c.get_u64("x0.seed"));
    std::normal_distribution<double> normal(0.0, 1.0);
    x.resize(n);
    for (auto& v : x) v = normal(rng);
  } else if (source == "constant") {
    x.assign(n, c.get_double("x0.value"));
  } else if (source == "file") {
    auto in = open_input("x0.file", c.get("x0.file"));
    std::string token;
    while (in >> token) {
      std::istringstream parts(token);
      std::string piece;
      while (std::getline(parts, piece, ',')) {
        if (!trim(piece).empty()) x.push_back(parse_double("x0.file", piece));
      }
    }
    if (x.size() != n) {
      throw std::invalid_argument("x0.file holds " + std::to_string(x.size()) + " values, expected " +
                                  std::to_string(n));
    }
  } else {
    throw std::invalid_argument("x0.source must be gaussian, constant or file");
  }
  if (c.get_bool("x0.zero_mean")) {
    const double ave = mean(x);
    for (auto& v : x) v -= ave;
  }
  if (c.get_bool("x0.normalize")) {
    const double norm = euclidean_norm(x);
    if (norm > 0.0) {
      for (auto& v : x) v /= norm;
    }
  }
  return x;
}

struct GraphChoice {
  Digraph graph;
  std::uint64_t seed;
  std::size_t attempts;
};

GraphChoice build_graph(const KeyValueConfig& c) {
  const auto& family = c.get("graph.family");
  const auto seed = c.get_u64("graph.seed");
  if (family == "ring") return {ring(c.get_u64("graph.n")), seed, 1};
  if (family == "complete") return {complete(c.get_u64("graph.n")), seed, 1};
  if (family == "file") {
    auto in = open_input("graph.file", c.get("graph.file"));
    return {read_edge_list(in), seed, 1};
  }
  if (family == "geometric") {
    const auto n = c.get_u64("graph.n");
    const double radius = c.get_double("graph.radius");
    for (std::size_t attempt = 0; attempt < kMaxGraphAttempts; ++attempt) {
      const auto candidate = attempt == 0 ? seed : derive_seed(seed, attempt);
      auto g = random_geometric(n, radius, candidate);
      if (is_strongly_connected(g)) return {std::move(g), candidate, attempt + 1};
    }
    throw std::invalid_argument("no connected geometric graph within " +
                                std::to_string(kMaxGraphAttempts) + " seeds");
  }
  throw std::invalid_argument("graph.family must be ring, complete, geometric or file");
}

ConsensusMatrix build_matrix(const KeyValueConfig& c, const Digraph& g) {
  const auto& rule = c.get("matrix.rule");
  if (rule == "max_degree") return max_degree_matrix(g);
  if (rule == "file") {
    auto in = open_input("matrix.file", c.get("matrix.file"));
    return custom_matrix(g, read_csv(in));
  }
  throw std::invalid_argument("matrix.rule must be max_degree or file");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

KeyValueConfig KeyValueConfig::defaults() {
  KeyValueConfig c;
  c.values_ = default_entries();
  return c;
}

void KeyValueConfig::set(const std::string& key, std::string value) {
  if (!default_entries().contains(key)) {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
  values_[key] = trim(value);
}

void KeyValueConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("override must look like key=value: '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1)));
}

void KeyValueConfig::parse(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto sep = text.find_first_of("=:");
    if (sep == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(std::string_view(text).substr(0, sep));
    if (std::any_of(std::begin(kSkippedPrefixes), std::end(kSkippedPrefixes),
                    [&](std::string_view p) { return key.starts_with(p); })) {
      continue;
    }
    set(key, text.substr(sep + 1));
  }
}

void KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config '" + path.string() + "'");
  }
  parse(in);
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::invalid_argument("missing config key '" + key + "'");
  }
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const { return parse_double(key, get(key)); }

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const { return parse_u64(key, get(key)); }

bool KeyValueConfig::get_bool(const std::string& key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

void KeyValueConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : values_) out << k << ": " << v << '\n';
}

bool is_sweepable(std::string_view key) {
  return std::find(std::begin(kSweepable), std::end(kSweepable), key) != std::end(kSweepable);
}

std::vector<std::string> ExperimentSpec::axes() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : config.entries()) {
    if (split_list(value).size() < 2) continue;
    if (!is_sweepable(key)) {
      throw std::invalid_argument("key '" + key + "' does not accept a sweep list");
    }
    out.push_back(key);
  }
  if (out.size() > 2) {
    throw std::invalid_argument("at most two swept axes are supported");
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell_index) {
  // splitmix64 finalizer over (base, index).
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (cell_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<KeyValueConfig> ExperimentSpec::cells() const {
  const auto keys = axes();
  std::vector<std::vector<std::string>> lists;
  for (const auto& k : keys) lists.push_back(split_list(config.get(k)));
  std::size_t total = 1;
  for (const auto& l : lists) total *= l.size();
  const bool vary = config.get_bool("sweep.vary_seeds");

  std::vector<KeyValueConfig> out;
  out.reserve(total);
  for (std::size_t cell = 0; cell < total; ++cell) {
    KeyValueConfig c = config;
    std::size_t rest = cell;
    for (std::size_t a = keys.size(); a-- > 0;) {
      c.set(keys[a], lists[a][rest % lists[a].size()]);
      rest /= lists[a].size();
    }
    if (vary) {
      for (const std::string key : {"graph.seed", "x0.seed"}) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
          c.set(key, std::to_string(derive_seed(config.get_u64(key), cell)));
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

ResolvedRun resolve(const KeyValueConfig& c) {
  auto [graph, graph_seed, attempts] = build_graph(c);
  auto matrix = build_matrix(c, graph);
  auto x0 = initial_state(c, graph.size());
  const double x0_norm = euclidean_norm(x0);

  ZoomParams params;
  const auto m = c.get_u64("params.m");
  if (m < 1 || m > static_cast<std::uint64_t>(UniformQuantizer::kMaxLevels)) {
    throw std::invalid_argument("params.m out of range");
  }
  params.m = static_cast<int>(m);
  const auto& k_in = c.get("params.k_in");
  if (auto f = suffixed_factor("params.k_in", k_in, "rho")) {
    params.k_in = *f * matrix.rho();
  } else {
    params.k_in = parse_double("params.k_in", k_in);
  }
  const auto& k_out = c.get("params.k_out");
  params.k_out = k_out == "inv" ? 1.0 / params.k_in : parse_double("params.k_out", k_out);
  const auto& l0 = c.get("params.l0");
  if (auto f = suffixed_factor("params.l0", l0, "x0")) {
    params.l0 = *f * x0_norm;
  } else {
    params.l0 = parse_double("params.l0", l0);
  }
  params.validate();

  double tol = 0.0;
  if (!c.get("run.tol").empty()) {
    tol = c.get_double("run.tol");
  } else {
    tol = c.get_double("run.tol_rel") * (x0_norm > 0.0 ? x0_norm : 1.0);
  }
  const auto window = c.get_u64("run.rate_window");
  if (window == 0) {
    throw std::invalid_argument("run.rate_window must be >= 1");
  }

  SimulationConfig sim{std::move(matrix), params, std::move(x0), c.get_u64("run.max_steps"), tol,
                       c.get_bool("run.trace")};
  sim.validate();
  return ResolvedRun{std::move(graph), graph_seed, attempts, std::move(sim),
                     static_cast<std::size_t>(window)};
}

RunOutcome execute(const KeyValueConfig& config) {
  auto run = resolve(config);
  auto result = run_quantized(run.sim);
  auto cert = check_theorem(run.sim.matrix, run.sim.params, run.sim.x0);
  auto rate = trailing_rate(result.history, run.rate_window);
  return RunOutcome{std::move(run), std::move(result), cert, rate};
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged:
      return 0;
    case RunStatus::kHorizonExhausted:
      return 2;
    case RunStatus::kDiverged:
      return 3;
  }
  return 1;
}

void write_manifest(std::ostream& out, const KeyValueConfig& config, const RunOutcome& o) {
  const auto& sim = o.run.sim;
  const auto& r = o.result;
  out << "meta.version: " << version() << '\n';
  config.write(out);
  out << "resolved.n: " << sim.matrix.size() << '\n'
      << "resolved.graph_edges: " << o.run.graph.edge_count() << '\n'
      << "resolved.graph_seed: " << o.run.graph_seed << '\n'
      << "resolved.graph_attempts: " << o.run.graph_attempts << '\n'
      << "resolved.m: " << sim.params.m << '\n'
      << "resolved.k_in: " << format_double(sim.params.k_in) << '\n'
      << "resolved.k_out: " << format_double(sim.params.k_out) << '\n'
      << "resolved.l0: " << format_double(sim.params.l0) << '\n'
      << "resolved.tol: " << format_double(sim.tol) << '\n'
      << "resolved.x0_norm: " << format_double(euclidean_norm(sim.x0)) << '\n'
      << "resolved.x0_mean: " << format_double(mean(sim.x0)) << '\n'
      << "result.rho: " << format_double(sim.matrix.rho()) << '\n'
      << "result.status: " << to_string(r.status) << '\n'
      << "result.steps: " << r.steps << '\n'
      << "result.zoom_in_count: " << r.zoom_in_count << '\n'
      << "result.zoom_out_count: " << r.zoom_out_count << '\n'
      << "result.final_disagreement: " << format_double(r.history.back().disagreement) << '\n'
      << "result.final_estimate_error: " << format_double(r.history.back().estimate_error) << '\n'
      << "result.rate: " << (o.rate ? format_double(*o.rate) : std::string("undefined")) << '\n'
      << "result.bits_per_symbol: " << format_double(bits_per_symbol(sim.params.m, false)) << '\n';
  write_certificate(out, o.certificate);
}

void write_run_artifacts(const std::filesystem::path& dir, const KeyValueConfig& config,
                         const RunOutcome& o) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(dir / name, mode);
    if (!f) {
      throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return f;
  };
  {
    auto f = open("history.csv");
    write_history_csv(f, o.result.history);
  }
  {
    auto f = open("manifest.txt");
    write_manifest(f, config, o);
  }
  {
    auto f = open("graph.txt");
    write_edge_list(f, o.run.graph);
  }
  {
    auto f = open("matrix.csv");
    write_csv(f, o.run.sim.matrix.perron());
  }
  if (o.run.sim.record_symbols) {
    auto bin = open("symbols.bin", std::ios::out | std::ios::binary);
    write_symbol_trace(bin, o.result.symbols);
    auto csv = open("symbols.csv");
    write_symbol_csv(csv, o.result.symbols, o.run.sim.matrix.size());
  }
}

namespace {

SweepRow run_cell(const KeyValueConfig& cell_config, const std::vector<std::string>& axes,
                  std::size_t cell) {
  SweepRow row;
  row.cell = cell;
  for (const auto& a : axes) row.axis_values.push_back(cell_config.get(a));
  try {
    const auto o = execute(cell_config);
    const auto& r = o.result;
    row.rho = o.run.sim.matrix.rho();
    row.converged = r.status == RunStatus::kConverged;
    if (row.converged) row.steps_to_tol = r.steps;
    row.rate = o.rate;
    const auto symbols = r.zoom_in_count + r.zoom_out_count;
    if (symbols > 0) row.zoom_out_fraction = static_cast<double>(r.zoom_out_count) / static_cast<double>(symbols);
    row.status = std::string(to_string(r.status));
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, unsigned workers) {
  const auto axes = spec.axes();
  const auto cells = spec.cells();
  std::vector<SweepRow> rows(cells.size());
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = run_cell(cells[i], axes, i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = run_cell(cells[i], axes, i);
      });
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<std::string>& axes,
                     const std::vector<SweepRow>& rows) {
  out << "cell";
  for (const auto& a : axes) out << ',' << a;
  out << ",rho,converged,steps_to_tol,rate,zoom_out_fraction,status,error\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    out << r.cell;
    for (const auto& v : r.axis_values) out << ',' << csv_field(v);
    out << ',' << opt(r.rho) << ',' << (r.converged ? 1 : 0) << ','
        << (r.steps_to_tol ? std::to_string(*r.steps_to_tol) : std::string()) << ',' << opt(r.rate) << ','
        << opt(r.zoom_out_fraction) << ',' << r.status << ',' << csv_field(r.error) << '\n';
  }
}

}  // namespace zoomcons
