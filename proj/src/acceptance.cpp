#include "zoomcons/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "zoomcons/analysis.hpp"
#include "zoomcons/codec.hpp"
#include "zoomcons/engine.hpp"
#include "zoomcons/graph.hpp"
#include "zoomcons/matrix.hpp"
#include "zoomcons/quantizer.hpp"

namespace zoomcons {

double ring_circulant_rho(std::size_t n) {
  double rho = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    rho = std::max(rho, std::abs(1.0 - (2.0 / 3.0) * (1.0 - std::cos(angle))));
  }
  return rho;
}

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

std::vector<double> zero_mean_unit(std::size_t n, std::uint64_t seed) {
  auto x = gaussian(n, seed);
  const double ave = mean(x);
  for (auto& v : x) v -= ave;
  const double norm = euclidean_norm(x);
  for (auto& v : x) v /= norm;
  return x;
}

// 1. ring(20) maximum-degree spectral radius.
Verdict spectral_anchor() {
  const auto m = max_degree_matrix(ring(20));
  const double diff = std::abs(m.rho() - 0.9673);
  return {diff <= 5e-4, "rho=" + fmt(m.rho(), 10) + " |rho-0.9673|=" + fmt(diff, 3)};
}

// 2. Quantization error bound fuzz.
Verdict error_bound_fuzz() {
  constexpr int kCases = 100000;
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> levels(1, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  for (int i = 0; i < kCases; ++i) {
    const UniformQuantizer q(levels(rng));
    const double l = 10.0 * (1.0 - unit(rng));  // (0, 10]
    const double z = l * (2.0 * unit(rng) - 1.0);
    const auto e = quantization_error_bound(q, z, l);
    if (!(e.error <= e.bound)) ++violations;
  }
  return {violations == 0,
          std::to_string(kCases) + " cases checked, " + std::to_string(violations) + " violations"};
}

// 3. Zoom-in-only behaviour of a certified configuration on ring(4).
Verdict theorem_regime() {
  const auto matrix = max_degree_matrix(ring(4));
  const double oracle = ring_circulant_rho(4);
  if (std::abs(matrix.rho() - oracle) > 1e-12 || std::abs(oracle - 1.0 / 3.0) > 1e-12) {
    return {false, "rho=" + fmt(matrix.rho(), 17) + " differs from circulant 1/3"};
  }
  const ZoomParams params{132, 0.5, 2.0, 10.5};
  constexpr int kInitialStates = 20;
  std::uint64_t worst_steps = 0;
  double worst_envelope = 0.0;
  for (int s = 0; s < kInitialStates; ++s) {
    auto x0 = zero_mean_unit(4, 300 + static_cast<std::uint64_t>(s));
    const auto cert = check_theorem(matrix, params, x0);
    if (!cert.all_hold) return {false, "certificate rejected seed " + std::to_string(300 + s)};
    const auto r = run_quantized(SimulationConfig{matrix, params, x0, 60, 1e-9});
    if (r.status != RunStatus::kConverged) {
      return {false, "seed " + std::to_string(300 + s) + " did not reach 1e-9 in 60 steps"};
    }
    if (r.zoom_out_count != 0) return {false, "zoom-out observed for seed " + std::to_string(300 + s)};
    const double d1 = r.history.at(1).disagreement;
    for (std::size_t t = 1; t < r.history.size(); ++t) {
      const auto& h = r.history[t];
      const double expected = 10.5 * std::pow(0.5, static_cast<double>(t - 1));
      if (h.l_min != expected || h.l_max != expected) {
        return {false, "scale at t=" + std::to_string(t) + " is not 10.5*0.5^(t-1)"};
      }
      const double envelope = d1 * std::pow(0.51, static_cast<double>(t - 1));
      worst_envelope = std::max(worst_envelope, h.disagreement / envelope);
      if (h.disagreement > envelope) {
        return {false, "disagreement above 0.51^(t-1) envelope at t=" + std::to_string(t)};
      }
    }
    worst_steps = std::max(worst_steps, r.steps);
  }
  return {true, std::to_string(kInitialStates) + " unit zero-mean x0, all_hold, 0 zoom-outs, max steps " +
                    std::to_string(worst_steps) + ", worst d(t)/envelope " + fmt(worst_envelope, 4)};
}

// 4. Average conservation over random configurations.
Verdict average_conservation() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  constexpr int kConfigs = 100;
  double worst = 0.0;
  std::size_t total_steps = 0;
  for (int c = 0; c < kConfigs; ++c) {
    std::optional<Digraph> g;
    if (c % 2 == 0) {
      g = ring(static_cast<std::size_t>(uniform_int(3, 30)));
    } else {
      const auto n = static_cast<std::size_t>(uniform_int(5, 30));
      const double radius = 0.35 + 0.45 * unit(rng);
      const auto base = static_cast<std::uint64_t>(uniform_int(0, 1 << 30));
      for (std::uint64_t a = 0; a < 100 && !g; ++a) {
        auto candidate = random_geometric(n, radius, base + a);
        if (is_strongly_connected(candidate)) g = std::move(candidate);
      }
      if (!g) g = ring(n);
    }
    const auto matrix = max_degree_matrix(*g);
    const ZoomParams params{uniform_int(3, 16), 0.3 + 0.69 * unit(rng), 1.2 + 1.3 * unit(rng),
                            0.5 + 4.5 * unit(rng)};
    const auto x0 = gaussian(g->size(), 5000 + static_cast<std::uint64_t>(c));
    double max_abs = 0.0;
    for (double v : x0) max_abs = std::max(max_abs, std::abs(v));
    const auto r = run_quantized(SimulationConfig{matrix, params, x0, 2000, 1e-9 * euclidean_norm(x0)});
    const double limit = 1e-10 * static_cast<double>(g->size()) * max_abs;
    const double mean0 = r.history.front().x_ave;
    for (const auto& h : r.history) {
      const double drift = std::abs(h.x_ave - mean0);
      worst = std::max(worst, drift / limit);
      if (drift > limit) {
        return {false, "config " + std::to_string(c) + " drifted " + fmt(drift, 3) + " at t=" + std::to_string(h.t)};
      }
    }
    total_steps += r.steps;
  }
  return {true, std::to_string(kConfigs) + " configs, " + std::to_string(total_steps) +
                    " steps, worst drift/limit " + fmt(worst, 3)};
}

// 5. Decoder replicas reproduce the encoder exactly from symbols alone.
Verdict codec_synchrony() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kTrajectories = 100;
  constexpr int kLength = 500;
  std::size_t compared = 0;
  for (int k = 0; k < kTrajectories; ++k) {
    const ZoomParams params{std::uniform_int_distribution<int>(1, 64)(rng), 0.05 + 0.94 * unit(rng),
                            1.05 + 1.95 * unit(rng), std::pow(10.0, -2.0 + 3.0 * unit(rng))};
    const double sigma = std::pow(10.0, -3.0 + 4.0 * unit(rng));
    auto enc = CodecState::initial(params);
    auto dec = enc;
    std::vector<Symbol> stream;
    std::vector<CodecState> sent_states;
    double x = 5.0 * normal(rng);
    for (int t = 0; t < kLength; ++t) {
      x += sigma * normal(rng);
      if (unit(rng) < 0.02) x += 50.0 * sigma * normal(rng);
      auto out = encode_step(enc, params, x);
      enc = out.state;
      stream.push_back(out.symbol);
      sent_states.push_back(enc);
    }
    for (std::size_t t = 0; t < stream.size(); ++t) {
      auto in = decode_step(dec, params, stream[t]);
      dec = in.state;
      if (!(dec == sent_states[t]) || in.estimate != sent_states[t].x_hat) {
        return {false, "trajectory " + std::to_string(k) + " diverged at step " + std::to_string(t + 1)};
      }
      ++compared;
    }
  }
  return {true, std::to_string(kTrajectories) + " trajectories, " + std::to_string(compared) +
                    " states identical"};
}

// 6. m = 1 in the k_in < rho regime.
Verdict coarse_alphabet_regime() {
  const auto matrix = max_degree_matrix(ring(20));
  const ZoomParams params{1, 0.9, 2.0, 1.0};
  int converged = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x0 = gaussian(20, seed);
    const double norm = euclidean_norm(x0);
    const auto r = run_quantized(SimulationConfig{matrix, params, x0, 5000, 1e-6 * norm});
    if (r.status == RunStatus::kConverged) {
      ++converged;
    } else {
      detail << " seed" << seed << ":" << to_string(r.status) << "@t=" << r.steps;
    }
  }
  return {converged == 10, std::to_string(converged) + "/10 runs reached 1e-6*||x0||" + detail.str()};
}

// 7. Two regimes around k_in = rho.
Verdict threshold_sweep() {
  const auto matrix = max_degree_matrix(ring(20));
  bool ok = true;
  std::ostringstream detail;
  detail << "rho=" << fmt(matrix.rho(), 5);
  for (double k_in : {0.90, 0.93, 0.98, 0.99}) {
    const bool pinned_expected = k_in > matrix.rho();
    detail << " k_in=" << k_in << ":";
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto x0 = gaussian(20, seed);
      const auto r = run_quantized(
          SimulationConfig{matrix, ZoomParams{6, k_in, 2.0, 1.0}, x0, 20000, 1e-9 * euclidean_norm(x0)});
      const auto rate = trailing_rate(r.history, 100);
      if (!rate) {
        ok = false;
        detail << "undefined";
        continue;
      }
      const bool pinned = std::abs(*rate - k_in) <= 0.01;
      ok = ok && (pinned == pinned_expected);
      detail << (seed > 1 ? "," : "") << fmt(*rate, 4);
    }
  }
  return {ok, detail.str()};
}

// 8. Alphabet size and bit accounting.
Verdict alphabet_accounting() {
  for (int m = 1; m <= 64; ++m) {
    const UniformQuantizer q(m);
    const auto a = q.alphabet();
    if (a.size() != static_cast<std::size_t>(m) + 2 || q.alphabet_size() != a.size()) {
      return {false, "alphabet size wrong for m=" + std::to_string(m)};
    }
  }
  const double b3 = bits_per_symbol(3, true);
  const double b1 = bits_per_symbol(1, true);
  return {b3 == 2.0 && b1 == 1.0,
          "|S_m|=m+2 for m in [1,64]; bits(3,silence)=" + fmt(b3) + " bits(1,silence)=" + fmt(b1)};
}

// 9. Ideal baseline rate against the circulant spectrum.
Verdict ideal_baseline() {
  const auto matrix = max_degree_matrix(ring(4));
  const double oracle = ring_circulant_rho(4);
  const auto x0 = zero_mean_unit(4, 9);
  const auto r = run_ideal(matrix, x0, 51, 0.0);
  const auto rate = estimate_rate(r.history, 50);
  if (!rate) return {false, "disagreement reached zero inside the window"};
  const double diff = std::abs(*rate - oracle);
  return {diff <= 0.01, "rate=" + fmt(*rate, 10) + " oracle rho=" + fmt(oracle, 10)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<Verdict()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "spectral anchor ring(20) rho = 0.9673 +/- 5e-4", 1.0, spectral_anchor},
      {2, "quantization error bound fuzz (1e5 cases)", 5.0, error_bound_fuzz},
      {3, "certified ring(4) run: zoom-in only, rate <= k_in", 1.0, theorem_regime},
      {4, "average conservation over 100 random configs", 30.0, average_conservation},
      {5, "codec synchrony over 100 trajectories", 5.0, codec_synchrony},
      {6, "ring(20) m=1 k_in=0.9 k_out=2 converges (10 seeds)", 10.0, coarse_alphabet_regime},
      {7, "ring(20) m=6 two-regime rate structure around rho", 30.0, threshold_sweep},
      {8, "alphabet size m+2 and bit accounting", 1.0, alphabet_accounting},
      {9, "ideal baseline ring(4) rate 1/3 +/- 0.01", 1.0, ideal_baseline},
  };
  return all;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::optional<int> only) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (only && *only != c.id) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.time_limit = c.time_limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto v = c.check();
      r.passed = v.passed;
      r.detail = v.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.time_limit) {
      r.passed = false;
      r.detail += " (exceeded time limit " + fmt(r.time_limit) + " s)";
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool print_acceptance_report(std::ostream& out, const std::vector<CriterionResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "  (" << std::fixed
        << std::setprecision(3) << r.seconds << " s)\n"
        << std::defaultfloat << "      " << r.detail << '\n';
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << passed << '/' << results.size() << " criteria passed\n";
  return all;
}

}  // namespace zoomcons
