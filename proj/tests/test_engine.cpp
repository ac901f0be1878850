#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "zoomcons/analysis.hpp"
#include "zoomcons/engine.hpp"

using namespace zoomcons;
using doctest::Approx;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed, bool zero_mean_unit) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  if (zero_mean_unit) {
    const double mu = mean(x);
    for (auto& v : x) v -= mu;
    const double norm = euclidean_norm(x);
    for (auto& v : x) v /= norm;
  }
  return x;
}

SimulationConfig make_config(const Digraph& g, ZoomParams p, std::vector<double> x0,
                             std::uint64_t steps, double tol) {
  return SimulationConfig{max_degree_matrix(g), p, std::move(x0), steps, tol, false};
}

std::vector<StepMetrics> geometric_history(double r, std::size_t len) {
  std::vector<StepMetrics> h(len);
  for (std::size_t t = 0; t < len; ++t) {
    h[t].t = t;
    h[t].disagreement = std::pow(r, static_cast<double>(t));
  }
  return h;
}

}  // namespace

TEST_CASE("consensus initial state is converged at t = 0") {
  const auto r = run_quantized(make_config(ring(6), {}, std::vector<double>(6, 3.5), 100, 1e-9));
  CHECK(r.status == RunStatus::kConverged);
  CHECK(r.steps == 0);
  CHECK(r.history.size() == 1);
  CHECK(r.history[0].x_ave == 3.5);
}

TEST_CASE("certified ring(4) run zooms in only and converges") {
  const ZoomParams p{132, 0.5, 2.0, 10.5};
  const auto x0 = gaussian(4, 300, true);
  const auto cfg = make_config(ring(4), p, x0, 200, 1e-9);
  REQUIRE(check_theorem(cfg.matrix, p, x0).all_hold);
  const auto r = run_quantized(cfg);
  CHECK(r.status == RunStatus::kConverged);
  CHECK(r.zoom_out_count == 0);
  CHECK(r.steps <= 60);
  for (std::size_t t = 1; t < r.history.size(); ++t) {
    const double l = p.l0 * std::pow(p.k_in, static_cast<double>(t - 1));
    CHECK(r.history[t].l_max == Approx(l).epsilon(1e-12));
    CHECK(r.history[t].l_min == Approx(l).epsilon(1e-12));
  }
  // whole-run contraction; short windows fluctuate around the envelope
  const auto rate = estimate_rate(r.history, r.history.size() - 1);
  REQUIRE(rate);
  CHECK(*rate <= p.k_in + 0.01);
}

TEST_CASE("one level with aggressive zoom-out runs away") {
  const ZoomParams p{1, 0.9, 2.0, 1.0};
  const auto r = run_quantized(make_config(ring(20), p, gaussian(20, 1, false), 5000, 1e-6));
  CHECK(r.status == RunStatus::kDiverged);
  CHECK(r.history.back().l_max > kDivergenceScaleRatio * p.l0);
}

TEST_CASE("run_ideal") {
  SUBCASE("mean is preserved") {
    const auto x0 = gaussian(20, 3, false);
    const auto r = run_ideal(max_degree_matrix(ring(20)), x0, 300, 0.0);
    for (const auto& h : r.history) CHECK(h.x_ave == Approx(mean(x0)).epsilon(1e-12));
    CHECK(r.status == RunStatus::kHorizonExhausted);
    CHECK(r.history.back().l_max == 0.0);
  }
  SUBCASE("ring(4) contracts by exactly 1/3") {
    const auto x0 = gaussian(4, 9, true);
    const auto r = run_ideal(max_degree_matrix(ring(4)), x0, 30, 0.0);
    for (std::size_t t = 1; t < r.history.size(); ++t) {
      CHECK(r.history[t].disagreement / r.history[t - 1].disagreement == Approx(1.0 / 3.0).epsilon(1e-9));
    }
  }
  SUBCASE("averaging matrix reaches consensus in one step") {
    const auto m = custom_matrix(complete(5), Matrix::Constant(5, 5, 0.2));
    const auto r = run_ideal(m, gaussian(5, 4, false), 10, 1e-12);
    CHECK(r.status == RunStatus::kConverged);
    CHECK(r.steps == 1);
  }
}

TEST_CASE("estimate_rate") {
  const auto h = geometric_history(0.9, 200);
  CHECK(*estimate_rate(h, 100) == Approx(0.9).epsilon(1e-12));
  CHECK(*estimate_rate(h, 1) == Approx(0.9).epsilon(1e-12));

  const auto ideal = run_ideal(max_degree_matrix(ring(4)), gaussian(4, 9, true), 51, 0.0);
  CHECK(*estimate_rate(ideal.history, 50) == Approx(1.0 / 3.0).epsilon(1e-6));

  auto zero = geometric_history(0.5, 20);
  zero[15].disagreement = 0.0;
  CHECK_FALSE(estimate_rate(zero, 10).has_value());
  CHECK(estimate_rate(zero, 3).has_value());

  CHECK_THROWS_AS(estimate_rate(h, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_rate(h, 200), std::invalid_argument);
  CHECK(*trailing_rate(h, 1000) == Approx(0.9).epsilon(1e-12));
  CHECK_FALSE(trailing_rate(std::span<const StepMetrics>(h.data(), 1), 10).has_value());
}

TEST_CASE("vector helpers") {
  const std::vector<double> x{1.0, 2.0, 3.0, 6.0};
  CHECK(mean(x) == 3.0);
  CHECK(euclidean_norm(x) == Approx(std::sqrt(50.0)));
  CHECK(disagreement(x) == Approx(std::sqrt(4.0 + 1.0 + 0.0 + 9.0)));
  CHECK(disagreement(std::vector<double>(3, 2.0)) == 0.0);
}

TEST_CASE("quantized dynamics conserve the average") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> levels(1, 12);
  std::uniform_real_distribution<double> kin(0.3, 0.99);
  std::uniform_real_distribution<double> kout(1.2, 2.5);
  for (int c = 0; c < 30; ++c) {
    const auto g = c % 2 == 0 ? ring(5 + static_cast<std::size_t>(c)) : complete(3 + static_cast<std::size_t>(c % 7));
    const ZoomParams p{levels(rng), kin(rng), kout(rng), 1.0};
    const auto x0 = gaussian(g.size(), 1000 + static_cast<std::uint64_t>(c), false);
    const auto r = run_quantized(make_config(g, p, x0, 500, 1e-9));
    const double scale = 1.0 + euclidean_norm(x0);
    for (const auto& h : r.history) {
      if (h.l_max > 1e6) break;  // runaway trajectories lose relative precision
      CHECK(std::abs(h.x_ave - mean(x0)) <= 1e-12 * scale * std::max(1.0, h.l_max));
    }
  }
}

TEST_CASE("disagreement and estimate error vanish together") {
  // At convergence the estimate error is within a small factor of the
  // tolerance; runaway runs keep both large.
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> levels(1, 10);
  std::uniform_real_distribution<double> kin(0.3, 0.99);
  std::uniform_real_distribution<double> kout(1.1, 2.5);
  int converged = 0;
  int diverged = 0;
  for (int c = 0; c < 60; ++c) {
    const ZoomParams p{levels(rng), kin(rng), kout(rng), 1.0};
    const auto x0 = gaussian(8, 2000 + static_cast<std::uint64_t>(c), false);
    const double tol = 1e-9 * euclidean_norm(x0);
    const auto r = run_quantized(make_config(ring(8), p, x0, 3000, tol));
    const auto& last = r.history.back();
    if (r.status == RunStatus::kConverged) {
      ++converged;
      CHECK(last.estimate_error <= 10.0 * tol);
    } else if (r.status == RunStatus::kDiverged) {
      ++diverged;
      CHECK(last.estimate_error > 10.0 * tol);
      CHECK(last.disagreement > 10.0 * tol);
    }
  }
  CHECK(converged > 0);
}

TEST_CASE("runs are deterministic and record one symbol per agent per tick") {
  const ZoomParams p{4, 0.95, 1.5, 2.0};
  auto cfg = make_config(ring(10), p, gaussian(10, 8, false), 400, 1e-9);
  cfg.record_symbols = true;
  const auto a = run_quantized(cfg);
  const auto b = run_quantized(cfg);
  CHECK(a.symbols == b.symbols);
  CHECK(a.x == b.x);
  CHECK(a.symbols.size() == a.steps * 10);
  CHECK(a.zoom_in_count + a.zoom_out_count == a.steps * 10);
  std::uint64_t outs = 0;
  for (const auto& h : a.history) outs += h.zoom_outs;
  CHECK(outs == a.zoom_out_count);
}

TEST_CASE("network exposes synchronized decoders") {
  const ZoomParams p{5, 0.9, 2.0, 1.0};
  QuantizedNetwork net(make_config(ring(6), p, gaussian(6, 2, false), 100, 1e-9));
  CHECK(net.time() == 0);
  std::vector<Symbol> out;
  for (int k = 0; k < 25; ++k) net.step(&out);
  CHECK(net.time() == 25);
  CHECK(out.size() == 6 * 25);
  const auto est = net.estimates();
  for (std::size_t i = 0; i < 6; ++i) CHECK(est[i] == net.codecs()[i].x_hat);
}

TEST_CASE("configurations meeting the theorem never zoom out") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> frac(0.1, 0.9);
  std::uniform_real_distribution<double> slack(1.001, 3.0);
  int tested = 0;
  for (int c = 0; c < 24; ++c) {
    const auto g = c % 3 == 0 ? complete(2 + static_cast<std::size_t>(c % 5)) : ring(3 + static_cast<std::size_t>(c % 4));
    const auto matrix = max_degree_matrix(g);
    const double k_in = matrix.rho() + (1.0 - matrix.rho()) * frac(rng);
    const int m = min_m(matrix.rho(), k_in, g.size());
    if (m > 20000) continue;
    const auto x0 = gaussian(g.size(), 4000 + static_cast<std::uint64_t>(c), false);
    const double l0 = min_l0(matrix.rho(), k_in, m, g.size(), euclidean_norm(x0)) * slack(rng);
    const ZoomParams p{m, k_in, 2.0, l0};
    const SimulationConfig cfg{matrix, p, x0, 2000, 1e-9 * euclidean_norm(x0), false};
    REQUIRE(check_theorem(matrix, p, x0).all_hold);
    const auto r = run_quantized(cfg);
    ++tested;
    CHECK(r.zoom_out_count == 0);
    CHECK(r.status == RunStatus::kConverged);
    for (const auto& h : r.history) {
      if (h.t == 0) continue;
      CHECK(h.l_max == Approx(l0 * std::pow(k_in, static_cast<double>(h.t - 1))).epsilon(1e-9));
    }
  }
  CHECK(tested >= 12);
}

TEST_CASE("config validation") {
  const auto m = max_degree_matrix(ring(4));
  CHECK_THROWS_AS((SimulationConfig{m, {}, std::vector<double>(3, 0.0)}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SimulationConfig{m, {}, std::vector<double>(4, 0.0), 0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SimulationConfig{m, {}, std::vector<double>(4, 0.0), 10, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SimulationConfig{m, {}, {1.0, std::nan(""), 0.0, 0.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(run_quantized(SimulationConfig{m, {}, std::vector<double>(3, 0.0)}), std::invalid_argument);
}

TEST_CASE("history CSV") {
  std::vector<StepMetrics> h{{0, 2.0, 1.0, 0.0, 0.0, 0, 0.5}, {1, 1.0, 0.5, 1.0, 1.0, 2, 0.5}};
  std::ostringstream out;
  write_history_csv(out, h);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,disagreement,estimate_error,l_min,l_max,zoom_outs,x_ave");
  std::getline(in, line);
  CHECK(line.rfind("0,2,1,0,0,0,0.5", 0) == 0);
  CHECK(to_string(RunStatus::kConverged) == "converged");
  CHECK(to_string(RunStatus::kHorizonExhausted) == "horizon_exhausted");
  CHECK(to_string(RunStatus::kDiverged) == "diverged");
}
