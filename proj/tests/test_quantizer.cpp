#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "zoomcons/errors.hpp"
#include "zoomcons/quantizer.hpp"

using namespace zoomcons;
using doctest::Approx;

namespace {

// Nearest-level reference: closest interior level, ties broken upward;
// saturate only beyond [-1, 1].
double reference_quantize(int m, double x) {
  if (x > 1.0) return 1.0;
  if (x < -1.0) return -1.0;
  double best = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= m; ++l) {
    const double v = -1.0 + (2.0 * l - 1.0) / m;
    const double d = std::abs(x - v);
    if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && v > best)) {
      best = v;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(UniformQuantizer(6).quantize(0.4) == Approx(0.5));
  CHECK(UniformQuantizer(6).quantize(1.5) == 1.0);
  CHECK(UniformQuantizer(6).quantize(-1.5) == -1.0);
  CHECK(UniformQuantizer(2).quantize(0.3) == Approx(0.5));
  CHECK(UniformQuantizer(5).quantize(0.0) == 0.0);
  CHECK(UniformQuantizer(1).quantize(0.9) == 0.0);
  CHECK(UniformQuantizer(1).quantize(-0.9) == 0.0);
}

TEST_CASE("boundaries: |x| == 1 does not saturate") {
  for (int m = 1; m <= 20; ++m) {
    const UniformQuantizer q(m);
    CHECK(q.quantize(1.0) == Approx(1.0 - 1.0 / m));
    CHECK(q.quantize(-1.0) == Approx(-1.0 + 1.0 / m));
    CHECK(q.quantize(std::nextafter(1.0, 2.0)) == 1.0);
    CHECK(q.quantize(std::nextafter(-1.0, -2.0)) == -1.0);
    CHECK_FALSE(q.saturated(q.encode(1.0)));
    CHECK(q.saturated(q.encode(1.0 + 1e-9)));
  }
}

TEST_CASE("alphabet and symbol indices") {
  const UniformQuantizer q(4);
  const std::vector<double> expected{-1.0, -0.75, -0.25, 0.25, 0.75, 1.0};
  const auto a = q.alphabet();
  REQUIRE(a.size() == expected.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(expected[i]));
  CHECK(q.symbol_index(-1.0).index == 0);
  CHECK(q.symbol_index(1.0).index == 5);
  CHECK(q.symbol_index(0.25).index == 3);
  CHECK_THROWS_AS(q.symbol_index(0.3), std::invalid_argument);
  CHECK_THROWS_AS(q.value(Symbol{6}), std::invalid_argument);
}

TEST_CASE("symbol index is a bijection onto [0, m+1]") {
  for (int m = 1; m <= 64; ++m) {
    const UniformQuantizer q(m);
    CHECK(q.alphabet_size() == static_cast<std::size_t>(m) + 2);
    const auto a = q.alphabet();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Symbol s = q.symbol_index(a[i]);
      CHECK(s.index == i);
      CHECK(q.value(s) == a[i]);
      if (i > 0) CHECK(a[i - 1] < a[i]);
    }
  }
}

TEST_CASE("matches a nearest-level reference away from bin edges") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-1.3, 1.3);
  for (int trial = 0; trial < 20000; ++trial) {
    const int m = 1 + trial % 40;
    const double v = x(rng);
    CHECK(UniformQuantizer(m).quantize(v) == Approx(reference_quantize(m, v)).epsilon(1e-12));
  }
}

TEST_CASE("bins are half-open [lower, upper)") {
  const UniformQuantizer q(4);
  // edges of interior bins at -0.5, 0, 0.5
  CHECK(q.quantize(0.0) == Approx(0.25));
  CHECK(q.quantize(-1e-12) == Approx(-0.25));
  CHECK(q.quantize(0.5) == Approx(0.75));
  CHECK(q.quantize(-0.5) == Approx(-0.25));
}

TEST_CASE("error bound property |z - l q(z/l)| <= l/m for |z| <= l") {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<int> levels(1, 256);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-6.0, 6.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const UniformQuantizer q(levels(rng));
    const double l = std::pow(10.0, log_scale(rng));
    const double z = l * unit(rng);
    const auto e = quantization_error_bound(q, z, l);
    CHECK(e.error <= e.bound * (1.0 + 1e-12));
    CHECK(e.bound == Approx(l / q.levels()));
  }
  // endpoints
  for (int m = 1; m <= 10; ++m) {
    const UniformQuantizer q(m);
    CHECK(quantization_error_bound(q, 3.0, 3.0).error <= 3.0 / m * (1 + 1e-12));
    CHECK(quantization_error_bound(q, -3.0, 3.0).error <= 3.0 / m * (1 + 1e-12));
  }
}

TEST_CASE("monotone, odd away from bin edges, idempotent on interior levels") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const UniformQuantizer q(1 + trial % 17);
    double a = x(rng);
    double b = x(rng);
    if (a > b) std::swap(a, b);
    CHECK(q.quantize(a) <= q.quantize(b));
    const double qa = q.quantize(a);
    if (std::abs(qa) < 1.0) CHECK(q.quantize(qa) == qa);
    // odd symmetry holds off the bin edges, which sit at -1 + 2k/m
    const double edge_pos = (a + 1.0) * q.levels() / 2.0;
    if (std::abs(edge_pos - std::round(edge_pos)) > 1e-9) CHECK(q.quantize(-a) == Approx(-qa));
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(UniformQuantizer(0), std::invalid_argument);
  CHECK_THROWS_AS(UniformQuantizer(-3), std::invalid_argument);
  CHECK_THROWS_AS(UniformQuantizer(UniformQuantizer::kMaxLevels + 1), std::invalid_argument);
  CHECK_NOTHROW(UniformQuantizer(UniformQuantizer::kMaxLevels));
  const UniformQuantizer q(3);
  CHECK_THROWS_AS(q.quantize(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(q.quantize(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(quantization_error_bound(q, 2.0, 1.0), PreconditionViolation);
  CHECK_THROWS_AS(quantization_error_bound(q, 0.0, 0.0), std::invalid_argument);
}
