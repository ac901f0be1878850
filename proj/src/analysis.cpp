#include "zoomcons/analysis.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "zoomcons/engine.hpp"
#include "zoomcons/errors.hpp"

namespace zoomcons {

namespace {

double m_bound(double rho, double k_in, std::size_t n) {
  return (4.0 + 3.0 * k_in) * std::sqrt(static_cast<double>(n)) / (k_in * (k_in - rho));
}

std::optional<double> l0_bound(double rho, double k_in, int m, std::size_t n, double x0_norm) {
  const double denom = k_in - 3.0 * std::sqrt(static_cast<double>(n)) / static_cast<double>(m);
  if (!(denom > 0.0)) return std::nullopt;
  return 2.0 * (rho + 2.0) * x0_norm / denom;
}

}  // namespace

TheoremCertificate check_theorem(double rho, std::size_t n, const ZoomParams& params,
                                 double x0_norm) {
  TheoremCertificate c;
  c.rho = rho;
  c.n = n;
  c.params = params;
  c.x0_norm = x0_norm;

  c.cond_rate = rho < params.k_in && params.k_in < 1.0;
  c.rate_margin = std::min(params.k_in - rho, 1.0 - params.k_in);
  if (params.k_in > rho) {
    c.m_threshold = m_bound(rho, params.k_in, n);
    c.m_margin = params.m - *c.m_threshold;
    c.cond_m = params.m >= *c.m_threshold * (1.0 - kThresholdRelativeSlack);
  }
  c.l0_threshold = l0_bound(rho, params.k_in, params.m, n, x0_norm);
  if (c.l0_threshold) {
    c.l0_margin = params.l0 - *c.l0_threshold;
    c.cond_l0 = params.l0 > *c.l0_threshold;
  }
  c.all_hold = c.cond_rate && c.cond_m && c.cond_l0;
  return c;
}

TheoremCertificate check_theorem(const ConsensusMatrix& matrix, const ZoomParams& params,
                                 std::span<const double> x0) {
  return check_theorem(matrix.rho(), matrix.size(), params, euclidean_norm(x0));
}

int min_m(double rho, double k_in, std::size_t n) {
  if (!(rho < k_in && k_in < 1.0) || rho < 0.0) {
    throw std::invalid_argument("min_m requires 0 <= rho < k_in < 1");
  }
  if (n == 0) {
    throw std::invalid_argument("min_m requires n >= 1");
  }
  const double bound = m_bound(rho, k_in, n) * (1.0 - kThresholdRelativeSlack);
  if (bound > static_cast<double>(std::numeric_limits<int>::max())) {
    throw std::invalid_argument("level-count bound exceeds the integer range");
  }
  return std::max(1, static_cast<int>(std::ceil(bound)));
}

double min_l0(double rho, double k_in, int m, std::size_t n, double x0_norm) {
  if (m < 1) {
    throw std::invalid_argument("min_l0 requires m >= 1");
  }
  const auto bound = l0_bound(rho, k_in, m, n, x0_norm);
  if (!bound) {
    throw InfeasibleParameters("k_in - 3 sqrt(n)/m must be positive");
  }
  return *bound;
}

double bits_per_symbol(int m, bool zero_as_silence) {
  if (m < 1) {
    throw std::invalid_argument("bits_per_symbol requires m >= 1");
  }
  if (zero_as_silence) {
    if (m % 2 == 0) {
      throw std::invalid_argument("even m has no zero level to send as silence");
    }
    return std::log2(static_cast<double>(m + 1));
  }
  return std::log2(static_cast<double>(m + 2));
}

void write_certificate(std::ostream& out, const TheoremCertificate& c) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  auto opt = [&s](const std::optional<double>& v) -> std::ostream& {
    if (v) {
      s << *v;
    } else {
      s << "none";
    }
    return s;
  };
  s << "theorem.rho: " << c.rho << '\n'
    << "theorem.n: " << c.n << '\n'
    << "theorem.m: " << c.params.m << '\n'
    << "theorem.k_in: " << c.params.k_in << '\n'
    << "theorem.l0: " << c.params.l0 << '\n'
    << "theorem.x0_norm: " << c.x0_norm << '\n'
    << "theorem.cond_rate: " << std::boolalpha << c.cond_rate << '\n'
    << "theorem.rate_margin: " << c.rate_margin << '\n'
    << "theorem.cond_m: " << c.cond_m << '\n'
    << "theorem.m_threshold: ";
  opt(c.m_threshold) << '\n' << "theorem.m_margin: ";
  opt(c.m_margin) << '\n' << "theorem.cond_l0: " << c.cond_l0 << '\n' << "theorem.l0_threshold: ";
  opt(c.l0_threshold) << '\n' << "theorem.l0_margin: ";
  opt(c.l0_margin) << '\n'
                   << "theorem.all_hold: " << c.all_hold << '\n'
                   << "theorem.k_out_note: k_out is not constrained (no zoom-out under these conditions)\n";
  out << s.str();
}

}  // namespace zoomcons
