#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include "zoomcons/codec.hpp"
#include "zoomcons/matrix.hpp"

namespace zoomcons {

/// Relative slack applied to the level-count bound before comparing or
/// rounding up, so thresholds that are exact in real arithmetic are not
/// pushed to the next integer by round-off.
inline constexpr double kThresholdRelativeSlack = 1e-12;

/// Evaluation of the sufficient conditions for zoom-in-only convergence:
///   rate:  rho < k_in < 1
///   m:     m >= (4 + 3 k_in) sqrt(n) / (k_in (k_in - rho))
///   l0:    l0 > 2 (rho + 2) ||x0|| / (k_in - 3 sqrt(n) / m)
/// with ||x0|| the Euclidean norm. k_out plays no role: under these
/// conditions no zoom-out ever happens.
struct TheoremCertificate {
  double rho = 0.0;
  std::size_t n = 0;
  ZoomParams params;
  double x0_norm = 0.0;

  bool cond_rate = false;
  bool cond_m = false;
  bool cond_l0 = false;
  bool all_hold = false;

  /// Right-hand side of the m bound; absent when k_in <= rho.
  std::optional<double> m_threshold;
  /// Right-hand side of the l0 bound; absent when k_in - 3 sqrt(n)/m <= 0.
  std::optional<double> l0_threshold;

  /// min(k_in - rho, 1 - k_in); positive iff cond_rate.
  double rate_margin = 0.0;
  /// m - m_threshold.
  std::optional<double> m_margin;
  /// l0 - l0_threshold.
  std::optional<double> l0_margin;
};

TheoremCertificate check_theorem(const ConsensusMatrix& matrix, const ZoomParams& params,
                                 std::span<const double> x0);
TheoremCertificate check_theorem(double rho, std::size_t n, const ZoomParams& params,
                                 double x0_norm);

/// Smallest integer m meeting the level-count bound. Throws
/// std::invalid_argument unless rho < k_in < 1 and n >= 1.
int min_m(double rho, double k_in, std::size_t n);

/// Right-hand side of the l0 bound. Throws InfeasibleParameters when
/// k_in - 3 sqrt(n)/m <= 0.
double min_l0(double rho, double k_in, int m, std::size_t n, double x0_norm);

/// log2(m + 2), or log2(m + 1) when the zero level of an odd m is sent as
/// silence. Throws std::invalid_argument for the silence trick with even m.
double bits_per_symbol(int m, bool zero_as_silence);

/// `key: value` lines, prefixed with `theorem.`.
void write_certificate(std::ostream& out, const TheoremCertificate& cert);

}  // namespace zoomcons
