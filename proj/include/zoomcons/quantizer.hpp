#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace zoomcons {

/// Wire form of a quantizer output: its rank in the sorted alphabet,
/// 0 for the -1 saturation value up to m + 1 for +1.
struct Symbol {
  std::uint16_t index = 0;

  auto operator<=>(const Symbol&) const = default;
};

/// Uniform quantizer on [-1, 1] with m interior levels -1 + (2l - 1)/m,
/// l = 1..m, plus the saturation values -1 and +1 (m + 2 symbols in all).
///
/// Bins are half-open, [lower, upper), except the top bin, which is closed
/// at 1. Inputs with |x| == 1 map to the outermost interior level; only
/// |x| > 1 saturates.
class UniformQuantizer {
 public:
  static constexpr int kMaxLevels = 65534;

  /// Throws std::invalid_argument unless 1 <= m <= kMaxLevels.
  explicit UniformQuantizer(int m);

  int levels() const { return m_; }
  std::size_t alphabet_size() const { return static_cast<std::size_t>(m_) + 2; }

  /// Interior level l in [1, m].
  double level(int l) const;

  /// All m + 2 output values, strictly increasing.
  std::vector<double> alphabet() const;

  /// Throws std::invalid_argument on non-finite x.
  double quantize(double x) const;
  Symbol encode(double x) const;

  /// Throws std::invalid_argument if `value` is not an alphabet member.
  Symbol symbol_index(double value) const;

  bool contains(Symbol s) const { return s.index <= m_ + 1; }
  /// Throws std::invalid_argument if the symbol is outside the alphabet.
  double value(Symbol s) const;
  bool saturated(Symbol s) const { return s.index == 0 || s.index == m_ + 1; }

 private:
  int m_;
};

struct QuantizationError {
  double error = 0.0;  // |z - l q(z / l)|
  double bound = 0.0;  // l / m
};

/// Reconstruction error of z at scale l against the l/m bound. Throws
/// PreconditionViolation when |z| > l and std::invalid_argument when l <= 0.
QuantizationError quantization_error_bound(const UniformQuantizer& q, double z, double l);

}  // namespace zoomcons
