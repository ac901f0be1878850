#include "zoomcons/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zoomcons/errors.hpp"

namespace zoomcons {

UniformQuantizer::UniformQuantizer(int m) : m_(m) {
  if (m < 1 || m > kMaxLevels) {
    throw std::invalid_argument("quantizer level count out of range: " + std::to_string(m));
  }
}

double UniformQuantizer::level(int l) const {
  // (2l - 1 - m)/m rather than -1 + (2l - 1)/m: exact symmetry, exact zero.
  return static_cast<double>(2 * l - 1 - m_) / static_cast<double>(m_);
}

std::vector<double> UniformQuantizer::alphabet() const {
  std::vector<double> out;
  out.reserve(alphabet_size());
  out.push_back(-1.0);
  for (int l = 1; l <= m_; ++l) out.push_back(level(l));
  out.push_back(1.0);
  return out;
}

Symbol UniformQuantizer::encode(double x) const {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("cannot quantize a non-finite value");
  }
  if (x > 1.0) return Symbol{static_cast<std::uint16_t>(m_ + 1)};
  if (x < -1.0) return Symbol{0};
  const double bin = std::floor(static_cast<double>(m_) * (x + 1.0) / 2.0) + 1.0;
  const int l = static_cast<int>(std::clamp(bin, 1.0, static_cast<double>(m_)));
  return Symbol{static_cast<std::uint16_t>(l)};
}

double UniformQuantizer::quantize(double x) const { return value(encode(x)); }

double UniformQuantizer::value(Symbol s) const {
  if (!contains(s)) {
    throw std::invalid_argument("symbol index " + std::to_string(s.index) + " outside alphabet");
  }
  if (s.index == 0) return -1.0;
  if (s.index == m_ + 1) return 1.0;
  return level(s.index);
}

Symbol UniformQuantizer::symbol_index(double v) const {
  if (v == -1.0) return Symbol{0};
  if (v == 1.0) return Symbol{static_cast<std::uint16_t>(m_ + 1)};
  if (std::isfinite(v) && std::abs(v) < 1.0) {
    // Invert level(): l = (m(v + 1) + 1)/2, then confirm membership exactly.
    const double guess = std::round((static_cast<double>(m_) * (v + 1.0) + 1.0) / 2.0);
    const int l = static_cast<int>(std::clamp(guess, 1.0, static_cast<double>(m_)));
    if (level(l) == v) return Symbol{static_cast<std::uint16_t>(l)};
  }
  throw std::invalid_argument("value is not a quantizer level");
}

QuantizationError quantization_error_bound(const UniformQuantizer& q, double z, double l) {
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw std::invalid_argument("scale must be positive and finite");
  }
  if (!(std::abs(z) <= l)) {
    throw PreconditionViolation("error bound only holds for |z| <= l");
  }
  return {std::abs(z - l * q.quantize(z / l)), l / static_cast<double>(q.levels())};
}

}  // namespace zoomcons
