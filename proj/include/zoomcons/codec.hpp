#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "zoomcons/quantizer.hpp"

namespace zoomcons {

/// Parameters of the zooming coder: m quantizer levels, zoom-in factor
/// k_in in (0, 1), zoom-out factor k_out > 1, initial scale l0 > 0.
struct ZoomParams {
  int m = 6;
  double k_in = 0.9;
  double k_out = 2.0;
  double l0 = 1.0;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;

  bool operator==(const ZoomParams&) const = default;
};

/// Estimator state (x_hat, l) at local time t, plus the last symbol, which
/// decides the next zoom. Sender and every receiver hold identical copies.
///
/// `scale` is the factor l(t) that was in force for the symbol of step t;
/// at t = 0 and t = 1 it equals l0.
struct CodecState {
  double x_hat = 0.0;
  double scale = 1.0;
  std::uint64_t t = 0;
  std::optional<Symbol> last_symbol;

  static CodecState initial(const ZoomParams& params);

  /// l(t + 1): l0 at t = 0, otherwise k_out * l(t) after a saturated symbol
  /// and k_in * l(t) after any other.
  double scheduled_scale(const ZoomParams& params) const;

  bool operator==(const CodecState&) const = default;
};

struct EncodeResult {
  Symbol symbol;
  CodecState state;
};

struct DecodeResult {
  double estimate = 0.0;
  CodecState state;
};

/// Emits s(t+1) = q((x_true - x_hat(t)) / l(t+1)) and applies
/// x_hat(t+1) = x_hat(t) + l(t+1) s(t+1). Throws std::invalid_argument on
/// non-finite x_true.
EncodeResult encode_step(const CodecState& state, const ZoomParams& params, double x_true);

/// Receiver side: the same update driven only by the symbol. Throws
/// ProtocolViolation when the symbol is outside the alphabet.
DecodeResult decode_step(const CodecState& state, const ZoomParams& params, Symbol symbol);

/// Binary symbol trace: little-endian uint16 symbol indices, agent-major
/// within each step, no header.
void write_symbol_trace(std::ostream& out, std::span<const Symbol> symbols);
std::vector<Symbol> read_symbol_trace(std::istream& in);

/// Text form of the same trace: header `t,s1,...,sn`, one row per step,
/// first row t = 1.
void write_symbol_csv(std::ostream& out, std::span<const Symbol> symbols, std::size_t agents);

}  // namespace zoomcons
