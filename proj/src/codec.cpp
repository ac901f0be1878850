#include "zoomcons/codec.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "zoomcons/errors.hpp"

namespace zoomcons {

void ZoomParams::validate() const {
  if (m < 1 || m > UniformQuantizer::kMaxLevels) {
    throw std::invalid_argument("m must lie in [1, " + std::to_string(UniformQuantizer::kMaxLevels) + "]");
  }
  if (!(k_in > 0.0 && k_in < 1.0)) {
    throw std::invalid_argument("k_in must lie in (0, 1)");
  }
  if (!(k_out > 1.0) || !std::isfinite(k_out)) {
    throw std::invalid_argument("k_out must be finite and > 1");
  }
  if (!(l0 > 0.0) || !std::isfinite(l0)) {
    throw std::invalid_argument("l0 must be finite and > 0");
  }
}

CodecState CodecState::initial(const ZoomParams& params) {
  params.validate();
  return CodecState{0.0, params.l0, 0, std::nullopt};
}

double CodecState::scheduled_scale(const ZoomParams& params) const {
  if (t == 0 || !last_symbol) return scale;
  const UniformQuantizer q(params.m);
  return (q.saturated(*last_symbol) ? params.k_out : params.k_in) * scale;
}

namespace {

// Shared by both ends; identical inputs give bit-identical states.
CodecState advance(const CodecState& state, const UniformQuantizer& q, Symbol symbol,
                   double scale) {
  return CodecState{state.x_hat + scale * q.value(symbol), scale, state.t + 1, symbol};
}

}  // namespace

EncodeResult encode_step(const CodecState& state, const ZoomParams& params, double x_true) {
  if (!std::isfinite(x_true)) {
    throw std::invalid_argument("encoder input must be finite");
  }
  const UniformQuantizer q(params.m);
  const double scale = state.scheduled_scale(params);
  const Symbol s = q.encode((x_true - state.x_hat) / scale);
  return {s, advance(state, q, s, scale)};
}

DecodeResult decode_step(const CodecState& state, const ZoomParams& params, Symbol symbol) {
  const UniformQuantizer q(params.m);
  if (!q.contains(symbol)) {
    throw ProtocolViolation("received symbol " + std::to_string(symbol.index) +
                            " outside alphabet of size " + std::to_string(q.alphabet_size()));
  }
  auto next = advance(state, q, symbol, state.scheduled_scale(params));
  return {next.x_hat, next};
}

void write_symbol_trace(std::ostream& out, std::span<const Symbol> symbols) {
  for (const Symbol s : symbols) {
    const std::array<char, 2> bytes{static_cast<char>(s.index & 0xFFu),
                                    static_cast<char>((s.index >> 8) & 0xFFu)};
    out.write(bytes.data(), bytes.size());
  }
}

std::vector<Symbol> read_symbol_trace(std::istream& in) {
  std::vector<Symbol> out;
  std::array<char, 2> bytes{};
  while (in.read(bytes.data(), bytes.size())) {
    const auto lo = static_cast<unsigned char>(bytes[0]);
    const auto hi = static_cast<unsigned char>(bytes[1]);
    out.push_back(Symbol{static_cast<std::uint16_t>(lo | (hi << 8))});
  }
  if (in.gcount() != 0) {
    throw std::invalid_argument("symbol trace has a trailing odd byte");
  }
  return out;
}

void write_symbol_csv(std::ostream& out, std::span<const Symbol> symbols, std::size_t agents) {
  if (agents == 0 || symbols.size() % agents != 0) {
    throw std::invalid_argument("symbol count is not a multiple of the agent count");
  }
  out << 't';
  for (std::size_t j = 1; j <= agents; ++j) out << ",s" << j;
  out << '\n';
  for (std::size_t step = 0; step * agents < symbols.size(); ++step) {
    out << step + 1;
    for (std::size_t j = 0; j < agents; ++j) out << ',' << symbols[step * agents + j].index;
    out << '\n';
  }
}

}  // namespace zoomcons
