#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "zoomcons/codec.hpp"
#include "zoomcons/matrix.hpp"

namespace zoomcons {

/// Observables recorded once per tick.
struct StepMetrics {
  std::uint64_t t = 0;
  double disagreement = 0.0;    // ||x - x_ave 1||_2
  double estimate_error = 0.0;  // ||x - x_hat||_2
  double l_min = 0.0;
  double l_max = 0.0;
  std::uint32_t zoom_outs = 0;  // saturated symbols emitted at this tick
  double x_ave = 0.0;
};

enum class RunStatus { kConverged, kHorizonExhausted, kDiverged };

std::string_view to_string(RunStatus status);

/// Runaway zoom-out threshold: the run is declared divergent once some
/// scale exceeds this multiple of l0.
inline constexpr double kDivergenceScaleRatio = 1e12;

struct SimulationConfig {
  ConsensusMatrix matrix;
  ZoomParams params;
  std::vector<double> x0;
  std::uint64_t max_steps = 10000;
  double tol = 1e-9;
  bool record_symbols = false;

  /// Throws std::invalid_argument on dimension mismatch, max_steps == 0,
  /// tol <= 0, invalid params or non-finite x0.
  void validate() const;
};

struct SimulationResult {
  std::vector<StepMetrics> history;
  RunStatus status = RunStatus::kHorizonExhausted;
  std::uint64_t steps = 0;
  std::vector<double> x;
  std::vector<double> x_hat;
  std::uint64_t zoom_in_count = 0;
  std::uint64_t zoom_out_count = 0;
  /// Agent-major within each tick, ticks 1..steps; empty unless requested.
  std::vector<Symbol> symbols;
};

/// Closed loop x(t+1) = x(t) + K x_hat(t) with one zooming coder per agent.
/// Each agent's encoder runs next to a receiver-side decoder replica that
/// sees only the broadcast symbols; the control uses the replicas.
class QuantizedNetwork {
 public:
  explicit QuantizedNetwork(const SimulationConfig& config);

  /// One synchronous tick t -> t+1: apply control with x_hat(t), each agent
  /// encodes x(t+1), every replica decodes. Returns the saturated-symbol
  /// count. Throws ProtocolViolation if a replica loses synchrony.
  std::uint32_t step(std::vector<Symbol>* symbols_out = nullptr);

  StepMetrics metrics(std::uint32_t zoom_outs) const;

  std::uint64_t time() const { return t_; }
  std::span<const double> state() const { return x_; }
  std::vector<double> estimates() const;
  std::span<const CodecState> codecs() const { return decoders_; }
  std::uint64_t zoom_in_count() const { return zoom_ins_; }
  std::uint64_t zoom_out_count() const { return zoom_outs_; }

 private:
  struct Link {
    std::size_t from;
    double gain;
  };

  ZoomParams params_;
  std::vector<std::vector<Link>> inbound_;
  std::vector<double> x_;
  std::vector<CodecState> encoders_;
  std::vector<CodecState> decoders_;
  std::uint64_t t_ = 0;
  std::uint64_t zoom_ins_ = 0;
  std::uint64_t zoom_outs_ = 0;
};

/// Runs until disagreement <= tol, a runaway scale, or max_steps ticks.
/// history[t] describes time t, starting at t = 0.
SimulationResult run_quantized(const SimulationConfig& config);

/// Unquantized baseline x(t+1) = P x(t) with the same stopping rule.
SimulationResult run_ideal(const ConsensusMatrix& matrix, std::span<const double> x0,
                           std::uint64_t max_steps, double tol);

/// Geometric-mean contraction of disagreement over the trailing `window`
/// ticks. Returns nullopt if some disagreement in the window is zero.
/// Throws std::invalid_argument if window == 0 or the history is shorter
/// than window + 1.
std::optional<double> estimate_rate(std::span<const StepMetrics> history, std::size_t window);

/// estimate_rate with the window clipped to the available history; nullopt
/// for histories shorter than two records.
std::optional<double> trailing_rate(std::span<const StepMetrics> history, std::size_t max_window);

double disagreement(std::span<const double> x);
double mean(std::span<const double> x);
double euclidean_norm(std::span<const double> x);

/// CSV with header `t,disagreement,estimate_error,l_min,l_max,zoom_outs,x_ave`.
void write_history_csv(std::ostream& out, std::span<const StepMetrics> history);

}  // namespace zoomcons
