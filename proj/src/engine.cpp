#include "zoomcons/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "zoomcons/errors.hpp"

namespace zoomcons {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kHorizonExhausted:
      return "horizon_exhausted";
    case RunStatus::kDiverged:
      return "diverged";
  }
  return "unknown";
}

void SimulationConfig::validate() const {
  params.validate();
  if (x0.size() != matrix.size()) {
    throw std::invalid_argument("x0 dimension does not match the matrix");
  }
  if (max_steps == 0) {
    throw std::invalid_argument("max_steps must be >= 1");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tol must be > 0");
  }
  if (!std::all_of(x0.begin(), x0.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("x0 must be finite");
  }
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double disagreement(std::span<const double> x) {
  const double ave = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - ave) * (v - ave);
  return std::sqrt(s);
}

QuantizedNetwork::QuantizedNetwork(const SimulationConfig& config)
    : params_(config.params),
      inbound_(config.matrix.size()),
      x_(config.x0),
      encoders_(config.matrix.size(), CodecState::initial(config.params)),
      decoders_(encoders_) {
  config.validate();
  const Matrix& k = config.matrix.gain();
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (i != j && k(i, j) != 0.0) {
        inbound_[static_cast<std::size_t>(i)].push_back({static_cast<std::size_t>(j), k(i, j)});
      }
    }
  }
}

std::uint32_t QuantizedNetwork::step(std::vector<Symbol>* symbols_out) {
  const std::size_t n = x_.size();
  // Control u(t) = K x_hat(t). Since K 1 = 0, (K x_hat)_i is evaluated as
  // sum_j K_ij (x_hat_j - x_hat_i), which keeps the rounding proportional to
  // estimate differences instead of estimate magnitudes.
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const Link& link : inbound_[i]) {
      acc += link.gain * (decoders_[link.from].x_hat - decoders_[i].x_hat);
    }
    u[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) x_[i] += u[i];

  const UniformQuantizer q(params_.m);
  std::uint32_t saturated = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto sent = encode_step(encoders_[j], params_, x_[j]);
    auto received = decode_step(decoders_[j], params_, sent.symbol);
    if (!(received.state == sent.state)) {
      throw ProtocolViolation("receiver replica lost synchrony with agent encoder");
    }
    encoders_[j] = sent.state;
    decoders_[j] = received.state;
    if (q.saturated(sent.symbol)) ++saturated;
    if (symbols_out) symbols_out->push_back(sent.symbol);
  }
  ++t_;
  zoom_outs_ += saturated;
  zoom_ins_ += n - saturated;
  return saturated;
}

std::vector<double> QuantizedNetwork::estimates() const {
  std::vector<double> out(decoders_.size());
  std::transform(decoders_.begin(), decoders_.end(), out.begin(),
                 [](const CodecState& c) { return c.x_hat; });
  return out;
}

StepMetrics QuantizedNetwork::metrics(std::uint32_t zoom_outs) const {
  StepMetrics m;
  m.t = t_;
  m.disagreement = disagreement(x_);
  double err = 0.0;
  m.l_min = std::numeric_limits<double>::infinity();
  m.l_max = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    const double d = x_[i] - decoders_[i].x_hat;
    err += d * d;
    m.l_min = std::min(m.l_min, decoders_[i].scale);
    m.l_max = std::max(m.l_max, decoders_[i].scale);
  }
  m.estimate_error = std::sqrt(err);
  m.zoom_outs = zoom_outs;
  m.x_ave = mean(x_);
  return m;
}

SimulationResult run_quantized(const SimulationConfig& config) {
  QuantizedNetwork net(config);
  SimulationResult result;
  result.history.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(config.max_steps, 100000)) + 1);
  result.history.push_back(net.metrics(0));
  const double scale_limit = kDivergenceScaleRatio * config.params.l0;

  auto finish = [&](RunStatus status) {
    result.status = status;
    result.steps = net.time();
    result.x.assign(net.state().begin(), net.state().end());
    result.x_hat = net.estimates();
    result.zoom_in_count = net.zoom_in_count();
    result.zoom_out_count = net.zoom_out_count();
    return result;
  };

  if (result.history.back().disagreement <= config.tol) return finish(RunStatus::kConverged);
  auto* symbols = config.record_symbols ? &result.symbols : nullptr;
  while (net.time() < config.max_steps) {
    const auto saturated = net.step(symbols);
    result.history.push_back(net.metrics(saturated));
    const auto& last = result.history.back();
    if (!(last.l_max <= scale_limit) || !std::isfinite(last.disagreement)) {
      return finish(RunStatus::kDiverged);
    }
    if (last.disagreement <= config.tol) return finish(RunStatus::kConverged);
  }
  return finish(RunStatus::kHorizonExhausted);
}

SimulationResult run_ideal(const ConsensusMatrix& matrix, std::span<const double> x0,
                           std::uint64_t max_steps, double tol) {
  if (x0.size() != matrix.size()) {
    throw std::invalid_argument("x0 dimension does not match the matrix");
  }
  if (max_steps == 0) {
    throw std::invalid_argument("max_steps must be >= 1");
  }
  const Matrix& p = matrix.perron();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
  SimulationResult result;

  auto record = [&](std::uint64_t t) {
    const std::span<const double> view(x.data(), static_cast<std::size_t>(x.size()));
    result.history.push_back(StepMetrics{t, disagreement(view), 0.0, 0.0, 0.0, 0, mean(view)});
  };
  record(0);
  result.status = RunStatus::kHorizonExhausted;
  std::uint64_t t = 0;
  if (result.history.back().disagreement <= tol) {
    result.status = RunStatus::kConverged;
  } else {
    while (t < max_steps) {
      x = p * x;
      record(++t);
      if (!std::isfinite(result.history.back().disagreement)) {
        result.status = RunStatus::kDiverged;
        break;
      }
      if (result.history.back().disagreement <= tol) {
        result.status = RunStatus::kConverged;
        break;
      }
    }
  }
  result.steps = t;
  result.x.assign(x.data(), x.data() + x.size());
  result.x_hat = result.x;
  return result;
}

std::optional<double> estimate_rate(std::span<const StepMetrics> history, std::size_t window) {
  if (window == 0) {
    throw std::invalid_argument("rate window must be >= 1");
  }
  if (history.size() < window + 1) {
    throw std::invalid_argument("history shorter than rate window");
  }
  const auto tail = history.last(window + 1);
  if (std::any_of(tail.begin(), tail.end(), [](const StepMetrics& m) { return m.disagreement == 0.0; })) {
    return std::nullopt;
  }
  return std::pow(tail.back().disagreement / tail.front().disagreement,
                  1.0 / static_cast<double>(window));
}

std::optional<double> trailing_rate(std::span<const StepMetrics> history, std::size_t max_window) {
  if (history.size() < 2 || max_window == 0) return std::nullopt;
  return estimate_rate(history, std::min(max_window, history.size() - 1));
}

void write_history_csv(std::ostream& out, std::span<const StepMetrics> history) {
  std::ostringstream line;
  line.precision(std::numeric_limits<double>::max_digits10);
  out << "t,disagreement,estimate_error,l_min,l_max,zoom_outs,x_ave\n";
  for (const auto& m : history) {
    line.str("");
    line << m.t << ',' << m.disagreement << ',' << m.estimate_error << ',' << m.l_min << ','
         << m.l_max << ',' << m.zoom_outs << ',' << m.x_ave << '\n';
    out << line.str();
  }
}

}  // namespace zoomcons
