#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "zoomcons/graph.hpp"

namespace zoomcons {

using Matrix = Eigen::MatrixXd;

/// Spectral norms (largest singular values).
struct OperatorNorms {
  double norm_p = 0.0;          // ||I + K||
  double norm_k = 0.0;          // ||K||
  double norm_k_minus_i = 0.0;  // ||K - I||
  /// ||P|| restricted to the subspace orthogonal to the all-ones vector.
  /// Equals rho for normal P; reported separately for the general case.
  double norm_p_disagreement = 0.0;
};

/// Entry-wise tolerance used when validating stochasticity and adaptedness.
inline constexpr double kStochasticTolerance = 1e-12;

/// The consensus gain K adapted to a graph, together with the Perron matrix
/// P = I + K and its spectral metadata. Immutable after construction.
class ConsensusMatrix {
 public:
  std::size_t size() const { return static_cast<std::size_t>(p_.rows()); }
  const Matrix& gain() const { return k_; }
  const Matrix& perron() const { return p_; }
  double rho() const { return rho_; }
  const OperatorNorms& norms() const { return norms_; }

 private:
  friend ConsensusMatrix max_degree_matrix(const Digraph& g);
  friend ConsensusMatrix custom_matrix(const Digraph& g, const Matrix& p);
  ConsensusMatrix(Matrix k, Matrix p);

  Matrix k_;
  Matrix p_;
  double rho_ = 0.0;
  OperatorNorms norms_;
};

/// Maximum degree rule: every neighbor weight 1/(d_max + 1), diagonal
/// 1 - d_i/(d_max + 1). Throws std::invalid_argument unless g is symmetric
/// and strongly connected.
ConsensusMatrix max_degree_matrix(const Digraph& g);

/// User-supplied Perron matrix. Rejects (std::invalid_argument) a matrix
/// with a nonzero entry P(i, j), i != j, for which j cannot transmit to i,
/// or one that is not doubly stochastic.
ConsensusMatrix custom_matrix(const Digraph& g, const Matrix& p);

/// Throws std::invalid_argument when p is not square, has entries outside
/// [0, 1], or row/column sums differ from 1 beyond kStochasticTolerance.
void require_doubly_stochastic(const Matrix& p);

/// Largest eigenvalue modulus after removing the single eigenvalue closest
/// to 1. Input must be doubly stochastic.
double essential_spectral_radius(const Matrix& p);

/// All eigenvalues, sorted by decreasing modulus.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

OperatorNorms operator_norms(const ConsensusMatrix& m);
OperatorNorms operator_norms(const Matrix& p);

double spectral_norm(const Matrix& m);

/// Row-major CSV, one row per line, full round-trip precision.
void write_csv(std::ostream& out, const Matrix& m);
Matrix read_csv(std::istream& in);

}  // namespace zoomcons
