#include "zoomcons/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zoomcons {

ConsensusMatrix::ConsensusMatrix(Matrix k, Matrix p)
    : k_(std::move(k)), p_(std::move(p)) {
  rho_ = essential_spectral_radius(p_);
  norms_ = operator_norms(p_);
}

ConsensusMatrix max_degree_matrix(const Digraph& g) {
  if (!g.is_symmetric()) {
    throw std::invalid_argument("maximum degree rule requires a symmetric graph");
  }
  if (!is_strongly_connected(g)) {
    throw std::invalid_argument("maximum degree rule requires a connected graph");
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  const double w = 1.0 / static_cast<double>(g.max_in_degree() + 1);
  Matrix k = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j : g.in_neighbors(static_cast<std::size_t>(i))) {
      k(i, static_cast<Eigen::Index>(j)) = w;
      diag -= w;
    }
    k(i, i) = diag;
  }
  Matrix p = Matrix::Identity(n, n) + k;
  require_doubly_stochastic(p);
  return ConsensusMatrix(std::move(k), std::move(p));
}

ConsensusMatrix custom_matrix(const Digraph& g, const Matrix& p) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (p.rows() != n || p.cols() != n) {
    throw std::invalid_argument("matrix dimension does not match the graph");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && p(i, j) != 0.0 &&
          !g.has_edge(static_cast<std::size_t>(j), static_cast<std::size_t>(i))) {
        throw std::invalid_argument("matrix is not adapted to the graph");
      }
    }
  }
  require_doubly_stochastic(p);
  Matrix k = p - Matrix::Identity(n, n);
  return ConsensusMatrix(std::move(k), p);
}

void require_doubly_stochastic(const Matrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw std::invalid_argument("stochastic matrix must be square and non-empty");
  }
  if (!p.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  if (p.minCoeff() < -kStochasticTolerance || p.maxCoeff() > 1.0 + kStochasticTolerance) {
    throw std::invalid_argument("matrix entries must lie in [0, 1]");
  }
  const Eigen::VectorXd rows = p.rowwise().sum();
  const Eigen::VectorXd cols = p.colwise().sum().transpose();
  if ((rows.array() - 1.0).abs().maxCoeff() > kStochasticTolerance ||
      (cols.array() - 1.0).abs().maxCoeff() > kStochasticTolerance) {
    throw std::invalid_argument("matrix is not doubly stochastic");
  }
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  std::vector<std::complex<double>> out;
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eigenvalues need a square matrix");
  }
  if ((m.array() == m.transpose().array()).all()) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out.emplace_back(solver.eigenvalues()(i), 0.0);
    }
  } else {
    Eigen::EigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigenvalue computation did not converge");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out.push_back(solver.eigenvalues()(i));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::abs(a) > std::abs(b);
  });
  return out;
}

double essential_spectral_radius(const Matrix& p) {
  require_doubly_stochastic(p);
  auto eig = eigenvalues(p);
  // Drop the structural eigenvalue: exactly one occurrence, the one nearest 1.
  const auto structural = std::min_element(eig.begin(), eig.end(), [](const auto& a, const auto& b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  eig.erase(structural);
  double rho = 0.0;
  for (const auto& lambda : eig) rho = std::max(rho, std::abs(lambda));
  return rho;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

OperatorNorms operator_norms(const Matrix& p) {
  const auto n = p.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix k = p - identity;
  // P maps 1 to 1 and (doubly stochastic) 1-perp to itself, so its restriction
  // to 1-perp has the same norm as P - (1/n) 1 1^T.
  const Matrix averaging = Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
  OperatorNorms norms;
  norms.norm_p = spectral_norm(p);
  norms.norm_k = spectral_norm(k);
  norms.norm_k_minus_i = spectral_norm(k - identity);
  norms.norm_p_disagreement = spectral_norm(p - averaging);
  return norms;
}

OperatorNorms operator_norms(const ConsensusMatrix& m) { return operator_norms(m.perron()); }

void write_csv(std::ostream& out, const Matrix& m) {
  std::ostringstream row;
  row.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    row.str("");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) row << ',';
      row << m(i, j);
    }
    out << row.str() << '\n';
  }
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument("matrix csv: bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("matrix csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace zoomcons
