#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's code paths (no Eigen, no BFS).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <vector>

#include "zoomcons/graph.hpp"
#include "zoomcons/matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const zoomcons::Matrix& m) {
  Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return d;
}

// Cyclic Jacobi rotations for a symmetric matrix; eigenvalues ascending.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Essential spectral radius of a symmetric stochastic matrix via Jacobi:
// drop the eigenvalue closest to 1, take the largest remaining modulus.
inline double symmetric_essential_radius(const zoomcons::Matrix& p) {
  auto ev = jacobi_eigenvalues(to_dense(p));
  auto it = std::min_element(ev.begin(), ev.end(),
                             [](double a, double b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  ev.erase(it);
  double r = 0.0;
  for (double v : ev) r = std::max(r, std::abs(v));
  return r;
}

// Eigenvalues of the maximum-degree ring Perron matrix (circulant).
inline std::vector<double> ring_eigenvalues(std::size_t n) {
  std::vector<double> ev;
  for (std::size_t k = 0; k < n; ++k)
    ev.push_back(1.0 - (2.0 / 3.0) * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n))));
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Largest singular value by power iteration on A^T A.
inline double largest_singular_value(const Dense& a, int iters = 5000) {
  const std::size_t n = a.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> av(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) av[i] += a[i][j] * v[j];
    std::vector<double> atav(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) atav[i] += a[j][i] * av[j];
    double norm = 0.0;
    for (double x : atav) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = atav[i] / norm;
    sigma = std::sqrt(norm);
  }
  return sigma;
}

// Transitive closure (Floyd-Warshall) connectivity.
inline bool strongly_connected(const zoomcons::Digraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& e : g.edges()) r[e.from][e.to] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!r[i][j]) return false;
  return true;
}

// Exact rationals for threshold arithmetic.
struct Fraction {
  long long num;
  long long den;
};

inline Fraction reduce(long long num, long long den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}
inline Fraction operator+(Fraction a, Fraction b) { return reduce(a.num * b.den + b.num * a.den, a.den * b.den); }
inline Fraction operator-(Fraction a, Fraction b) { return reduce(a.num * b.den - b.num * a.den, a.den * b.den); }
inline Fraction operator*(Fraction a, Fraction b) { return reduce(a.num * b.num, a.den * b.den); }
inline Fraction operator/(Fraction a, Fraction b) { return reduce(a.num * b.den, a.den * b.num); }
inline double to_double(Fraction f) { return static_cast<double>(f.num) / static_cast<double>(f.den); }

}  // namespace oracle
