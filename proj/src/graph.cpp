#include "zoomcons/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace zoomcons {

Digraph::Digraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), in_(n), out_(n) {
  if (n_ == 0) {
    throw std::invalid_argument("digraph needs at least one agent");
  }
  for (const auto& e : edges_) {
    if (e.from >= n_ || e.to >= n_) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (e.from == e.to) {
      throw std::invalid_argument("self-loops are implicit and may not be listed");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) {
    out_[e.from].push_back(e.to);
    in_[e.to].push_back(e.from);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

bool Digraph::has_edge(std::size_t from, std::size_t to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

std::span<const std::size_t> Digraph::in_neighbors(std::size_t agent) const {
  return in_.at(agent);
}

std::span<const std::size_t> Digraph::out_neighbors(std::size_t agent) const {
  return out_.at(agent);
}

std::size_t Digraph::max_in_degree() const {
  std::size_t d = 0;
  for (const auto& v : in_) d = std::max(d, v.size());
  return d;
}

bool Digraph::is_symmetric() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [this](const Edge& e) { return has_edge(e.to, e.from); });
}

Digraph Digraph::with_coordinates(std::vector<Point> coords) const {
  if (coords.size() != n_) {
    throw std::invalid_argument("one coordinate per agent required");
  }
  Digraph copy = *this;
  copy.coords_ = std::move(coords);
  return copy;
}

Digraph ring(std::size_t n) {
  if (n < 3) {
    throw std::invalid_argument("ring needs n >= 3");
  }
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    edges.push_back({i, next});
    edges.push_back({next, i});
  }
  return Digraph(n, std::move(edges));
}

Digraph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) edges.push_back({i, j});
    }
  }
  return Digraph(n, std::move(edges));
}

Digraph random_geometric(std::size_t n, double radius, std::uint64_t seed) {
  if (n < 2) {
    throw std::invalid_argument("random geometric graph needs n >= 2");
  }
  if (!(radius > 0.0) || radius > std::sqrt(2.0)) {
    throw std::invalid_argument("radius must lie in (0, sqrt(2)]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = unit(rng);
    p.y = unit(rng);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) <= radius) {
        edges.push_back({i, j});
        edges.push_back({j, i});
      }
    }
  }
  return Digraph(n, std::move(edges)).with_coordinates(std::move(pts));
}

namespace {

std::size_t reach_count(std::size_t n, std::size_t start,
                        const auto& neighbors_of) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : neighbors_of(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
  const std::size_t n = g.size();
  // Strongly connected iff agent 0 reaches everyone and everyone reaches 0.
  const auto fwd = reach_count(n, 0, [&](std::size_t v) { return g.out_neighbors(v); });
  if (fwd != n) return false;
  const auto bwd = reach_count(n, 0, [&](std::size_t v) { return g.in_neighbors(v); });
  return bwd == n;
}

void write_edge_list(std::ostream& out, const Digraph& g) {
  out << g.size() << '\n';
  for (const auto& e : g.edges()) {
    out << e.from + 1 << ' ' << e.to + 1 << '\n';
  }
}

Digraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!have_n) {
      if (!(ls >> n) || n == 0) {
        throw std::invalid_argument("edge list: bad agent count on line " + std::to_string(lineno));
      }
      have_n = true;
      continue;
    }
    long long j = 0;
    long long i = 0;
    if (!(ls >> j >> i) || j < 1 || i < 1 || static_cast<std::size_t>(j) > n ||
        static_cast<std::size_t>(i) > n) {
      throw std::invalid_argument("edge list: bad edge on line " + std::to_string(lineno));
    }
    edges.push_back({static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)});
  }
  if (!have_n) {
    throw std::invalid_argument("edge list: missing agent count");
  }
  return Digraph(n, std::move(edges));
}

}  // namespace zoomcons
