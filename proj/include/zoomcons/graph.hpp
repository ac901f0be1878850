#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace zoomcons {

/// Directed channel: `from` can transmit to `to`. Agents are 0-indexed in
/// memory; the text edge-list format is 1-indexed.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  auto operator<=>(const Edge&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// Communication graph among n agents. Self-knowledge is implicit, so
/// self-loops are rejected. Immutable after construction.
class Digraph {
 public:
  /// Throws std::invalid_argument on n == 0, out-of-range endpoints or
  /// self-loops. Duplicate edges are collapsed.
  Digraph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Sorted, duplicate-free.
  std::span<const Edge> edges() const { return edges_; }

  bool has_edge(std::size_t from, std::size_t to) const;

  /// Agents that can transmit to `agent`, ascending.
  std::span<const std::size_t> in_neighbors(std::size_t agent) const;
  std::span<const std::size_t> out_neighbors(std::size_t agent) const;

  std::size_t in_degree(std::size_t agent) const { return in_neighbors(agent).size(); }
  std::size_t out_degree(std::size_t agent) const { return out_neighbors(agent).size(); }
  std::size_t max_in_degree() const;

  /// (i, j) present iff (j, i) present.
  bool is_symmetric() const;

  /// Sample positions for geometric graphs; empty otherwise.
  std::span<const Point> coordinates() const { return coords_; }
  Digraph with_coordinates(std::vector<Point> coords) const;

  bool operator==(const Digraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && coords_ == other.coords_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<Point> coords_;
};

/// Undirected ring as a symmetric digraph with 2n edges. Requires n >= 3.
Digraph ring(std::size_t n);

/// Every ordered pair of distinct agents. Requires n >= 1.
Digraph complete(std::size_t n);

/// n points drawn uniformly on the unit square; symmetric edges between all
/// pairs at Euclidean distance <= radius. Deterministic in `seed`.
/// Requires n >= 2 and 0 < radius <= sqrt(2).
Digraph random_geometric(std::size_t n, double radius, std::uint64_t seed);

bool is_strongly_connected(const Digraph& g);

/// Edge-list text: first line `n`, then one `j i` pair per line (1-indexed),
/// meaning j transmits to i.
void write_edge_list(std::ostream& out, const Digraph& g);
Digraph read_edge_list(std::istream& in);

}  // namespace zoomcons
