#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cema {

using Row = std::uint64_t;

// Simple undirected graph on at most 64 vertices. Row v of the adjacency
// matrix is one machine word, bit u set iff v ~ u. The diagonal is always
// zero and the matrix is kept symmetric by every mutator.
class Graph {
 public:
  static constexpr int kMaxOrder = 64;

  Graph() = default;
  explicit Graph(int n);

  int order() const { return n_; }
  Row row(int v) const { return rows_[static_cast<std::size_t>(v)]; }
  bool has_edge(int u, int v) const { return (rows_[static_cast<std::size_t>(u)] >> v) & 1U; }
  int degree(int v) const { return std::popcount(row(v)); }
  int edge_count() const;
  int max_degree() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  // Bit mask with the low n bits set.
  Row vertex_mask() const { return n_ == 64 ? ~Row{0} : ((Row{1} << n_) - 1); }

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  int n_ = 0;
  std::array<Row, kMaxOrder> rows_{};
};

// Row-wise upper triangle: (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1).
// This is the order in which the construction environment emits actions.
Graph from_edge_bits(int n, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> to_edge_bits(const Graph& g);

// Index of pair (i,j), i<j, in the row-wise ordering above.
int row_wise_pair_index(int n, int i, int j);

std::vector<int> degrees(const Graph& g);

// Average degree of the neighbours of each vertex. Throws UndefinedInvariant
// if some vertex is isolated.
std::vector<double> average_degrees(const Graph& g);

int num_components(const Graph& g);
bool is_connected(const Graph& g);

// Vertices reachable from `start` inside the vertex set `allowed`.
Row reachable_from(const Graph& g, int start, Row allowed);

// graph6, single-byte order field (n <= 62). Bits follow the column-wise
// upper triangle (0,1),(0,2),(1,2),(0,3),(1,3),(2,3),...
std::string to_graph6(const Graph& g);
Graph from_graph6(std::string_view text);

// Graphviz undirected graph listing.
std::string to_dot(const Graph& g, std::string_view name = "G");

Graph generate_star(int n);
Graph generate_windmill(int k);
Graph generate_complete(int n);
Graph generate_cycle(int n);
Graph generate_path(int n);

// Relabel: vertex v of g becomes vertex perm[v] of the result.
Graph permute(const Graph& g, std::span<const int> perm);

}  // namespace cema
