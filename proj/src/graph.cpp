#include "cema/graph.hpp"

#include <sstream>

#include "cema/errors.hpp"

namespace cema {

namespace {

constexpr int kGraph6Offset = 63;
constexpr int kGraph6MaxSmallOrder = 62;

void check_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.order()) {
    throw InvalidInput("vertex " + std::to_string(v) + " out of range for order " +
                       std::to_string(g.order()));
  }
}

}  // namespace

Graph::Graph(int n) : n_(n) {
  if (n < 0 || n > kMaxOrder) {
    throw InvalidInput("graph order must lie in [0, 64], got " + std::to_string(n));
  }
}

int Graph::edge_count() const {
  int twice = 0;
  for (int v = 0; v < n_; ++v) twice += degree(v);
  return twice / 2;
}

int Graph::max_degree() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
  return best;
}

void Graph::add_edge(int u, int v) {
  check_vertex(*this, u);
  check_vertex(*this, v);
  if (u == v) throw InvalidInput("loops are not allowed");
  rows_[static_cast<std::size_t>(u)] |= Row{1} << v;
  rows_[static_cast<std::size_t>(v)] |= Row{1} << u;
}

void Graph::remove_edge(int u, int v) {
  check_vertex(*this, u);
  check_vertex(*this, v);
  rows_[static_cast<std::size_t>(u)] &= ~(Row{1} << v);
  rows_[static_cast<std::size_t>(v)] &= ~(Row{1} << u);
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.n_ != b.n_) return false;
  for (int v = 0; v < a.n_; ++v) {
    if (a.row(v) != b.row(v)) return false;
  }
  return true;
}

int row_wise_pair_index(int n, int i, int j) {
  // Rows 0..i-1 contribute (n-1)+(n-2)+...+(n-i) entries.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

Graph from_edge_bits(int n, std::span<const std::uint8_t> bits) {
  if (n < 1 || n > Graph::kMaxOrder) throw InvalidInput("order out of range");
  const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (bits.size() != expected) {
    throw InvalidInput("expected " + std::to_string(expected) + " edge bits, got " +
                       std::to_string(bits.size()));
  }
  Graph g(n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      if (bits[k] > 1) throw InvalidInput("edge bits must be 0 or 1");
      if (bits[k] != 0) g.add_edge(i, j);
    }
  }
  return g;
}

std::vector<std::uint8_t> to_edge_bits(const Graph& g) {
  const int n = g.order();
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) bits.push_back(g.has_edge(i, j) ? 1 : 0);
  }
  return bits;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> d(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) d[static_cast<std::size_t>(v)] = g.degree(v);
  return d;
}

std::vector<double> average_degrees(const Graph& g) {
  const auto d = degrees(g);
  std::vector<double> m(d.size());
  for (int v = 0; v < g.order(); ++v) {
    if (d[static_cast<std::size_t>(v)] == 0) {
      throw UndefinedInvariant("average neighbour degree undefined at isolated vertex " +
                               std::to_string(v));
    }
    int sum = 0;
    for (Row r = g.row(v); r != 0; r &= r - 1) sum += d[static_cast<std::size_t>(std::countr_zero(r))];
    m[static_cast<std::size_t>(v)] =
        static_cast<double>(sum) / static_cast<double>(d[static_cast<std::size_t>(v)]);
  }
  return m;
}

Row reachable_from(const Graph& g, int start, Row allowed) {
  Row seen = Row{1} << start;
  Row frontier = seen;
  while (frontier != 0) {
    Row next = 0;
    for (Row f = frontier; f != 0; f &= f - 1) next |= g.row(std::countr_zero(f));
    next &= allowed & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

int num_components(const Graph& g) {
  Row left = g.vertex_mask();
  int count = 0;
  while (left != 0) {
    left &= ~reachable_from(g, std::countr_zero(left), left);
    ++count;
  }
  return count;
}

bool is_connected(const Graph& g) {
  if (g.order() == 0) return true;
  return reachable_from(g, 0, g.vertex_mask()) == g.vertex_mask();
}

std::string to_graph6(const Graph& g) {
  const int n = g.order();
  if (n < 1 || n > kGraph6MaxSmallOrder) throw InvalidInput("graph6 writer supports 1 <= n <= 62");
  std::string out;
  out.push_back(static_cast<char>(n + kGraph6Offset));
  int group = 0;
  int filled = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      group = (group << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(group + kGraph6Offset));
        group = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((group << (6 - filled)) + kGraph6Offset));
  return out;
}

Graph from_graph6(std::string_view text) {
  // Optional header and trailing line terminators.
  if (text.starts_with(">>graph6<<")) text.remove_prefix(10);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty graph6 string");
  for (char c : text) {
    const int b = static_cast<unsigned char>(c);
    if (b < 63 || b > 126) throw ParseError("graph6 byte out of range: " + std::to_string(b));
  }
  const int n = static_cast<unsigned char>(text[0]) - kGraph6Offset;
  if (n > kGraph6MaxSmallOrder) throw ParseError("multi-byte graph6 order field is not supported");
  if (n < 1) throw ParseError("graph6 order must be positive");
  const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  const std::size_t payload = (pairs + 5) / 6;
  if (text.size() - 1 != payload) {
    throw ParseError("graph6 payload has " + std::to_string(text.size() - 1) + " bytes, expected " +
                     std::to_string(payload));
  }
  Graph g(n);
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int byte = static_cast<unsigned char>(text[1 + k / 6]) - kGraph6Offset;
      if ((byte >> (5 - static_cast<int>(k % 6))) & 1) g.add_edge(i, j);
    }
  }
  return g;
}

std::string to_dot(const Graph& g, std::string_view name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int v = 0; v < g.order(); ++v) os << "  " << v << ";\n";
  for (int i = 0; i < g.order(); ++i) {
    for (int j = i + 1; j < g.order(); ++j) {
      if (g.has_edge(i, j)) os << "  " << i << " -- " << j << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

Graph generate_star(int n) {
  if (n < 2 || n > Graph::kMaxOrder) throw InvalidInput("star order must lie in [2, 64]");
  Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(0, v);
  return g;
}

Graph generate_windmill(int k) {
  if (k < 1 || 2 * k + 1 > Graph::kMaxOrder) throw InvalidInput("windmill needs 1 <= k <= 31");
  Graph g(2 * k + 1);
  for (int t = 0; t < k; ++t) {
    const int a = 2 * t + 1;
    const int b = 2 * t + 2;
    g.add_edge(0, a);
    g.add_edge(0, b);
    g.add_edge(a, b);
  }
  return g;
}

Graph generate_complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  }
  return g;
}

Graph generate_cycle(int n) {
  if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
  Graph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph generate_path(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph permute(const Graph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.order()) throw InvalidInput("permutation size mismatch");
  Graph h(g.order());
  for (int i = 0; i < g.order(); ++i) {
    for (Row r = g.row(i); r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      if (i < j) h.add_edge(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  return h;
}

}  // namespace cema
