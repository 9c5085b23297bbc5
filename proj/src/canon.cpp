#include "cema/canon.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <numeric>

namespace cema {

namespace {

constexpr int kNoJump = INT_MAX;

// Ordered partition of the vertex set; each cell is a bit set.
struct Partition {
  std::array<Row, Graph::kMaxOrder> cells{};
  int size = 0;

  bool discrete(int n) const { return size == n; }
};

void replace_cell(Partition& p, int at, const Row* parts, int count) {
  const int tail = p.size - at - 1;
  for (int t = tail - 1; t >= 0; --t) p.cells[at + count + t] = p.cells[at + 1 + t];
  for (int t = 0; t < count; ++t) p.cells[at + t] = parts[t];
  p.size += count - 1;
}

// Refine to the coarsest equitable partition finer than p. Cells are split
// by the number of neighbours in a splitter cell, smaller counts first.
void refine(const Graph& g, Partition& p) {
  const int n = g.order();
  bool changed = true;
  while (changed && !p.discrete(n)) {
    changed = false;
    for (int w = 0; w < p.size; ++w) {
      const Row splitter = p.cells[w];
      for (int c = 0; c < p.size; ++c) {
        const Row cell = p.cells[c];
        if (std::has_single_bit(cell)) continue;
        std::array<Row, Graph::kMaxOrder + 1> by_count{};
        int lo = INT_MAX;
        int hi = -1;
        for (Row r = cell; r != 0; r &= r - 1) {
          const int v = std::countr_zero(r);
          const int k = std::popcount(g.row(v) & splitter);
          by_count[static_cast<std::size_t>(k)] |= Row{1} << v;
          lo = std::min(lo, k);
          hi = std::max(hi, k);
        }
        if (lo == hi) continue;
        std::array<Row, Graph::kMaxOrder> parts{};
        int count = 0;
        for (int k = lo; k <= hi; ++k) {
          if (by_count[static_cast<std::size_t>(k)] != 0) parts[static_cast<std::size_t>(count++)] = by_count[static_cast<std::size_t>(k)];
        }
        replace_cell(p, c, parts.data(), count);
        c += count - 1;
        changed = true;
      }
    }
  }
}

using Code = std::array<Row, Graph::kMaxOrder>;

struct Search {
  const Graph& g;
  int n;

  bool have_first = false;
  std::vector<int> first_lab, first_path;
  Code first_code{};

  std::vector<int> best_lab, best_path;
  Code best_code{};

  std::vector<std::vector<int>> generators;
  std::vector<int> path;

  explicit Search(const Graph& graph) : g(graph), n(graph.order()) {}

  Code leaf_code(const std::vector<int>& lab) const {
    std::array<int, Graph::kMaxOrder> pos{};
    for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(lab[static_cast<std::size_t>(i)])] = i;
    Code code{};
    for (int i = 0; i < n; ++i) {
      Row out = 0;
      for (Row r = g.row(lab[static_cast<std::size_t>(i)]); r != 0; r &= r - 1) {
        out |= Row{1} << pos[static_cast<std::size_t>(std::countr_zero(r))];
      }
      code[static_cast<std::size_t>(i)] = out;
    }
    return code;
  }

  int compare(const Code& a, const Code& b) const {
    for (int i = 0; i < n; ++i) {
      if (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)]) {
        return a[static_cast<std::size_t>(i)] < b[static_cast<std::size_t>(i)] ? -1 : 1;
      }
    }
    return 0;
  }

  static int common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return static_cast<int>(k);
  }

  // Automorphism mapping vertex from[i] to to[i].
  void add_generator(const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> gamma(static_cast<std::size_t>(n));
    bool identity = true;
    for (int i = 0; i < n; ++i) {
      gamma[static_cast<std::size_t>(from[static_cast<std::size_t>(i)])] = to[static_cast<std::size_t>(i)];
      identity = identity && from[static_cast<std::size_t>(i)] == to[static_cast<std::size_t>(i)];
    }
    if (!identity) generators.push_back(std::move(gamma));
  }

  int leaf(const Partition& p) {
    std::vector<int> lab(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) lab[static_cast<std::size_t>(i)] = std::countr_zero(p.cells[static_cast<std::size_t>(i)]);
    const Code code = leaf_code(lab);
    if (!have_first) {
      have_first = true;
      first_lab = best_lab = lab;
      first_path = best_path = path;
      first_code = best_code = code;
      return kNoJump;
    }
    if (compare(code, first_code) == 0) {
      add_generator(first_lab, lab);
      return common_prefix(path, first_path);
    }
    const int cmp = compare(code, best_code);
    if (cmp == 0) {
      add_generator(best_lab, lab);
      return common_prefix(path, best_path);
    }
    if (cmp < 0) {
      best_lab = lab;
      best_path = path;
      best_code = code;
    }
    return kNoJump;
  }

  // Orbit representatives of the group generated by those generators that
  // fix every vertex on the current path.
  std::vector<int> stabilizer_orbits() const {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (const auto& gamma : generators) {
      bool fixes = true;
      for (int v : path) fixes = fixes && gamma[static_cast<std::size_t>(v)] == v;
      if (!fixes) continue;
      for (int v = 0; v < n; ++v) {
        const int a = find(v);
        const int b = find(gamma[static_cast<std::size_t>(v)]);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
    for (int v = 0; v < n; ++v) parent[static_cast<std::size_t>(v)] = find(v);
    return parent;
  }

  int run(Partition p) {
    refine(g, p);
    if (p.discrete(n)) return leaf(p);
    int target = 0;
    while (std::has_single_bit(p.cells[static_cast<std::size_t>(target)])) ++target;
    const Row cell = p.cells[static_cast<std::size_t>(target)];
    const int depth = static_cast<int>(path.size());
    Row explored = 0;
    for (Row r = cell; r != 0; r &= r - 1) {
      const int v = std::countr_zero(r);
      if (explored != 0 && !generators.empty()) {
        const auto orbit = stabilizer_orbits();
        bool redundant = false;
        for (Row e = explored; e != 0 && !redundant; e &= e - 1) {
          redundant = orbit[static_cast<std::size_t>(std::countr_zero(e))] == orbit[static_cast<std::size_t>(v)];
        }
        if (redundant) continue;
      }
      explored |= Row{1} << v;
      Partition child = p;
      const Row single = Row{1} << v;
      const Row rest = cell & ~single;
      const Row parts[2] = {single, rest};
      replace_cell(child, target, parts, 2);
      path.push_back(v);
      const int jump = run(child);
      path.pop_back();
      if (jump < depth) return jump;
    }
    return kNoJump;
  }
};

}  // namespace

Canonical canonicalize(const Graph& g) {
  const int n = g.order();
  Canonical out;
  if (n == 0) {
    out.form = g;
    return out;
  }
  Search search(g);
  Partition p;
  p.cells[0] = g.vertex_mask();
  p.size = 1;
  search.run(p);

  out.labeling = search.best_lab;
  search.path.clear();
  out.orbits = search.stabilizer_orbits();
  out.generators = std::move(search.generators);
  out.form = Graph(n);
  for (int i = 0; i < n; ++i) {
    for (Row r = search.best_code[static_cast<std::size_t>(i)]; r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      if (i < j) out.form.add_edge(i, j);
    }
  }
  return out;
}

}  // namespace cema
