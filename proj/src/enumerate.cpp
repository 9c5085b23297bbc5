#include "cema/enumerate.hpp"

#include <optional>
#include <string>

#include "cema/canon.hpp"
#include "cema/errors.hpp"

namespace cema {

namespace {

// Invariant used to pick the vertex whose removal defines the parent:
// larger degree first, then larger sum of neighbour degrees.
int deletion_score(const Graph& g, int v) {
  int sum = 0;
  for (Row r = g.row(v); r != 0; r &= r - 1) sum += g.degree(std::countr_zero(r));
  return g.degree(v) * 4096 + sum;
}

bool is_non_cut(const Graph& g, int v) {
  const Row rest = g.vertex_mask() & ~(Row{1} << v);
  if (rest == 0) return true;
  return reachable_from(g, std::countr_zero(rest), rest) == rest;
}

struct Acceptance {
  bool accepted = false;
  std::optional<Canonical> canon;
};

// The last vertex of `child` was just added. Accept iff it is equivalent
// under Aut(child) to the canonical deletion vertex.
Acceptance accept_child(const Graph& child) {
  const int n = child.order();
  const int added = n - 1;
  const int score = deletion_score(child, added);
  Row ties = 0;
  for (int v = 0; v < added; ++v) {
    const int s = deletion_score(child, v);
    if (s < score) continue;
    if (!is_non_cut(child, v)) continue;
    if (s > score) return {};
    ties |= Row{1} << v;
  }
  if (ties == 0) return {true, std::nullopt};

  Canonical canon = canonicalize(child);
  ties |= Row{1} << added;
  std::vector<int> position(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) position[static_cast<std::size_t>(canon.labeling[static_cast<std::size_t>(i)])] = i;
  int chosen = -1;
  for (Row r = ties; r != 0; r &= r - 1) {
    const int v = std::countr_zero(r);
    if (chosen < 0 || position[static_cast<std::size_t>(v)] < position[static_cast<std::size_t>(chosen)]) chosen = v;
  }
  const bool ok = canon.orbits[static_cast<std::size_t>(chosen)] == canon.orbits[static_cast<std::size_t>(added)];
  return {ok, std::move(canon)};
}

class Enumerator {
 public:
  Enumerator(int n, int max_degree, const std::function<void(const Graph&)>& visit, EnumerationShard shard)
      : target_(n), max_degree_(max_degree), visit_(visit), shard_(shard) {
    split_order_ = n >= 4 ? n - 2 : n;
  }

  void run() { extend(Graph(1)); }

 private:
  void extend(const Graph& parent) {
    const int k = parent.order();
    if (k == split_order_) {
      const long long ticket = split_counter_++;
      if (ticket % shard_.count != shard_.index) return;
    }
    if (k == target_) {
      visit_(parent);
      return;
    }
    const bool rigid = canonicalize(parent).rigid();
    std::vector<Graph> seen;

    Row eligible = 0;
    for (int v = 0; v < k; ++v) {
      if (parent.degree(v) < max_degree_) eligible |= Row{1} << v;
    }
    // Walk all non-empty subsets of the eligible vertices.
    for (Row s = eligible; s != 0; s = (s - 1) & eligible) {
      if (std::popcount(s) > max_degree_) continue;
      Graph child(k + 1);
      for (int v = 0; v < k; ++v) {
        for (Row r = parent.row(v) & ~((Row{1} << (v + 1)) - 1); r != 0; r &= r - 1) {
          child.add_edge(v, std::countr_zero(r));
        }
      }
      for (Row r = s; r != 0; r &= r - 1) child.add_edge(k, std::countr_zero(r));

      Acceptance verdict = accept_child(child);
      if (!verdict.accepted) continue;
      if (!rigid) {
        Graph form = verdict.canon ? verdict.canon->form : canonical_form(child);
        bool duplicate = false;
        for (const auto& other : seen) {
          if (other == form) {
            duplicate = true;
            break;
          }
        }
        if (duplicate) continue;
        seen.push_back(std::move(form));
      }
      extend(child);
    }
  }

  int target_;
  int max_degree_;
  const std::function<void(const Graph&)>& visit_;
  EnumerationShard shard_;
  int split_order_;
  long long split_counter_ = 0;
};

}  // namespace

void enumerate_connected(int n, int max_degree, const std::function<void(const Graph&)>& visit,
                         EnumerationShard shard) {
  if (n < 1 || n > kMaxEnumerationOrder) {
    throw InvalidInput("built-in enumeration supports 1 <= n <= " + std::to_string(kMaxEnumerationOrder) +
                       ", got " + std::to_string(n));
  }
  if (max_degree < 0) throw InvalidInput("max_degree must be non-negative");
  if (shard.count < 1 || shard.index < 0 || shard.index >= shard.count) throw InvalidInput("bad shard");
  if (n > 1 && max_degree == 0) return;
  Enumerator(n, max_degree, visit, shard).run();
}

std::vector<Graph> connected_graphs(int n, int max_degree) {
  std::vector<Graph> out;
  enumerate_connected(n, max_degree, [&](const Graph& g) { out.push_back(g); });
  return out;
}

}  // namespace cema
