#pragma once

#include <vector>

#include "cema/graph.hpp"

namespace cema {

// Result of canonical labeling by equitable-partition refinement with
// individualization and backtracking. `form` is the lexicographically
// smallest relabeled adjacency (row by row) over the leaves of the search
// tree, so isomorphic inputs produce identical forms.
struct Canonical {
  std::vector<int> labeling;  // labeling[position] = original vertex
  std::vector<int> orbits;    // orbits[v] = smallest vertex in the automorphism orbit of v
  std::vector<std::vector<int>> generators;  // automorphisms found; they generate Aut(g)
  Graph form;

  bool rigid() const { return generators.empty(); }
};

Canonical canonicalize(const Graph& g);

inline Graph canonical_form(const Graph& g) { return canonicalize(g).form; }

}  // namespace cema
