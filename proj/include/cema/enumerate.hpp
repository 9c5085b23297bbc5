#pragma once

#include <functional>
#include <vector>

#include "cema/graph.hpp"

namespace cema {

inline constexpr int kMaxEnumerationOrder = 12;

// Selects a deterministic slice of the search tree so that several workers
// can split one enumeration. Subtrees rooted at order `split_order` are
// numbered in visiting order and subtree i goes to shard i % shard_count.
struct EnumerationShard {
  int index = 0;
  int count = 1;
};

// Visits every connected graph of order n with maximum degree at most
// max_degree exactly once up to isomorphism. Generation is by canonical
// vertex augmentation: a graph is accepted from its parent only if the
// added vertex lies in the orbit of the canonically chosen non-cut vertex.
// Pass max_degree >= n-1 for no degree restriction.
void enumerate_connected(int n, int max_degree, const std::function<void(const Graph&)>& visit,
                         EnumerationShard shard = {});

std::vector<Graph> connected_graphs(int n, int max_degree);

}  // namespace cema
