#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "cema/canon.hpp"
#include "cema/enumerate.hpp"
#include "cema/errors.hpp"
#include "cema/graph.hpp"

using namespace cema;

namespace {

std::vector<std::uint8_t> bits_of(const char* s) {
  std::vector<std::uint8_t> out;
  for (; *s; ++s) out.push_back(*s == '1' ? 1 : 0);
  return out;
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

// Reference encoder written from the format description: column-wise upper
// triangle, six bits per byte, big-endian within the byte.
std::string naive_graph6(const Graph& g) {
  std::string bits;
  for (int j = 1; j < g.order(); ++j)
    for (int i = 0; i < j; ++i) bits += g.has_edge(i, j) ? '1' : '0';
  while (bits.size() % 6 != 0) bits += '0';
  std::string out(1, static_cast<char>(g.order() + 63));
  for (std::size_t k = 0; k < bits.size(); k += 6) out += static_cast<char>(std::stoi(bits.substr(k, 6), nullptr, 2) + 63);
  return out;
}

// Minimum relabeled edge string over all permutations.
std::string brute_canonical(const Graph& g) {
  std::vector<int> perm(static_cast<std::size_t>(g.order()));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string s;
    for (int i = 0; i < g.order(); ++i)
      for (int j = i + 1; j < g.order(); ++j) s += g.has_edge(perm[i], perm[j]) ? '1' : '0';
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("edge bits use the row-wise order") {
    const Graph g = from_edge_bits(4, bits_of("110110"));
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(0, 2));
    CHECK_FALSE(g.has_edge(0, 3));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(1, 3));
    CHECK_FALSE(g.has_edge(2, 3));
    CHECK(g.edge_count() == 4);
    CHECK(to_edge_bits(g) == bits_of("110110"));

    CHECK(from_edge_bits(3, bits_of("000")).edge_count() == 0);
    const Graph k3 = from_edge_bits(3, bits_of("111"));
    CHECK(degrees(k3) == std::vector<int>{2, 2, 2});
    CHECK_THROWS_AS(from_edge_bits(4, bits_of("11011")), InvalidInput);
  }

  TEST_CASE("mutators keep the matrix symmetric") {
    Graph g(5);
    g.add_edge(3, 1);
    CHECK(g.has_edge(1, 3));
    CHECK(g.has_edge(3, 1));
    CHECK_THROWS_AS(g.add_edge(2, 2), InvalidInput);
    CHECK_THROWS_AS(g.add_edge(0, 5), InvalidInput);
    g.remove_edge(1, 3);
    CHECK(g.edge_count() == 0);
  }

  TEST_CASE("average neighbour degrees") {
    CHECK(average_degrees(generate_complete(3)) == std::vector<double>{2, 2, 2});
    CHECK(average_degrees(generate_star(4)) == std::vector<double>{1, 3, 3, 3});
    const auto m = average_degrees(from_edge_bits(4, bits_of("110110")));
    REQUIRE(m.size() == 4);
    CHECK(m[0] == doctest::Approx(2.5));
    CHECK(m[1] == doctest::Approx(5.0 / 3.0));
    CHECK(m[2] == doctest::Approx(2.5));
    CHECK(m[3] == doctest::Approx(3.0));
    CHECK_THROWS_AS(average_degrees(Graph(3)), UndefinedInvariant);
  }

  TEST_CASE("components") {
    CHECK(num_components(generate_complete(3)) == 1);
    Graph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    CHECK(num_components(two) == 2);
    CHECK(num_components(Graph(5)) == 5);
    CHECK_FALSE(is_connected(two));
  }

  TEST_CASE("graph6 vectors") {
    CHECK(to_graph6(generate_complete(3)) == "Bw");
    CHECK(to_graph6(Graph(2)) == "A?");
    CHECK(from_graph6("Bw") == generate_complete(3));
    CHECK(from_graph6("A?") == Graph(2));
    CHECK(from_graph6(">>graph6<<Bw\n") == generate_complete(3));
    CHECK_THROWS_AS(from_graph6("B"), ParseError);
    CHECK_THROWS_AS(from_graph6("Bww"), ParseError);
    CHECK_THROWS_AS(from_graph6("B "), ParseError);
    CHECK_THROWS_AS(from_graph6(""), ParseError);
  }

  TEST_CASE("graph6 matches a reference encoder and round-trips") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 40);
      const Graph g = random_graph(n, 0.3, rng);
      const auto text = to_graph6(g);
      CHECK(text == naive_graph6(g));
      CHECK(from_graph6(text) == g);
    }
  }

  TEST_CASE("family generators") {
    CHECK(degrees(generate_star(4)) == std::vector<int>{3, 1, 1, 1});
    CHECK(generate_windmill(1) == generate_complete(3));
    const Graph w2 = generate_windmill(2);
    CHECK(w2.order() == 5);
    CHECK(degrees(w2) == std::vector<int>{4, 2, 2, 2, 2});
    CHECK(generate_cycle(5).edge_count() == 5);
    CHECK(generate_path(5).edge_count() == 4);
  }

  TEST_CASE("walk identities on random connected graphs") {
    std::mt19937_64 rng(5);
    int seen = 0;
    while (seen < 100) {
      const Graph g = random_graph(2 + static_cast<int>(rng() % 14), 0.4, rng);
      if (!is_connected(g)) continue;
      ++seen;
      const auto d = degrees(g);
      const auto m = average_degrees(g);
      CHECK(std::accumulate(d.begin(), d.end(), 0) == 2 * g.edge_count());
      double dm = 0.0;
      double dd = 0.0;
      for (std::size_t v = 0; v < d.size(); ++v) {
        dm += d[v] * m[v];
        dd += d[v] * d[v];
      }
      CHECK(dm == doctest::Approx(dd));
    }
  }
}

TEST_SUITE("canon") {
  TEST_CASE("canonical form agrees with brute force up to relabeling") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 7);
      const Graph g = random_graph(n, 0.5, rng);
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const Graph h = permute(g, perm);
      CHECK(canonical_form(g) == canonical_form(h));
      CHECK(brute_canonical(canonical_form(g)) == brute_canonical(g));
    }
  }

  TEST_CASE("labeling relabels to the form") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = random_graph(2 + static_cast<int>(rng() % 10), 0.4, rng);
      const auto c = canonicalize(g);
      std::vector<int> to_position(c.labeling.size());
      for (std::size_t p = 0; p < c.labeling.size(); ++p) to_position[static_cast<std::size_t>(c.labeling[p])] = static_cast<int>(p);
      CHECK(permute(g, to_position) == c.form);
      for (const auto& gen : c.generators) CHECK(permute(g, gen) == g);
    }
  }

  TEST_CASE("orbits match brute-force automorphisms") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 6);
      const Graph g = random_graph(n, 0.5, rng);
      std::vector<int> parent(static_cast<std::size_t>(n));
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
        return v;
      };
      std::vector<int> perm = parent;
      do {
        if (permute(g, perm) != g) continue;
        for (int v = 0; v < n; ++v) {
          const int a = find(v);
          const int b = find(perm[static_cast<std::size_t>(v)]);
          parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      std::vector<int> orbit(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) orbit[static_cast<std::size_t>(v)] = find(v);
      CHECK(canonicalize(g).orbits == orbit);
    }
  }

  TEST_CASE("strongly regular and symmetric inputs") {
    // Petersen graph: outer 5-cycle, inner pentagram, spokes.
    Graph p(10);
    for (int i = 0; i < 5; ++i) {
      p.add_edge(i, (i + 1) % 5);
      p.add_edge(5 + i, 5 + (i + 2) % 5);
      p.add_edge(i, 5 + i);
    }
    const auto c = canonicalize(p);
    CHECK(std::all_of(c.orbits.begin(), c.orbits.end(), [](int o) { return o == 0; }));
    std::vector<int> perm = {3, 7, 1, 9, 0, 2, 8, 5, 4, 6};
    CHECK(canonical_form(permute(p, perm)) == c.form);
    CHECK(canonicalize(generate_complete(9)).orbits == std::vector<int>(9, 0));
  }
}

TEST_SUITE("enumerate") {
  TEST_CASE("small counts") {
    const auto three = connected_graphs(3, 2);
    REQUIRE(three.size() == 2);
    std::set<int> edges = {three[0].edge_count(), three[1].edge_count()};
    CHECK(edges == std::set<int>{2, 3});
    CHECK(connected_graphs(4, 3).size() == 6);
    CHECK(connected_graphs(5, 4).size() == 21);
    CHECK(connected_graphs(6, 5).size() == 112);
    CHECK(connected_graphs(7, 6).size() == 853);
    CHECK(connected_graphs(8, 7).size() == 11117);
  }

  TEST_CASE("brute force over labeled graphs") {
    for (int n = 2; n <= 6; ++n) {
      for (int cap : {2, 3, n - 1}) {
        std::set<std::string> expected;
        const int pairs = n * (n - 1) / 2;
        for (int mask = 0; mask < (1 << pairs); ++mask) {
          std::vector<std::uint8_t> bits(static_cast<std::size_t>(pairs));
          for (int k = 0; k < pairs; ++k) bits[static_cast<std::size_t>(k)] = (mask >> k) & 1;
          const Graph g = from_edge_bits(n, bits);
          if (is_connected(g) && g.max_degree() <= cap) expected.insert(to_graph6(canonical_form(g)));
        }
        std::set<std::string> got;
        std::size_t visits = 0;
        enumerate_connected(n, cap, [&](const Graph& g) {
          ++visits;
          CHECK(is_connected(g));
          CHECK(g.max_degree() <= cap);
          got.insert(to_graph6(canonical_form(g)));
        });
        CHECK(visits == got.size());
        CHECK(got == expected);
      }
    }
  }

  TEST_CASE("subquartic counts and shards") {
    CHECK(connected_graphs(8, 4).size() == 1929);
    std::size_t total = 0;
    std::set<std::string> seen;
    for (int s = 0; s < 3; ++s) {
      enumerate_connected(9, 4, [&](const Graph& g) {
        ++total;
        seen.insert(to_graph6(canonical_form(g)));
      }, EnumerationShard{s, 3});
    }
    CHECK(total == 12207);
    CHECK(seen.size() == 12207);
  }

  TEST_CASE("range checks") {
    CHECK_THROWS_AS(connected_graphs(kMaxEnumerationOrder + 1, 4), InvalidInput);
    CHECK(connected_graphs(1, 0).size() == 1);
  }
}
