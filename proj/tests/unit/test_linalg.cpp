#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cema/enumerate.hpp"
#include "cema/graph.hpp"
#include "cema/linalg.hpp"

using namespace cema;

namespace {

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

void check_identities(const SymMatrix& m, const std::vector<double>& ev) {
  const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
  double squares = 0.0;
  for (double x : ev) squares += x * x;
  CHECK(std::abs(sum - m.trace()) <= 1e-9 * std::max(1.0, std::abs(m.trace())));
  CHECK(std::abs(squares - m.frobenius_squared()) <= 1e-9 * std::max(1.0, m.frobenius_squared()));
  CHECK(std::is_sorted(ev.begin(), ev.end()));
}

int zero_count(const std::vector<double>& ev) {
  return static_cast<int>(std::count_if(ev.begin(), ev.end(), [](double x) { return std::abs(x) < 1e-6; }));
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("laplacian entries") {
    const auto k2 = laplacian(generate_complete(2));
    CHECK(k2(0, 0) == 1);
    CHECK(k2(0, 1) == -1);
    CHECK(k2(1, 1) == 1);
    const auto p3 = laplacian(generate_path(3));
    const double expected[3][3] = {{1, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(p3(i, j) == expected[i][j]);
  }

  TEST_CASE("small spectra") {
    SymMatrix d(2);
    d.set(0, 0, 3);
    d.set(1, 1, 2);
    const auto diag = sym_eigenvalues(d);
    CHECK(diag[0] == doctest::Approx(2.0));
    CHECK(diag[1] == doctest::Approx(3.0));

    const auto k3 = sym_eigenvalues(laplacian(generate_complete(3)));
    CHECK(std::abs(k3[0]) < 1e-12);
    CHECK(k3[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(k3[2] == doctest::Approx(3.0).epsilon(1e-12));

    const auto p3 = sym_eigenvalues(laplacian(generate_path(3)));
    CHECK(std::abs(p3[0]) < 1e-12);
    CHECK(p3[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p3[2] == doctest::Approx(3.0).epsilon(1e-12));
  }

  TEST_CASE("dense matrix against the 2x2 closed form") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 50; ++t) {
      SymMatrix m(2);
      const double a = u(rng), b = u(rng), c = u(rng);
      m.set(0, 0, a);
      m.set(0, 1, b);
      m.set(1, 1, c);
      const double mid = (a + c) / 2;
      const double rad = std::sqrt((a - c) * (a - c) / 4 + b * b);
      const auto ev = sym_eigenvalues(m);
      CHECK(ev[0] == doctest::Approx(mid - rad).epsilon(1e-10));
      CHECK(ev[1] == doctest::Approx(mid + rad).epsilon(1e-10));
    }
  }

  TEST_CASE("complete graphs and stars have mu = n") {
    for (int n = 2; n <= 12; ++n) CHECK(std::abs(lap_spectral_radius(generate_complete(n)) - n) < 1e-9);
    for (int n = 3; n <= 12; ++n) CHECK(std::abs(lap_spectral_radius(generate_star(n)) - n) < 1e-9);
  }

  TEST_CASE("identities and zero multiplicity over all connected graphs up to 7 vertices") {
    for (int n = 2; n <= 7; ++n) {
      enumerate_connected(n, n - 1, [](const Graph& g) {
        const auto l = laplacian(g);
        const auto ev = sym_eigenvalues(l);
        check_identities(l, ev);
        CHECK(std::abs(ev.front()) < 1e-8);
        CHECK(zero_count(ev) == 1);
        CHECK(ev.back() <= g.order() + 1e-8);
        CHECK(ev.back() >= g.max_degree() + 1 - 1e-8);
      });
    }
  }

  TEST_CASE("random graphs, including disconnected ones") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + static_cast<int>(rng() % 16);
      const Graph g = random_graph(n, 0.15 + 0.5 * static_cast<double>(rng() % 100) / 100.0, rng);
      const auto l = laplacian(g);
      const auto ev = sym_eigenvalues(l);
      check_identities(l, ev);
      CHECK(zero_count(ev) == num_components(g));

      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const auto shuffled = sym_eigenvalues(laplacian(permute(g, perm)));
      for (std::size_t k = 0; k < ev.size(); ++k) CHECK(std::abs(ev[k] - shuffled[k]) < 1e-8);
    }
  }

  TEST_CASE("larger orders converge") {
    std::mt19937_64 rng(4);
    const Graph g = random_graph(64, 0.5, rng);
    const auto l = laplacian(g);
    check_identities(l, sym_eigenvalues(l));
  }
}
