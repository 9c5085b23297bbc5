#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cema/bounds.hpp"
#include "cema/errors.hpp"
#include "cema/graph.hpp"
#include "cema/linalg.hpp"

using namespace cema;

TEST_SUITE("bounds") {
  TEST_CASE("registry layout") {
    REQUIRE(registry().size() == 68);
    int open = 0, rl = 0, sq = 0;
    for (std::size_t k = 0; k < registry().size(); ++k) {
      const auto& b = registry()[k];
      CHECK(b.id == static_cast<int>(k) + 1);
      CHECK((b.family == BoundFamily::VertexMax) == (b.id <= 32));
      open += b.status == KnownStatus::Open;
      rl += b.status == KnownStatus::DisprovedRL;
      sq += b.status == KnownStatus::DisprovedSubquartic;
    }
    CHECK(open == 38);
    CHECK(rl == 25);
    CHECK(sq == 5);
    CHECK(lookup_bound(31).family == BoundFamily::VertexMax);
    CHECK(lookup_bound(68).family == BoundFamily::EdgeMax);
    CHECK_THROWS_AS(lookup_bound(0), LookupError);
    CHECK_THROWS_AS(lookup_bound(69), LookupError);
  }

  TEST_CASE("hand evaluations") {
    Graph k2 = generate_complete(2);
    CHECK(rhs(lookup_bound(1), generate_cycle(4)) == doctest::Approx(4.0));
    CHECK(rhs(lookup_bound(33), k2) == doctest::Approx(2.0));
    CHECK(reward(lookup_bound(1), k2) == doctest::Approx(0.0));
    CHECK(reward(lookup_bound(1), generate_complete(4)) == doctest::Approx(-2.0));
    CHECK(reward(lookup_bound(1), generate_complete(3)) == doctest::Approx(-1.0));
    CHECK(reward(lookup_bound(33), k2) == doctest::Approx(0.0).epsilon(1e-12));

    Graph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    for (const auto& b : registry()) CHECK(reward(b, two) == kMinusInf);
    CHECK_THROWS_AS(rhs(lookup_bound(1), two), UndefinedInvariant);
  }

  TEST_CASE("calibration: 2x when every symbol equals x") {
    for (const auto& b : registry()) {
      for (double x : {1.0, 2.0, 3.0, 3.5, 10.0}) CHECK(std::abs(b.evaluate_uniform(x) - 2 * x) <= 1e-9 * x);
      for (int x : {1, 2, 3, 5, 10}) {
        CAPTURE(b.id);
        CHECK(std::abs(rhs(b, generate_complete(x + 1)) - 2 * x) <= 1e-9);
      }
    }
  }

  TEST_CASE("regular graphs collapse to one term") {
    for (const auto& b : registry()) {
      for (int n = 3; n <= 8; ++n) {
        const double d = 2;
        const double expected = b.family == BoundFamily::VertexMax ? b.vertex(d, d) : b.edge(d, d, d, d);
        CHECK(rhs(b, generate_cycle(n)) == doctest::Approx(expected));
      }
    }
  }

  TEST_CASE("edge formulas are endpoint symmetric") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(1.0, 30.0);
    for (const auto& b : registry()) {
      if (b.family != BoundFamily::EdgeMax) continue;
      for (int t = 0; t < 100; ++t) {
        const double di = u(rng), mi = u(rng), dj = u(rng), mj = u(rng);
        const double a = b.edge(di, mi, dj, mj);
        const double c = b.edge(dj, mj, di, mi);
        if (std::isnan(a) || std::isnan(c)) {
          CHECK(std::isnan(a) == std::isnan(c));
          continue;
        }
        CHECK(std::abs(a - c) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
    }
  }

  TEST_CASE("shared evaluation matches single bounds") {
    const Graph g = from_graph6("KhCGG`C_{USW");
    const auto ids = all_bound_ids();
    const auto rows = evaluate_bounds(g, ids);
    REQUIRE(rows.size() == 68);
    for (const auto& r : rows) {
      CHECK(r.mu == doctest::Approx(lap_spectral_radius(g)));
      CHECK(r.reward == doctest::Approx(reward(lookup_bound(r.bound_id), g)));
    }
  }
}
