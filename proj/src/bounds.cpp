#include "cema/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cema/errors.hpp"
#include "cema/linalg.hpp"

namespace cema {

namespace {

using std::sqrt;

double sq(double x) { return x * x; }
double p4(double x) { return x * x * x * x; }
// Square root that absorbs rounding noise just below zero. Genuinely
// negative radicands give NaN, and such terms drop out of the maximum.
double rt(double x) { return x < 0.0 && x > -1e-9 ? 0.0 : sqrt(x); }
double root4(double x) { return rt(rt(x)); }


constexpr KnownStatus O = KnownStatus::Open;
constexpr KnownStatus RL = KnownStatus::DisprovedRL;
constexpr KnownStatus SQ = KnownStatus::DisprovedSubquartic;

BoundSpec vertex_bound(int id, KnownStatus status, VertexFormula f, std::string_view text) {
  return BoundSpec{id, BoundFamily::VertexMax, status, f, nullptr, text};
}

BoundSpec edge_bound(int id, KnownStatus status, EdgeFormula f, std::string_view text) {
  return BoundSpec{id, BoundFamily::EdgeMax, status, nullptr, f, text};
}

// clang-format off
const std::array<BoundSpec, kBoundCount> kBounds = {{
  vertex_bound(1, O, [](double d, double m) { return rt(4 * d * d * d / m); }, "sqrt(4 d^3 / m)"),
  vertex_bound(2, SQ, [](double d, double m) { return 2 * m * m / d; }, "2 m^2 / d"),
  vertex_bound(3, RL, [](double d, double m) { return m * m / d + m; }, "m^2 / d + m"),
  vertex_bound(4, O, [](double d, double m) { return 2 * d * d / m; }, "2 d^2 / m"),
  vertex_bound(5, O, [](double d, double m) { return d * d / m + m; }, "d^2 / m + m"),
  vertex_bound(6, O, [](double d, double m) { return rt(m * m + 3 * d * d); }, "sqrt(m^2 + 3 d^2)"),
  vertex_bound(7, O, [](double d, double m) { return d * d / m + d; }, "d^2 / m + d"),
  vertex_bound(8, O, [](double d, double m) { return rt(d * (m + 3 * d)); }, "sqrt(d (m + 3 d))"),
  vertex_bound(9, O, [](double d, double m) { return (m + 3 * d) / 2; }, "(m + 3 d) / 2"),
  // Printed with an unbalanced parenthesis; this reading is the one that
  // evaluates to 2x when d = m = x.
  vertex_bound(10, O, [](double d, double m) { return rt(d * (d + 3 * m)); }, "sqrt(d (d + 3 m))"),
  vertex_bound(11, O, [](double d, double m) { return 2 * m * m * m / (d * d); }, "2 m^3 / d^2"),
  vertex_bound(12, O, [](double d, double m) { return rt(2 * m * m + 2 * d * d); }, "sqrt(2 m^2 + 2 d^2)"),
  vertex_bound(13, O, [](double d, double m) { return 2 * p4(m) / (d * d * d); }, "2 m^4 / d^3"),
  vertex_bound(14, O, [](double d, double m) { return 2 * d * d * d / (m * m); }, "2 d^3 / m^2"),
  vertex_bound(15, RL, [](double d, double m) { return rt(4 * m * m * m / d); }, "sqrt(4 m^3 / d)"),
  vertex_bound(16, O, [](double d, double m) { return 2 * p4(d) / (m * m * m); }, "2 d^4 / m^3"),
  vertex_bound(17, SQ, [](double d, double m) { return root4(5 * p4(d) + 11 * p4(m)); }, "(5 d^4 + 11 m^4)^(1/4)"),
  vertex_bound(18, O, [](double d, double m) { return rt(2 * m * m * m / d + 2 * d * d); }, "sqrt(2 m^3 / d + 2 d^2)"),
  vertex_bound(19, O, [](double d, double m) { return root4(4 * p4(d) + 12 * d * m * m * m); }, "(4 d^4 + 12 d m^3)^(1/4)"),
  vertex_bound(20, O, [](double d, double m) { return rt(7 * d * d + 9 * m * m) / 2; }, "sqrt(7 d^2 + 9 m^2) / 2"),
  vertex_bound(21, O, [](double d, double m) { return rt(d * d * d / m + 3 * m * m); }, "sqrt(d^3 / m + 3 m^2)"),
  vertex_bound(22, O, [](double d, double m) { return root4(2 * p4(d) + 14 * d * d * m * m); }, "(2 d^4 + 14 d^2 m^2)^(1/4)"),
  vertex_bound(23, O, [](double d, double m) { return rt(d * d + 3 * d * m); }, "sqrt(d^2 + 3 d m)"),
  vertex_bound(24, O, [](double d, double m) { return root4(6 * p4(d) + 10 * p4(m)); }, "(6 d^4 + 10 m^4)^(1/4)"),
  vertex_bound(25, O, [](double d, double m) { return root4(3 * p4(d) + 13 * d * d * m * m); }, "(3 d^4 + 13 d^2 m^2)^(1/4)"),
  vertex_bound(26, O, [](double d, double m) { return rt(5 * d * d + 11 * d * m) / 2; }, "sqrt(5 d^2 + 11 d m) / 2"),
  vertex_bound(27, O, [](double d, double m) { return rt((3 * d * d + 5 * d * m) / 2); }, "sqrt((3 d^2 + 5 d m) / 2)"),
  vertex_bound(28, RL, [](double d, double m) { return rt(2 * p4(m) / (d * d) + 2 * d * m); }, "sqrt(2 m^4 / d^2 + 2 d m)"),
  vertex_bound(29, RL, [](double d, double m) { return rt(m * m + 3 * m * m * m / d); }, "sqrt(m^2 + 3 m^3 / d)"),
  vertex_bound(30, O, [](double d, double m) { return m * m * m / (d * d) + d * d / m; }, "m^3 / d^2 + d^2 / m"),
  vertex_bound(31, RL, [](double d, double m) { return 4 * m * m / (m + d); }, "4 m^2 / (m + d)"),
  vertex_bound(32, SQ, [](double d, double m) { return rt(m * m * m * (m + 3 * d)) / d; }, "sqrt(m^3 (m + 3 d)) / d"),

  edge_bound(33, O, [](double di, double mi, double dj, double mj) { return 2 * (di + dj) - (mi + mj); },
             "2 (di + dj) - (mi + mj)"),
  edge_bound(34, O, [](double di, double, double dj, double) { return 2 * (di * di + dj * dj) / (di + dj); },
             "2 (di^2 + dj^2) / (di + dj)"),
  edge_bound(35, O, [](double di, double mi, double dj, double mj) { return 2 * (di * di + dj * dj) / (mi + mj); },
             "2 (di^2 + dj^2) / (mi + mj)"),
  edge_bound(36, RL, [](double di, double mi, double dj, double mj) { return 2 * (mi * mi + mj * mj) / (di + dj); },
             "2 (mi^2 + mj^2) / (di + dj)"),
  edge_bound(37, O, [](double di, double, double dj, double) { return rt(2 * (di * di + dj * dj)); },
             "sqrt(2 (di^2 + dj^2))"),
  edge_bound(38, O, [](double di, double, double dj, double) { return 2 + rt(2 * sq(di - 1) + 2 * sq(dj - 1)); },
             "2 + sqrt(2 (di-1)^2 + 2 (dj-1)^2)"),
  edge_bound(39, O, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (di * di + dj * dj) - 4 * (mi + mj) + 4);
             },
             "2 + sqrt(2 (di^2 + dj^2) - 4 (mi + mj) + 4)"),
  edge_bound(40, O, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (sq(mi - 1) + sq(mj - 1)) + (di * di + dj * dj) - (di * mi + dj * mj));
             },
             "2 + sqrt(2 ((mi-1)^2 + (mj-1)^2) + (di^2 + dj^2) - (di mi + dj mj))"),
  edge_bound(41, RL, [](double di, double mi, double dj, double mj) {
               return 2 + (mi + mj) - (di + dj) + rt(2 * (di * di + dj * dj) - 4 * (mi + mj) + 4);
             },
             "2 + (mi + mj) - (di + dj) + sqrt(2 (di^2 + dj^2) - 4 (mi + mj) + 4)"),
  edge_bound(42, O, [](double di, double mi, double dj, double mj) { return rt(di * di + dj * dj + 2 * mi * mj); },
             "sqrt(di^2 + dj^2 + 2 mi mj)"),
  edge_bound(43, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(3 * (mi * mi + mj * mj) - 2 * mi * mj - 4 * (di + dj) + 4);
             },
             "2 + sqrt(3 (mi^2 + mj^2) - 2 mi mj - 4 (di + dj) + 4)"),
  edge_bound(44, O, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (sq(di - 1) + sq(dj - 1) + mi * mj - di * dj));
             },
             "2 + sqrt(2 ((di-1)^2 + (dj-1)^2 + mi mj - di dj))"),
  edge_bound(45, O, [](double di, double mi, double dj, double mj) {
               return 2 + rt(sq(di - dj) + 2 * (di * mi + dj * mj) - 4 * (mi + mj) + 4);
             },
             "2 + sqrt((di - dj)^2 + 2 (di mi + dj mj) - 4 (mi + mj) + 4)"),
  edge_bound(46, O, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (di * di + dj * dj) - 16 * di * dj / (mi + mj) + 4);
             },
             "2 + sqrt(2 (di^2 + dj^2) - 16 di dj / (mi + mj) + 4)"),
  edge_bound(47, O, [](double di, double mi, double dj, double mj) {
               return (2 * (di * di + dj * dj) - sq(mi - mj)) / (di + dj);
             },
             "(2 (di^2 + dj^2) - (mi - mj)^2) / (di + dj)"),
  edge_bound(48, O, [](double di, double mi, double dj, double mj) {
               return 2 * (di * di + dj * dj) / (2 + rt(2 * (di * di + dj * dj) - 4 * (mi + mj) + 4));
             },
             "2 (di^2 + dj^2) / (2 + sqrt(2 (di^2 + dj^2) - 4 (mi + mj) + 4))"),
  edge_bound(49, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (mi * mi + mj * mj) + sq(di - dj) - 4 * (di + dj) + 4);
             },
             "2 + sqrt(2 (mi^2 + mj^2) + (di - dj)^2 - 4 (di + dj) + 4)"),
  edge_bound(50, SQ, [](double di, double mi, double dj, double mj) {
               return 2 * (di * di + dj * dj + mi * mj - di * dj) / (di + dj);
             },
             "2 (di^2 + dj^2 + mi mj - di dj) / (di + dj)"),
  edge_bound(51, RL, [](double di, double mi, double dj, double mj) {
               return 2 * (mi + mj) - 4 * mi * mj / (di + dj);
             },
             "2 (mi + mj) - 4 mi mj / (di + dj)"),
  edge_bound(52, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(rt(8 * (p4(mi) + p4(mj)) - 8 * (di * di + dj * dj) + 4) - 4 * (di + dj) + 6);
             },
             "2 + sqrt(sqrt(8 (mi^4 + mj^4) - 8 (di^2 + dj^2) + 4) - 4 (di + dj) + 6)"),
  edge_bound(53, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(rt(8 * (p4(mi) + p4(mj)) - 8 * (di * mi + dj * mj) + 4) - 4 * (di + dj) + 6);
             },
             "2 + sqrt(sqrt(8 (mi^4 + mj^4) - 8 (di mi + dj mj) + 4) - 4 (di + dj) + 6)"),
  edge_bound(54, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (mi * mi + mj * mj) + (di * mi + dj * mj) - (di * di + dj * dj) - 4 * (di + dj) + 4);
             },
             "2 + sqrt(2 (mi^2 + mj^2) + (di mi + dj mj) - (di^2 + dj^2) - 4 (di + dj) + 4)"),
  edge_bound(55, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(3 * (mi * mi + mj * mj) - (di * di + dj * dj) - 4 * (mi + mj) + 4);
             },
             "2 + sqrt(3 (mi^2 + mj^2) - (di^2 + dj^2) - 4 (mi + mj) + 4)"),
  edge_bound(56, O, [](double di, double mi, double dj, double mj) {
               return (di * di + dj * dj) * (mi + mj) / (2 * di * dj);
             },
             "(di^2 + dj^2) (mi + mj) / (2 di dj)"),
  edge_bound(57, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (mi * mi + mj * mj) - 8 * (di * di + dj * dj) / (mi + mj) + 4);
             },
             "2 + sqrt(2 (mi^2 + mj^2) - 8 (di^2 + dj^2) / (mi + mj) + 4)"),
  edge_bound(58, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (mi * mi + mi * mj + mj * mj) - (di * mi + dj * mj) - 4 * (di + dj) + 4);
             },
             "2 + sqrt(2 (mi^2 + mi mj + mj^2) - (di mi + dj mj) - 4 (di + dj) + 4)"),
  edge_bound(59, RL, [](double di, double mi, double dj, double mj) {
               return (2 * (mi * mi + mi * mj + mj * mj) - (di * di + dj * dj)) / (mi + mj);
             },
             "(2 (mi^2 + mi mj + mj^2) - (di^2 + dj^2)) / (mi + mj)"),
  edge_bound(60, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(2 * (mi * mi + mi * mj + mj * mj) - (di * di + dj * dj) - 4 * (di + dj) + 4);
             },
             "2 + sqrt(2 (mi^2 + mi mj + mj^2) - (di^2 + dj^2) - 4 (di + dj) + 4)"),
  edge_bound(61, SQ, [](double di, double mi, double dj, double mj) {
               return 2 * (mi * mi + mj * mj) / (2 + rt(2 * (sq(di - 1) + sq(dj - 1))));
             },
             "2 (mi^2 + mj^2) / (2 + sqrt(2 ((di-1)^2 + (dj-1)^2)))"),
  edge_bound(62, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(mi * mi + 4 * mi * mj + mj * mj - 2 * di * dj - 4 * (di + dj) + 4);
             },
             "2 + sqrt(mi^2 + 4 mi mj + mj^2 - 2 di dj - 4 (di + dj) + 4)"),
  edge_bound(63, RL, [](double di, double mi, double dj, double mj) {
               return di + dj + mi + mj - 4 * di * dj / (mi + mj);
             },
             "di + dj + mi + mj - 4 di dj / (mi + mj)"),
  edge_bound(64, RL, [](double di, double mi, double dj, double mj) { return mi * mj * (di + dj) / (di * dj); },
             "mi mj (di + dj) / (di dj)"),
  edge_bound(65, RL, [](double di, double mi, double dj, double mj) {
               return (mi + mj) * (di * mi + dj * mj) / (2 * mi * mj);
             },
             "(mi + mj) (di mi + dj mj) / (2 mi mj)"),
  edge_bound(66, RL, [](double di, double mi, double dj, double mj) {
               return (mi * mi + 4 * mi * mj + mj * mj - (di * mi + dj * mj)) / (di + dj);
             },
             "(mi^2 + 4 mi mj + mj^2 - (di mi + dj mj)) / (di + dj)"),
  edge_bound(67, RL, [](double di, double mi, double dj, double mj) {
               return (mi + mj) * (di * mi + dj * mj) / (2 * di * dj);
             },
             "(mi + mj) (di mi + dj mj) / (2 di dj)"),
  edge_bound(68, RL, [](double di, double mi, double dj, double mj) {
               return 2 + rt(sq(mi - mj) + 4 * di * dj - 4 * (mi + mj) + 4);
             },
             "2 + sqrt((mi - mj)^2 + 4 di dj - 4 (mi + mj) + 4)"),
}};
// clang-format on

}  // namespace

std::string_view to_string(BoundFamily family) {
  return family == BoundFamily::VertexMax ? "vertex-max" : "edge-max";
}

std::string_view to_string(KnownStatus status) {
  switch (status) {
    case KnownStatus::Open:
      return "open";
    case KnownStatus::DisprovedRL:
      return "disproved-RL";
    case KnownStatus::DisprovedSubquartic:
      return "disproved-subquartic";
  }
  return "unknown";
}

double BoundSpec::evaluate_uniform(double x) const {
  return family == BoundFamily::VertexMax ? vertex(x, x) : edge(x, x, x, x);
}

std::span<const BoundSpec> registry() { return kBounds; }

const BoundSpec& lookup_bound(int id) {
  if (id < 1 || id > kBoundCount) {
    throw LookupError("unknown bound id " + std::to_string(id) + "; valid ids are 1..68");
  }
  return kBounds[static_cast<std::size_t>(id - 1)];
}

std::vector<int> all_bound_ids() {
  std::vector<int> ids(kBoundCount);
  std::iota(ids.begin(), ids.end(), 1);
  return ids;
}

DegreeProfile degree_profile(const Graph& g) { return {degrees(g), average_degrees(g)}; }

double rhs(const BoundSpec& spec, const Graph& g, const DegreeProfile& profile) {
  double best = -std::numeric_limits<double>::infinity();
  const auto& d = profile.d;
  const auto& m = profile.m;
  if (spec.family == BoundFamily::VertexMax) {
    for (int v = 0; v < g.order(); ++v) {
      const auto k = static_cast<std::size_t>(v);
      const double term = spec.vertex(d[k], m[k]);
      if (!std::isnan(term)) best = std::max(best, term);
    }
  } else {
    for (int i = 0; i < g.order(); ++i) {
      // Each unordered edge once: neighbours j > i.
      for (Row r = g.row(i) & ~((Row{2} << i) - 1); r != 0; r &= r - 1) {
        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(std::countr_zero(r));
        const double term = spec.edge(d[a], m[a], d[b], m[b]);
        if (!std::isnan(term)) best = std::max(best, term);
      }
    }
  }
  if (best == -std::numeric_limits<double>::infinity()) {
    throw UndefinedInvariant("bound " + std::to_string(spec.id) + " has no real-valued term on this graph");
  }
  return best;
}

double rhs(const BoundSpec& spec, const Graph& g) {
  if (g.order() < 2 || !is_connected(g)) {
    throw UndefinedInvariant("bound " + std::to_string(spec.id) + " needs a connected graph with n >= 2");
  }
  return rhs(spec, g, degree_profile(g));
}

double reward(const BoundSpec& spec, const Graph& g) {
  if (g.order() < 2) throw InvalidInput("reward needs n >= 2");
  if (num_components(g) > 1) return kMinusInf;
  return lap_spectral_radius(g) - rhs(spec, g, degree_profile(g));
}

std::vector<BoundEvaluation> evaluate_bounds(const Graph& g, std::span<const int> bound_ids) {
  if (g.order() < 2 || !is_connected(g)) throw UndefinedInvariant("bounds need a connected graph with n >= 2");
  const double mu = lap_spectral_radius(g);
  const auto profile = degree_profile(g);
  std::vector<BoundEvaluation> out;
  out.reserve(bound_ids.size());
  for (int id : bound_ids) {
    const double r = rhs(lookup_bound(id), g, profile);
    out.push_back({id, mu, r, mu - r});
  }
  return out;
}

}  // namespace cema
