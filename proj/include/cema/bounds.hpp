#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cema/graph.hpp"

namespace cema {

// Reward assigned to disconnected graphs. Compared by equality only.
inline constexpr double kMinusInf = -1000000.0;

enum class BoundFamily { VertexMax, EdgeMax };
enum class KnownStatus { Open, DisprovedRL, DisprovedSubquartic };

std::string_view to_string(BoundFamily family);
std::string_view to_string(KnownStatus status);

// Degrees d_v and average neighbour degrees m_v of a graph without
// isolated vertices.
struct DegreeProfile {
  std::vector<int> d;
  std::vector<double> m;
};

DegreeProfile degree_profile(const Graph& g);

using VertexFormula = double (*)(double d, double m);
using EdgeFormula = double (*)(double di, double mi, double dj, double mj);

// One conjectured upper bound on the Laplacian spectral radius, either
// max over vertices of f(d_v, m_v) or max over edges of f(d_i, m_i, d_j, m_j).
struct BoundSpec {
  int id = 0;
  BoundFamily family = BoundFamily::VertexMax;
  KnownStatus status = KnownStatus::Open;
  VertexFormula vertex = nullptr;
  EdgeFormula edge = nullptr;
  std::string_view formula;

  // f evaluated with every d and m symbol replaced by x.
  double evaluate_uniform(double x) const;
};

inline constexpr int kBoundCount = 68;

std::span<const BoundSpec> registry();
const BoundSpec& lookup_bound(int id);  // LookupError for ids outside 1..68

// Right-hand side of the bound; UndefinedInvariant on disconnected graphs.
double rhs(const BoundSpec& spec, const Graph& g);
double rhs(const BoundSpec& spec, const Graph& g, const DegreeProfile& profile);

// mu(G) - rhs(G), or kMinusInf when g is disconnected.
double reward(const BoundSpec& spec, const Graph& g);

struct BoundEvaluation {
  int bound_id = 0;
  double mu = 0.0;
  double rhs = 0.0;
  double reward = 0.0;
};

// Evaluates several bounds sharing one eigenvalue computation. The graph
// must be connected.
std::vector<BoundEvaluation> evaluate_bounds(const Graph& g, std::span<const int> bound_ids);

std::vector<int> all_bound_ids();

}  // namespace cema
