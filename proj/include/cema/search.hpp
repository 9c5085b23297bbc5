#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cema/bounds.hpp"
#include "cema/graph.hpp"

namespace cema {

// Rewards at or below this are treated as equality up to rounding.
inline constexpr double kViolationTolerance = 1e-9;

enum class ReportSource { Enumerated, Stream };
std::string_view to_string(ReportSource source);

struct ViolationReport {
  int bound_id = 0;
  std::string g6;
  double mu = 0.0;
  double rhs = 0.0;
  double reward = 0.0;
  ReportSource source = ReportSource::Enumerated;
};

// Called once per violating graph with all of its violations.
using ReportSink = std::function<void(std::span<const ViolationReport>)>;

struct StreamIssue {
  long long line = 0;
  std::string message;
};

struct ScanSummary {
  long long scanned = 0;
  long long skipped = 0;     // disconnected or single-vertex inputs
  long long violating_graphs = 0;
  long long violations = 0;
  double max_reward = kMinusInf;  // over every evaluated (graph, bound)
  std::vector<StreamIssue> issues;
};

// Evaluates every connected graph of order n and maximum degree at most
// max_degree. InvalidInput when n is outside 2..kMaxEnumerationOrder.
ScanSummary exhaustive_check(std::span<const int> bound_ids, int n, int max_degree, const ReportSink& sink,
                             int workers = 1);

// Newline-delimited graph6. Blank lines are ignored. With strict set the
// first malformed line throws ParseError naming the line; otherwise it is
// recorded in issues and skipped.
ScanSummary stream_check(std::span<const int> bound_ids, std::istream& in, const ReportSink& sink, bool strict,
                         int workers = 1);

// Per-bound values for one graph6 string. ParseError on bad input,
// UndefinedInvariant when the graph is disconnected.
std::vector<BoundEvaluation> check_single(std::string_view graph6, std::span<const int> bound_ids);

// Report CSV writer: bound_id,g6,mu,rhs,reward,source.
class ReportWriter {
 public:
  static constexpr const char* kHeader = "bound_id,g6,mu,rhs,reward,source";

  explicit ReportWriter(std::ostream& out);
  void write(std::span<const ViolationReport> reports);

 private:
  std::ostream& out_;
};

}  // namespace cema
