#include "cema/search.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>

#include "cema/enumerate.hpp"
#include "cema/errors.hpp"
#include "cema/parallel.hpp"

namespace cema {

namespace {

// Lines handed to the workers at once in stream mode.
constexpr std::size_t kStreamChunk = 4096;

struct Verdict {
  double max_reward = kMinusInf;
  std::vector<ViolationReport> reports;
};

Verdict judge(const Graph& g, std::span<const int> ids, ReportSource source) {
  Verdict v;
  std::string g6;
  for (const auto& e : evaluate_bounds(g, ids)) {
    v.max_reward = std::max(v.max_reward, e.reward);
    if (e.reward > kViolationTolerance) {
      if (g6.empty()) g6 = to_graph6(g);
      v.reports.push_back({e.bound_id, g6, e.mu, e.rhs, e.reward, source});
    }
  }
  return v;
}

void tally(ScanSummary& s, const Verdict& v, const ReportSink& sink) {
  ++s.scanned;
  s.max_reward = std::max(s.max_reward, v.max_reward);
  if (v.reports.empty()) return;
  ++s.violating_graphs;
  s.violations += static_cast<long long>(v.reports.size());
  if (sink) sink(v.reports);
}

void check_ids(std::span<const int> ids) {
  for (int id : ids) lookup_bound(id);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

std::string_view to_string(ReportSource source) {
  return source == ReportSource::Enumerated ? "enumerated" : "stream";
}

ScanSummary exhaustive_check(std::span<const int> bound_ids, int n, int max_degree, const ReportSink& sink,
                             int workers) {
  if (n < 2 || n > kMaxEnumerationOrder) {
    throw InvalidInput("exhaustive scans support 2 <= n <= " + std::to_string(kMaxEnumerationOrder) +
                       "; use a graph6 stream for larger orders");
  }
  if (max_degree < 1) throw InvalidInput("max_degree must be positive");
  check_ids(bound_ids);
  ScanSummary total;
  std::mutex mutex;
  workers = std::max(workers, 1);
  parallel_for(workers, workers, [&](int w) {
    ScanSummary local;
    enumerate_connected(
        n, max_degree,
        [&](const Graph& g) {
          const Verdict v = judge(g, bound_ids, ReportSource::Enumerated);
          if (v.reports.empty()) {
            tally(local, v, {});
            return;
          }
          std::lock_guard lock(mutex);
          tally(local, v, sink);
        },
        EnumerationShard{w, workers});
    std::lock_guard lock(mutex);
    total.scanned += local.scanned;
    total.violating_graphs += local.violating_graphs;
    total.violations += local.violations;
    total.max_reward = std::max(total.max_reward, local.max_reward);
  });
  return total;
}

ScanSummary stream_check(std::span<const int> bound_ids, std::istream& in, const ReportSink& sink, bool strict,
                         int workers) {
  check_ids(bound_ids);
  ScanSummary summary;
  std::vector<std::pair<long long, std::string>> chunk;
  std::vector<Verdict> verdicts;
  std::vector<char> evaluated;
  long long line_no = 0;
  std::string line;

  auto flush = [&] {
    verdicts.assign(chunk.size(), Verdict{});
    evaluated.assign(chunk.size(), 0);
    std::vector<Graph> graphs(chunk.size());
    // Parsing is serial so that errors surface in line order.
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      try {
        graphs[k] = from_graph6(chunk[k].second);
      } catch (const ParseError& e) {
        const std::string msg = "line " + std::to_string(chunk[k].first) + ": " + e.what();
        if (strict) throw ParseError(msg);
        summary.issues.push_back({chunk[k].first, e.what()});
        evaluated[k] = 2;
        continue;
      }
      if (graphs[k].order() >= 2 && is_connected(graphs[k])) evaluated[k] = 1;
    }
    parallel_for(static_cast<int>(chunk.size()), workers, [&](int k) {
      const auto i = static_cast<std::size_t>(k);
      if (evaluated[i] == 1) verdicts[i] = judge(graphs[i], bound_ids, ReportSource::Stream);
    });
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      if (evaluated[k] == 1) {
        tally(summary, verdicts[k], sink);
      } else if (evaluated[k] == 0) {
        ++summary.skipped;
      }
    }
    chunk.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    chunk.emplace_back(line_no, std::string(text));
    if (chunk.size() == kStreamChunk) flush();
  }
  flush();
  return summary;
}

std::vector<BoundEvaluation> check_single(std::string_view graph6, std::span<const int> bound_ids) {
  const Graph g = from_graph6(graph6);
  if (g.order() < 2 || !is_connected(g)) {
    throw UndefinedInvariant("graph " + std::string(graph6) + " is not connected");
  }
  return evaluate_bounds(g, bound_ids);
}

ReportWriter::ReportWriter(std::ostream& out) : out_(out) { out_ << kHeader << '\n'; }

void ReportWriter::write(std::span<const ViolationReport> reports) {
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g,", r.mu, r.rhs, r.reward);
    out_ << r.bound_id << ',' << r.g6 << buf << to_string(r.source) << '\n';
  }
  out_.flush();
}

}  // namespace cema
