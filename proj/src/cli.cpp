#include "cema/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cema/bounds.hpp"
#include "cema/errors.hpp"
#include "cema/graph.hpp"
#include "cema/search.hpp"
#include "cema/trainer.hpp"

namespace cema {

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

// Installs the SIGINT handler for the lifetime of a training run.
class InterruptGuard {
 public:
  InterruptGuard() {
    g_interrupted.store(false);
    previous_ = std::signal(SIGINT, on_interrupt);
  }
  ~InterruptGuard() { std::signal(SIGINT, previous_); }
  InterruptGuard(const InterruptGuard&) = delete;
  InterruptGuard& operator=(const InterruptGuard&) = delete;

 private:
  void (*previous_)(int);
};

const CLI::Validator kBoundId(
    [](std::string& value) -> std::string {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(value, &used);
        if (used != value.size()) id = 0;
      } catch (const std::exception&) {
        id = 0;
      }
      if (id < 1 || id > kBoundCount) {
        return "unknown bound id " + value + "; valid ids are 1.." + std::to_string(kBoundCount) +
               " (see list-bounds)";
      }
      return {};
    },
    "ID in 1..68", "BOUND");

std::string env_name(const std::string& flag) {
  std::string name = "CEMA_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<int> ids_or_all(const std::vector<int>& ids) { return ids.empty() ? all_bound_ids() : ids; }

struct TrainOptions {
  TrainConfig config;
  int bound = 0;
  std::string out_dir = "run";
  bool record_timing = false;
};

int cmd_train(TrainOptions& opt, std::ostream& out) {
  const BoundSpec& spec = lookup_bound(opt.bound);
  TrainConfig& config = opt.config;
  config.compute_reward = [&spec](const Graph& g) { return reward(spec, g); };
  config.validate();

  RunRecorder recorder(opt.out_dir, config.output_best_graph_rate, opt.record_timing);
  InterruptGuard guard;
  const TrainResult result = train(
      config,
      [&](const GenerationStats& stats, const Graph& best) {
        recorder.record(stats, best);
        if (config.verbose) out << format_generation(stats) << '\n' << std::flush;
      },
      &g_interrupted);

  if (g_interrupted.load()) out << "interrupted after generation " << result.generations_run << '\n';
  if (result.generations_run == 0) {
    out << "no generations run\n";
    return kExitNotFound;
  }
  recorder.finish(result.best_graph, result.best_reward);
  if (result.policy) result.policy->save(recorder.directory() / "policy.bin");
  out << "bound " << opt.bound << ": best reward " << fmt(result.best_reward) << " after "
      << result.generations_run << " generations, graph " << to_graph6(result.best_graph) << '\n';
  return result.best_reward > kViolationTolerance ? kExitFound : kExitNotFound;
}

int cmd_check(const std::string& g6, const std::vector<int>& bounds, std::ostream& out) {
  const auto rows = check_single(g6, ids_or_all(bounds));
  bool violated = false;
  for (const auto& e : rows) {
    out << "bound " << e.bound_id << ": mu=" << fmt(e.mu) << " rhs=" << fmt(e.rhs) << " reward=" << fmt(e.reward)
        << (e.reward > kViolationTolerance ? "  VIOLATED" : "") << '\n';
    violated = violated || e.reward > kViolationTolerance;
  }
  return violated ? kExitFound : kExitNotFound;
}

struct ScanOptions {
  std::optional<int> n;
  std::optional<int> max_degree;
  bool use_stdin = false;
  std::string input;
  std::string report;
  std::vector<int> bounds;
  bool strict = false;
  int workers = 1;
};

int cmd_scan(const ScanOptions& opt, std::ostream& out, std::ostream& err) {
  const auto ids = ids_or_all(opt.bounds);
  std::ofstream report_file;
  if (!opt.report.empty()) {
    report_file.open(opt.report, std::ios::trunc);
    if (!report_file) throw InvalidInput("cannot write " + opt.report);
  }
  ReportWriter writer(opt.report.empty() ? out : report_file);
  const ReportSink sink = [&](std::span<const ViolationReport> r) { writer.write(r); };

  ScanSummary summary;
  if (opt.n) {
    summary = exhaustive_check(ids, *opt.n, opt.max_degree.value_or(*opt.n - 1), sink, opt.workers);
  } else if (opt.use_stdin) {
    summary = stream_check(ids, std::cin, sink, opt.strict, opt.workers);
  } else {
    std::ifstream in(opt.input);
    if (!in) throw InvalidInput("cannot read " + opt.input);
    summary = stream_check(ids, in, sink, opt.strict, opt.workers);
  }
  for (const auto& issue : summary.issues) err << "line " << issue.line << ": " << issue.message << '\n';
  out << "# scanned " << summary.scanned << ", skipped " << summary.skipped << ", violating graphs "
      << summary.violating_graphs << ", violations " << summary.violations << ", max reward "
      << (summary.scanned > 0 ? fmt(summary.max_reward) : std::string("n/a")) << '\n';
  return summary.violations > 0 ? kExitFound : kExitNotFound;
}

int cmd_families(int stars, int windmills, const std::vector<int>& bounds, std::ostream& out) {
  const auto ids = ids_or_all(bounds);
  double worst = kMinusInf;
  long long checked = 0;
  int failures = 0;
  auto run = [&](const Graph& g, const std::string& name) {
    for (const auto& e : evaluate_bounds(g, ids)) {
      worst = std::max(worst, e.reward);
      if (e.reward > kViolationTolerance) {
        ++failures;
        out << name << " violates bound " << e.bound_id << ": reward " << fmt(e.reward) << '\n';
      }
    }
    ++checked;
  };
  for (int n = 2; n <= stars; ++n) run(generate_star(n), "star K1," + std::to_string(n - 1));
  for (int k = 1; k <= windmills; ++k) run(generate_windmill(k), "windmill W" + std::to_string(k));
  out << "checked " << checked << " graphs against " << ids.size() << " bounds, max reward "
      << (checked > 0 ? fmt(worst) : std::string("n/a")) << ", " << failures << " violations\n";
  return failures == 0 ? kExitFound : kExitNotFound;
}

int cmd_list_bounds(std::ostream& out) {
  out << "id,family,status,formula\n";
  for (const auto& b : registry()) {
    out << b.id << ',' << to_string(b.family) << ',' << to_string(b.status) << ",\"" << b.formula << "\"\n";
  }
  return kExitFound;
}

constexpr const char* kExamples = R"(Examples:
  cema train --bound 31 --n 20 --seed 7 --out-dir run31
  cema check Bw --bound 1
  cema scan --n 7
  cema scan --n 12 --max-degree 4 --bound 17 50 66 --report sq12.csv
  cema families --stars 50 --windmills 24
  cema list-bounds
Exit status: 0 counterexample found or family check passed, 1 none found,
2 runtime error, 64 usage error.)";

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterexample search for Laplacian spectral radius bounds", "cema"};
  app.footer(kExamples);
  app.require_subcommand(1);

  TrainOptions train_opt;
  auto* train_cmd = app.add_subcommand("train", "cross-entropy search for a graph violating one bound");
  auto& c = train_opt.config;
  flag(train_cmd, "bound", train_opt.bound, "bound to attack")->required()->check(kBoundId);
  flag(train_cmd, "n", c.n, "number of vertices");
  flag(train_cmd, "batch-size", c.batch_size, "graphs per generation");
  flag(train_cmd, "num-generations", c.num_generations, "generations to run");
  flag(train_cmd, "percent-learn", c.percent_learn, "elite percentile for training");
  flag(train_cmd, "percent-survive", c.percent_survive, "percentile kept as survivors");
  flag(train_cmd, "neurons", c.neurons, "hidden layer sizes")->delimiter(',')->expected(1, -1);
  flag(train_cmd, "learning-rate", c.learning_rate, "Adam step size");
  flag(train_cmd, "act-rndness-init", c.act_rndness_init, "initial action randomness");
  flag(train_cmd, "act-rndness-wait", c.act_rndness_wait, "stagnant generations before escalating");
  flag(train_cmd, "act-rndness-mult", c.act_rndness_mult, "escalation factor");
  flag(train_cmd, "act-rndness-max", c.act_rndness_max, "randomness cap");
  flag(train_cmd, "verbose", c.verbose, "print one line per generation");
  flag(train_cmd, "output-best-graph-rate", c.output_best_graph_rate, "snapshot period in generations");
  flag(train_cmd, "seed", c.seed, "random seed");
  flag(train_cmd, "workers", c.workers, "rollout threads");
  flag(train_cmd, "out-dir", train_opt.out_dir, "output directory");
  train_cmd->add_flag("--record-timing", train_opt.record_timing, "write wall-clock ms into stats.csv")
      ->envname("CEMA_RECORD_TIMING");

  std::string check_g6;
  std::vector<int> check_bounds;
  auto* check_cmd = app.add_subcommand("check", "evaluate bounds on one graph6 string");
  check_cmd->add_option("graph6", check_g6, "graph in graph6 format")->required();
  flag(check_cmd, "bound", check_bounds, "bound ids (default: all)")->check(kBoundId);

  ScanOptions scan_opt;
  auto* scan_cmd = app.add_subcommand("scan", "check bounds over all connected graphs or a graph6 stream");
  auto* scan_n = flag(scan_cmd, "n", scan_opt.n, "enumerate connected graphs of this order")->check(CLI::Range(2, 12));
  flag(scan_cmd, "max-degree", scan_opt.max_degree, "degree cap for enumeration (default n-1)")
      ->needs(scan_n)
      ->check(CLI::PositiveNumber);
  auto* scan_stdin = scan_cmd->add_flag("--stdin", scan_opt.use_stdin, "read graph6 lines from standard input")
                         ->envname("CEMA_STDIN");
  auto* scan_input = flag(scan_cmd, "input", scan_opt.input, "read graph6 lines from a file");
  scan_n->excludes(scan_stdin)->excludes(scan_input);
  scan_stdin->excludes(scan_input);
  flag(scan_cmd, "bound", scan_opt.bounds, "bound ids (default: all)")->check(kBoundId);
  flag(scan_cmd, "report", scan_opt.report, "violation CSV path (default: standard output)");
  scan_cmd->add_flag("--strict", scan_opt.strict, "abort on the first malformed line")->envname("CEMA_STRICT");
  flag(scan_cmd, "workers", scan_opt.workers, "evaluation threads")->check(CLI::PositiveNumber);

  int stars = 50;
  int windmills = 24;
  std::vector<int> family_bounds;
  auto* families_cmd = app.add_subcommand("families", "check stars K1,n-1 (n <= N) and windmills with up to K blades");
  flag(families_cmd, "stars", stars, "largest star order")->check(CLI::NonNegativeNumber);
  flag(families_cmd, "windmills", windmills, "largest windmill blade count")->check(CLI::NonNegativeNumber);
  flag(families_cmd, "bound", family_bounds, "bound ids (default: all)")->check(kBoundId);

  auto* list_cmd = app.add_subcommand("list-bounds", "print the bound registry");

  try {
    app.parse(argc, argv);
    if (scan_cmd->parsed() && !scan_opt.n && !scan_opt.use_stdin && scan_opt.input.empty()) {
      throw CLI::RequiredError("one of --n, --stdin or --input");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      try {
        train_opt.config.compute_reward = [](const Graph&) { return 0.0; };
        train_opt.config.validate();
      } catch (const InvalidInput& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
      }
      return cmd_train(train_opt, out);
    }
    if (check_cmd->parsed()) return cmd_check(check_g6, check_bounds, out);
    if (scan_cmd->parsed()) return cmd_scan(scan_opt, out, err);
    if (families_cmd->parsed()) return cmd_families(stars, windmills, family_bounds, out);
    if (list_cmd->parsed()) return cmd_list_bounds(out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace cema
