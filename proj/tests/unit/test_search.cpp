#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cema/bounds.hpp"
#include "cema/cli.hpp"
#include "cema/enumerate.hpp"
#include "cema/errors.hpp"
#include "cema/search.hpp"

using namespace cema;

namespace {

struct Collected {
  std::vector<ViolationReport> reports;
  ReportSink sink() {
    return [this](std::span<const ViolationReport> r) { reports.insert(reports.end(), r.begin(), r.end()); };
  }
};

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "cema");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("exhaustive scan at n = 7") {
    const auto ids = all_bound_ids();
    Collected c;
    const auto s = exhaustive_check(ids, 7, 6, c.sink());
    CHECK(s.scanned == 853);
    CHECK(s.violations == 0);
    CHECK(s.max_reward <= kViolationTolerance);
    CHECK(c.reports.empty());
    CHECK_THROWS_AS(exhaustive_check(ids, 13, 4, {}), InvalidInput);
    CHECK_THROWS_AS(exhaustive_check(std::vector<int>{70}, 5, 4, {}), LookupError);
  }

  TEST_CASE("scan verdicts agree with direct evaluation") {
    for (int n = 2; n <= 6; ++n) {
      for (const auto& b : registry()) {
        const int id = b.id;
        Collected c;
        const auto s = exhaustive_check(std::vector<int>{id}, n, n - 1, c.sink(), 2);
        long long direct = 0;
        enumerate_connected(n, n - 1, [&](const Graph& g) { direct += reward(b, g) > kViolationTolerance; });
        CHECK(s.violations == direct);
        for (const auto& r : c.reports) {
          CHECK(r.reward > 0);
          CHECK(std::abs(reward(b, from_graph6(r.g6)) - r.reward) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("stream scans") {
    const std::vector<int> one = {1};
    std::istringstream k3("Bw\n");
    auto s = stream_check(one, k3, {}, true);
    CHECK(s.scanned == 1);
    CHECK(s.violations == 0);
    CHECK(s.max_reward == doctest::Approx(-1.0));

    std::istringstream empty("");
    s = stream_check(one, empty, {}, true);
    CHECK(s.scanned == 0);
    CHECK(s.skipped == 0);

    std::istringstream mixed("Bw\nC?\nCo\n@\nC~\n");
    s = stream_check(one, mixed, {}, true);
    CHECK(s.scanned == 2);
    CHECK(s.skipped == 3);

    std::istringstream bad("Bw\nB!\nC~\n");
    s = stream_check(one, bad, {}, false);
    CHECK(s.scanned == 2);
    REQUIRE(s.issues.size() == 1);
    CHECK(s.issues[0].line == 2);
    std::istringstream bad_again("Bw\nB!\nC~\n");
    CHECK_THROWS_WITH_AS(stream_check(one, bad_again, {}, true), doctest::Contains("line 2"), ParseError);
  }

  TEST_CASE("stream and enumeration agree") {
    std::stringstream all;
    enumerate_connected(6, 5, [&](const Graph& g) { all << to_graph6(g) << '\n'; });
    const auto ids = all_bound_ids();
    const auto a = exhaustive_check(ids, 6, 5, {});
    const auto b = stream_check(ids, all, {}, true, 3);
    CHECK(a.scanned == b.scanned);
    CHECK(a.violations == b.violations);
    CHECK(a.max_reward == b.max_reward);
  }

  TEST_CASE("single checks") {
    const auto k2 = check_single("A_", std::vector<int>{33});
    CHECK(k2[0].reward == doctest::Approx(0.0).epsilon(1e-12));
    const auto c4 = check_single(to_graph6(generate_cycle(4)), std::vector<int>{1});
    CHECK(std::abs(c4[0].reward) < 1e-12);
    CHECK(c4[0].mu == doctest::Approx(4.0));
    CHECK_THROWS_AS(check_single("C?", std::vector<int>{1}), UndefinedInvariant);
    CHECK_THROWS_AS(check_single("C!", std::vector<int>{1}), ParseError);
  }

  TEST_CASE("report csv") {
    std::ostringstream out;
    ReportWriter w(out);
    const std::vector<ViolationReport> r = {{31, "Bw", 3, 2.5, 0.5, ReportSource::Stream}};
    w.write(r);
    CHECK(out.str() == "bound_id,g6,mu,rhs,reward,source\n31,Bw,3,2.5,0.5,stream\n");
  }
}

TEST_SUITE("cli") {
  TEST_CASE("check") {
    std::string text;
    CHECK(cli({"check", "Bw", "--bound", "1"}, &text) == kExitNotFound);
    CHECK(text.find("mu=3 rhs=4 reward=-1") != std::string::npos);
    CHECK(cli({"check", "C?"}) == kExitError);
  }

  TEST_CASE("usage errors") {
    std::string text;
    CHECK(cli({"train", "--bound", "99"}, &text) == kExitUsage);
    CHECK(text.find("1..68") != std::string::npos);
    CHECK(cli({"train", "--bound", "1", "--no-such-flag"}) == kExitUsage);
    CHECK(cli({}) == kExitUsage);
    CHECK(cli({"train", "--bound", "1", "--percent-learn", "99"}) == kExitUsage);
    CHECK(cli({"scan"}) == kExitUsage);
    CHECK(cli({"--help"}) == 0);
  }

  TEST_CASE("list-bounds") {
    std::string text;
    CHECK(cli({"list-bounds"}, &text) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 69);
    CHECK(text.find("\n31,vertex-max,disproved-RL,") != std::string::npos);
  }

  TEST_CASE("zero-generation training") {
    const auto dir = std::filesystem::temp_directory_path() / "cema_cli_zero";
    std::filesystem::remove_all(dir);
    CHECK(cli({"train", "--bound", "1", "--num-generations", "0", "--out-dir", dir.string()}) == kExitNotFound);
    std::ifstream in(dir / "stats.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "gen,max_all,max_gen,learn_thr,survive_thr,act_rndness,ms,best_g6\n");
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("environment overrides") {
    const auto dir = std::filesystem::temp_directory_path() / "cema_cli_env";
    std::filesystem::remove_all(dir);
    ::setenv("CEMA_NUM_GENERATIONS", "2", 1);
    ::setenv("CEMA_BATCH_SIZE", "10", 1);
    std::string text;
    cli({"train", "--bound", "1", "--n", "6", "--out-dir", dir.string()}, &text);
    ::unsetenv("CEMA_NUM_GENERATIONS");
    ::unsetenv("CEMA_BATCH_SIZE");
    CHECK(text.find("after 2 generations") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "best.g6"));
    CHECK(std::filesystem::exists(dir / "policy.bin"));
    std::filesystem::remove_all(dir);
  }
}
