#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cema/env.hpp"
#include "cema/graph.hpp"
#include "cema/policy.hpp"

namespace cema {

// Parameters of the cross-entropy loop. Defaults are the reference defaults.
struct TrainConfig {
  RewardFn compute_reward;
  int n = 20;
  int batch_size = 200;
  int num_generations = 1000;
  double percent_learn = 90.0;
  double percent_survive = 97.5;
  std::vector<int> neurons = kDefaultHidden;
  double learning_rate = 0.003;
  double act_rndness_init = 0.005;
  int act_rndness_wait = 10;
  double act_rndness_mult = 1.1;
  double act_rndness_max = 0.025;
  bool verbose = true;
  int output_best_graph_rate = 25;
  std::uint64_t seed = 0;
  int workers = 1;

  // InvalidInput describing the first violated constraint.
  void validate() const;
};

struct GenerationStats {
  int generation = 0;  // 1-based
  double max_reward_alltime = 0.0;
  double max_reward_gen = 0.0;
  double learn_threshold = 0.0;
  double survive_threshold = 0.0;
  double act_rndness = 0.0;  // value used while generating this batch
  double elapsed_ms = 0.0;
  std::string best_graph6;   // all-time best graph
  int elite_count = 0;
  int survivor_count = 0;
};

struct TrainResult {
  double best_reward = 0.0;
  Graph best_graph;
  int generations_run = 0;
  std::optional<PolicyNet> policy;  // network after the last update
};

struct EliteSelection {
  std::vector<int> indices;  // ascending
  double threshold = 0.0;
};

// Nearest-rank percentile: the smallest reward r such that at least
// percent% of the rewards are <= r. Every index with reward >= r is kept,
// so ties at the threshold may exceed the nominal count.
EliteSelection select_elites(std::span<const double> rewards, double percent);

// Action-randomness schedule: multiplied after each `wait` generations
// without improvement (capped), reset to the initial value on improvement.
class ActRndnessSchedule {
 public:
  ActRndnessSchedule(double init, int wait, double mult, double max);

  double value() const { return value_; }
  int stagnant_generations() const { return counter_; }
  double update(bool improved);

 private:
  double init_;
  int wait_;
  double mult_;
  double max_;
  double value_;
  int counter_ = 0;
};

using GenerationCallback = std::function<void(const GenerationStats&, const Graph& best)>;

// Runs the cross-entropy method. Rollouts use one random stream per
// (seed, generation, episode), so results do not depend on `workers`.
// Setting *stop ends the run after the current generation.
TrainResult train(const TrainConfig& config, const GenerationCallback& on_generation = {},
                  const std::atomic<bool>* stop = nullptr);

// Console summary of one generation.
std::string format_generation(const GenerationStats& stats);

// Writes stats.csv (flushed every generation) plus best_<gen>.g6 and
// best_<gen>.dot snapshots every `snapshot_rate` generations.
class RunRecorder {
 public:
  static constexpr const char* kHeader = "gen,max_all,max_gen,learn_thr,survive_thr,act_rndness,ms,best_g6";

  // With record_timing false the ms column is written as 0 so that reruns
  // produce byte-identical files.
  RunRecorder(std::filesystem::path out_dir, int snapshot_rate, bool record_timing);

  void record(const GenerationStats& stats, const Graph& best);
  void finish(const Graph& best, double best_reward);

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
  int snapshot_rate_;
  bool record_timing_;
  std::ofstream stats_;
};

}  // namespace cema
