#include "cema/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "cema/bounds.hpp"
#include "cema/errors.hpp"
#include "cema/parallel.hpp"

namespace cema {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng episode_rng(std::uint64_t seed, int generation, int episode) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(generation));
  h = splitmix64(h ^ (static_cast<std::uint64_t>(episode) << 32));
  return Rng(h);
}

Trajectory sample_trajectory(const PolicyNet& net, int n, Rng& rng, double act_rndness) {
  const int pairs = pair_count(n);
  Trajectory traj;
  traj.n = n;
  traj.actions.resize(static_cast<std::size_t>(pairs));
  IncrementalPolicy inc(net, pairs);
  for (int t = 0; t < pairs; ++t) {
    const int action = sample_action(inc.probability_add(t), rng, act_rndness);
    traj.actions[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(action);
    inc.record(t, action);
  }
  return traj;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  if (!compute_reward) throw InvalidInput("compute_reward is required");
  if (n < 2 || n > 64) throw InvalidInput("n must lie in [2, 64]");
  if (batch_size < 1) throw InvalidInput("batch_size must be positive");
  if (num_generations < 0) throw InvalidInput("num_generations must be non-negative");
  if (!(0.0 < percent_learn && percent_learn < percent_survive && percent_survive < 100.0)) {
    throw InvalidInput("need 0 < percent_learn < percent_survive < 100");
  }
  for (int s : neurons) {
    if (s < 1) throw InvalidInput("hidden layer sizes must be positive");
  }
  if (!(learning_rate > 0.0)) throw InvalidInput("learning_rate must be positive");
  if (!(0.0 < act_rndness_init && act_rndness_init <= act_rndness_max && act_rndness_max < 1.0)) {
    throw InvalidInput("need 0 < act_rndness_init <= act_rndness_max < 1");
  }
  if (act_rndness_wait < 1) throw InvalidInput("act_rndness_wait must be positive");
  if (!(act_rndness_mult > 1.0)) throw InvalidInput("act_rndness_mult must exceed 1");
  if (output_best_graph_rate < 1) throw InvalidInput("output_best_graph_rate must be positive");
  if (workers < 1) throw InvalidInput("workers must be positive");
}

EliteSelection select_elites(std::span<const double> rewards, double percent) {
  if (rewards.empty()) throw InvalidInput("cannot select from an empty batch");
  std::vector<double> sorted(rewards.begin(), rewards.end());
  std::sort(sorted.begin(), sorted.end());
  const auto count = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * count));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  EliteSelection out;
  out.threshold = sorted[rank - 1];
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    if (rewards[i] >= out.threshold) out.indices.push_back(static_cast<int>(i));
  }
  return out;
}

ActRndnessSchedule::ActRndnessSchedule(double init, int wait, double mult, double max)
    : init_(init), wait_(wait), mult_(mult), max_(max), value_(init) {}

double ActRndnessSchedule::update(bool improved) {
  if (improved) {
    value_ = init_;
    counter_ = 0;
    return value_;
  }
  if (++counter_ >= wait_) {
    value_ = std::min(value_ * mult_, max_);
    counter_ = 0;
  }
  return value_;
}

TrainResult train(const TrainConfig& config, const GenerationCallback& on_generation, const std::atomic<bool>* stop) {
  config.validate();
  const int n = config.n;
  const int pairs = pair_count(n);
  PolicyNet net = PolicyNet::for_order(n, config.neurons, splitmix64(config.seed ^ 0x5eedULL));
  ActRndnessSchedule rndness(config.act_rndness_init, config.act_rndness_wait, config.act_rndness_mult,
                             config.act_rndness_max);
  const int survivor_cap =
      std::max(1, static_cast<int>(std::ceil(config.batch_size * (100.0 - config.percent_survive) / 100.0 - 1e-9)));

  TrainResult result;
  result.best_reward = -std::numeric_limits<double>::infinity();
  result.best_graph = Graph(n);
  std::vector<Trajectory> survivors;
  std::vector<std::uint8_t> observations;
  std::vector<TrainingPair> batch;

  for (int gen = 1; gen <= config.num_generations; ++gen) {
    if (stop != nullptr && stop->load()) break;
    const auto started = std::chrono::steady_clock::now();
    const double used_rndness = rndness.value();

    std::vector<Trajectory> pool(static_cast<std::size_t>(config.batch_size));
    parallel_for(config.batch_size, config.workers, [&](int e) {
      Rng rng = episode_rng(config.seed, gen, e);
      Trajectory traj = sample_trajectory(net, n, rng, used_rndness);
      traj.reward = config.compute_reward(traj.graph());
      pool[static_cast<std::size_t>(e)] = std::move(traj);
    });
    double max_gen = -std::numeric_limits<double>::infinity();
    for (const auto& t : pool) max_gen = std::max(max_gen, t.reward);
    for (auto& s : survivors) pool.push_back(std::move(s));
    survivors.clear();

    std::vector<double> rewards(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) rewards[i] = pool[i].reward;

    bool improved = false;
    for (const auto& t : pool) {
      if (t.reward > result.best_reward) {
        result.best_reward = t.reward;
        result.best_graph = t.graph();
        improved = true;
      }
    }

    // Disconnected graphs never train the policy unless nothing else exists.
    std::vector<int> usable;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (rewards[i] != kMinusInf) usable.push_back(static_cast<int>(i));
    }
    GenerationStats stats;
    stats.generation = gen;
    stats.max_reward_gen = max_gen;
    stats.act_rndness = used_rndness;
    if (usable.empty()) {
      stats.learn_threshold = kMinusInf;
      stats.survive_threshold = kMinusInf;
    } else {
      std::vector<double> usable_rewards;
      for (int i : usable) usable_rewards.push_back(rewards[static_cast<std::size_t>(i)]);
      const auto learn = select_elites(usable_rewards, config.percent_learn);
      const auto survive = select_elites(usable_rewards, config.percent_survive);
      stats.learn_threshold = learn.threshold;
      stats.survive_threshold = survive.threshold;

      observations.assign(learn.indices.size() * static_cast<std::size_t>(pairs) * static_cast<std::size_t>(2 * pairs), 0);
      batch.clear();
      std::size_t slot = 0;
      for (int k : learn.indices) {
        const auto& traj = pool[static_cast<std::size_t>(usable[static_cast<std::size_t>(k)])];
        for (int t = 0; t < pairs; ++t, ++slot) {
          std::uint8_t* row = observations.data() + slot * static_cast<std::size_t>(2 * pairs);
          std::copy(traj.actions.begin(), traj.actions.begin() + t, row);
          row[pairs + t] = 1;
          batch.push_back({std::span<const std::uint8_t>(row, static_cast<std::size_t>(2 * pairs)),
                           traj.actions[static_cast<std::size_t>(t)]});
        }
      }
      net.train_step(batch, config.learning_rate);
      stats.elite_count = static_cast<int>(learn.indices.size());

      // Survivors: best first, earlier pool position breaking ties, capped
      // at the nominal share of one batch.
      std::vector<int> order = survive.indices;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return usable_rewards[static_cast<std::size_t>(a)] > usable_rewards[static_cast<std::size_t>(b)]; });
      if (static_cast<int>(order.size()) > survivor_cap) order.resize(static_cast<std::size_t>(survivor_cap));
      for (int k : order) survivors.push_back(std::move(pool[static_cast<std::size_t>(usable[static_cast<std::size_t>(k)])]));
      stats.survivor_count = static_cast<int>(survivors.size());
    }

    rndness.update(improved);
    stats.max_reward_alltime = result.best_reward;
    stats.best_graph6 = to_graph6(result.best_graph);
    stats.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    result.generations_run = gen;
    if (on_generation) on_generation(stats, result.best_graph);
  }
  result.policy = std::move(net);
  return result;
}

std::string format_generation(const GenerationStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "gen %d: max %.6f, survive %.6f, learn %.6f, %.0f ms, act_rndness %.5f",
                s.generation, s.max_reward_alltime, s.survive_threshold, s.learn_threshold, s.elapsed_ms,
                s.act_rndness);
  return buf;
}

RunRecorder::RunRecorder(std::filesystem::path out_dir, int snapshot_rate, bool record_timing)
    : dir_(std::move(out_dir)), snapshot_rate_(snapshot_rate), record_timing_(record_timing) {
  std::filesystem::create_directories(dir_ / "snapshots");
  stats_.open(dir_ / "stats.csv", std::ios::trunc);
  if (!stats_) throw InvalidInput("cannot write " + (dir_ / "stats.csv").string());
  stats_ << kHeader << '\n';
  stats_.flush();
}

void RunRecorder::record(const GenerationStats& s, const Graph& best) {
  stats_ << s.generation << ',' << format_number(s.max_reward_alltime) << ',' << format_number(s.max_reward_gen)
         << ',' << format_number(s.learn_threshold) << ',' << format_number(s.survive_threshold) << ','
         << format_number(s.act_rndness) << ',' << (record_timing_ ? static_cast<long long>(std::llround(s.elapsed_ms)) : 0LL)
         << ',' << s.best_graph6 << '\n';
  stats_.flush();
  if (s.generation % snapshot_rate_ == 0) {
    const std::string stem = "best_" + std::to_string(s.generation);
    std::ofstream(dir_ / "snapshots" / (stem + ".g6")) << to_graph6(best) << '\n';
    std::ofstream(dir_ / "snapshots" / (stem + ".dot")) << to_dot(best, stem);
  }
}

void RunRecorder::finish(const Graph& best, double best_reward) {
  std::ofstream(dir_ / "best.g6") << to_graph6(best) << '\n';
  std::ofstream(dir_ / "best.dot") << to_dot(best, "best");
  std::ofstream(dir_ / "best_reward.txt") << format_number(best_reward) << '\n';
}

}  // namespace cema
