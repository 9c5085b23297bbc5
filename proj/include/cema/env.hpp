#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cema/graph.hpp"

namespace cema {

inline int pair_count(int n) { return n * (n - 1) / 2; }

// Flat observation of width n(n-1): the partial row-wise edge list followed
// by a one-hot cursor over the same positions. An all-zero cursor marks a
// fully constructed graph.
class Observation {
 public:
  Observation() = default;
  Observation(int n, std::vector<std::uint8_t> bits);

  int order() const { return n_; }
  int pairs() const { return pair_count(n_); }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<const std::uint8_t> edge_part() const { return std::span(bits_).first(static_cast<std::size_t>(pairs())); }
  std::span<const std::uint8_t> cursor_part() const { return std::span(bits_).last(static_cast<std::size_t>(pairs())); }

  // Index of the next entry to decide, or -1 once terminal.
  int cursor() const { return cursor_; }
  bool terminal() const { return cursor_ < 0; }

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  int n_ = 0;
  int cursor_ = -1;
  std::vector<std::uint8_t> bits_;
};

Observation initial_observation(int n);

struct StepResult {
  Observation next;
  double reward = 0.0;  // always zero; the final reward comes from the reward function
  bool terminal = false;
};

// ProtocolError when obs is already terminal or action is not 0/1.
StepResult step(const Observation& obs, int action);

using RewardFn = std::function<double(const Graph&)>;
using ActionSampler = std::function<int(const Observation&)>;

// One constructed graph: its action sequence and final reward. The
// observation preceding action t is recomputed on demand.
struct Trajectory {
  int n = 0;
  std::vector<std::uint8_t> actions;
  double reward = 0.0;

  Observation observation(int t) const;
  Observation terminal_observation() const;
  Graph graph() const { return from_edge_bits(n, actions); }
};

Trajectory rollout(int n, const ActionSampler& policy, const RewardFn& reward_fn);

// batch_size episodes advanced in lockstep; every episode shares the cursor.
class LockstepBatch {
 public:
  LockstepBatch(int n, int batch_size);

  int order() const { return n_; }
  int size() const { return static_cast<int>(actions_.size()); }
  int cursor() const { return cursor_; }
  bool finished() const { return cursor_ >= pair_count(n_); }

  // Applies one action per episode at the shared cursor.
  void step(std::span<const std::uint8_t> actions);

  std::span<const std::uint8_t> actions(int episode) const { return actions_[static_cast<std::size_t>(episode)]; }
  Observation observation(int episode) const;

 private:
  int n_;
  int cursor_ = 0;
  std::vector<std::vector<std::uint8_t>> actions_;
};

}  // namespace cema
