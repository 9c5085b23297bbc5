#include "cema/env.hpp"

#include <string>

#include "cema/errors.hpp"

namespace cema {

namespace {

Observation make_observation(int n, std::span<const std::uint8_t> prefix, int cursor) {
  const int pairs = pair_count(n);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(2 * pairs), 0);
  std::copy(prefix.begin(), prefix.end(), bits.begin());
  if (cursor < pairs) bits[static_cast<std::size_t>(pairs + cursor)] = 1;
  return Observation(n, std::move(bits));
}

}  // namespace

Observation::Observation(int n, std::vector<std::uint8_t> bits) : n_(n), bits_(std::move(bits)) {
  if (n < 2 || n > Graph::kMaxOrder) throw InvalidInput("observation order must lie in [2, 64]");
  const int pairs = pair_count(n);
  if (static_cast<int>(bits_.size()) != 2 * pairs) {
    throw InvalidInput("observation width must be n(n-1) = " + std::to_string(2 * pairs));
  }
  for (int k = 0; k < pairs; ++k) {
    if (bits_[static_cast<std::size_t>(pairs + k)] == 0) continue;
    if (cursor_ >= 0) throw InvalidInput("observation cursor must be one-hot");
    cursor_ = k;
  }
  for (auto b : bits_) {
    if (b > 1) throw InvalidInput("observation entries must be 0 or 1");
  }
}

Observation initial_observation(int n) {
  if (n < 2) throw InvalidInput("environment needs n >= 2");
  return make_observation(n, {}, 0);
}

StepResult step(const Observation& obs, int action) {
  if (obs.terminal()) throw ProtocolError("cannot step a terminal observation");
  if (action != 0 && action != 1) throw ProtocolError("action must be 0 or 1");
  std::vector<std::uint8_t> prefix(obs.edge_part().begin(), obs.edge_part().begin() + obs.cursor());
  prefix.push_back(static_cast<std::uint8_t>(action));
  const int next_cursor = obs.cursor() + 1;
  StepResult result;
  result.next = make_observation(obs.order(), prefix, next_cursor);
  result.terminal = next_cursor >= obs.pairs();
  return result;
}

Observation Trajectory::observation(int t) const {
  if (t < 0 || t >= static_cast<int>(actions.size())) throw InvalidInput("trajectory step out of range");
  return make_observation(n, std::span(actions).first(static_cast<std::size_t>(t)), t);
}

Observation Trajectory::terminal_observation() const { return make_observation(n, actions, pair_count(n)); }

Trajectory rollout(int n, const ActionSampler& policy, const RewardFn& reward_fn) {
  Trajectory traj;
  traj.n = n;
  Observation obs = initial_observation(n);
  while (true) {
    const int action = policy(obs);
    StepResult r = step(obs, action);
    traj.actions.push_back(static_cast<std::uint8_t>(action));
    if (r.terminal) break;
    obs = std::move(r.next);
  }
  traj.reward = reward_fn(traj.graph());
  return traj;
}

LockstepBatch::LockstepBatch(int n, int batch_size) : n_(n) {
  if (n < 2 || n > Graph::kMaxOrder) throw InvalidInput("environment needs 2 <= n <= 64");
  if (batch_size < 1) throw InvalidInput("batch size must be positive");
  actions_.assign(static_cast<std::size_t>(batch_size), {});
  for (auto& a : actions_) a.reserve(static_cast<std::size_t>(pair_count(n)));
}

void LockstepBatch::step(std::span<const std::uint8_t> actions) {
  if (finished()) throw ProtocolError("cannot step a finished batch");
  if (static_cast<int>(actions.size()) != size()) throw InvalidInput("one action per episode required");
  for (std::size_t e = 0; e < actions.size(); ++e) {
    if (actions[e] > 1) throw ProtocolError("action must be 0 or 1");
    actions_[e].push_back(actions[e]);
  }
  ++cursor_;
}

Observation LockstepBatch::observation(int episode) const {
  return make_observation(n_, actions_[static_cast<std::size_t>(episode)], cursor_);
}

}  // namespace cema
