#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

namespace cema {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits, identical on every
// standard library.
double uniform01(Rng& rng);

inline const std::vector<int> kDefaultHidden = {72, 12};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One observation and the action taken there.
struct TrainingPair {
  std::span<const std::uint8_t> observation;
  int action = 0;
};

// Feed-forward policy: ReLU hidden layers and two output logits (skip, add).
// Parameters live in one flat vector, layer by layer, each layer storing its
// weights as [input][output] followed by its biases.
class PolicyNet {
 public:
  // layer_sizes = {input, hidden..., 2}.
  PolicyNet(std::vector<int> layer_sizes, std::uint64_t seed);

  // Network for graphs of order n: input width n(n-1).
  static PolicyNet for_order(int n, const std::vector<int>& hidden, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_width() const { return sizes_.front(); }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::size_t bias_offset(int layer) const;
  long long optimizer_steps() const { return steps_; }

  // Logits (skip, add) for one 0/1 observation.
  std::array<double, 2> logits(std::span<const std::uint8_t> observation) const;
  // Probability of action 1 for each observation.
  std::vector<double> forward(std::span<const std::span<const std::uint8_t>> observations) const;
  double probability_add(std::span<const std::uint8_t> observation) const;

  // Mean cross-entropy -log p(action) over the batch.
  double loss(std::span<const TrainingPair> batch) const;
  // Gradient of loss() in parameter layout.
  std::vector<double> gradient(std::span<const TrainingPair> batch) const;

  // One Adam step on the mean cross-entropy. Returns the loss before the
  // step. NumericalFailure on non-finite loss or gradient.
  double train_step(std::span<const TrainingPair> batch, double learning_rate, const AdamConfig& adam = {});

  // First-layer pre-activation given directly; finishes the forward pass.
  std::array<double, 2> logits_from_first_layer(std::span<const double> first_pre) const;
  std::span<const double> first_layer_column(int input) const {
    return std::span(params_).subspan(offsets_[0] + static_cast<std::size_t>(input) * static_cast<std::size_t>(sizes_[1]),
                                      static_cast<std::size_t>(sizes_[1]));
  }
  std::span<const double> first_layer_bias() const {
    return std::span(params_).subspan(bias_offset(0), static_cast<std::size_t>(sizes_[1]));
  }

  void save(const std::filesystem::path& path) const;
  static PolicyNet load(const std::filesystem::path& path);

 private:
  PolicyNet() = default;
  void layout();

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  std::vector<double> moment1_;
  std::vector<double> moment2_;
  long long steps_ = 0;
};

// Softmax probability of action 1 from the two logits.
double softmax_add(const std::array<double, 2>& logits);

// With probability act_rndness the action is a fair coin, otherwise
// Bernoulli(p_add).
int sample_action(double p_add, Rng& rng, double act_rndness);

// Tracks the first-layer pre-activation while a graph is built so each
// decision costs one column add instead of a full input product.
class IncrementalPolicy {
 public:
  IncrementalPolicy(const PolicyNet& net, int pairs);

  void reset();
  // Probability of adding the edge at `position`, given edges added so far.
  double probability_add(int position);
  void record(int position, int action);

 private:
  const PolicyNet& net_;
  int pairs_;
  std::vector<double> accum_;
  std::vector<double> scratch_;
};

}  // namespace cema
