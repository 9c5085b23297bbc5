#include "cema/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "cema/errors.hpp"

namespace cema {

namespace {

constexpr char kMagic[8] = {'C', 'E', 'M', 'A', 'N', 'E', 'T', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw ParseError("truncated checkpoint header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw ParseError("truncated checkpoint parameters");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

// -log softmax(logits)[action], via log-sum-exp.
double cross_entropy(const std::array<double, 2>& z, int action) {
  const double hi = std::max(z[0], z[1]);
  const double lse = hi + std::log(std::exp(z[0] - hi) + std::exp(z[1] - hi));
  return lse - z[static_cast<std::size_t>(action)];
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PolicyNet::PolicyNet(std::vector<int> layer_sizes, std::uint64_t seed) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw InvalidInput("network needs at least input and output layers");
  if (sizes_.back() != 2) throw InvalidInput("network output width must be 2");
  for (int s : sizes_) {
    if (s < 1) throw InvalidInput("layer sizes must be positive");
  }
  layout();
  Rng rng(seed);
  for (int l = 0; l < layer_count(); ++l) {
    const int fan_in = sizes_[static_cast<std::size_t>(l)];
    const int fan_out = sizes_[static_cast<std::size_t>(l) + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    const std::size_t begin = offsets_[static_cast<std::size_t>(l)];
    const std::size_t count = static_cast<std::size_t>(fan_in) * static_cast<std::size_t>(fan_out);
    for (std::size_t k = 0; k < count; ++k) params_[begin + k] = (2.0 * uniform01(rng) - 1.0) * limit;
  }
}

PolicyNet PolicyNet::for_order(int n, const std::vector<int>& hidden, std::uint64_t seed) {
  std::vector<int> sizes;
  sizes.push_back(n * (n - 1));
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(2);
  return PolicyNet(std::move(sizes), seed);
}

void PolicyNet::layout() {
  offsets_.clear();
  std::size_t total = 0;
  for (int l = 0; l < layer_count(); ++l) {
    offsets_.push_back(total);
    const auto in = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l)]);
    const auto out = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l) + 1]);
    total += in * out + out;
  }
  params_.assign(total, 0.0);
  moment1_.assign(total, 0.0);
  moment2_.assign(total, 0.0);
  steps_ = 0;
}

std::size_t PolicyNet::bias_offset(int layer) const {
  const auto in = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(layer)]);
  const auto out = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(layer) + 1]);
  return offsets_[static_cast<std::size_t>(layer)] + in * out;
}

std::array<double, 2> PolicyNet::logits_from_first_layer(std::span<const double> first_pre) const {
  if (layer_count() == 1) return {first_pre[0], first_pre[1]};
  std::vector<double> act(first_pre.begin(), first_pre.end());
  std::vector<double> next;
  for (int l = 1; l < layer_count(); ++l) {
    for (double& a : act) a = std::max(a, 0.0);
    const auto in = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l)]);
    const auto out = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l) + 1]);
    const double* w = params_.data() + offsets_[static_cast<std::size_t>(l)];
    const double* b = params_.data() + bias_offset(l);
    next.assign(b, b + out);
    for (std::size_t i = 0; i < in; ++i) {
      const double x = act[i];
      if (x == 0.0) continue;
      for (std::size_t o = 0; o < out; ++o) next[o] += x * w[i * out + o];
    }
    act.swap(next);
  }
  return {act[0], act[1]};
}

std::array<double, 2> PolicyNet::logits(std::span<const std::uint8_t> observation) const {
  if (static_cast<int>(observation.size()) != input_width()) {
    throw InvalidInput("observation width " + std::to_string(observation.size()) + " does not match network input " +
                       std::to_string(input_width()));
  }
  const auto out = static_cast<std::size_t>(sizes_[1]);
  std::vector<double> pre(params_.begin() + static_cast<std::ptrdiff_t>(bias_offset(0)),
                          params_.begin() + static_cast<std::ptrdiff_t>(bias_offset(0) + out));
  const double* w = params_.data() + offsets_[0];
  for (std::size_t i = 0; i < observation.size(); ++i) {
    if (observation[i] == 0) continue;
    const double x = observation[i];
    for (std::size_t o = 0; o < out; ++o) pre[o] += x * w[i * out + o];
  }
  if (layer_count() == 1) return {pre[0], pre[1]};
  return logits_from_first_layer(pre);
}

double softmax_add(const std::array<double, 2>& z) {
  // p1 = 1 / (1 + exp(z0 - z1)), written to avoid overflow either way.
  const double gap = z[0] - z[1];
  if (gap >= 0.0) {
    const double e = std::exp(-gap);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(gap));
}

double PolicyNet::probability_add(std::span<const std::uint8_t> observation) const {
  return softmax_add(logits(observation));
}

std::vector<double> PolicyNet::forward(std::span<const std::span<const std::uint8_t>> observations) const {
  std::vector<double> p(observations.size());
  for (std::size_t k = 0; k < observations.size(); ++k) p[k] = probability_add(observations[k]);
  return p;
}

double PolicyNet::loss(std::span<const TrainingPair> batch) const {
  if (batch.empty()) throw InvalidInput("loss of an empty batch");
  double total = 0.0;
  for (const auto& pair : batch) total += cross_entropy(logits(pair.observation), pair.action);
  return total / static_cast<double>(batch.size());
}

std::vector<double> PolicyNet::gradient(std::span<const TrainingPair> batch) const {
  if (batch.empty()) throw InvalidInput("gradient of an empty batch");
  std::vector<double> grad(params_.size(), 0.0);
  const int layers = layer_count();
  const double scale = 1.0 / static_cast<double>(batch.size());
  // pre[l] holds the pre-activation of layer l's output.
  std::vector<std::vector<double>> pre(static_cast<std::size_t>(layers));
  for (int l = 0; l < layers; ++l) pre[static_cast<std::size_t>(l)].resize(static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l) + 1]));
  std::vector<double> delta;
  std::vector<double> back;

  for (const auto& pair : batch) {
    if (static_cast<int>(pair.observation.size()) != input_width()) throw InvalidInput("observation width mismatch");
    if (pair.action != 0 && pair.action != 1) throw InvalidInput("action must be 0 or 1");
    // Forward with trace.
    for (int l = 0; l < layers; ++l) {
      const auto in = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l)]);
      const auto out = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l) + 1]);
      const double* w = params_.data() + offsets_[static_cast<std::size_t>(l)];
      const double* b = params_.data() + bias_offset(l);
      auto& z = pre[static_cast<std::size_t>(l)];
      std::copy(b, b + out, z.begin());
      for (std::size_t i = 0; i < in; ++i) {
        const double x = l == 0 ? static_cast<double>(pair.observation[i])
                                : std::max(pre[static_cast<std::size_t>(l) - 1][i], 0.0);
        if (x == 0.0) continue;
        for (std::size_t o = 0; o < out; ++o) z[o] += x * w[i * out + o];
      }
    }
    const auto& z = pre.back();
    const double p1 = softmax_add({z[0], z[1]});
    delta = {((1.0 - p1) - (pair.action == 0 ? 1.0 : 0.0)) * scale, (p1 - (pair.action == 1 ? 1.0 : 0.0)) * scale};

    for (int l = layers - 1; l >= 0; --l) {
      const auto in = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l)]);
      const auto out = static_cast<std::size_t>(sizes_[static_cast<std::size_t>(l) + 1]);
      const double* w = params_.data() + offsets_[static_cast<std::size_t>(l)];
      double* gw = grad.data() + offsets_[static_cast<std::size_t>(l)];
      double* gb = grad.data() + bias_offset(l);
      for (std::size_t o = 0; o < out; ++o) gb[o] += delta[o];
      if (l > 0) back.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        const double x = l == 0 ? static_cast<double>(pair.observation[i])
                                : std::max(pre[static_cast<std::size_t>(l) - 1][i], 0.0);
        if (x != 0.0) {
          for (std::size_t o = 0; o < out; ++o) gw[i * out + o] += x * delta[o];
        }
        if (l > 0 && pre[static_cast<std::size_t>(l) - 1][i] > 0.0) {
          double s = 0.0;
          for (std::size_t o = 0; o < out; ++o) s += w[i * out + o] * delta[o];
          back[i] = s;
        }
      }
      if (l > 0) delta.swap(back);
    }
  }
  return grad;
}

double PolicyNet::train_step(std::span<const TrainingPair> batch, double learning_rate, const AdamConfig& adam) {
  const double before = loss(batch);
  if (!std::isfinite(before)) throw NumericalFailure("non-finite training loss");
  const auto grad = gradient(batch);
  for (double g : grad) {
    if (!std::isfinite(g)) throw NumericalFailure("non-finite gradient");
  }
  ++steps_;
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    moment1_[k] = adam.beta1 * moment1_[k] + (1.0 - adam.beta1) * grad[k];
    moment2_[k] = adam.beta2 * moment2_[k] + (1.0 - adam.beta2) * grad[k] * grad[k];
    const double mhat = moment1_[k] / c1;
    const double vhat = moment2_[k] / c2;
    params_[k] -= learning_rate * mhat / (std::sqrt(vhat) + adam.epsilon);
  }
  for (double p : params_) {
    if (!std::isfinite(p)) throw NumericalFailure("non-finite parameter after update");
  }
  return before;
}

void PolicyNet::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot write checkpoint " + path.string());
  os.write(kMagic, sizeof kMagic);
  write_u32(os, static_cast<std::uint32_t>(sizes_.size()));
  for (int s : sizes_) write_u32(os, static_cast<std::uint32_t>(s));
  for (double p : params_) write_f64(os, p);
  if (!os) throw InvalidInput("failed writing checkpoint " + path.string());
}

PolicyNet PolicyNet::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidInput("cannot open checkpoint " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError("not a policy checkpoint: " + path.string());
  }
  const std::uint32_t count = read_u32(is);
  if (count < 2 || count > 64) throw ParseError("implausible layer count in checkpoint");
  PolicyNet net;
  for (std::uint32_t k = 0; k < count; ++k) net.sizes_.push_back(static_cast<int>(read_u32(is)));
  if (net.sizes_.back() != 2) throw ParseError("checkpoint output width must be 2");
  net.layout();
  for (double& p : net.params_) p = read_f64(is);
  return net;
}

int sample_action(double p_add, Rng& rng, double act_rndness) {
  if (act_rndness > 0.0 && uniform01(rng) < act_rndness) return uniform01(rng) < 0.5 ? 1 : 0;
  return uniform01(rng) < p_add ? 1 : 0;
}

IncrementalPolicy::IncrementalPolicy(const PolicyNet& net, int pairs) : net_(net), pairs_(pairs) {
  if (net.input_width() != 2 * pairs) throw InvalidInput("network input width does not match the graph order");
  reset();
}

void IncrementalPolicy::reset() {
  const auto bias = net_.first_layer_bias();
  accum_.assign(bias.begin(), bias.end());
}

double IncrementalPolicy::probability_add(int position) {
  const auto cursor = net_.first_layer_column(pairs_ + position);
  scratch_.resize(accum_.size());
  for (std::size_t o = 0; o < accum_.size(); ++o) scratch_[o] = accum_[o] + cursor[o];
  return softmax_add(net_.logits_from_first_layer(scratch_));
}

void IncrementalPolicy::record(int position, int action) {
  if (action == 0) return;
  const auto column = net_.first_layer_column(position);
  for (std::size_t o = 0; o < accum_.size(); ++o) accum_[o] += column[o];
}

}  // namespace cema
