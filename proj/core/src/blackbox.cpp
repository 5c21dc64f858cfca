#include <algorithm>
#include <cmath>

#include "asynczoo/error.hpp"
#include "asynczoo/estimation.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/rng.hpp"

namespace asynczoo {

namespace {

constexpr std::size_t kLipschitzProbes = 6;

std::size_t checked_weight_count(const std::vector<std::size_t>& layers) {
  if (layers.size() < 2) throw ValidationError("black box needs at least 2 layers");
  for (std::size_t width : layers) {
    if (width == 0) throw ValidationError("black box layer widths must be >= 1");
  }
  return NeuralBlackbox::weight_count(layers);
}

void fill_network(std::span<const std::size_t> layers, RngStream& rng, std::span<double> w) {
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layers[l]));
    const std::size_t count = layers[l + 1] * (layers[l] + 1);
    for (std::size_t k = 0; k < count; ++k) w[offset + k] = scale * rng.normal();
    offset += count;
  }
}

}  // namespace

std::size_t NeuralBlackbox::weight_count(std::span<const std::size_t> layer_sizes) {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    total += layer_sizes[l + 1] * (layer_sizes[l] + 1);
  }
  return total;
}

NeuralBlackbox::NeuralBlackbox(std::vector<std::size_t> layer_sizes, std::size_t n_samples,
                               std::uint64_t seed, double noise_std)
    : Problem(checked_weight_count(layer_sizes), n_samples), layers_(std::move(layer_sizes)) {
  if (!(noise_std >= 0.0)) throw ValidationError("black box noise_std must be >= 0");
  max_width_ = *std::max_element(layers_.begin(), layers_.end());

  teacher_.resize(dim());
  initial_.resize(dim());
  RngStream teacher_rng(seed, 21);
  RngStream student_rng(seed, 22);
  fill_network(layers_, teacher_rng, teacher_);
  fill_network(layers_, student_rng, initial_);

  const std::size_t in = layers_.front();
  const std::size_t out = layers_.back();
  inputs_.resize(n_samples * in);
  targets_.resize(n_samples * out);
  RngStream data_rng(seed, 23);
  for (double& v : inputs_) v = data_rng.normal();
  for (std::size_t s = 0; s < n_samples; ++s) {
    std::span<double> y(targets_.data() + s * out, out);
    forward(teacher_, inputs(s), y);
    for (double& v : y) v += noise_std * data_rng.normal();
  }

  set_lipschitz(estimate_lipschitz(*this, kLipschitzProbes, seed ^ 0x5A5A5A5AULL));
}

std::span<const double> NeuralBlackbox::inputs(std::size_t sample) const {
  check_component(sample);
  return {inputs_.data() + sample * layers_.front(), layers_.front()};
}

std::span<const double> NeuralBlackbox::targets(std::size_t sample) const {
  check_component(sample);
  return {targets_.data() + sample * layers_.back(), layers_.back()};
}

void NeuralBlackbox::forward(std::span<const double> weights, std::span<const double> input,
                             std::span<double> output) const {
  thread_local std::vector<double> scratch;
  scratch.resize(2 * max_width_);
  double* cur = scratch.data();
  double* next = scratch.data() + max_width_;
  std::copy(input.begin(), input.end(), cur);

  std::size_t offset = 0;
  const std::size_t last = layers_.size() - 2;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const std::size_t fan_in = layers_[l];
    const std::size_t fan_out = layers_[l + 1];
    const double* w = weights.data() + offset;
    const double* bias = w + fan_out * fan_in;
    for (std::size_t o = 0; o < fan_out; ++o) {
      double acc = bias[o];
      const double* row = w + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) acc += row[i] * cur[i];
      next[o] = l == last ? acc : std::tanh(acc);
    }
    offset += fan_out * (fan_in + 1);
    std::swap(cur, next);
  }
  std::copy(cur, cur + layers_.back(), output.begin());
}

double NeuralBlackbox::do_eval(std::span<const double> x, std::size_t xi) const {
  const std::size_t out = layers_.back();
  double prediction[64];
  std::vector<double> heap;
  double* y = prediction;
  if (out > 64) {
    heap.resize(out);
    y = heap.data();
  }
  forward(x, {inputs_.data() + xi * layers_.front(), layers_.front()}, {y, out});
  const double* target = targets_.data() + xi * out;
  double loss = 0.0;
  for (std::size_t o = 0; o < out; ++o) {
    const double d = y[o] - target[o];
    loss += d * d;
  }
  return 0.5 * loss;
}

std::shared_ptr<const NeuralBlackbox> make_noisy_blackbox(std::vector<std::size_t> layer_sizes,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed, double noise_std) {
  return std::make_shared<const NeuralBlackbox>(std::move(layer_sizes), n_samples, seed,
                                                noise_std);
}

}  // namespace asynczoo
