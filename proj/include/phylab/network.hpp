#ifndef PHYLAB_NETWORK_HPP
#define PHYLAB_NETWORK_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phylab/layers.hpp"

namespace phylab {

// Raised when an optimization run diverges (NaN/Inf loss or parameters).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A plain layer stack. Gradients accumulate across backward calls until
// zero_grads(); the owned Rng drives noise layers and parameter init.
class Network {
 public:
  explicit Network(uint64_t seed = 0) : rng_(seed) {}

  Layer* add(std::unique_ptr<Layer> layer) {
    layers_.push_back(std::move(layer));
    return layers_.back().get();
  }

  template <class L, class... Args>
  L* emplace(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L* raw = layer.get();
    layers_.push_back(std::move(layer));
    return raw;
  }

  size_t size() const { return layers_.size(); }
  Layer* layer(size_t i) { return layers_.at(i).get(); }

  Tensor forward(const Tensor& x, Mode mode) {
    return forward_span(x, mode, 0, layers_.size());
  }

  // Runs layers [first, last) only.
  Tensor forward_span(const Tensor& x, Mode mode, size_t first, size_t last) {
    Tensor h = x;
    for (size_t i = first; i < last; ++i) h = layers_[i]->forward(h, mode, rng_);
    return h;
  }

  Tensor backward(const Tensor& grad) {
    return backward_span(grad, 0, layers_.size());
  }

  Tensor backward_span(const Tensor& grad, size_t first, size_t last) {
    Tensor g = grad;
    for (size_t i = last; i-- > first;) g = layers_[i]->backward(g);
    return g;
  }

  // Backward for losses whose gradient is taken at the pre-activation
  // logits: skips a trailing softmax/sigmoid layer.
  Tensor backward_from_logits(const Tensor& grad) {
    size_t last = layers_.size();
    if (last > 0) {
      const std::string k = layers_[last - 1]->kind();
      if (k == "softmax" || k == "sigmoid") --last;
    }
    return backward_span(grad, 0, last);
  }

  std::vector<ParamBlock> param_blocks() {
    std::vector<ParamBlock> out;
    for (size_t i = 0; i < layers_.size(); ++i) {
      for (auto& pb : layers_[i]->param_blocks()) {
        pb.name = "l" + std::to_string(i) + "." + layers_[i]->kind() + "." + pb.name;
        out.push_back(pb);
      }
    }
    return out;
  }

  std::vector<StateBlock> state_blocks() {
    std::vector<StateBlock> out;
    for (size_t i = 0; i < layers_.size(); ++i) {
      for (auto& sb : layers_[i]->state_blocks()) {
        sb.name = "l" + std::to_string(i) + "." + layers_[i]->kind() + "." + sb.name;
        out.push_back(sb);
      }
    }
    return out;
  }

  void zero_grads() {
    for (auto& pb : param_blocks())
      std::fill(pb.g->begin(), pb.g->end(), 0.0);
  }

  void init_params(Init style) {
    for (auto& l : layers_) l->init_params(rng_, style);
  }

  Rng& rng() { return rng_; }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
  Rng rng_;
};

}  // namespace phylab

#endif  // PHYLAB_NETWORK_HPP
