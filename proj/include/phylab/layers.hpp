#ifndef PHYLAB_LAYERS_HPP
#define PHYLAB_LAYERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "phylab/cmat.hpp"
#include "phylab/rng.hpp"
#include "phylab/tensor.hpp"

namespace phylab {

enum class Mode { kTrain, kEval };

enum class Init { kGlorotUniform, kUniformPm1 };

// A named view into one parameter array and its gradient accumulator.
struct ParamBlock {
  std::string name;
  std::vector<double>* w;
  std::vector<double>* g;
};

// Non-trained serializable state (e.g. batch-norm running statistics).
struct StateBlock {
  std::string name;
  std::vector<double>* v;
};

class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string kind() const = 0;
  // Forward pass; layers cache whatever backward() needs.
  virtual Tensor forward(const Tensor& x, Mode mode, Rng& rng) = 0;
  // Gradients ACCUMULATE into parameter grads; returns grad w.r.t. input.
  virtual Tensor backward(const Tensor& grad) = 0;
  virtual std::vector<ParamBlock> param_blocks() { return {}; }
  virtual std::vector<StateBlock> state_blocks() { return {}; }
  virtual void init_params(Rng& /*rng*/, Init /*style*/) {}
};

// ------------------------------------------------------------------ dense --

// y = x W^T + b with W stored [out, in].
class Dense : public Layer {
 public:
  Dense(size_t in, size_t out);
  std::string kind() const override { return "dense"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;
  std::vector<ParamBlock> param_blocks() override;
  void init_params(Rng& rng, Init style) override;

  size_t in_dim() const { return in_; }
  size_t out_dim() const { return out_; }
  std::vector<double>& weights() { return w_; }
  std::vector<double>& bias() { return b_; }

 private:
  size_t in_, out_;
  std::vector<double> w_, gw_, b_, gb_;
  Tensor x_;  // cached input
};

// ------------------------------------------------------------- activation --

enum class Act { kRelu, kLeakyRelu, kTanh, kSigmoid, kSoftmax };

class Activation : public Layer {
 public:
  explicit Activation(Act fn, double leak = 0.2) : fn_(fn), leak_(leak) {}
  std::string kind() const override;
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;
  Act fn() const { return fn_; }

 private:
  Act fn_;
  double leak_;
  Tensor x_, y_;
};

// -------------------------------------------------------------- batchnorm --

// Per-feature batch normalization with learnable scale/shift. Training mode
// normalizes by batch statistics and updates running estimates
// (run = momentum * run + (1 - momentum) * batch); eval mode applies the
// running affine transform.
class BatchNorm : public Layer {
 public:
  explicit BatchNorm(size_t dim, double eps = 1e-5, double momentum = 0.99);
  std::string kind() const override { return "batchnorm"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;
  std::vector<ParamBlock> param_blocks() override;
  std::vector<StateBlock> state_blocks() override;

  const std::vector<double>& running_mean() const { return run_mean_; }
  const std::vector<double>& running_var() const { return run_var_; }

 private:
  size_t dim_;
  double eps_, momentum_;
  std::vector<double> gamma_, ggamma_, beta_, gbeta_;
  std::vector<double> run_mean_, run_var_;
  // caches for backward
  Mode fwd_mode_ = Mode::kTrain;
  Tensor xhat_;
  std::vector<double> inv_std_;
};

// -------------------------------------------------------------- embedding --

// Lookup table: input [B, n_ids] of integer ids, output the concatenated
// table rows, [B, n_ids * dim]. Input gradient is defined as zero.
class Embedding : public Layer {
 public:
  Embedding(size_t vocab, size_t dim, size_t n_ids);
  std::string kind() const override { return "embedding"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;
  std::vector<ParamBlock> param_blocks() override;
  void init_params(Rng& rng, Init style) override;

 private:
  size_t vocab_, dim_, n_ids_;
  std::vector<double> table_, gtable_;
  std::vector<size_t> ids_;  // cached lookups, row-major [B, n_ids]
  size_t batch_ = 0;
};

// ------------------------------------------------------- power constraints --

// Scales each row to squared norm target_total (defaults to the column
// count, i.e. unit average energy per dimension).
class EnergyNorm : public Layer {
 public:
  explicit EnergyNorm(double target_total = 0.0) : target_(target_total) {}
  std::string kind() const override { return "energy_norm"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;

 private:
  double target_;
  Tensor x_;
  std::vector<double> scale_, r2_;
};

// Scales the whole batch by one factor so the mean per-row squared norm is
// target_total (defaults to cols/2: unit average power per complex symbol
// when rows interleave real/imaginary parts).
class AvgPowerNorm : public Layer {
 public:
  explicit AvgPowerNorm(double target_total = 0.0) : target_(target_total) {}
  std::string kind() const override { return "avg_power_norm"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;

 private:
  double target_;
  Tensor x_;
  double scale_ = 1.0, mean_pow_ = 1.0;
};

// ------------------------------------------------------------------ noise --

// Adds iid zero-mean Gaussian noise of the configured variance to every
// entry (a channel-in-the-network layer). Backward is the identity.
class AwgnNoise : public Layer {
 public:
  explicit AwgnNoise(double var = 0.0) : var_(var) {}
  std::string kind() const override { return "awgn_noise"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override { return grad; }
  void set_var(double var) { var_ = var; }
  double var() const { return var_; }

 private:
  double var_;
};

// ------------------------------------------------------ complex multiply --

// Fixed complex matrix channel y = H x acting on interleaved
// (re, im, re, im, ...) rows: input [B, 2*H.cols] -> output [B, 2*H.rows].
// Backward applies the adjoint H^H.
class ComplexMultiply : public Layer {
 public:
  explicit ComplexMultiply(CMat h) : h_(std::move(h)) {}
  std::string kind() const override { return "complex_multiply"; }
  Tensor forward(const Tensor& x, Mode mode, Rng& rng) override;
  Tensor backward(const Tensor& grad) override;
  void set_channel(CMat h) { h_ = std::move(h); }
  const CMat& channel() const { return h_; }

 private:
  CMat h_;
};

}  // namespace phylab

#endif  // PHYLAB_LAYERS_HPP
