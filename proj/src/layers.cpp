#include "phylab/layers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace phylab {

namespace {

double init_value(Rng& rng, Init style, size_t fan_in, size_t fan_out) {
  if (style == Init::kUniformPm1) return rng.uniform(-1.0, 1.0);
  const double lim = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return rng.uniform(-lim, lim);
}

}  // namespace

// ------------------------------------------------------------------ dense --

Dense::Dense(size_t in, size_t out)
    : in_(in), out_(out), w_(in * out), gw_(in * out), b_(out), gb_(out) {}

void Dense::init_params(Rng& rng, Init style) {
  for (auto& x : w_) x = init_value(rng, style, in_, out_);
  for (auto& x : b_) x = (style == Init::kUniformPm1) ? rng.uniform(-1.0, 1.0) : 0.0;
}

Tensor Dense::forward(const Tensor& x, Mode, Rng&) {
  assert(x.cols == in_);
  x_ = x;
  Tensor y(x.rows, out_);
  for (size_t b = 0; b < x.rows; ++b) {
    const double* xr = x.row(b);
    double* yr = y.row(b);
    for (size_t o = 0; o < out_; ++o) {
      const double* wr = w_.data() + o * in_;
      double s = b_[o];
      for (size_t i = 0; i < in_; ++i) s += wr[i] * xr[i];
      yr[o] = s;
    }
  }
  return y;
}

Tensor Dense::backward(const Tensor& grad) {
  assert(grad.rows == x_.rows && grad.cols == out_);
  Tensor gx(x_.rows, in_);
  for (size_t b = 0; b < x_.rows; ++b) {
    const double* xr = x_.row(b);
    const double* gr = grad.row(b);
    double* gxr = gx.row(b);
    for (size_t o = 0; o < out_; ++o) {
      const double g = gr[o];
      if (g == 0.0) continue;
      double* gwr = gw_.data() + o * in_;
      const double* wr = w_.data() + o * in_;
      gb_[o] += g;
      for (size_t i = 0; i < in_; ++i) {
        gwr[i] += g * xr[i];
        gxr[i] += g * wr[i];
      }
    }
  }
  return gx;
}

std::vector<ParamBlock> Dense::param_blocks() {
  return {{"w", &w_, &gw_}, {"b", &b_, &gb_}};
}

// ------------------------------------------------------------- activation --

std::string Activation::kind() const {
  switch (fn_) {
    case Act::kRelu: return "relu";
    case Act::kLeakyRelu: return "leaky_relu";
    case Act::kTanh: return "tanh";
    case Act::kSigmoid: return "sigmoid";
    case Act::kSoftmax: return "softmax";
  }
  return "activation";
}

Tensor Activation::forward(const Tensor& x, Mode, Rng&) {
  x_ = x;
  Tensor y(x.rows, x.cols);
  switch (fn_) {
    case Act::kRelu:
      for (size_t i = 0; i < x.size(); ++i) y.v[i] = x.v[i] > 0.0 ? x.v[i] : 0.0;
      break;
    case Act::kLeakyRelu:
      for (size_t i = 0; i < x.size(); ++i)
        y.v[i] = x.v[i] > 0.0 ? x.v[i] : leak_ * x.v[i];
      break;
    case Act::kTanh:
      for (size_t i = 0; i < x.size(); ++i) y.v[i] = std::tanh(x.v[i]);
      break;
    case Act::kSigmoid:
      for (size_t i = 0; i < x.size(); ++i) y.v[i] = 1.0 / (1.0 + std::exp(-x.v[i]));
      break;
    case Act::kSoftmax:
      for (size_t b = 0; b < x.rows; ++b) {
        const double* xr = x.row(b);
        double* yr = y.row(b);
        double mx = xr[0];
        for (size_t c = 1; c < x.cols; ++c) mx = std::max(mx, xr[c]);
        double z = 0.0;
        for (size_t c = 0; c < x.cols; ++c) {
          yr[c] = std::exp(xr[c] - mx);
          z += yr[c];
        }
        for (size_t c = 0; c < x.cols; ++c) yr[c] /= z;
      }
      break;
  }
  y_ = y;
  return y;
}

Tensor Activation::backward(const Tensor& grad) {
  Tensor gx(grad.rows, grad.cols);
  switch (fn_) {
    case Act::kRelu:
      for (size_t i = 0; i < grad.size(); ++i)
        gx.v[i] = x_.v[i] > 0.0 ? grad.v[i] : 0.0;
      break;
    case Act::kLeakyRelu:
      for (size_t i = 0; i < grad.size(); ++i)
        gx.v[i] = x_.v[i] > 0.0 ? grad.v[i] : leak_ * grad.v[i];
      break;
    case Act::kTanh:
      for (size_t i = 0; i < grad.size(); ++i)
        gx.v[i] = grad.v[i] * (1.0 - y_.v[i] * y_.v[i]);
      break;
    case Act::kSigmoid:
      for (size_t i = 0; i < grad.size(); ++i)
        gx.v[i] = grad.v[i] * y_.v[i] * (1.0 - y_.v[i]);
      break;
    case Act::kSoftmax:
      for (size_t b = 0; b < grad.rows; ++b) {
        const double* gr = grad.row(b);
        const double* yr = y_.row(b);
        double dot = 0.0;
        for (size_t c = 0; c < grad.cols; ++c) dot += gr[c] * yr[c];
        double* gxr = gx.row(b);
        for (size_t c = 0; c < grad.cols; ++c) gxr[c] = yr[c] * (gr[c] - dot);
      }
      break;
  }
  return gx;
}

// -------------------------------------------------------------- batchnorm --

BatchNorm::BatchNorm(size_t dim, double eps, double momentum)
    : dim_(dim),
      eps_(eps),
      momentum_(momentum),
      gamma_(dim, 1.0),
      ggamma_(dim),
      beta_(dim),
      gbeta_(dim),
      run_mean_(dim, 0.0),
      run_var_(dim, 1.0),
      inv_std_(dim) {}

Tensor BatchNorm::forward(const Tensor& x, Mode mode, Rng&) {
  assert(x.cols == dim_);
  fwd_mode_ = mode;
  Tensor y(x.rows, x.cols);
  if (mode == Mode::kTrain) {
    const double n = static_cast<double>(x.rows);
    xhat_ = Tensor(x.rows, x.cols);
    for (size_t c = 0; c < dim_; ++c) {
      double mean = 0.0;
      for (size_t b = 0; b < x.rows; ++b) mean += x.at(b, c);
      mean /= n;
      double var = 0.0;
      for (size_t b = 0; b < x.rows; ++b) {
        const double d = x.at(b, c) - mean;
        var += d * d;
      }
      var /= n;
      const double istd = 1.0 / std::sqrt(var + eps_);
      inv_std_[c] = istd;
      for (size_t b = 0; b < x.rows; ++b) {
        const double xh = (x.at(b, c) - mean) * istd;
        xhat_.at(b, c) = xh;
        y.at(b, c) = gamma_[c] * xh + beta_[c];
      }
      run_mean_[c] = momentum_ * run_mean_[c] + (1.0 - momentum_) * mean;
      run_var_[c] = momentum_ * run_var_[c] + (1.0 - momentum_) * var;
    }
  } else {
    for (size_t c = 0; c < dim_; ++c) {
      const double istd = 1.0 / std::sqrt(run_var_[c] + eps_);
      inv_std_[c] = istd;
      for (size_t b = 0; b < x.rows; ++b)
        y.at(b, c) = gamma_[c] * (x.at(b, c) - run_mean_[c]) * istd + beta_[c];
    }
    // eval backward only needs inv_std_ and xhat_ for the gamma grad
    xhat_ = Tensor(x.rows, x.cols);
    for (size_t c = 0; c < dim_; ++c)
      for (size_t b = 0; b < x.rows; ++b)
        xhat_.at(b, c) = (x.at(b, c) - run_mean_[c]) * inv_std_[c];
  }
  return y;
}

Tensor BatchNorm::backward(const Tensor& grad) {
  assert(grad.cols == dim_ && grad.rows == xhat_.rows);
  const double n = static_cast<double>(grad.rows);
  Tensor gx(grad.rows, grad.cols);
  for (size_t c = 0; c < dim_; ++c) {
    double gsum = 0.0, gxhat = 0.0;
    for (size_t b = 0; b < grad.rows; ++b) {
      gsum += grad.at(b, c);
      gxhat += grad.at(b, c) * xhat_.at(b, c);
    }
    ggamma_[c] += gxhat;
    gbeta_[c] += gsum;
    if (fwd_mode_ == Mode::kTrain) {
      const double k = gamma_[c] * inv_std_[c];
      for (size_t b = 0; b < grad.rows; ++b)
        gx.at(b, c) =
            k * (grad.at(b, c) - gsum / n - xhat_.at(b, c) * gxhat / n);
    } else {
      const double k = gamma_[c] * inv_std_[c];
      for (size_t b = 0; b < grad.rows; ++b) gx.at(b, c) = k * grad.at(b, c);
    }
  }
  return gx;
}

std::vector<ParamBlock> BatchNorm::param_blocks() {
  return {{"gamma", &gamma_, &ggamma_}, {"beta", &beta_, &gbeta_}};
}

std::vector<StateBlock> BatchNorm::state_blocks() {
  return {{"run_mean", &run_mean_}, {"run_var", &run_var_}};
}

// -------------------------------------------------------------- embedding --

Embedding::Embedding(size_t vocab, size_t dim, size_t n_ids)
    : vocab_(vocab), dim_(dim), n_ids_(n_ids), table_(vocab * dim), gtable_(vocab * dim) {}

void Embedding::init_params(Rng& rng, Init style) {
  for (auto& x : table_) x = init_value(rng, style, vocab_, dim_);
}

Tensor Embedding::forward(const Tensor& x, Mode, Rng&) {
  assert(x.cols == n_ids_);
  batch_ = x.rows;
  ids_.assign(batch_ * n_ids_, 0);
  Tensor y(batch_, n_ids_ * dim_);
  for (size_t b = 0; b < batch_; ++b) {
    for (size_t j = 0; j < n_ids_; ++j) {
      const auto id = static_cast<size_t>(x.at(b, j));
      assert(id < vocab_);
      ids_[b * n_ids_ + j] = id;
      const double* src = table_.data() + id * dim_;
      double* dst = y.row(b) + j * dim_;
      std::copy(src, src + dim_, dst);
    }
  }
  return y;
}

Tensor Embedding::backward(const Tensor& grad) {
  assert(grad.rows == batch_ && grad.cols == n_ids_ * dim_);
  for (size_t b = 0; b < batch_; ++b) {
    for (size_t j = 0; j < n_ids_; ++j) {
      double* dst = gtable_.data() + ids_[b * n_ids_ + j] * dim_;
      const double* src = grad.row(b) + j * dim_;
      for (size_t d = 0; d < dim_; ++d) dst[d] += src[d];
    }
  }
  return Tensor(batch_, n_ids_);  // ids carry no gradient
}

std::vector<ParamBlock> Embedding::param_blocks() {
  return {{"table", &table_, &gtable_}};
}

// ------------------------------------------------------- power constraints --

Tensor EnergyNorm::forward(const Tensor& x, Mode, Rng&) {
  x_ = x;
  const double target = target_ > 0.0 ? target_ : static_cast<double>(x.cols);
  scale_.assign(x.rows, 0.0);
  r2_.assign(x.rows, 0.0);
  Tensor y(x.rows, x.cols);
  for (size_t b = 0; b < x.rows; ++b) {
    double r2 = 0.0;
    for (size_t c = 0; c < x.cols; ++c) r2 += x.at(b, c) * x.at(b, c);
    const double r = std::max(std::sqrt(r2), 1e-12);
    const double s = std::sqrt(target) / r;
    scale_[b] = s;
    r2_[b] = r * r;
    for (size_t c = 0; c < x.cols; ++c) y.at(b, c) = s * x.at(b, c);
  }
  return y;
}

Tensor EnergyNorm::backward(const Tensor& grad) {
  Tensor gx(grad.rows, grad.cols);
  for (size_t b = 0; b < grad.rows; ++b) {
    double dot = 0.0;
    for (size_t c = 0; c < grad.cols; ++c) dot += grad.at(b, c) * x_.at(b, c);
    const double s = scale_[b];
    for (size_t c = 0; c < grad.cols; ++c)
      gx.at(b, c) = s * (grad.at(b, c) - x_.at(b, c) * dot / r2_[b]);
  }
  return gx;
}

Tensor AvgPowerNorm::forward(const Tensor& x, Mode, Rng&) {
  x_ = x;
  const double target = target_ > 0.0 ? target_ : static_cast<double>(x.cols) / 2.0;
  double total = 0.0;
  for (size_t i = 0; i < x.size(); ++i) total += x.v[i] * x.v[i];
  mean_pow_ = std::max(total / static_cast<double>(x.rows), 1e-12);
  scale_ = std::sqrt(target / mean_pow_);
  Tensor y(x.rows, x.cols);
  for (size_t i = 0; i < x.size(); ++i) y.v[i] = scale_ * x.v[i];
  return y;
}

Tensor AvgPowerNorm::backward(const Tensor& grad) {
  const double n = static_cast<double>(grad.rows);
  double dot = 0.0;
  for (size_t i = 0; i < grad.size(); ++i) dot += grad.v[i] * x_.v[i];
  Tensor gx(grad.rows, grad.cols);
  const double k = scale_ * dot / (n * mean_pow_);
  for (size_t i = 0; i < grad.size(); ++i)
    gx.v[i] = scale_ * grad.v[i] - k * x_.v[i];
  return gx;
}

// ------------------------------------------------------------------ noise --

Tensor AwgnNoise::forward(const Tensor& x, Mode, Rng& rng) {
  if (var_ <= 0.0) return x;
  const double sd = std::sqrt(var_);
  Tensor y(x.rows, x.cols);
  for (size_t i = 0; i < x.size(); ++i) y.v[i] = x.v[i] + sd * rng.normal();
  return y;
}

// ------------------------------------------------------ complex multiply --

Tensor ComplexMultiply::forward(const Tensor& x, Mode, Rng&) {
  assert(x.cols == 2 * h_.cols);
  Tensor y(x.rows, 2 * h_.rows);
  for (size_t b = 0; b < x.rows; ++b) {
    const double* xr = x.row(b);
    double* yr = y.row(b);
    for (size_t i = 0; i < h_.rows; ++i) {
      cplx s{};
      for (size_t j = 0; j < h_.cols; ++j)
        s += h_.at(i, j) * cplx(xr[2 * j], xr[2 * j + 1]);
      yr[2 * i] = s.real();
      yr[2 * i + 1] = s.imag();
    }
  }
  return y;
}

Tensor ComplexMultiply::backward(const Tensor& grad) {
  assert(grad.cols == 2 * h_.rows);
  Tensor gx(grad.rows, 2 * h_.cols);
  for (size_t b = 0; b < grad.rows; ++b) {
    const double* gr = grad.row(b);
    double* gxr = gx.row(b);
    for (size_t j = 0; j < h_.cols; ++j) {
      cplx s{};
      for (size_t i = 0; i < h_.rows; ++i)
        s += std::conj(h_.at(i, j)) * cplx(gr[2 * i], gr[2 * i + 1]);
      gxr[2 * j] = s.real();
      gxr[2 * j + 1] = s.imag();
    }
  }
  return gx;
}

}  // namespace phylab
