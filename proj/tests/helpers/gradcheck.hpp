#ifndef PHYLAB_TESTS_GRADCHECK_HPP
#define PHYLAB_TESTS_GRADCHECK_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phylab/losses.hpp"
#include "phylab/network.hpp"

namespace phylab::testing {

inline double rel_err(double a, double f) {
  return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-4});
}

struct GradCheck {
  double max_rel_err = 0.0;
  size_t n_checked = 0;
};

inline Tensor random_tensor(Rng& rng, size_t rows, size_t cols, double lo = -1.0,
                            double hi = 1.0) {
  Tensor t(rows, cols);
  for (auto& v : t.v) v = rng.uniform(lo, hi);
  return t;
}

// Magnitudes in [lo, hi] with random sign -- keeps inputs away from relu
// kinks and from the zero vector of the norm layers.
inline Tensor random_tensor_off_zero(Rng& rng, size_t rows, size_t cols,
                                     double lo = 0.05, double hi = 1.0) {
  Tensor t(rows, cols);
  for (auto& v : t.v)
    v = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(lo, hi);
  return t;
}

inline void randomize_params(Network& net, Rng& rng) {
  for (auto& pb : net.param_blocks())
    for (auto& w : *pb.w) w = rng.uniform(-1.0, 1.0);
}

// Compares analytic gradients of L = sum_i r_i * y_i (fixed random
// projection r) against central finite differences, over the input tensor
// and every parameter. The network rng is reseeded before each forward so
// stochastic layers repeat their draws.
inline GradCheck grad_check(Network& net, const Tensor& x0, Mode mode, Rng& probe,
                            uint64_t noise_seed, bool check_input = true) {
  net.rng().reseed(noise_seed);
  const Tensor y0 = net.forward(x0, mode);
  Tensor r(y0.rows, y0.cols);
  for (auto& v : r.v) v = probe.uniform(-1.0, 1.0);

  auto objective = [&](const Tensor& in) {
    net.rng().reseed(noise_seed);
    const Tensor y = net.forward(in, mode);
    double L = 0.0;
    for (size_t i = 0; i < y.size(); ++i) L += r.v[i] * y.v[i];
    return L;
  };

  net.rng().reseed(noise_seed);
  net.forward(x0, mode);
  net.zero_grads();
  const Tensor gx = net.backward(r);

  GradCheck res;
  auto fd_at = [&](double* slot, const Tensor& in) {
    const double v0 = *slot;
    const double h = 1e-5 * std::max(1.0, std::abs(v0));
    *slot = v0 + h;
    const double lp = objective(in);
    *slot = v0 - h;
    const double lm = objective(in);
    *slot = v0;
    return (lp - lm) / (2.0 * h);
  };

  if (check_input) {
    Tensor x = x0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double fd = fd_at(&x.v[i], x);
      res.max_rel_err = std::max(res.max_rel_err, rel_err(gx.v[i], fd));
      ++res.n_checked;
    }
  }
  for (auto& pb : net.param_blocks()) {
    for (size_t j = 0; j < pb.w->size(); ++j) {
      const double fd = fd_at(&(*pb.w)[j], x0);
      res.max_rel_err = std::max(res.max_rel_err, rel_err((*pb.g)[j], fd));
      ++res.n_checked;
    }
  }
  return res;
}

// Same idea but the objective is the cross-entropy loss and the analytic
// path is backward_from_logits, validating the loss/softmax pairing.
inline GradCheck grad_check_ce(Network& net, const Tensor& x,
                               const std::vector<int>& labels, uint64_t noise_seed) {
  auto objective = [&]() {
    net.rng().reseed(noise_seed);
    const Tensor p = net.forward(x, Mode::kTrain);
    return softmax_cross_entropy(p, labels).loss;
  };

  net.rng().reseed(noise_seed);
  const Tensor p = net.forward(x, Mode::kTrain);
  const LossGrad lg = softmax_cross_entropy(p, labels);
  net.zero_grads();
  net.backward_from_logits(lg.grad);

  GradCheck res;
  for (auto& pb : net.param_blocks()) {
    for (size_t j = 0; j < pb.w->size(); ++j) {
      double* slot = &(*pb.w)[j];
      const double v0 = *slot;
      const double h = 1e-5 * std::max(1.0, std::abs(v0));
      *slot = v0 + h;
      const double lp = objective();
      *slot = v0 - h;
      const double lm = objective();
      *slot = v0;
      const double fd = (lp - lm) / (2.0 * h);
      res.max_rel_err = std::max(res.max_rel_err, rel_err((*pb.g)[j], fd));
      ++res.n_checked;
    }
  }
  return res;
}

struct LayerCheck {
  std::string name;
  double max_rel_err = 0.0;
  size_t n_checked = 0;
};

// Runs the finite-difference check on every layer type at n_points random
// configurations each. Used by both the unit tests and the acceptance
// runner.
inline std::vector<LayerCheck> all_layer_gradchecks(int n_points, uint64_t seed) {
  std::vector<LayerCheck> out;

  auto run_case = [&](const std::string& name, uint64_t case_id, auto&& build,
                      bool check_input = true, Mode mode = Mode::kTrain) {
    LayerCheck lc{name, 0.0, 0};
    for (int p = 0; p < n_points; ++p) {
      Rng probe = Rng::stream(seed, case_id, static_cast<uint64_t>(p));
      Network net(probe.next_u64());
      Tensor x = build(net, probe);
      randomize_params(net, probe);
      const auto res = grad_check(net, x, mode, probe,
                                  seed ^ (case_id * 1000003ULL + p), check_input);
      lc.max_rel_err = std::max(lc.max_rel_err, res.max_rel_err);
      lc.n_checked += res.n_checked;
    }
    out.push_back(lc);
  };

  run_case("dense", 1, [](Network& net, Rng& rng) {
    const size_t in = 2 + rng.below(5), od = 2 + rng.below(5), b = 1 + rng.below(4);
    net.emplace<Dense>(in, od);
    return random_tensor(rng, b, in);
  });
  run_case("relu", 2, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<Activation>(Act::kRelu);
    return random_tensor_off_zero(rng, b, d);
  });
  run_case("leaky_relu", 3, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<Activation>(Act::kLeakyRelu, 0.2);
    return random_tensor_off_zero(rng, b, d);
  });
  run_case("tanh", 4, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<Activation>(Act::kTanh);
    return random_tensor(rng, b, d);
  });
  run_case("sigmoid", 5, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<Activation>(Act::kSigmoid);
    return random_tensor(rng, b, d);
  });
  run_case("softmax", 6, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<Activation>(Act::kSoftmax);
    return random_tensor(rng, b, d);
  });
  run_case("batchnorm_train", 7, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(5), b = 3 + rng.below(5);
    net.emplace<BatchNorm>(d);
    return random_tensor(rng, b, d);
  });
  run_case(
      "batchnorm_eval", 8,
      [](Network& net, Rng& rng) {
        const size_t d = 2 + rng.below(5), b = 1 + rng.below(5);
        net.emplace<BatchNorm>(d);
        return random_tensor(rng, b, d);
      },
      true, Mode::kEval);
  run_case(
      "embedding", 9,
      [](Network& net, Rng& rng) {
        const size_t vocab = 3 + rng.below(5), dim = 2 + rng.below(4);
        const size_t n_ids = 1 + rng.below(2), b = 1 + rng.below(4);
        net.emplace<Embedding>(vocab, dim, n_ids);
        Tensor x(b, n_ids);
        for (auto& v : x.v) v = static_cast<double>(rng.below(vocab));
        return x;
      },
      /*check_input=*/false);
  run_case("energy_norm", 10, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<EnergyNorm>();
    return random_tensor_off_zero(rng, b, d, 0.3, 1.0);
  });
  run_case("avg_power_norm", 11, [](Network& net, Rng& rng) {
    const size_t d = 2 * (1 + rng.below(3)), b = 1 + rng.below(4);
    net.emplace<AvgPowerNorm>();
    return random_tensor_off_zero(rng, b, d, 0.3, 1.0);
  });
  run_case("awgn_noise", 12, [](Network& net, Rng& rng) {
    const size_t d = 2 + rng.below(6), b = 1 + rng.below(4);
    net.emplace<AwgnNoise>(0.05 + 0.95 * rng.uniform());
    return random_tensor(rng, b, d);
  });
  run_case("complex_multiply", 13, [](Network& net, Rng& rng) {
    const size_t nr = 1 + rng.below(3), nt = 1 + rng.below(3), b = 1 + rng.below(4);
    CMat h(nr, nt);
    for (auto& z : h.v) z = cplx(rng.normal(), rng.normal());
    net.emplace<ComplexMultiply>(h);
    return random_tensor(rng, b, 2 * nt);
  });

  return out;
}

}  // namespace phylab::testing

#endif  // PHYLAB_TESTS_GRADCHECK_HPP
