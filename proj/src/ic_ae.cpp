#include "phylab/ic_ae.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "phylab/ae_single.hpp"
#include "phylab/channel.hpp"
#include "phylab/losses.hpp"
#include "phylab/optim.hpp"

namespace phylab {

namespace {

void validate(const IcAeConfig& cfg) {
  if (cfg.n == 0) throw std::invalid_argument("ic n must be >= 1");
  if (cfg.k == 0 || cfg.k > 16) throw std::invalid_argument("ic k must be in [1, 16]");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw std::invalid_argument("ic lr must be positive and finite");
  if (cfg.batch_size == 0 || cfg.max_steps == 0 || cfg.eval_every == 0)
    throw std::invalid_argument("batch_size, max_steps, eval_every must be >= 1");
  if (cfg.finetune_steps > 0 &&
      (!(cfg.finetune_lr > 0.0) || !std::isfinite(cfg.finetune_lr) || cfg.finetune_batch == 0))
    throw std::invalid_argument("finetune settings must be positive");
}

void build_tx(Network& net, size_t m, size_t n, Rng rng) {
  net.rng() = rng;
  net.emplace<Dense>(m, m);
  net.emplace<Activation>(Act::kRelu);
  net.emplace<Dense>(m, 2 * n);
  net.emplace<AvgPowerNorm>();  // mean power 1 per complex channel use
  net.init_params(Init::kGlorotUniform);
}

void build_rx(Network& net, size_t m, size_t n, Rng rng) {
  net.rng() = rng;
  net.emplace<Dense>(2 * n, m);
  net.emplace<Activation>(Act::kRelu);
  net.emplace<Dense>(m, m);
  net.emplace<Activation>(Act::kSoftmax);
  net.init_params(Init::kGlorotUniform);
}

std::vector<ParamBlock> pair_blocks(Network& tx, Network& rx) {
  std::vector<ParamBlock> out = tx.param_blocks();
  for (auto& pb : rx.param_blocks()) out.push_back(pb);
  return out;
}

std::vector<int> argmax_rows(const Tensor& probs) {
  std::vector<int> out(probs.rows);
  for (size_t i = 0; i < probs.rows; ++i) {
    size_t best = 0;
    for (size_t j = 1; j < probs.cols; ++j)
      if (probs.at(i, j) > probs.at(i, best)) best = j;
    out[i] = int(best);
  }
  return out;
}

IcPair train_ic_pair_once(const IcAeConfig& cfg, uint64_t net_seed) {
  const size_t m = size_t{1} << cfg.k;
  const size_t dim = 2 * cfg.n;
  const double beta = ebno_to_noise_var(double(cfg.k) / double(cfg.n), cfg.train_ebno_db);
  const double sd = std::sqrt(beta);

  IcPair pair;
  pair.cfg = cfg;
  build_tx(pair.tx1, m, cfg.n, Rng::stream(net_seed, 0x1C, 0, 1));
  build_rx(pair.rx1, m, cfg.n, Rng::stream(net_seed, 0x1C, 0, 2));
  build_tx(pair.tx2, m, cfg.n, Rng::stream(net_seed, 0x1C, 0, 3));
  build_rx(pair.rx2, m, cfg.n, Rng::stream(net_seed, 0x1C, 0, 4));

  Rng channel_rng = Rng::stream(net_seed, 0x1C, 1, 0);
  Rng shuffle_rng = Rng::stream(net_seed, 0x1C, 2, 0);
  double alpha = 0.5;

  // One optimization stage with plateau early stopping; both pairs share
  // the stage schedule but are stepped on alternating iterations.
  auto run_stage = [&](size_t min_rows, double lr, size_t max_steps,
                       uint64_t stage_id) -> double {
    const size_t reps = std::max<size_t>(1, (min_rows + m - 1) / m);
    const size_t b = reps * m;
    Tensor x1(b, m);
    std::vector<int> labels1(b), labels2(b);
    for (size_t i = 0; i < b; ++i) {
      x1.at(i, i % m) = 1.0;
      labels1[i] = int(i % m);
    }

    Adam opt1(lr), opt2(lr);
    const Rng val_rng = Rng::stream(net_seed, 0x1C, 3, stage_id);
    double best = std::numeric_limits<double>::infinity();
    size_t best_step = 0;
    std::vector<std::vector<double>> best_params;
    std::vector<Network*> nets = {&pair.tx1, &pair.rx1, &pair.tx2, &pair.rx2};

    auto snapshot = [&]() {
      best_params.clear();
      for (Network* nw : nets)
        for (const auto& pb : nw->param_blocks()) best_params.push_back(*pb.w);
    };
    auto restore = [&]() {
      size_t idx = 0;
      for (Network* nw : nets)
        for (auto& pb : nw->param_blocks()) *pb.w = best_params[idx++];
    };

    // Forward both users through the superposed channel; returns both
    // losses and, in train mode, backpropagates the weighted gradients.
    auto forward_pair = [&](const Tensor& in1, const Tensor& in2,
                            const std::vector<int>& l1, const std::vector<int>& l2,
                            Rng& noise_rng, Mode mode, bool do_backward,
                            double* out_l1, double* out_l2) {
      Tensor s1 = pair.tx1.forward(in1, mode);
      Tensor s2 = pair.tx2.forward(in2, mode);
      Tensor y1(s1.rows, dim), y2(s1.rows, dim);
      for (size_t i = 0; i < s1.rows; ++i)
        for (size_t j = 0; j < dim; ++j) {
          const double mix = s1.at(i, j) + s2.at(i, j);
          y1.at(i, j) = mix + sd * noise_rng.normal();
          y2.at(i, j) = mix + sd * noise_rng.normal();
        }
      Tensor p1 = pair.rx1.forward(y1, mode);
      Tensor p2 = pair.rx2.forward(y2, mode);
      LossGrad g1 = softmax_cross_entropy(p1, l1);
      LossGrad g2 = softmax_cross_entropy(p2, l2);
      *out_l1 = g1.loss;
      *out_l2 = g2.loss;
      if (!do_backward) return;
      for (auto& v : g1.grad.v) v *= alpha;
      for (auto& v : g2.grad.v) v *= 1.0 - alpha;
      Tensor gy1 = pair.rx1.backward_from_logits(g1.grad);
      Tensor gy2 = pair.rx2.backward_from_logits(g2.grad);
      Tensor gx(gy1.rows, dim);
      for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] = gy1.v[i] + gy2.v[i];
      pair.tx1.backward(gx);
      pair.tx2.backward(gx);
    };

    auto validate_now = [&](size_t step) {
      Rng noise = val_rng;
      // Fixed pairing for validation: user 2 sends the reversed messages.
      Tensor x2(b, m);
      std::vector<int> l2(b);
      for (size_t i = 0; i < b; ++i) {
        l2[i] = int((m - 1) - (i % m));
        x2.at(i, l2[i]) = 1.0;
      }
      double l1v = 0.0, l2v = 0.0;
      forward_pair(x1, x2, labels1, l2, noise, Mode::kEval, false, &l1v, &l2v);
      const double loss = l1v + l2v;
      if (!std::isfinite(loss))
        throw TrainingError("interference pair diverged (seed " + std::to_string(cfg.seed) +
                            ")");
      if (loss < best - 1e-5) {
        best = loss;
        best_step = step;
        snapshot();
      }
    };

    size_t step = 0;
    for (; step < max_steps; ++step) {
      if (step % cfg.eval_every == 0) {
        validate_now(step);
        if (step - best_step >= cfg.patience) break;
      }
      // Fresh random pairing of the two users' messages each step.
      std::vector<int> l2(b);
      for (size_t i = 0; i < b; ++i) l2[i] = int(i % m);
      for (size_t i = b; i > 1; --i) std::swap(l2[i - 1], l2[shuffle_rng.below(i)]);
      Tensor x2(b, m);
      for (size_t i = 0; i < b; ++i) x2.at(i, l2[i]) = 1.0;

      for (Network* nw : nets) nw->zero_grads();
      double l1 = 0.0, l2loss = 0.0;
      forward_pair(x1, x2, labels1, l2, channel_rng, Mode::kTrain, true, &l1, &l2loss);
      if (!std::isfinite(l1) || !std::isfinite(l2loss))
        throw TrainingError("interference pair diverged (seed " + std::to_string(cfg.seed) +
                            ")");
      if (step % 2 == 0) {
        auto blocks = pair_blocks(pair.tx1, pair.rx1);
        opt1.step(blocks);
      } else {
        auto blocks = pair_blocks(pair.tx2, pair.rx2);
        opt2.step(blocks);
      }
      if (l1 + l2loss > 0.0) alpha = l1 / (l1 + l2loss);
    }
    validate_now(step);
    restore();
    pair.steps_run += step;
    return best;
  };

  pair.val_loss = run_stage(cfg.batch_size, cfg.lr, cfg.max_steps, 0);
  if (cfg.finetune_steps > 0)
    pair.val_loss = run_stage(cfg.finetune_batch, cfg.finetune_lr, cfg.finetune_steps, 1);
  pair.alpha_final = alpha;
  return pair;
}

}  // namespace

Tensor IcPair::codebook(int user) {
  const size_t m = messages();
  Tensor onehot(m, m);
  for (size_t i = 0; i < m; ++i) onehot.at(i, i) = 1.0;
  Network& tx = user == 1 ? tx1 : tx2;
  return tx.forward(onehot, Mode::kEval);
}

std::vector<int> IcPair::decode(int user, const Tensor& y) {
  Network& rx = user == 1 ? rx1 : rx2;
  return argmax_rows(rx.forward(y, Mode::kEval));
}

IcPair train_ic_pair(const IcAeConfig& cfg) {
  validate(cfg);
  for (uint64_t attempt = 0; attempt < 4; ++attempt) {
    const uint64_t net_seed =
        attempt == 0 ? cfg.seed : Rng::stream(cfg.seed, 0x1C, 4, attempt).next_u64();
    IcPair pair = train_ic_pair_once(cfg, net_seed);
    pair.restarts = attempt;
    if (!degenerate_code(pair.codebook(1)) && !degenerate_code(pair.codebook(2))) return pair;
  }
  throw TrainingError("interference pair collapsed on every restart (seed " +
                      std::to_string(cfg.seed) + ")");
}

TrialFn ic_pair_system(IcPair& pair) {
  const Tensor c1 = pair.codebook(1);
  const Tensor c2 = pair.codebook(2);
  const size_t m = c1.rows;
  const size_t dim = c1.cols;
  const double rate = double(pair.cfg.k) / double(pair.cfg.n);
  return [&pair, c1, c2, m, dim, rate](double snr_db, uint64_t n_trials, Rng& rng) -> uint64_t {
    const double sd = std::sqrt(ebno_to_noise_var(rate, snr_db));
    const uint64_t n_pairs = (n_trials + 1) / 2;
    const bool odd = n_trials % 2 != 0;
    Tensor y1(n_pairs, dim), y2(n_pairs, dim);
    std::vector<int> m1(n_pairs), m2(n_pairs);
    for (uint64_t i = 0; i < n_pairs; ++i) {
      m1[i] = int(rng.below(m));
      m2[i] = int(rng.below(m));
      for (size_t j = 0; j < dim; ++j) {
        const double mix = c1.at(m1[i], j) + c2.at(m2[i], j);
        y1.at(i, j) = mix + sd * rng.normal();
        y2.at(i, j) = mix + sd * rng.normal();
      }
    }
    const std::vector<int> d1 = pair.decode(1, y1);
    const std::vector<int> d2 = pair.decode(2, y2);
    uint64_t errors = 0;
    for (uint64_t i = 0; i < n_pairs; ++i) {
      if (d1[i] != m1[i]) ++errors;
      if (i + 1 == n_pairs && odd) break;  // unpaired last trial: user 1 only
      if (d2[i] != m2[i]) ++errors;
    }
    return errors;
  };
}

double ic_orthogonality(IcPair& pair) {
  if (pair.cfg.k != 1)
    throw std::invalid_argument("orthogonality measure needs two-point codebooks (k = 1)");
  const Tensor c1 = pair.codebook(1);
  const Tensor c2 = pair.codebook(2);
  double dot = 0.0, n1 = 0.0, n2 = 0.0;
  for (size_t j = 0; j < c1.cols; ++j) {
    const double d1 = c1.at(1, j) - c1.at(0, j);
    const double d2 = c2.at(1, j) - c2.at(0, j);
    dot += d1 * d2;
    n1 += d1 * d1;
    n2 += d2 * d2;
  }
  return std::abs(dot) / std::sqrt(n1 * n2);
}

}  // namespace phylab
