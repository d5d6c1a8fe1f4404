#include "phylab/ae_single.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "phylab/channel.hpp"
#include "phylab/losses.hpp"
#include "phylab/optim.hpp"

namespace phylab {

namespace {

void validate(const SingleAeConfig& cfg) {
  if (cfg.n == 0) throw std::invalid_argument("autoencoder n must be >= 1");
  if (cfg.k == 0 || cfg.k > 16) throw std::invalid_argument("autoencoder k must be in [1, 16]");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw std::invalid_argument("autoencoder lr must be positive and finite");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.max_steps == 0) throw std::invalid_argument("max_steps must be >= 1");
  if (cfg.eval_every == 0) throw std::invalid_argument("eval_every must be >= 1");
  if (cfg.finetune_steps > 0 && (!(cfg.finetune_lr > 0.0) || !std::isfinite(cfg.finetune_lr)))
    throw std::invalid_argument("finetune_lr must be positive and finite");
  if (cfg.finetune_steps > 0 && cfg.finetune_batch == 0)
    throw std::invalid_argument("finetune_batch must be >= 1");
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

}  // namespace

Tensor SingleAe::constellation() {
  const size_t m = messages();
  Tensor onehot(m, m);
  for (size_t i = 0; i < m; ++i) onehot.at(i, i) = 1.0;
  return net.forward_span(onehot, Mode::kEval, 0, noise_index);
}

std::vector<int> SingleAe::decode(const Tensor& y) {
  Tensor probs = net.forward_span(y, Mode::kEval, noise_index + 1, net.size());
  return argmax_rows(probs);
}

// A constellation is unusable if a signal point vanished or two messages
// share one point: both are signatures of the frozen dead-ReLU encoder.
bool degenerate_code(const Tensor& c) {
  const double tol2 = 1e-6 * double(c.cols);
  for (size_t i = 0; i < c.rows; ++i) {
    double e = 0.0;
    for (size_t j = 0; j < c.cols; ++j) e += c.at(i, j) * c.at(i, j);
    if (e < tol2) return true;
  }
  for (size_t i = 0; i < c.rows; ++i)
    for (size_t j = i + 1; j < c.rows; ++j) {
      double d2 = 0.0;
      for (size_t t = 0; t < c.cols; ++t) {
        const double d = c.at(i, t) - c.at(j, t);
        d2 += d * d;
      }
      if (d2 < tol2) return true;
    }
  return false;
}

namespace {

SingleAe train_single_ae_once(const SingleAeConfig& cfg, uint64_t net_seed) {
  const size_t m = size_t{1} << cfg.k;
  const size_t n = cfg.n;
  const double rate = double(cfg.k) / double(n);
  const double train_var = ebno_to_noise_var(rate, cfg.train_ebno_db);

  SingleAe ae;
  ae.cfg = cfg;
  ae.net.rng() = Rng::stream(net_seed, 0xAE, 0, 0);
  ae.net.emplace<Dense>(m, m);
  ae.net.emplace<Activation>(Act::kRelu);
  ae.net.emplace<Dense>(m, n);
  if (cfg.energy_constraint)
    ae.net.emplace<EnergyNorm>();
  else
    ae.net.emplace<AvgPowerNorm>();
  ae.noise_index = ae.net.size();
  ae.net.emplace<AwgnNoise>(train_var);
  ae.net.emplace<Dense>(n, m);
  ae.net.emplace<Activation>(Act::kRelu);
  ae.net.emplace<Dense>(m, m);
  ae.net.emplace<Activation>(Act::kSoftmax);
  ae.net.init_params(Init::kGlorotUniform);

  // A stage = (batch rows, learning rate, step budget) with plateau early
  // stopping on fixed-noise validation; the best-seen weights are restored
  // at stage end.
  auto run_stage = [&](size_t min_rows, double lr, size_t max_steps,
                       uint64_t stage_id) -> double {
    const size_t reps = std::max<size_t>(1, (min_rows + m - 1) / m);
    const size_t b = reps * m;
    Tensor batch(b, m);
    std::vector<int> labels(b);
    for (size_t i = 0; i < b; ++i) {
      batch.at(i, i % m) = 1.0;
      labels[i] = int(i % m);
    }

    Adam opt(lr);
    const Rng val_rng = Rng::stream(net_seed, 0xAE, 1, stage_id);
    double best = std::numeric_limits<double>::infinity();
    size_t best_step = 0;
    std::vector<std::vector<double>> best_params;

    auto validate_now = [&](size_t step) {
      // Fixed noise draws make validation losses comparable across steps.
      Rng saved = ae.net.rng();
      ae.net.rng() = val_rng;
      Tensor probs = ae.net.forward(batch, Mode::kEval);
      ae.net.rng() = saved;
      double loss = softmax_cross_entropy(probs, labels).loss;
      if (!std::isfinite(loss))
        throw TrainingError("autoencoder validation loss diverged (seed " +
                            std::to_string(cfg.seed) + ")");
      if (loss < best - 1e-5) {
        best = loss;
        best_step = step;
        best_params.clear();
        for (const auto& pb : ae.net.param_blocks()) best_params.push_back(*pb.w);
      }
    };

    size_t step = 0;
    for (; step < max_steps; ++step) {
      if (step % cfg.eval_every == 0) {
        validate_now(step);
        if (step - best_step >= cfg.patience) break;
      }
      ae.net.zero_grads();
      Tensor probs = ae.net.forward(batch, Mode::kTrain);
      LossGrad lg = softmax_cross_entropy(probs, labels);
      if (!std::isfinite(lg.loss))
        throw TrainingError("autoencoder loss diverged (seed " + std::to_string(cfg.seed) + ")");
      ae.net.backward_from_logits(lg.grad);
      opt.step(ae.net.param_blocks());
    }
    validate_now(step);

    auto blocks = ae.net.param_blocks();
    for (size_t i = 0; i < blocks.size(); ++i) *blocks[i].w = best_params[i];
    ae.steps_run += step;
    return best;
  };

  ae.val_loss = run_stage(cfg.batch_size, cfg.lr, cfg.max_steps, 0);
  if (cfg.finetune_steps > 0)
    ae.val_loss = run_stage(cfg.finetune_batch, cfg.finetune_lr, cfg.finetune_steps, 1);
  return ae;
}

}  // namespace

SingleAe train_single_ae(const SingleAeConfig& cfg) {
  validate(cfg);
  for (uint64_t attempt = 0; attempt < 4; ++attempt) {
    const uint64_t net_seed =
        attempt == 0 ? cfg.seed : Rng::stream(cfg.seed, 0xAE, 2, attempt).next_u64();
    SingleAe ae = train_single_ae_once(cfg, net_seed);
    ae.restarts = attempt;
    if (!degenerate_code(ae.constellation())) return ae;
  }
  throw TrainingError("autoencoder collapsed on every restart (seed " +
                      std::to_string(cfg.seed) + ")");
}

TrialFn single_ae_system(SingleAe& ae) {
  const Tensor code = ae.constellation();
  const size_t n = ae.cfg.n;
  const size_t m = code.rows;
  const double rate = double(ae.cfg.k) / double(ae.cfg.n);
  return [&ae, code, n, m, rate](double snr_db, uint64_t n_trials, Rng& rng) -> uint64_t {
    const double sd = std::sqrt(ebno_to_noise_var(rate, snr_db));
    Tensor y(n_trials, n);
    std::vector<int> sent(n_trials);
    for (uint64_t i = 0; i < n_trials; ++i) {
      const size_t msg = size_t(rng.below(m));
      sent[i] = int(msg);
      for (size_t j = 0; j < n; ++j) y.at(i, j) = code.at(msg, j) + sd * rng.normal();
    }
    const std::vector<int> dec = ae.decode(y);
    uint64_t errors = 0;
    for (uint64_t i = 0; i < n_trials; ++i)
      if (dec[i] != sent[i]) ++errors;
    return errors;
  };
}

}  // namespace phylab
