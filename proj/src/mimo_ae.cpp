#include "phylab/mimo_ae.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "phylab/ae_single.hpp"
#include "phylab/losses.hpp"
#include "phylab/optim.hpp"

namespace phylab {

namespace {

void validate(const MimoAeConfig& cfg) {
  if (cfg.n_t == 0 || cfg.n_r == 0) throw std::invalid_argument("antenna counts must be >= 1");
  if (cfg.k == 0 || cfg.k * cfg.n_t > 16)
    throw std::invalid_argument("k * n_t must be in [1, 16]");
  if (!(cfg.power > 0.0) || !std::isfinite(cfg.power))
    throw std::invalid_argument("power must be positive and finite");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw std::invalid_argument("lr must be positive and finite");
  if (cfg.embed_dim == 0) throw std::invalid_argument("embed_dim must be >= 1");
  if (cfg.batch_size == 0 || cfg.max_steps == 0 || cfg.eval_every == 0)
    throw std::invalid_argument("batch_size, max_steps, eval_every must be >= 1");
}

// y += H x on one interleaved (re, im, ...) row.
void add_channel_output(const CMat& h, const double* x, double* y) {
  for (size_t r = 0; r < h.rows; ++r) {
    cplx acc = 0.0;
    for (size_t c = 0; c < h.cols; ++c)
      acc += h.v[r * h.cols + c] * cplx(x[2 * c], x[2 * c + 1]);
    y[2 * r] += acc.real();
    y[2 * r + 1] += acc.imag();
  }
}

MimoAe train_mimo_ae_once(const MimoAeConfig& cfg, const ChannelRealization& ch,
                          uint64_t net_seed) {
  const size_t m = size_t{1} << (cfg.k * cfg.n_t);

  MimoAe ae;
  ae.cfg = cfg;
  ae.h = ch.h;
  ae.net.rng() = Rng::stream(net_seed, 0x313, 0, 0);
  ae.net.emplace<Embedding>(m, cfg.embed_dim, 1);
  size_t prev = cfg.embed_dim;
  for (size_t w : {size_t{32}, size_t{16}, size_t{8}}) {
    ae.net.emplace<Dense>(prev, w);
    ae.net.emplace<Activation>(Act::kRelu);
    ae.net.emplace<BatchNorm>(w);
    prev = w;
  }
  ae.net.emplace<Dense>(prev, 2 * cfg.n_t);
  ae.net.emplace<AvgPowerNorm>(cfg.power);
  ae.channel_index = ae.net.size();
  ae.net.emplace<ComplexMultiply>(ch.h);
  ae.noise_index = ae.net.size();
  ae.net.emplace<AwgnNoise>(ch.noise_var);
  prev = 2 * cfg.n_r;
  for (size_t w : {size_t{8}, size_t{16}, size_t{32}}) {
    ae.net.emplace<Dense>(prev, w);
    ae.net.emplace<Activation>(Act::kRelu);
    ae.net.emplace<BatchNorm>(w);
    prev = w;
  }
  ae.net.emplace<Dense>(prev, m);
  ae.net.emplace<Activation>(Act::kSoftmax);
  ae.net.init_params(Init::kGlorotUniform);

  const size_t reps = std::max<size_t>(1, (cfg.batch_size + m - 1) / m);
  const size_t b = reps * m;
  Tensor ids(b, 1);
  std::vector<int> labels(b);
  for (size_t i = 0; i < b; ++i) {
    ids.at(i, 0) = double(i % m);
    labels[i] = int(i % m);
  }

  Adam opt(cfg.lr);
  const Rng val_rng = Rng::stream(net_seed, 0x313, 1, 0);
  double best = std::numeric_limits<double>::infinity();
  size_t best_step = 0;
  std::vector<std::vector<double>> best_params, best_state;

  auto validate_now = [&](size_t step) {
    Rng saved = ae.net.rng();
    ae.net.rng() = val_rng;
    Tensor probs = ae.net.forward(ids, Mode::kEval);
    ae.net.rng() = saved;
    const double loss = softmax_cross_entropy(probs, labels).loss;
    if (!std::isfinite(loss))
      throw TrainingError("closed-loop autoencoder diverged (seed " +
                          std::to_string(cfg.seed) + ")");
    if (loss < best - 1e-5) {
      best = loss;
      best_step = step;
      best_params.clear();
      best_state.clear();
      for (const auto& pb : ae.net.param_blocks()) best_params.push_back(*pb.w);
      for (const auto& sb : ae.net.state_blocks()) best_state.push_back(*sb.v);
    }
  };

  size_t step = 0;
  for (; step < cfg.max_steps; ++step) {
    if (step % cfg.eval_every == 0) {
      validate_now(step);
      if (step - best_step >= cfg.patience) break;
    }
    ae.net.zero_grads();
    Tensor probs = ae.net.forward(ids, Mode::kTrain);
    LossGrad lg = softmax_cross_entropy(probs, labels);
    if (!std::isfinite(lg.loss))
      throw TrainingError("closed-loop autoencoder diverged (seed " +
                          std::to_string(cfg.seed) + ")");
    ae.net.backward_from_logits(lg.grad);
    opt.step(ae.net.param_blocks());
  }
  validate_now(step);

  auto pblocks = ae.net.param_blocks();
  for (size_t i = 0; i < pblocks.size(); ++i) *pblocks[i].w = best_params[i];
  auto sblocks = ae.net.state_blocks();
  for (size_t i = 0; i < sblocks.size(); ++i) *sblocks[i].v = best_state[i];
  ae.val_loss = best;
  ae.steps_run = step;
  return ae;
}

}  // namespace

Tensor MimoAe::codewords() {
  const size_t m = classes();
  Tensor ids(m, 1);
  for (size_t i = 0; i < m; ++i) ids.at(i, 0) = double(i);
  return net.forward_span(ids, Mode::kEval, 0, channel_index);
}

std::vector<int> MimoAe::decode(const Tensor& y) {
  Tensor probs = net.forward_span(y, Mode::kEval, noise_index + 1, net.size());
  std::vector<int> out(probs.rows);
  for (size_t i = 0; i < probs.rows; ++i) {
    size_t bestj = 0;
    for (size_t j = 1; j < probs.cols; ++j)
      if (probs.at(i, j) > probs.at(i, bestj)) bestj = j;
    out[i] = int(bestj);
  }
  return out;
}

MimoAe train_mimo_ae(const MimoAeConfig& cfg, const ChannelRealization& h) {
  validate(cfg);
  if (h.h.rows != cfg.n_r || h.h.cols != cfg.n_t)
    throw std::invalid_argument("channel shape does not match antenna counts");
  for (uint64_t attempt = 0; attempt < 4; ++attempt) {
    const uint64_t net_seed =
        attempt == 0 ? cfg.seed : Rng::stream(cfg.seed, 0x313, 2, attempt).next_u64();
    MimoAe ae = train_mimo_ae_once(cfg, h, net_seed);
    ae.restarts = attempt;
    if (!degenerate_code(ae.codewords())) return ae;
  }
  throw TrainingError("closed-loop autoencoder collapsed on every restart (seed " +
                      std::to_string(cfg.seed) + ")");
}

uint64_t mimo_ae_block_errors(MimoAe& ae, const CMat& h_true, uint64_t n_blocks, Rng& rng) {
  if (h_true.rows != ae.cfg.n_r || h_true.cols != ae.cfg.n_t)
    throw std::invalid_argument("channel shape does not match antenna counts");
  const Tensor code = ae.codewords();
  const size_t m = code.rows;
  const size_t dim_out = 2 * ae.cfg.n_r;
  const double sd = std::sqrt(0.5);  // unit complex noise per receive antenna
  uint64_t errors = 0;
  const uint64_t chunk = 4096;
  for (uint64_t done = 0; done < n_blocks; done += chunk) {
    const uint64_t nb = std::min(chunk, n_blocks - done);
    Tensor y(nb, dim_out);
    std::vector<int> sent(nb);
    for (uint64_t i = 0; i < nb; ++i) {
      const size_t msg = size_t(rng.below(m));
      sent[i] = int(msg);
      add_channel_output(h_true, code.row(msg), y.row(i));
      for (size_t j = 0; j < dim_out; ++j) y.at(i, j) += sd * rng.normal();
    }
    const std::vector<int> dec = ae.decode(y);
    for (uint64_t i = 0; i < nb; ++i)
      if (dec[i] != sent[i]) ++errors;
  }
  return errors;
}

MimoCodebook build_mimo_codebook(const MimoAeConfig& cfg, const std::vector<CMat>& hs) {
  if (hs.empty()) throw std::invalid_argument("codebook needs at least one channel");
  MimoCodebook book;
  for (size_t i = 0; i < hs.size(); ++i) {
    MimoAeConfig entry_cfg = cfg;
    entry_cfg.seed = Rng::stream(cfg.seed, 0x313, 3, i).next_u64();
    book.entries.push_back(train_mimo_ae(entry_cfg, ChannelRealization{hs[i], 0.5}));
  }
  return book;
}

double eval_mimo_with_estimation_error(MimoCodebook& book, const CMat& h_true,
                                       double est_var, uint64_t n_blocks, uint64_t seed) {
  if (book.entries.empty()) throw std::invalid_argument("empty codebook");
  if (est_var < 0.0) throw std::invalid_argument("est_var must be >= 0");
  const size_t n_ent = book.entries.size();
  std::vector<Tensor> codes;
  codes.reserve(n_ent);
  for (auto& e : book.entries) codes.push_back(e.codewords());
  const size_t m = codes[0].rows;
  const size_t dim_out = 2 * book.entries[0].cfg.n_r;
  const double err_sd = std::sqrt(est_var / 2.0);  // per real part
  const double noise_sd = std::sqrt(0.5);

  // Draw everything in block order so results do not depend on how blocks
  // are grouped for batched decoding.
  Rng rng = Rng::stream(seed, 0x10B, 0, 0);
  std::vector<size_t> pick(n_blocks);
  std::vector<int> sent(n_blocks);
  Tensor y(n_blocks, dim_out);
  for (uint64_t bi = 0; bi < n_blocks; ++bi) {
    CMat h_est = h_true;
    for (auto& e : h_est.v) e -= cplx(err_sd * rng.normal(), err_sd * rng.normal());
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n_ent; ++i) {
      double d = 0.0;
      for (size_t t = 0; t < h_est.v.size(); ++t) {
        const cplx diff = h_est.v[t] - book.entries[i].h.v[t];
        d += std::norm(diff);
      }
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    pick[bi] = best;
    const size_t msg = size_t(rng.below(m));
    sent[bi] = int(msg);
    add_channel_output(h_true, codes[best].row(msg), y.row(bi));
    for (size_t j = 0; j < dim_out; ++j) y.at(bi, j) += noise_sd * rng.normal();
  }

  uint64_t errors = 0;
  for (size_t i = 0; i < n_ent; ++i) {
    std::vector<uint64_t> rows;
    for (uint64_t bi = 0; bi < n_blocks; ++bi)
      if (pick[bi] == i) rows.push_back(bi);
    if (rows.empty()) continue;
    Tensor yi(rows.size(), dim_out);
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t j = 0; j < dim_out; ++j) yi.at(r, j) = y.at(rows[r], j);
    const std::vector<int> dec = book.entries[i].decode(yi);
    for (size_t r = 0; r < rows.size(); ++r)
      if (dec[r] != sent[rows[r]]) ++errors;
  }
  return double(errors) / double(n_blocks);
}

}  // namespace phylab
