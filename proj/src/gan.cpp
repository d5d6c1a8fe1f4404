#include "phylab/gan.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "phylab/losses.hpp"
#include "phylab/optim.hpp"

namespace phylab {

namespace {

void validate_gan_input(const Tensor& x, const std::vector<int>& labels,
                        const CGanConfig& cfg) {
  if (x.rows == 0) throw std::invalid_argument("gan needs at least 1 real row");
  if (x.cols == 0) throw std::invalid_argument("gan needs at least 1 feature");
  if (cfg.feature_dim != x.cols)
    throw std::invalid_argument("feature_dim must match the data width");
  if (labels.size() != x.rows)
    throw std::invalid_argument("label count != sample count");
  if (cfg.n_classes == 0) throw std::invalid_argument("n_classes must be >= 1");
  for (int c : labels)
    if (c < 0 || static_cast<size_t>(c) >= cfg.n_classes)
      throw std::invalid_argument("labels must lie in [0, n_classes)");
  if (cfg.noise_dim == 0) throw std::invalid_argument("noise_dim must be >= 1");
  if (cfg.hidden == 0) throw std::invalid_argument("hidden must be >= 1");
  if (cfg.iters == 0) throw std::invalid_argument("iters must be >= 1");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw std::invalid_argument("lr must be positive and finite");
  if (!(cfg.leak >= 0.0 && cfg.leak < 1.0))
    throw std::invalid_argument("leak must be within [0, 1)");
}

void build_stack(Network& net, size_t in_dim, size_t out_dim, const CGanConfig& cfg,
                 bool batch_norm) {
  size_t prev = in_dim;
  for (int i = 0; i < 3; ++i) {
    net.emplace<Dense>(prev, cfg.hidden);
    net.emplace<Activation>(Act::kLeakyRelu, cfg.leak);
    if (batch_norm) net.emplace<BatchNorm>(cfg.hidden);
    prev = cfg.hidden;
  }
  net.emplace<Dense>(prev, out_dim);
}

// rows of [noise | one-hot label]
Tensor noise_batch(const std::vector<int>& labels, const CGanConfig& cfg, Rng& rng) {
  Tensor z(labels.size(), cfg.noise_dim + cfg.n_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    for (size_t j = 0; j < cfg.noise_dim; ++j) z.at(i, j) = rng.normal();
    z.at(i, cfg.noise_dim + static_cast<size_t>(labels[i])) = 1.0;
  }
  return z;
}

Tensor log_compress(const Tensor& x) {
  Tensor y(x.rows, x.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j)
      y.at(i, j) = std::log1p(std::max(x.at(i, j), 0.0));
  return y;
}

Tensor with_onehot(const Tensor& feats, const std::vector<int>& labels, size_t n_classes) {
  Tensor x(feats.rows, feats.cols + n_classes);
  for (size_t i = 0; i < feats.rows; ++i) {
    for (size_t j = 0; j < feats.cols; ++j) x.at(i, j) = feats.at(i, j);
    x.at(i, feats.cols + static_cast<size_t>(labels[i])) = 1.0;
  }
  return x;
}

}  // namespace

Tensor CGan::sample(const std::vector<int>& labels, Rng& rng) {
  if (gen.size() == 0) throw std::invalid_argument("generator is not trained");
  for (int c : labels)
    if (c < 0 || static_cast<size_t>(c) >= cfg.n_classes)
      throw std::invalid_argument("labels must lie in [0, n_classes)");
  const Tensor z = noise_batch(labels, cfg, rng);
  Tensor out = gen.forward(z, Mode::kEval);
  for (size_t i = 0; i < out.rows; ++i)
    for (size_t j = 0; j < out.cols; ++j) {
      double v = out.at(i, j) * sd[j] + mean[j];
      // Undo the log map; modelled quantities are nonnegative by construction.
      if (cfg.log_features) v = std::max(std::expm1(v), 0.0);
      out.at(i, j) = v;
    }
  return out;
}

CGan train_cgan(const Tensor& x_in, const std::vector<int>& labels, const CGanConfig& cfg) {
  validate_gan_input(x_in, labels, cfg);
  Tensor x_log;
  if (cfg.log_features) x_log = log_compress(x_in);
  const Tensor& x = cfg.log_features ? x_log : x_in;
  const size_t n = x.rows, d = x.cols;

  CGan gan;
  gan.cfg = cfg;
  gan.mean.assign(d, 0.0);
  gan.sd.assign(d, 1.0);
  for (size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (size_t i = 0; i < n; ++i) m += x.at(i, j);
    m /= n;
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) var += (x.at(i, j) - m) * (x.at(i, j) - m);
    var /= n;
    gan.mean[j] = m;
    gan.sd[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  Tensor z(n, d);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) z.at(i, j) = (x.at(i, j) - gan.mean[j]) / gan.sd[j];

  gan.gen = Network();
  gan.gen.rng() = Rng::stream(cfg.seed, 0x6A4, 0, 0);
  build_stack(gan.gen, cfg.noise_dim + cfg.n_classes, d, cfg, false);
  gan.gen.init_params(Init::kGlorotUniform);

  // No batch norm in the discriminator: real and fake rows arrive in separate
  // passes, and per-pass statistics would let it tell them apart wholesale
  // instead of row by row, starving the generator of a usable signal.
  gan.disc = Network();
  gan.disc.rng() = Rng::stream(cfg.seed, 0x6A4, 1, 0);
  build_stack(gan.disc, d + cfg.n_classes, 1, cfg, false);
  gan.disc.emplace<Activation>(Act::kSigmoid);
  gan.disc.init_params(Init::kGlorotUniform);

  Rng data_rng = Rng::stream(cfg.seed, 0x6A4, 2, 0);
  Adam opt_d(cfg.lr), opt_g(cfg.lr);
  const size_t b = std::min(cfg.batch_size, n);

  // Full-batch when the data fits; sampling with replacement otherwise.
  auto draw_batch = [&](Tensor& xb, std::vector<int>& yb) {
    xb = Tensor(b, d);
    yb.resize(b);
    for (size_t r = 0; r < b; ++r) {
      const size_t src = b == n ? r : data_rng.below(n);
      for (size_t j = 0; j < d; ++j) xb.at(r, j) = z.at(src, j);
      yb[r] = labels[src];
    }
  };

  gan.gen_loss.reserve(cfg.iters);
  gan.disc_loss.reserve(cfg.iters);
  for (size_t it = 0; it < cfg.iters; ++it) {
    // Discriminator round: push real rows toward 1, generated rows toward 0.
    Tensor xr;
    std::vector<int> yr;
    draw_batch(xr, yr);
    gan.disc.zero_grads();
    Tensor p_real = gan.disc.forward(with_onehot(xr, yr, cfg.n_classes), Mode::kTrain);
    LossGrad lg_real = bce_disc_real(p_real);
    gan.disc.backward_from_logits(lg_real.grad);

    Tensor fake = gan.gen.forward(noise_batch(yr, cfg, data_rng), Mode::kTrain);
    Tensor p_fake = gan.disc.forward(with_onehot(fake, yr, cfg.n_classes), Mode::kTrain);
    LossGrad lg_fake = bce_disc_fake(p_fake);
    gan.disc.backward_from_logits(lg_fake.grad);
    opt_d.step(gan.disc.param_blocks());
    const double d_loss = lg_real.loss + lg_fake.loss;

    // Generator round: fool the refreshed discriminator on a fresh batch.
    Tensor xg;
    std::vector<int> yg;
    draw_batch(xg, yg);
    gan.gen.zero_grads();
    gan.disc.zero_grads();
    Tensor fake2 = gan.gen.forward(noise_batch(yg, cfg, data_rng), Mode::kTrain);
    Tensor p2 = gan.disc.forward(with_onehot(fake2, yg, cfg.n_classes), Mode::kTrain);
    // Non-saturating objective: maximize log D(G(z)) rather than descending
    // log(1 - D); the latter's gradient dies whenever the discriminator wins.
    LossGrad lg_gen = bce_disc_real(p2);
    Tensor g_in = gan.disc.backward_from_logits(lg_gen.grad);
    Tensor g_feat(b, d);
    for (size_t i = 0; i < b; ++i)
      for (size_t j = 0; j < d; ++j) g_feat.at(i, j) = g_in.at(i, j);
    gan.gen.backward(g_feat);
    opt_g.step(gan.gen.param_blocks());

    if (!std::isfinite(d_loss) || !std::isfinite(lg_gen.loss))
      throw TrainingError("gan loss diverged at round " + std::to_string(it));
    gan.disc_loss.push_back(d_loss);
    gan.gen_loss.push_back(lg_gen.loss);
  }

  // A generator whose outputs barely move is collapsed; flag it but return.
  {
    std::vector<int> probe;
    for (size_t c = 0; c < cfg.n_classes; ++c)
      probe.insert(probe.end(), 128, static_cast<int>(c));
    const Tensor zs = noise_batch(probe, cfg, data_rng);
    const Tensor out = gan.gen.forward(zs, Mode::kEval);
    double max_var = 0.0;
    for (size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (size_t i = 0; i < out.rows; ++i) m += out.at(i, j);
      m /= out.rows;
      double var = 0.0;
      for (size_t i = 0; i < out.rows; ++i)
        var += (out.at(i, j) - m) * (out.at(i, j) - m);
      max_var = std::max(max_var, var / out.rows);
    }
    gan.collapse_warning = max_var < 1e-6;
  }
  return gan;
}

double kl_from_counts(const std::vector<double>& p, const std::vector<double>& q,
                      double smoothing) {
  if (p.empty() || p.size() != q.size())
    throw std::invalid_argument("count vectors must be nonempty and equal-sized");
  if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be >= 0");
  double pt = 0.0, qt = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0)
      throw std::invalid_argument("counts must be nonnegative");
    pt += p[i] + smoothing;
    qt += q[i] + smoothing;
  }
  if (!(pt > 0.0) || !(qt > 0.0))
    throw std::invalid_argument("distributions must have positive mass");
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double pi = (p[i] + smoothing) / pt;
    const double qi = (q[i] + smoothing) / qt;
    if (pi > 0.0) kl += pi * std::log(pi / qi);
  }
  return kl;
}

double kl_divergence(const Tensor& p_rows, const Tensor& q_rows, size_t bins,
                     double smoothing) {
  if (p_rows.rows == 0 || q_rows.rows == 0)
    throw std::invalid_argument("sample sets must be nonempty");
  if (p_rows.cols != q_rows.cols)
    throw std::invalid_argument("sample sets must have the same width");
  if (bins == 0) throw std::invalid_argument("bins must be >= 1");
  double total = 0.0;
  for (size_t j = 0; j < p_rows.cols; ++j) {
    // Bin edges span the reference column; candidate values beyond them fall
    // into the end bins. Keeps a few stray candidate samples from stretching
    // the grid until the reference mass collapses into one bin.
    double lo = q_rows.at(0, j), hi = lo;
    for (size_t i = 0; i < q_rows.rows; ++i) {
      lo = std::min(lo, q_rows.at(i, j));
      hi = std::max(hi, q_rows.at(i, j));
    }
    if (!(hi > lo)) continue;  // constant reference column: nothing to score
    const double width = hi - lo;
    std::vector<double> pc(bins, 0.0), qc(bins, 0.0);
    auto bin_of = [&](double v) {
      const auto idx = static_cast<long long>((v - lo) / width * double(bins));
      return static_cast<size_t>(std::clamp(idx, 0LL, static_cast<long long>(bins) - 1));
    };
    for (size_t i = 0; i < p_rows.rows; ++i) pc[bin_of(p_rows.at(i, j))] += 1.0;
    for (size_t i = 0; i < q_rows.rows; ++i) qc[bin_of(q_rows.at(i, j))] += 1.0;
    total += kl_from_counts(pc, qc, smoothing);
  }
  return total / double(p_rows.cols);
}

AugmentationReport augment_and_score(const Tensor& x, const std::vector<int>& labels,
                                     size_t n_real, size_t n_synth,
                                     const CGanConfig& gan_cfg,
                                     const ClassifierConfig& clf_cfg, uint64_t seed) {
  if (labels.size() != x.rows) throw std::invalid_argument("label count != sample count");
  for (int v : labels)
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
  const size_t n = x.rows, d = x.cols, half = n / 2;
  if (n_real < 2 || n_real > half)
    throw std::invalid_argument("n_real must lie in [2, half the rows]");
  if (n_synth == 0) throw std::invalid_argument("n_synth must be >= 1");
  if (gan_cfg.n_classes != 2)
    throw std::invalid_argument("augmentation protocol is two-class");

  auto slice = [&](size_t first, size_t count) {
    Tensor t(count, d);
    for (size_t i = 0; i < count; ++i)
      for (size_t j = 0; j < d; ++j) t.at(i, j) = x.at(first + i, j);
    return t;
  };
  const Tensor x_real = slice(0, n_real);
  const std::vector<int> y_real(labels.begin(), labels.begin() + n_real);
  const Tensor x_test = slice(half, n - half);
  const std::vector<int> y_test(labels.begin() + half, labels.end());

  size_t ones = 0;
  for (int v : y_real) ones += static_cast<size_t>(v);
  if (ones == 0 || ones == n_real)
    throw std::invalid_argument("the first n_real rows must contain both classes");

  AugmentationReport rep;
  {
    const uint64_t s = Rng::stream(seed, 0x6A5, 0, 0).next_u64();
    const BinaryClassifier clf =
        train_binary_classifier_split(x_real, y_real, x_test, y_test, clf_cfg, s);
    rep.e_md_real = clf.e_md;
    rep.e_fa_real = clf.e_fa;
  }

  CGanConfig gc = gan_cfg;
  gc.feature_dim = d;
  gc.seed = Rng::stream(seed, 0x6A5, 1, 0).next_u64();
  CGan gan = train_cgan(x_real, y_real, gc);
  rep.collapse_warning = gan.collapse_warning;

  const auto n1 = static_cast<size_t>(
      std::llround(double(n_synth) * double(ones) / double(n_real)));
  std::vector<int> y_synth(n_synth, 0);
  for (size_t i = n_synth - std::min(n1, n_synth); i < n_synth; ++i) y_synth[i] = 1;
  Rng sample_rng = Rng::stream(seed, 0x6A5, 2, 0);
  const Tensor x_synth = gan.sample(y_synth, sample_rng);

  {
    Tensor x_aug(n_real + n_synth, d);
    std::vector<int> y_aug(n_real + n_synth);
    for (size_t i = 0; i < n_real; ++i) {
      for (size_t j = 0; j < d; ++j) x_aug.at(i, j) = x_real.at(i, j);
      y_aug[i] = y_real[i];
    }
    for (size_t i = 0; i < n_synth; ++i) {
      for (size_t j = 0; j < d; ++j) x_aug.at(n_real + i, j) = x_synth.at(i, j);
      y_aug[n_real + i] = y_synth[i];
    }
    const uint64_t s = Rng::stream(seed, 0x6A5, 3, 0).next_u64();
    const BinaryClassifier clf =
        train_binary_classifier_split(x_aug, y_aug, x_test, y_test, clf_cfg, s);
    rep.e_md_aug = clf.e_md;
    rep.e_fa_aug = clf.e_fa;
  }

  // Synthetic-vs-real marginal match, one class at a time against every real
  // row of that class.
  for (int c = 0; c < 2; ++c) {
    size_t np = 0, nq = 0;
    for (int v : y_synth) np += v == c;
    for (int v : labels) nq += v == c;
    if (np == 0 || nq == 0) continue;
    Tensor p(np, d), q(nq, d);
    size_t ip = 0, iq = 0;
    for (size_t i = 0; i < n_synth; ++i)
      if (y_synth[i] == c) {
        for (size_t j = 0; j < d; ++j) p.at(ip, j) = x_synth.at(i, j);
        ++ip;
      }
    for (size_t i = 0; i < n; ++i)
      if (labels[i] == c) {
        for (size_t j = 0; j < d; ++j) q.at(iq, j) = x.at(i, j);
        ++iq;
      }
    const double kl = kl_divergence(p, q);
    if (c == 0)
      rep.kl_idle = kl;
    else
      rep.kl_busy = kl;
  }
  return rep;
}

}  // namespace phylab
