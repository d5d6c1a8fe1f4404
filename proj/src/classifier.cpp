#include "phylab/classifier.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "phylab/losses.hpp"
#include "phylab/optim.hpp"

namespace phylab {

namespace {

Tensor log_compress(const Tensor& x) {
  Tensor z(x.rows, x.cols);
  for (size_t i = 0; i < x.v.size(); ++i) z.v[i] = std::log1p(std::max(x.v[i], 0.0));
  return z;
}

Tensor standardize(const Tensor& x, const std::vector<double>& mean,
                   const std::vector<double>& sd) {
  Tensor z(x.rows, x.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j) z.at(i, j) = (x.at(i, j) - mean[j]) / sd[j];
  return z;
}

void validate_labels(const Tensor& x, const std::vector<int>& y) {
  if (y.size() != x.rows) throw std::invalid_argument("label count != sample count");
  for (int v : y)
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
}

// One full training on pre-transformed features.
BinaryClassifier train_once(const Tensor& x_train, const std::vector<int>& y_train,
                            const Tensor& x_test, const std::vector<int>& y_test,
                            const ClassifierConfig& cfg, uint64_t seed) {
  const size_t n_train = x_train.rows, d = x_train.cols;

  BinaryClassifier clf;
  clf.log_features = cfg.log_features;
  clf.mean.assign(d, 0.0);
  clf.sd.assign(d, 1.0);
  for (size_t j = 0; j < d; ++j) {
    double m = 0.0;
    for (size_t i = 0; i < n_train; ++i) m += x_train.at(i, j);
    m /= n_train;
    double var = 0.0;
    for (size_t i = 0; i < n_train; ++i)
      var += (x_train.at(i, j) - m) * (x_train.at(i, j) - m);
    var /= n_train;
    clf.mean[j] = m;
    clf.sd[j] = var > 1e-24 ? std::sqrt(var) : 1.0;  // constant feature -> zero score
  }

  clf.net = Network();
  clf.net.rng() = Rng::stream(seed, 0xC1F, 0, 0);
  size_t prev = d;
  for (size_t h : cfg.hidden) {
    clf.net.emplace<Dense>(prev, h);
    clf.net.emplace<Activation>(cfg.hidden_act);
    prev = h;
  }
  clf.net.emplace<Dense>(prev, 2);
  clf.net.emplace<Activation>(Act::kSoftmax);
  clf.net.init_params(cfg.init);

  Tensor z = standardize(x_train, clf.mean, clf.sd);
  SgdMomentum opt(cfg.lr, cfg.momentum);
  Rng shuffle_rng(Rng::stream(seed, 0xC1F, 1, 0));
  std::vector<size_t> order(n_train);
  std::iota(order.begin(), order.end(), size_t{0});

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t i = n_train; i > 1; --i) {
      size_t j = shuffle_rng.below(i);
      std::swap(order[i - 1], order[j]);
    }
    for (size_t start = 0; start < n_train; start += cfg.batch_size) {
      const size_t b = std::min(cfg.batch_size, n_train - start);
      Tensor xb(b, d);
      std::vector<int> yb(b);
      for (size_t r = 0; r < b; ++r) {
        const size_t src = order[start + r];
        for (size_t j = 0; j < d; ++j) xb.at(r, j) = z.at(src, j);
        yb[r] = y_train[src];
      }
      clf.net.zero_grads();
      Tensor probs = clf.net.forward(xb, Mode::kTrain);
      LossGrad lg = softmax_cross_entropy(probs, yb);
      if (!std::isfinite(lg.loss))
        throw TrainingError("classifier loss diverged (seed " + std::to_string(seed) + ")");
      clf.net.backward_from_logits(lg.grad);
      opt.step(clf.net.param_blocks());
    }
  }

  uint64_t pos = 0, neg = 0, md = 0, fa = 0;
  double ce = 0.0;
  if (x_test.rows > 0) {
    Tensor zt = standardize(x_test, clf.mean, clf.sd);
    Tensor probs = clf.net.forward(zt, Mode::kEval);
    for (size_t i = 0; i < zt.rows; ++i) {
      const int pred = probs.at(i, 1) > probs.at(i, 0) ? 1 : 0;
      ce -= std::log(std::max(probs.at(i, static_cast<size_t>(y_test[i])), 1e-300));
      if (y_test[i] == 1) {
        ++pos;
        if (pred == 0) ++md;
      } else {
        ++neg;
        if (pred == 1) ++fa;
      }
    }
    ce /= double(zt.rows);
  }
  clf.e_md = pos ? double(md) / pos : 0.0;
  clf.e_fa = neg ? double(fa) / neg : 0.0;
  clf.e_max = std::max(clf.e_md, clf.e_fa);
  clf.eval_ce = ce;
  return clf;
}

}  // namespace

std::vector<double> BinaryClassifier::prob_positive(const Tensor& x) {
  const Tensor& in = log_features ? log_compress(x) : x;
  Tensor probs = net.forward(standardize(in, mean, sd), Mode::kEval);
  std::vector<double> p(x.rows);
  for (size_t i = 0; i < x.rows; ++i) p[i] = probs.at(i, 1);
  return p;
}

double BinaryClassifier::prob_positive_one(const std::vector<double>& x) {
  Tensor row(1, x.size());
  row.v = x;
  return prob_positive(row)[0];
}

BinaryClassifier train_binary_classifier_split(const Tensor& x_train,
                                               const std::vector<int>& y_train,
                                               const Tensor& x_test,
                                               const std::vector<int>& y_test,
                                               const ClassifierConfig& cfg, uint64_t seed) {
  if (x_train.rows == 0) throw std::invalid_argument("classifier needs training samples");
  if (x_train.cols == 0) throw std::invalid_argument("classifier needs at least 1 feature");
  if (x_test.rows > 0 && x_test.cols != x_train.cols)
    throw std::invalid_argument("train/test feature widths differ");
  validate_labels(x_train, y_train);
  validate_labels(x_test, y_test);
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
    throw std::invalid_argument("classifier lr must be positive and finite");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.epochs == 0) throw std::invalid_argument("epochs must be >= 1");
  if (cfg.restarts == 0) throw std::invalid_argument("restarts must be >= 1");
  if (cfg.restarts > 1 && x_test.rows == 0)
    throw std::invalid_argument("restart selection needs a nonempty evaluation set");

  Tensor xtr_log, xte_log;
  if (cfg.log_features) {
    xtr_log = log_compress(x_train);
    xte_log = log_compress(x_test);
  }
  const Tensor& xtr = cfg.log_features ? xtr_log : x_train;
  const Tensor& xte = cfg.log_features ? xte_log : x_test;

  BinaryClassifier best;
  for (size_t r = 0; r < cfg.restarts; ++r) {
    const uint64_t s = r == 0 ? seed : Rng::stream(seed, 0xC1F, 2, r).next_u64();
    BinaryClassifier clf = train_once(xtr, y_train, xte, y_test, cfg, s);
    if (r == 0 || clf.eval_ce < best.eval_ce) best = std::move(clf);
  }
  return best;
}

BinaryClassifier train_binary_classifier(const Tensor& x, const std::vector<int>& y,
                                         const ClassifierConfig& cfg, uint64_t seed) {
  if (x.rows < 2) throw std::invalid_argument("classifier needs at least 2 samples");
  validate_labels(x, y);
  const size_t n = x.rows, d = x.cols, n_train = n / 2;
  Tensor x_tr(n_train, d), x_te(n - n_train, d);
  std::vector<int> y_tr(y.begin(), y.begin() + n_train);
  std::vector<int> y_te(y.begin() + n_train, y.end());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j) {
      if (i < n_train)
        x_tr.at(i, j) = x.at(i, j);
      else
        x_te.at(i - n_train, j) = x.at(i, j);
    }
  return train_binary_classifier_split(x_tr, y_tr, x_te, y_te, cfg, seed);
}

}  // namespace phylab
