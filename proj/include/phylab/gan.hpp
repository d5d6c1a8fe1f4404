#ifndef PHYLAB_GAN_HPP
#define PHYLAB_GAN_HPP

#include <cstdint>
#include <vector>

#include "phylab/classifier.hpp"
#include "phylab/network.hpp"
#include "phylab/rng.hpp"
#include "phylab/tensor.hpp"

namespace phylab {

// Conditional generator/discriminator pair for tabular feature rows. Both
// nets take a one-hot class label alongside their main input and use three
// hidden layers of `hidden` leaky-ReLU units with batch norm.
struct CGanConfig {
  size_t feature_dim = 10;
  size_t noise_dim = 16;
  size_t n_classes = 2;
  size_t hidden = 128;
  double leak = 0.2;
  double lr = 2e-4;       // adam, both nets
  size_t batch_size = 16; // rows per update; capped at the real-set size
  size_t iters = 3000;    // alternating discriminator/generator rounds
  // Model ln(1 + max(x, 0)) instead of x and invert when sampling. Makes
  // heavy-tailed nonnegative readings (e.g. received powers) tractable.
  bool log_features = false;
  uint64_t seed = 1;
};

class CGan {
 public:
  CGanConfig cfg;
  Network gen, disc;
  std::vector<double> mean, sd;  // feature scaling fitted on the real rows
  std::vector<double> gen_loss, disc_loss;  // one entry per round
  bool collapse_warning = false;  // generator output variance died away

  // Synthetic feature rows in the original scale, one per requested label.
  Tensor sample(const std::vector<int>& labels, Rng& rng);
};

// Alternating adversarial training on (features, class label) rows. The
// feature rows are standardized internally; samples come back de-scaled.
// Throws std::invalid_argument on malformed input and TrainingError if a
// loss leaves the reals. A collapsed generator only sets collapse_warning.
CGan train_cgan(const Tensor& x, const std::vector<int>& labels, const CGanConfig& cfg);

// KL divergence between two discrete distributions given as nonnegative
// weights; both get `smoothing` added per cell before normalization.
double kl_from_counts(const std::vector<double>& p, const std::vector<double>& q,
                      double smoothing = 1e-6);

// Average over feature columns of the KL between per-column histograms of
// the two row sets. The `bins` equal-width bins span the reference column's
// range; candidate values outside it count toward the end bins. First
// argument is the candidate distribution, second the reference.
double kl_divergence(const Tensor& p_rows, const Tensor& q_rows, size_t bins = 20,
                     double smoothing = 1e-6);

// Small-sample augmentation study: train a classifier on the first n_real
// training rows alone, then on those rows plus n_synth generator samples,
// scoring both on the held-out test half. Rows [0, n/2) of (x, labels) are
// the training pool and rows [n/2, n) the test set. KL compares the
// synthetic rows per class against all real rows of that class.
struct AugmentationReport {
  double e_md_real = 0.0, e_fa_real = 0.0;  // n_real rows only
  double e_md_aug = 0.0, e_fa_aug = 0.0;    // with synthetic rows added
  double kl_idle = 0.0, kl_busy = 0.0;      // per-class synthetic vs real
  bool collapse_warning = false;
};

AugmentationReport augment_and_score(const Tensor& x, const std::vector<int>& labels,
                                     size_t n_real, size_t n_synth,
                                     const CGanConfig& gan_cfg,
                                     const ClassifierConfig& clf_cfg, uint64_t seed);

}  // namespace phylab

#endif  // PHYLAB_GAN_HPP
