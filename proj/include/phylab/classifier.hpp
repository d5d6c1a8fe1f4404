#ifndef PHYLAB_CLASSIFIER_HPP
#define PHYLAB_CLASSIFIER_HPP

#include <cstdint>
#include <vector>

#include "phylab/network.hpp"

namespace phylab {

struct ClassifierConfig {
  std::vector<size_t> hidden{50, 50};  // hidden layer widths
  Act hidden_act = Act::kTanh;
  double lr = 0.1;
  double momentum = 0.9;
  size_t batch_size = 25;
  size_t epochs = 10;
  Init init = Init::kUniformPm1;
  // Map each feature through ln(1 + max(x, 0)) before standardization;
  // tames heavy-tailed power readings.
  bool log_features = false;
  // Independent trainings to run; the one with the lowest evaluation-set
  // cross-entropy wins. Needs a nonempty evaluation set when > 1.
  size_t restarts = 1;
};

// Two-class feed-forward classifier with feature standardization. The
// standardization (mean, sd) is fitted on the training half only and baked
// into every later prediction.
class BinaryClassifier {
 public:
  Network net;
  std::vector<double> mean, sd;
  bool log_features = false;
  // Held-out error rates: e_md misses class 1, e_fa raises a false class-1.
  double e_md = 0.0;
  double e_fa = 0.0;
  double e_max = 0.0;
  double eval_ce = 0.0;  // mean cross-entropy on the evaluation set

  // P(class 1) for a batch of raw (unstandardized) feature rows.
  std::vector<double> prob_positive(const Tensor& x);
  double prob_positive_one(const std::vector<double>& x);
};

// Deterministic protocol: rows [0, n/2) train, rows [n/2, n) evaluate.
// Labels are 0/1. Throws std::invalid_argument on malformed input and
// TrainingError if the loss leaves the reals.
BinaryClassifier train_binary_classifier(const Tensor& x, const std::vector<int>& y,
                                         const ClassifierConfig& cfg, uint64_t seed);

// Same protocol with an explicit split: standardization is fitted on the
// whole training set and error rates come from the given evaluation set,
// which may be empty.
BinaryClassifier train_binary_classifier_split(const Tensor& x_train,
                                               const std::vector<int>& y_train,
                                               const Tensor& x_test,
                                               const std::vector<int>& y_test,
                                               const ClassifierConfig& cfg, uint64_t seed);

}  // namespace phylab

#endif  // PHYLAB_CLASSIFIER_HPP
