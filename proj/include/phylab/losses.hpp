#ifndef PHYLAB_LOSSES_HPP
#define PHYLAB_LOSSES_HPP

#include <vector>

#include "phylab/tensor.hpp"

namespace phylab {

struct LossGrad {
  double loss;
  Tensor grad;
};

// Mean cross-entropy over the batch given softmax PROBABILITIES; the
// returned gradient is taken at the pre-softmax logits, (p - onehot) / B,
// so pair it with Network::backward_from_logits.
LossGrad softmax_cross_entropy(const Tensor& probs, const std::vector<int>& labels);

// Per-sample -log p[label].
std::vector<double> per_sample_ce(const Tensor& probs, const std::vector<int>& labels);

// Binary cross-entropy pieces for adversarial training; p holds sigmoid
// outputs [B, 1] and gradients are at the pre-sigmoid logit.
LossGrad bce_disc_real(const Tensor& p);        // ascend log p        -> grad (p-1)/B
LossGrad bce_disc_fake(const Tensor& p);        // ascend log (1-p)    -> grad p/B
LossGrad gan_gen_minimax(const Tensor& p_fake); // descend log (1-p)   -> grad -p/B

}  // namespace phylab

#endif  // PHYLAB_LOSSES_HPP
