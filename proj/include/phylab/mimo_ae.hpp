#ifndef PHYLAB_MIMO_AE_HPP
#define PHYLAB_MIMO_AE_HPP

#include <cstdint>
#include <vector>

#include "phylab/channel.hpp"
#include "phylab/cmat.hpp"
#include "phylab/network.hpp"

namespace phylab {

struct MimoAeConfig {
  size_t n_t = 2, n_r = 2;
  size_t k = 2;        // bits per antenna; 2^(k*n_t) joint messages
  double power = 1.0;  // total average transmit power P (linear); SNR = P
                       // against fixed unit-variance complex receiver noise
  size_t embed_dim = 8;
  double lr = 0.001;
  size_t batch_size = 256;
  size_t max_steps = 4000;
  size_t eval_every = 100;
  size_t patience = 800;
  uint64_t seed = 1;
};

// Closed-loop learned transceiver for one fixed channel realization. The
// joint message (one integer in [0, 2^(k*n_t))) is embedded, mapped to n_t
// complex symbols (interleaved re/im) under a batch average-power
// constraint, pushed through y = Hx + n with complex noise variance 1, and
// classified back by the receiver stack.
class MimoAe {
 public:
  MimoAeConfig cfg;
  CMat h;  // channel the pair was trained for
  Network net;
  size_t channel_index = 0;  // complex-multiply layer position
  size_t noise_index = 0;
  double val_loss = 0.0;
  size_t steps_run = 0;
  size_t restarts = 0;

  size_t classes() const { return size_t{1} << (cfg.k * cfg.n_t); }

  // Transmit vectors per message, [M, 2*n_t] interleaved re/im (eval mode).
  Tensor codewords();

  // Receiver decisions for channel outputs y [B, 2*n_r]. Not thread-safe.
  std::vector<int> decode(const Tensor& y);
};

// Trains one codebook entry on the fixed channel h. Deterministic given
// cfg.seed; collapse-restarts like the single-antenna trainer.
MimoAe train_mimo_ae(const MimoAeConfig& cfg, const ChannelRealization& h);

// Symbol errors over n_blocks when this entry (trained for ae.h) actually
// operates through h_true at its trained power.
uint64_t mimo_ae_block_errors(MimoAe& ae, const CMat& h_true, uint64_t n_blocks, Rng& rng);

// Stored entries for nearest-estimate retrieval.
struct MimoCodebook {
  std::vector<MimoAe> entries;
};

// One entry per channel in hs, seeds derived from cfg.seed per entry.
MimoCodebook build_mimo_codebook(const MimoAeConfig& cfg, const std::vector<CMat>& hs);

// Operation with imperfect channel knowledge: per block the receiver sees
// h_est = h_true - h_err with iid complex entries of variance est_var,
// retrieves the stored entry nearest to h_est (Frobenius), and the link
// runs through the true channel with that entry's networks. Returns the
// symbol error rate. Throws std::invalid_argument on an empty codebook or
// negative est_var.
double eval_mimo_with_estimation_error(MimoCodebook& book, const CMat& h_true,
                                       double est_var, uint64_t n_blocks, uint64_t seed);

}  // namespace phylab

#endif  // PHYLAB_MIMO_AE_HPP
