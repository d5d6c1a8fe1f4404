#ifndef PHYLAB_AE_SINGLE_HPP
#define PHYLAB_AE_SINGLE_HPP

#include <cstdint>

#include "phylab/bler.hpp"
#include "phylab/network.hpp"

namespace phylab {

struct SingleAeConfig {
  size_t n = 7;  // real channel uses per block
  size_t k = 4;  // bits per block, M = 2^k messages
  bool energy_constraint = true;  // per-codeword ||x||^2 = n; else batch average power
  double train_ebno_db = 7.0;
  double lr = 0.001;
  size_t batch_size = 256;  // messages are tiled to at least this many rows
  size_t max_steps = 30000;
  size_t eval_every = 250;  // validation cadence, steps
  size_t patience = 5000;   // stop after this many steps without improvement
  // Second optimization stage: lower learning rate over a larger batch to
  // polish the constellation once the main stage plateaus. 0 steps disables.
  size_t finetune_steps = 10000;
  double finetune_lr = 1e-4;
  size_t finetune_batch = 1024;
  uint64_t seed = 1;
};

// Transmitter + AWGN channel + receiver trained jointly on reconstruction
// cross-entropy. The channel layer sits at noise_index; everything before
// it is the encoder, everything after it the receiver.
class SingleAe {
 public:
  SingleAeConfig cfg;
  Network net;
  size_t noise_index = 0;
  double val_loss = 0.0;  // best validation cross-entropy reached
  size_t steps_run = 0;
  size_t restarts = 0;  // collapse-triggered re-initializations

  size_t messages() const { return size_t{1} << cfg.k; }

  // Transmitted signal per message, [M, n], deterministic (eval mode).
  Tensor constellation();

  // Receiver decisions for channel outputs y [B, n]. Not thread-safe:
  // forward passes share layer caches.
  std::vector<int> decode(const Tensor& y);
};

// Trains with Adam on cross-entropy at the configured Eb/N0. Deterministic
// given cfg.seed. Small message sets can hit a dead-ReLU collapse where two
// messages share one frozen signal point; such runs are detected by their
// degenerate geometry and retrained from a seed-derived re-initialization
// (up to 4 attempts). Throws TrainingError if the loss leaves the reals or
// every attempt collapses, std::invalid_argument on malformed configuration.
SingleAe train_single_ae(const SingleAeConfig& cfg);

// Adapter for run_bler: snr_db is Eb/N0 in dB, noise variance
// 1/(2 R 10^(EbN0/10)) per real dimension. Uses the live network, so run
// with BlerOptions.threads = 1.
TrialFn single_ae_system(SingleAe& ae);

// True if a signal point nearly vanished or two rows nearly coincide
// (squared tolerance 1e-6 * cols) — the signatures of a collapsed encoder.
bool degenerate_code(const Tensor& code);

}  // namespace phylab

#endif  // PHYLAB_AE_SINGLE_HPP
