#ifndef PHYLAB_IC_AE_HPP
#define PHYLAB_IC_AE_HPP

#include <cstdint>
#include <vector>

#include "phylab/bler.hpp"
#include "phylab/network.hpp"

namespace phylab {

struct IcAeConfig {
  size_t n = 1;  // complex channel uses per block, encoder emits 2n reals
  size_t k = 1;  // bits per block per user
  double train_ebno_db = 7.0;
  double lr = 0.001;
  size_t batch_size = 256;
  size_t max_steps = 30000;
  size_t eval_every = 250;
  size_t patience = 5000;
  size_t finetune_steps = 10000;
  double finetune_lr = 1e-4;
  size_t finetune_batch = 1024;
  uint64_t seed = 1;
};

// Two transmitter/receiver pairs sharing one channel: y1 = x1 + x2 + n1,
// y2 = x2 + x1 + n2 (all link gains 1). Trained jointly on the dynamically
// weighted loss a_t*L1 + (1-a_t)*L2 with a_{t+1} = L1/(L1+L2); parameter
// updates alternate between the pairs each step.
class IcPair {
 public:
  IcAeConfig cfg;
  Network tx1, rx1, tx2, rx2;
  double val_loss = 0.0;
  size_t steps_run = 0;
  size_t restarts = 0;
  double alpha_final = 0.5;

  size_t messages() const { return size_t{1} << cfg.k; }

  // Transmit vectors of one user (1 or 2), [M, 2n] interleaved re/im.
  Tensor codebook(int user);

  // Receiver decisions of one user for channel outputs [B, 2n].
  std::vector<int> decode(int user, const Tensor& y);
};

// Deterministic given cfg.seed; collapse-restarts as the other trainers.
IcPair train_ic_pair(const IcAeConfig& cfg);

// Adapter for run_bler. A trial is one user-block: each simulated channel
// use contributes user 1's and user 2's outcomes (an odd remainder counts
// user 1 only). snr_db is per-user Eb/N0; noise 1/(2 R 10^(EbN0/10)) per
// real dimension. Single-threaded use only.
TrialFn ic_pair_system(IcPair& pair);

// Alignment of the two users' signal directions: |<c1, c2>| / (|c1| |c2|)
// where c_i is the difference vector between user i's two signal points.
// Only defined for k = 1 (two-point codebooks).
double ic_orthogonality(IcPair& pair);

}  // namespace phylab

#endif  // PHYLAB_IC_AE_HPP
