#ifndef PHYLAB_TIME_SHARING_HPP
#define PHYLAB_TIME_SHARING_HPP

#include <cstdint>

#include "phylab/bler.hpp"
#include "phylab/rng.hpp"

namespace phylab {

// Two-user time sharing over a complex AWGN channel at rate k/n bits per
// complex use and the given Eb/N0. Each user is active on alternating slots
// sending 2^(2k/n)-QAM (so 2k/n must be 2 or 4); active symbols carry
// energy 2 to hold unit average power over the cycle. A block is k
// consecutive bits of one user; block error = any of those bits wrong.
// Returns block errors over n_blocks blocks.
uint64_t time_sharing_block_errors(size_t n, size_t k, double ebno_db,
                                   uint64_t n_blocks, Rng& rng);

// Same scheme packaged for run_bler; one trial is one block of one user.
TrialFn time_sharing_system(size_t n, size_t k);

}  // namespace phylab

#endif  // PHYLAB_TIME_SHARING_HPP
