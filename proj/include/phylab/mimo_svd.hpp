#ifndef PHYLAB_MIMO_SVD_HPP
#define PHYLAB_MIMO_SVD_HPP

#include <cstdint>

#include "phylab/cmat.hpp"
#include "phylab/rng.hpp"

namespace phylab {

struct MimoSvdResult {
  uint64_t symbols = 0;        // per-stream symbol slots
  uint64_t symbol_errors = 0;  // wrong per-stream symbols
  uint64_t blocks = 0;         // vector channel uses
  uint64_t block_errors = 0;   // uses with any stream wrong
};

// Closed-loop SVD-precoded spatial multiplexing with per-stream QPSK and
// perfect CSI: x = V s, y = h x + n, slicing on U^* y. snr_db is total
// transmit power over the unit per-antenna complex noise power; power is
// split equally across streams.
MimoSvdResult svd_closed_loop_mimo(const CMat& h, double snr_db, uint64_t n_uses,
                                   Rng& rng);

}  // namespace phylab

#endif  // PHYLAB_MIMO_SVD_HPP
