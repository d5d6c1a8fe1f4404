#ifndef PHYLAB_BLER_HPP
#define PHYLAB_BLER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "phylab/rng.hpp"

namespace phylab {

struct BlerPoint {
  double snr_db = 0.0;
  uint64_t trials = 0;
  uint64_t errors = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ErrorRateResult {
  std::vector<BlerPoint> points;
};

// One end-to-end system under test: run n_trials blocks at the given
// operating point and return how many were in error.
using TrialFn = std::function<uint64_t(double snr_db, uint64_t n_trials, Rng& rng)>;

struct BlerOptions {
  uint64_t min_errors = 100;
  uint64_t max_trials = 10000000;
  uint64_t chunk = 2048;
  int threads = 1;
};

// 95% Wilson score interval.
void wilson_ci(uint64_t errors, uint64_t trials, double* lo, double* hi);

// Monte-Carlo error-rate sweep. Trials run in fixed-size chunks with one RNG
// stream per (point, chunk); a point stops after the first chunk at which
// the cumulative error count reaches min_errors (or at max_trials). Chunk
// results are combined in index order, so the outcome is byte-identical for
// any thread count.
ErrorRateResult run_bler(const TrialFn& system, const std::vector<double>& snr_grid_db,
                         const BlerOptions& opt, uint64_t seed);

// ---- classic single-antenna systems driven by run_bler ----
// snr_db is interpreted as Eb/N0; BPSK symbols cross a real AWGN channel
// with noise variance 1/(2 R 10^(EbN0/10)) per real dimension.

// k independent BPSK bits per block; block error = any bit wrong.
TrialFn uncoded_bpsk_system(size_t k);

// Hamming(7,4) over BPSK, hard-decision or maximum-likelihood decoding.
TrialFn hamming74_system(bool mld);

}  // namespace phylab

#endif  // PHYLAB_BLER_HPP
