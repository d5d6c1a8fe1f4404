#include "phylab/bler.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <thread>

#include "phylab/channel.hpp"
#include "phylab/hamming.hpp"

namespace phylab {

void wilson_ci(uint64_t errors, uint64_t trials, double* lo, double* hi) {
  if (trials == 0) {
    *lo = 0.0;
    *hi = 1.0;
    return;
  }
  constexpr double z = 1.96;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p + z2n / 2.0) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / denom;
  *lo = std::max(0.0, center - half);
  *hi = std::min(1.0, center + half);
}

ErrorRateResult run_bler(const TrialFn& system, const std::vector<double>& snr_grid_db,
                         const BlerOptions& opt, uint64_t seed) {
  assert(!snr_grid_db.empty());
  const uint64_t chunk = std::max<uint64_t>(1, opt.chunk);
  const int threads = std::max(1, opt.threads);

  ErrorRateResult out;
  for (size_t pi = 0; pi < snr_grid_db.size(); ++pi) {
    const double snr_db = snr_grid_db[pi];
    const uint64_t n_chunks = (opt.max_trials + chunk - 1) / chunk;

    auto chunk_trials = [&](uint64_t ci) {
      const uint64_t start = ci * chunk;
      return std::min(chunk, opt.max_trials - start);
    };
    auto run_chunk = [&](uint64_t ci) {
      Rng rng = Rng::stream(seed, pi, ci);
      return system(snr_db, chunk_trials(ci), rng);
    };

    BlerPoint pt;
    pt.snr_db = snr_db;
    uint64_t next = 0;
    bool done = false;
    while (!done && next < n_chunks) {
      // one wave of chunks, computed in parallel, committed in index order
      const uint64_t wave =
          std::min<uint64_t>(n_chunks - next, static_cast<uint64_t>(threads) * 4);
      std::vector<uint64_t> errs(wave, 0);
      if (threads == 1 || wave == 1) {
        for (uint64_t w = 0; w < wave; ++w) errs[w] = run_chunk(next + w);
      } else {
        std::vector<std::thread> pool;
        std::atomic<uint64_t> cursor{0};
        for (int t = 0; t < threads; ++t) {
          pool.emplace_back([&] {
            for (uint64_t w = cursor.fetch_add(1); w < wave; w = cursor.fetch_add(1))
              errs[w] = run_chunk(next + w);
          });
        }
        for (auto& th : pool) th.join();
      }
      for (uint64_t w = 0; w < wave; ++w) {
        pt.errors += errs[w];
        pt.trials += chunk_trials(next + w);
        if (pt.errors >= opt.min_errors) {
          done = true;
          break;
        }
      }
      next += wave;
    }
    pt.rate = pt.trials ? static_cast<double>(pt.errors) / static_cast<double>(pt.trials) : 0.0;
    wilson_ci(pt.errors, pt.trials, &pt.ci_low, &pt.ci_high);
    out.points.push_back(pt);
  }
  return out;
}

TrialFn uncoded_bpsk_system(size_t k) {
  return [k](double ebno_db, uint64_t n_trials, Rng& rng) -> uint64_t {
    const double beta = ebno_to_noise_var(1.0, ebno_db);
    const double sd = std::sqrt(beta);
    uint64_t errors = 0;
    for (uint64_t t = 0; t < n_trials; ++t) {
      bool bad = false;
      for (size_t i = 0; i < k; ++i) {
        const int bit = rng.bernoulli(0.5) ? 1 : 0;
        const double y = (bit == 0 ? 1.0 : -1.0) + sd * rng.normal();
        if ((y < 0.0 ? 1 : 0) != bit) bad = true;
      }
      if (bad) ++errors;
    }
    return errors;
  };
}

TrialFn hamming74_system(bool mld) {
  return [mld](double ebno_db, uint64_t n_trials, Rng& rng) -> uint64_t {
    const double beta = ebno_to_noise_var(4.0 / 7.0, ebno_db);
    const double sd = std::sqrt(beta);
    uint64_t errors = 0;
    for (uint64_t t = 0; t < n_trials; ++t) {
      std::array<int, 4> data;
      for (auto& b : data) b = rng.bernoulli(0.5) ? 1 : 0;
      const auto code = hamming74_encode(data);
      std::array<double, 7> soft;
      for (int j = 0; j < 7; ++j)
        soft[j] = (code[j] == 0 ? 1.0 : -1.0) + sd * rng.normal();
      std::array<int, 4> hat;
      if (mld) {
        hat = hamming74_decode_mld(soft);
      } else {
        std::array<int, 7> hard;
        for (int j = 0; j < 7; ++j) hard[j] = soft[j] < 0.0 ? 1 : 0;
        hat = hamming74_decode_hard(hard);
      }
      if (hat != data) ++errors;
    }
    return errors;
  };
}

}  // namespace phylab
