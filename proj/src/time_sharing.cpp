#include "phylab/time_sharing.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "phylab/channel.hpp"
#include "phylab/modulation.hpp"

namespace phylab {

uint64_t time_sharing_block_errors(size_t n, size_t k, double ebno_db,
                                   uint64_t n_blocks, Rng& rng) {
  if (n == 0 || 2 * k % n != 0)
    throw std::invalid_argument("time sharing: 2k/n must be an integer");
  const size_t bps = 2 * k / n;
  ModKind kind;
  if (bps == 2)
    kind = ModKind::kQpsk;
  else if (bps == 4)
    kind = ModKind::kQam16;
  else
    throw std::invalid_argument("time sharing: 2k/n must be 2 or 4");

  const ModScheme scheme = ModScheme::make(kind);
  const double amp = std::sqrt(2.0);  // active-slot boost for unit average power
  const double sd = std::sqrt(
      ebno_to_noise_var(static_cast<double>(k) / static_cast<double>(n), ebno_db));

  // simulate whole symbols; a symbol can span several short blocks and a
  // long block several symbols
  const size_t super_bits = std::lcm(k, bps);
  std::vector<int> bits(super_bits);

  uint64_t errors = 0, counted = 0;
  while (counted < n_blocks) {
    for (auto& v : bits) v = rng.bernoulli(0.5) ? 1 : 0;
    ComplexVec x = modulate(bits, scheme);
    for (size_t i = 0; i < x.size(); ++i) {
      x.re[i] = (amp * x.re[i] + sd * rng.normal()) / amp;
      x.im[i] = (amp * x.im[i] + sd * rng.normal()) / amp;
    }
    const std::vector<int> hat = demodulate(x, scheme);
    for (size_t blk = 0; blk < super_bits / k && counted < n_blocks; ++blk) {
      bool bad = false;
      for (size_t i = blk * k; i < (blk + 1) * k; ++i)
        if (hat[i] != bits[i]) bad = true;
      if (bad) ++errors;
      ++counted;
    }
  }
  return errors;
}

TrialFn time_sharing_system(size_t n, size_t k) {
  return [n, k](double snr_db, uint64_t n_trials, Rng& rng) -> uint64_t {
    return time_sharing_block_errors(n, k, snr_db, n_trials, rng);
  };
}

}  // namespace phylab
