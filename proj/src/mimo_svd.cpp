#include "phylab/mimo_svd.hpp"

#include <cmath>
#include <vector>

#include "phylab/modulation.hpp"
#include "phylab/svd.hpp"

namespace phylab {

MimoSvdResult svd_closed_loop_mimo(const CMat& h, double snr_db, uint64_t n_uses,
                                   Rng& rng) {
  const size_t nt = h.cols, nr = h.rows;
  const size_t streams = std::min(nt, nr);
  const Svd d = svd_channel(h);
  const ModScheme qpsk = ModScheme::make(ModKind::kQpsk);
  const double p_total = std::pow(10.0, snr_db / 10.0);
  const double amp = std::sqrt(p_total / static_cast<double>(nt));
  const double nsd = std::sqrt(0.5);  // CN(0,1) per receive antenna

  MimoSvdResult res;
  std::vector<cplx> s(nt), x(nt), y(nr), yt(streams);
  for (uint64_t u = 0; u < n_uses; ++u) {
    std::vector<size_t> sent(streams);
    for (size_t i = 0; i < streams; ++i) sent[i] = rng.below(4);
    for (size_t i = 0; i < nt; ++i)
      s[i] = i < streams ? amp * qpsk.mapping[sent[i]] : cplx{};

    // precode, propagate, add noise
    for (size_t i = 0; i < nt; ++i) {
      cplx acc{};
      for (size_t j = 0; j < nt; ++j) acc += d.v.at(i, j) * s[j];
      x[i] = acc;
    }
    for (size_t i = 0; i < nr; ++i) {
      cplx acc{};
      for (size_t j = 0; j < nt; ++j) acc += h.at(i, j) * x[j];
      y[i] = acc + cplx(nsd * rng.normal(), nsd * rng.normal());
    }
    // receive combining diagonalizes: U^* y = diag(s) V^* x + U^* n
    for (size_t i = 0; i < streams; ++i) {
      cplx acc{};
      for (size_t j = 0; j < nr; ++j) acc += std::conj(d.u.at(j, i)) * y[j];
      yt[i] = acc;
    }

    bool any_bad = false;
    for (size_t i = 0; i < streams; ++i) {
      // fold out the stream gain, then minimum-distance slice
      const double g = d.s[i] * amp;
      size_t best = 0;
      double best_d = 1e300;
      for (size_t c = 0; c < 4; ++c) {
        const cplx diff = yt[i] - g * qpsk.mapping[c];
        const double dist = std::norm(diff);
        if (dist < best_d) {
          best_d = dist;
          best = c;
        }
      }
      ++res.symbols;
      if (best != sent[i]) {
        ++res.symbol_errors;
        any_bad = true;
      }
    }
    ++res.blocks;
    if (any_bad) ++res.block_errors;
  }
  return res;
}

}  // namespace phylab
