#include "phylab/modulation.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phylab {

namespace {

// Per-axis Gray-coded 4-PAM levels indexed by the 2-bit group.
constexpr double kPam4[4] = {-3.0, -1.0, 3.0, 1.0};  // 00, 01, 10, 11

}  // namespace

ModScheme ModScheme::make(ModKind kind) {
  ModScheme s;
  s.kind = kind;
  switch (kind) {
    case ModKind::kBpsk:
      s.bits_per_symbol = 1;
      s.mapping = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
      break;
    case ModKind::kQpsk: {
      s.bits_per_symbol = 2;
      const double a = 1.0 / std::sqrt(2.0);
      s.mapping.resize(4);
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1)
          s.mapping[b0 * 2 + b1] = cplx((1 - 2 * b0) * a, (1 - 2 * b1) * a);
      break;
    }
    case ModKind::kQam16: {
      s.bits_per_symbol = 4;
      const double a = 1.0 / std::sqrt(10.0);
      s.mapping.resize(16);
      for (int i = 0; i < 4; ++i)
        for (int q = 0; q < 4; ++q)
          s.mapping[i * 4 + q] = cplx(kPam4[i] * a, kPam4[q] * a);
      break;
    }
  }
  return s;
}

ComplexVec modulate(const std::vector<int>& bits, const ModScheme& scheme) {
  const size_t bps = scheme.bits_per_symbol;
  if (bits.size() % bps != 0)
    throw std::invalid_argument("modulate: bit count not divisible by bits per symbol");
  const size_t n = bits.size() / bps;
  ComplexVec out;
  out.re.resize(n);
  out.im.resize(n);
  for (size_t s = 0; s < n; ++s) {
    size_t idx = 0;
    for (size_t b = 0; b < bps; ++b) {
      assert(bits[s * bps + b] == 0 || bits[s * bps + b] == 1);
      idx = idx * 2 + static_cast<size_t>(bits[s * bps + b]);
    }
    out.re[s] = scheme.mapping[idx].real();
    out.im[s] = scheme.mapping[idx].imag();
  }
  return out;
}

std::vector<int> demodulate(const ComplexVec& y, const ModScheme& scheme) {
  const size_t bps = scheme.bits_per_symbol;
  std::vector<int> bits(y.size() * bps);
  for (size_t s = 0; s < y.size(); ++s) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < scheme.mapping.size(); ++i) {
      const double dr = y.re[s] - scheme.mapping[i].real();
      const double di = y.im[s] - scheme.mapping[i].imag();
      const double d = dr * dr + di * di;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    for (size_t b = 0; b < bps; ++b)
      bits[s * bps + b] = static_cast<int>((best >> (bps - 1 - b)) & 1);
  }
  return bits;
}

}  // namespace phylab
