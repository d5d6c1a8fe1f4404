#ifndef PHYLAB_MODULATION_HPP
#define PHYLAB_MODULATION_HPP

#include <vector>

#include "phylab/channel.hpp"

namespace phylab {

enum class ModKind { kBpsk, kQpsk, kQam16 };

// Gray-coded constellation with unit average symbol energy. Bit groups are
// MSB-first indices into `mapping`.
struct ModScheme {
  ModKind kind;
  size_t bits_per_symbol;
  std::vector<cplx> mapping;

  static ModScheme make(ModKind kind);
};

// Maps bits (0/1) to constellation points; bit count must divide evenly.
ComplexVec modulate(const std::vector<int>& bits, const ModScheme& scheme);

// Minimum-Euclidean-distance slicing back to bits.
std::vector<int> demodulate(const ComplexVec& y, const ModScheme& scheme);

}  // namespace phylab

#endif  // PHYLAB_MODULATION_HPP
