#ifndef PHYLAB_HAMMING_HPP
#define PHYLAB_HAMMING_HPP

#include <array>
#include <cstddef>

namespace phylab {

// Systematic Hamming(7,4): c = [d1 d2 d3 d4 p1 p2 p3] with
//   p1 = d1+d2+d4, p2 = d1+d3+d4, p3 = d2+d3+d4 (mod 2).
struct Hamming74 {
  // G = [I4 | P] (4x7) and H = [P^T | I3] (3x7), both over GF(2).
  static const std::array<std::array<int, 7>, 4>& g_matrix();
  static const std::array<std::array<int, 7>, 3>& h_matrix();
  static const std::array<std::array<int, 7>, 16>& codebook();
};

std::array<int, 7> hamming74_encode(const std::array<int, 4>& data);

// Syndrome decoding: corrects any single bit flip.
std::array<int, 4> hamming74_decode_hard(const std::array<int, 7>& received);

// Maximum likelihood: nearest of the 16 BPSK-mapped codewords in Euclidean
// distance to the soft received vector (bit 0 -> +1, bit 1 -> -1).
std::array<int, 4> hamming74_decode_mld(const std::array<double, 7>& soft);

}  // namespace phylab

#endif  // PHYLAB_HAMMING_HPP
