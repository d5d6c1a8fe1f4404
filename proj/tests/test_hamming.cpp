#include "doctest.h"
#include "phylab/hamming.hpp"

using namespace phylab;

namespace {

std::array<int, 4> data_of(int m) {
  return {(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1};
}

int weight(const std::array<int, 7>& c) {
  int w = 0;
  for (int b : c) w += b;
  return w;
}

}  // namespace

TEST_CASE("zero data encodes to the zero codeword") {
  CHECK(hamming74_encode({0, 0, 0, 0}) == std::array<int, 7>{0, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("G H^T vanishes over GF(2)") {
  const auto& g = Hamming74::g_matrix();
  const auto& h = Hamming74::h_matrix();
  for (int i = 0; i < 4; ++i)
    for (int r = 0; r < 3; ++r) {
      int s = 0;
      for (int j = 0; j < 7; ++j) s ^= g[i][j] & h[r][j];
      CHECK(s == 0);
    }
}

TEST_CASE("minimum distance is 3, codebook is systematic") {
  const auto& cb = Hamming74::codebook();
  int dmin = 7;
  for (int a = 0; a < 16; ++a) {
    const auto da = data_of(a);
    for (int j = 0; j < 4; ++j) CHECK(cb[a][j] == da[j]);
    for (int b = a + 1; b < 16; ++b) {
      std::array<int, 7> diff;
      for (int j = 0; j < 7; ++j) diff[j] = cb[a][j] ^ cb[b][j];
      dmin = std::min(dmin, weight(diff));
    }
  }
  CHECK(dmin == 3);
}

TEST_CASE("hard decoding corrects every single flip: all 112 cases") {
  for (int m = 0; m < 16; ++m) {
    const auto data = data_of(m);
    const auto code = hamming74_encode(data);
    CHECK(hamming74_decode_hard(code) == data);  // no flip
    for (int pos = 0; pos < 7; ++pos) {
      auto r = code;
      r[pos] ^= 1;
      CHECK(hamming74_decode_hard(r) == data);
    }
  }
}

TEST_CASE("MLD on hard-quantized single flips matches hard decoding") {
  for (int m = 0; m < 16; ++m) {
    const auto data = data_of(m);
    const auto code = hamming74_encode(data);
    for (int pos = 0; pos < 7; ++pos) {
      auto r = code;
      r[pos] ^= 1;
      std::array<double, 7> soft;
      for (int j = 0; j < 7; ++j) soft[j] = r[j] == 0 ? 1.0 : -1.0;
      CHECK(hamming74_decode_mld(soft) == data);
    }
  }
}

TEST_CASE("MLD exploits soft information where hard decoding cannot") {
  // transmit all-zero (+1^7); two rails weakly negative, the rest strongly
  // positive: hard decoding sees 2 flips and must fail, MLD recovers
  const std::array<double, 7> soft = {0.9, -0.1, 0.9, 0.9, -0.1, 0.9, 0.9};
  std::array<int, 7> hard;
  for (int j = 0; j < 7; ++j) hard[j] = soft[j] < 0.0 ? 1 : 0;
  CHECK(hamming74_decode_mld(soft) == std::array<int, 4>{0, 0, 0, 0});
  CHECK(hamming74_decode_hard(hard) != std::array<int, 4>{0, 0, 0, 0});
}
