#include "phylab/hamming.hpp"

#include <limits>

namespace phylab {

namespace {

constexpr std::array<std::array<int, 7>, 4> kG = {{
    {1, 0, 0, 0, 1, 1, 0},
    {0, 1, 0, 0, 1, 0, 1},
    {0, 0, 1, 0, 0, 1, 1},
    {0, 0, 0, 1, 1, 1, 1},
}};

constexpr std::array<std::array<int, 7>, 3> kH = {{
    {1, 1, 0, 1, 1, 0, 0},
    {1, 0, 1, 1, 0, 1, 0},
    {0, 1, 1, 1, 0, 0, 1},
}};

// syndrome (s1 s2 s3 as an integer s1*4+s2*2+s3) -> flipped position, or -1
constexpr int kSyndromeToPos[8] = {-1, 6, 5, 2, 4, 1, 0, 3};

std::array<std::array<int, 7>, 16> build_codebook() {
  std::array<std::array<int, 7>, 16> cb{};
  for (int m = 0; m < 16; ++m) {
    std::array<int, 4> d{};
    for (int b = 0; b < 4; ++b) d[b] = (m >> (3 - b)) & 1;
    cb[m] = hamming74_encode(d);
  }
  return cb;
}

}  // namespace

const std::array<std::array<int, 7>, 4>& Hamming74::g_matrix() { return kG; }
const std::array<std::array<int, 7>, 3>& Hamming74::h_matrix() { return kH; }

const std::array<std::array<int, 7>, 16>& Hamming74::codebook() {
  static const auto cb = build_codebook();
  return cb;
}

std::array<int, 7> hamming74_encode(const std::array<int, 4>& data) {
  std::array<int, 7> c{};
  for (int j = 0; j < 7; ++j) {
    int s = 0;
    for (int i = 0; i < 4; ++i) s ^= data[i] & kG[i][j];
    c[j] = s;
  }
  return c;
}

std::array<int, 4> hamming74_decode_hard(const std::array<int, 7>& received) {
  int syndrome = 0;
  for (int r = 0; r < 3; ++r) {
    int s = 0;
    for (int j = 0; j < 7; ++j) s ^= received[j] & kH[r][j];
    syndrome = syndrome * 2 + s;
  }
  std::array<int, 7> c = received;
  const int pos = kSyndromeToPos[syndrome];
  if (pos >= 0) c[pos] ^= 1;
  return {c[0], c[1], c[2], c[3]};
}

std::array<int, 4> hamming74_decode_mld(const std::array<double, 7>& soft) {
  const auto& cb = Hamming74::codebook();
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 16; ++m) {
    double d = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double v = soft[j] - (cb[m][j] == 0 ? 1.0 : -1.0);
      d += v * v;
    }
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return {cb[best][0], cb[best][1], cb[best][2], cb[best][3]};
}

}  // namespace phylab
