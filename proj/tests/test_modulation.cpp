#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "phylab/modulation.hpp"
#include "phylab/stats.hpp"

using namespace phylab;

namespace {

int popcount_diff(size_t a, size_t b) { return __builtin_popcountll(a ^ b); }

void check_gray_and_energy(const ModScheme& s) {
  // unit mean energy
  double e = 0.0;
  for (const auto& p : s.mapping) e += std::norm(p);
  CHECK(e / static_cast<double>(s.mapping.size()) == doctest::Approx(1.0).epsilon(1e-12));

  // Gray adjacency: nearest-neighbor pairs differ in exactly one bit
  double dmin = 1e300;
  for (size_t i = 0; i < s.mapping.size(); ++i)
    for (size_t j = i + 1; j < s.mapping.size(); ++j)
      dmin = std::min(dmin, std::abs(s.mapping[i] - s.mapping[j]));
  for (size_t i = 0; i < s.mapping.size(); ++i)
    for (size_t j = i + 1; j < s.mapping.size(); ++j)
      if (std::abs(s.mapping[i] - s.mapping[j]) < dmin * 1.001)
        CHECK(popcount_diff(i, j) == 1);
}

}  // namespace

TEST_CASE("constellations have unit energy and Gray-coded neighbors") {
  check_gray_and_energy(ModScheme::make(ModKind::kBpsk));
  check_gray_and_energy(ModScheme::make(ModKind::kQpsk));
  check_gray_and_energy(ModScheme::make(ModKind::kQam16));
}

TEST_CASE("bpsk sign convention and round trip") {
  const auto s = ModScheme::make(ModKind::kBpsk);
  const ComplexVec x = modulate({0, 1, 1, 0}, s);
  CHECK(x.re[0] == 1.0);
  CHECK(x.re[1] == -1.0);
  CHECK(demodulate(x, s) == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("all round-trips are exact without noise") {
  Rng rng(3);
  for (ModKind kind : {ModKind::kBpsk, ModKind::kQpsk, ModKind::kQam16}) {
    const auto s = ModScheme::make(kind);
    std::vector<int> bits(s.bits_per_symbol * 64);
    for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
    CHECK(demodulate(modulate(bits, s), s) == bits);
  }
  CHECK_THROWS_AS(modulate({0, 1, 0}, ModScheme::make(ModKind::kQpsk)),
                  std::invalid_argument);
}

TEST_CASE("QPSK symbol error rate matches the closed form at Es/N0 = 10 dB") {
  // unit-energy QPSK, complex noise 2*beta with beta per real dimension:
  // rail error Q(sqrt(1/2) / sqrt(beta)), SER = 1 - (1-p)^2
  const double es_n0 = 10.0;                       // dB
  const double n0 = std::pow(10.0, -es_n0 / 10.0); // complex noise power
  const double beta = n0 / 2.0;
  const double p_rail = q_func(std::sqrt(0.5 / beta));
  CHECK(p_rail == doctest::Approx(0.0007827011290012744).epsilon(1e-9));
  const double ser_expect = 1.0 - (1.0 - p_rail) * (1.0 - p_rail);
  CHECK(ser_expect == doctest::Approx(0.0015647896369451741).epsilon(1e-9));

  const auto s = ModScheme::make(ModKind::kQpsk);
  Rng rng(41);
  const size_t n = 2000000;
  std::vector<int> bits(2 * n);
  for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
  ComplexVec x = modulate(bits, s);
  const ComplexVec y = apply_awgn(x, beta, rng);
  const std::vector<int> hat = demodulate(y, s);
  uint64_t serr = 0;
  for (size_t i = 0; i < n; ++i)
    if (hat[2 * i] != bits[2 * i] || hat[2 * i + 1] != bits[2 * i + 1]) ++serr;
  const double ser = static_cast<double>(serr) / static_cast<double>(n);
  // +-4 sigma Monte-Carlo band
  const double sigma = std::sqrt(ser_expect * (1.0 - ser_expect) / static_cast<double>(n));
  CHECK(std::abs(ser - ser_expect) < 4.0 * sigma);
}
