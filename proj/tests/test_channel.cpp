#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "phylab/channel.hpp"
#include "phylab/stats.hpp"
#include "phylab/svd.hpp"

using namespace phylab;

TEST_CASE("noise variance from rate and Eb/N0") {
  CHECK(ebno_to_noise_var(4.0 / 7.0, 0.0) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(ebno_to_noise_var(4.0 / 7.0, 7.0) ==
        doctest::Approx(0.174585452559777).epsilon(1e-12));
  CHECK(ebno_to_noise_var(1.0, 7.0) ==
        doctest::Approx(0.099763115748444).epsilon(1e-12));
  CHECK(ebno_to_noise_var(1.0, 100.0) < 1e-9);  // high-SNR limit
  CHECK_THROWS_AS(ebno_to_noise_var(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(ebno_to_noise_var(-1.0, 0.0), std::domain_error);
}

TEST_CASE("awgn is zero-mean with the requested variance, identity at beta 0") {
  Rng rng(100);
  const size_t n = 500000;
  ComplexVec x;
  x.re.assign(n, 0.7);
  x.im.assign(n, -0.3);

  const ComplexVec same = apply_awgn(x, 0.0, rng);
  for (size_t i = 0; i < 100; ++i) {
    CHECK(same.re[i] == x.re[i]);
    CHECK(same.im[i] == x.im[i]);
  }

  const double beta = 0.4;
  const ComplexVec y = apply_awgn(x, beta, rng);
  double s1 = 0.0, s2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dr = y.re[i] - x.re[i], di = y.im[i] - x.im[i];
    s1 += dr + di;
    s2 += dr * dr + di * di;
  }
  const double cnt = 2.0 * static_cast<double>(n);
  const double mean = s1 / cnt;
  const double var = s2 / cnt - mean * mean;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(beta / cnt));
  CHECK(var == doctest::Approx(beta).epsilon(0.01));

  // reproducible from the same stream state
  Rng r1(55), r2(55);
  const ComplexVec a = apply_awgn(x, beta, r1);
  const ComplexVec b = apply_awgn(x, beta, r2);
  for (size_t i = 0; i < 100; ++i) CHECK(a.re[i] == b.re[i]);
}

TEST_CASE("rayleigh MIMO entries are CN(0,1)") {
  Rng rng(7);
  const int draws = 250000;
  double s2 = 0.0, sabs = 0.0;
  const auto first = draw_rayleigh_mimo(2, 2, rng);
  CHECK(first.h.rows == 2);
  CHECK(first.h.cols == 2);
  for (int d = 0; d < draws; ++d) {
    const auto ch = draw_rayleigh_mimo(2, 2, rng);
    for (const auto& z : ch.h.v) {
      s2 += std::norm(z);
      sabs += std::abs(z);
    }
  }
  const double n = 4.0 * draws;
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sabs / n == doctest::Approx(std::sqrt(std::numbers::pi / 4.0)).epsilon(0.01));
}

TEST_CASE("MMSE estimation error variance formula") {
  CHECK(mmse_error_variance(4.0, 1.0, 4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mmse_error_variance(7.5, 0.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mmse_error_variance(1e12, 1.0, 1) < 1e-11);
  CHECK(mmse_error_variance(2.0, 2.0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(mmse_error_variance(-1.0, 1.0, 2), std::domain_error);
  CHECK_THROWS_AS(mmse_error_variance(1.0, -1.0, 2), std::domain_error);

  // strictly decreasing in both arguments, always in (0, 1]
  double prev = 2.0;
  for (double t = 0.0; t <= 8.0; t += 1.0) {
    const double v = mmse_error_variance(3.0, t, 2);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
  }
  prev = 2.0;
  for (double rho = 0.0; rho <= 8.0; rho += 1.0) {
    const double v = mmse_error_variance(rho, 2.0, 2);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

namespace {

double unitarity_err(const CMat& u) {
  const CMat p = mul(u, u.adjoint());
  double worst = 0.0;
  for (size_t i = 0; i < p.rows; ++i)
    for (size_t j = 0; j < p.cols; ++j)
      worst = std::max(worst, std::abs(p.at(i, j) - (i == j ? cplx(1.0) : cplx(0.0))));
  return worst;
}

double recon_err(const CMat& h, const Svd& d) {
  const size_t k = d.s.size();
  CMat us(h.rows, k);
  for (size_t i = 0; i < h.rows; ++i)
    for (size_t j = 0; j < k; ++j) us.at(i, j) = d.u.at(i, j) * d.s[j];
  const CMat r = mul(us, d.v.adjoint());
  double err = 0.0;
  for (size_t i = 0; i < h.v.size(); ++i) err += std::norm(r.v[i] - h.v[i]);
  return std::sqrt(err);
}

void check_svd(const CMat& h) {
  const Svd d = svd_channel(h);
  CHECK(unitarity_err(d.u) < 1e-9);
  CHECK(unitarity_err(d.v) < 1e-9);
  for (size_t j = 0; j + 1 < d.s.size(); ++j) CHECK(d.s[j] >= d.s[j + 1]);
  for (double s : d.s) CHECK(s >= 0.0);
  CHECK(recon_err(h, d) < 1e-9);
}

}  // namespace

TEST_CASE("SVD reference cases") {
  CMat eye = CMat::identity(2);
  const Svd d1 = svd_channel(eye);
  CHECK(d1.s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d1.s[1] == doctest::Approx(1.0).epsilon(1e-12));

  CMat diag(2, 2);
  diag.at(0, 0) = 3.0;
  diag.at(1, 1) = 1.0;
  const Svd d2 = svd_channel(diag);
  CHECK(d2.s[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(d2.s[1] == doctest::Approx(1.0).epsilon(1e-12));

  // rank deficient: duplicated column
  CMat rd(2, 2);
  rd.at(0, 0) = rd.at(0, 1) = cplx(1.0, 1.0);
  rd.at(1, 0) = rd.at(1, 1) = cplx(0.0, -2.0);
  check_svd(rd);
  const Svd d3 = svd_channel(rd);
  CHECK(d3.s[1] < 1e-12);

  CMat zero(3, 2);
  check_svd(zero);
}

TEST_CASE("SVD properties hold over 1000 random matrices") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const size_t m = 1 + rng.below(6);
    const size_t n = 1 + rng.below(6);
    CMat h(m, n);
    for (auto& z : h.v) z = cplx(rng.normal(), rng.normal());
    check_svd(h);
  }
}

TEST_CASE("link gain: path loss, median, log-normal shadowing") {
  Rng rng(31);
  CHECK(link_gain({10.0, 30.0, 0.0}, rng) == doctest::Approx(0.01).epsilon(1e-15));

  const int n = 100000;
  std::vector<double> shadow_db(n);
  int below_median = 0;
  for (int i = 0; i < n; ++i) {
    const double g = link_gain({10.0, 30.0, 3.0}, rng);
    if (g < 0.01) ++below_median;
    shadow_db[i] = 10.0 * std::log10(g * 100.0);
  }
  CHECK(below_median / static_cast<double>(n) == doctest::Approx(0.5).epsilon(0.02));

  // Kolmogorov-Smirnov against N(0, 3^2) at alpha = 0.01
  std::sort(shadow_db.begin(), shadow_db.end());
  double dmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = normal_cdf(shadow_db[i] / 3.0);
    const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    dmax = std::max({dmax, std::abs(f - lo), std::abs(f - hi)});
  }
  CHECK(dmax < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("shadowing tail probability used for the game calibration") {
  // P(shadowed 10 dB margin drops below 3 linear) = Phi(10 log10(0.3) / sigma)
  const double sigma = 3.04;
  const double expect = normal_cdf(10.0 * std::log10(0.3) / sigma);
  CHECK(expect == doctest::Approx(0.0427).epsilon(0.01));

  Rng rng(77);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double snr = std::pow(10.0, 3.0) * link_gain({10.0, 30.0, sigma}, rng);
    if (snr < 3.0) ++hits;
  }
  CHECK(hits / static_cast<double>(n) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("gaussian tail helper") {
  CHECK(q_func(std::sqrt(2.0)) == doctest::Approx(0.07864960352514257).epsilon(1e-12));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_func(-1.0) + q_func(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}
