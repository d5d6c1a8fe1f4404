#include "phylab/channel.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace phylab {

double ebno_to_noise_var(double rate, double ebno_db) {
  if (rate <= 0.0) throw std::domain_error("ebno_to_noise_var: rate must be positive");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
}

ComplexVec apply_awgn(const ComplexVec& x, double beta, Rng& rng) {
  assert(x.re.size() == x.im.size());
  if (beta < 0.0) throw std::domain_error("apply_awgn: negative noise variance");
  ComplexVec y = x;
  if (beta == 0.0) return y;
  const double sd = std::sqrt(beta);
  for (size_t i = 0; i < y.size(); ++i) {
    y.re[i] += sd * rng.normal();
    y.im[i] += sd * rng.normal();
  }
  return y;
}

void add_awgn(std::vector<cplx>& x, double beta, Rng& rng) {
  if (beta <= 0.0) return;
  const double sd = std::sqrt(beta);
  for (auto& z : x) z += cplx(sd * rng.normal(), sd * rng.normal());
}

void add_awgn(std::vector<double>& x, double beta, Rng& rng) {
  if (beta <= 0.0) return;
  const double sd = std::sqrt(beta);
  for (auto& v : x) v += sd * rng.normal();
}

ChannelRealization draw_rayleigh_mimo(size_t nt, size_t nr, Rng& rng) {
  assert(nt >= 1 && nr >= 1);
  ChannelRealization out;
  out.h = CMat(nr, nt);
  const double sd = std::sqrt(0.5);
  for (auto& z : out.h.v) z = cplx(sd * rng.normal(), sd * rng.normal());
  return out;
}

double mmse_error_variance(double rho_tau, double t_tau, size_t nt) {
  if (rho_tau < 0.0 || t_tau < 0.0)
    throw std::domain_error("mmse_error_variance: negative input");
  assert(nt >= 1);
  return 1.0 / (1.0 + (rho_tau / static_cast<double>(nt)) * t_tau);
}

double link_gain(const LinkModel& link, Rng& rng) {
  assert(link.distance > 0.0);
  const double shadow_db =
      link.shadowing_sigma_db > 0.0 ? rng.normal(0.0, link.shadowing_sigma_db) : 0.0;
  return std::pow(10.0, shadow_db / 10.0) / (link.distance * link.distance);
}

}  // namespace phylab
