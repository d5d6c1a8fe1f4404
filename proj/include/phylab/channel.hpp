#ifndef PHYLAB_CHANNEL_HPP
#define PHYLAB_CHANNEL_HPP

#include <cstddef>
#include <vector>

#include "phylab/cmat.hpp"
#include "phylab/rng.hpp"

namespace phylab {

struct ComplexVec {
  std::vector<double> re, im;
  size_t size() const { return re.size(); }
};

struct ChannelRealization {
  CMat h;                 // N_r x N_t
  double noise_var = 0.5; // per real dimension; 0.5 = CN(0,1) receiver noise
};

// Path-loss + log-normal shadowing link between two radios.
struct LinkModel {
  double distance;            // > 0
  double tx_power_db;         // dB above unit noise power
  double shadowing_sigma_db;  // >= 0
};

// Noise variance per real dimension for a given code rate and Eb/N0:
// beta = 1 / (2 R 10^(ebno_db/10)).
double ebno_to_noise_var(double rate, double ebno_db);

// y = x + n with n iid zero-mean Gaussian, variance beta per real component.
ComplexVec apply_awgn(const ComplexVec& x, double beta, Rng& rng);
void add_awgn(std::vector<cplx>& x, double beta, Rng& rng);
void add_awgn(std::vector<double>& x, double beta, Rng& rng);

// Entries iid CN(0,1): real and imaginary parts N(0, 1/2).
ChannelRealization draw_rayleigh_mimo(size_t nt, size_t nr, Rng& rng);

// MMSE channel-estimation error variance from training SNR rho_tau and
// training length t_tau: 1 / (1 + (rho_tau / nt) * t_tau).
double mmse_error_variance(double rho_tau, double t_tau, size_t nt);

// Random power gain (1/d^2) * 10^(X/10), X ~ N(0, sigma_db^2).
double link_gain(const LinkModel& link, Rng& rng);

}  // namespace phylab

#endif  // PHYLAB_CHANNEL_HPP
