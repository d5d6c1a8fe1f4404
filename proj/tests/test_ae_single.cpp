#include <doctest.h>

#include <cmath>
#include <set>

#include "phylab/ae_single.hpp"
#include "phylab/stats.hpp"

using namespace phylab;

TEST_CASE("untrained encoder already satisfies the power constraints") {
  SingleAeConfig cfg;
  cfg.n = 2;
  cfg.k = 2;
  cfg.max_steps = 1;  // effectively untrained
  cfg.eval_every = 1;
  cfg.seed = 2;

  SUBCASE("per-codeword energy") {
    cfg.energy_constraint = true;
    SingleAe ae = train_single_ae(cfg);
    Tensor c = ae.constellation();
    REQUIRE(c.rows == 4);
    for (size_t i = 0; i < c.rows; ++i) {
      double e = 0.0;
      for (size_t j = 0; j < c.cols; ++j) e += c.at(i, j) * c.at(i, j);
      CHECK(e == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  SUBCASE("batch average power") {
    cfg.energy_constraint = false;
    SingleAe ae = train_single_ae(cfg);
    Tensor c = ae.constellation();
    double total = 0.0;
    for (double v : c.v) total += v * v;
    // cols/2 per row on average: 4 rows x 1.0
    CHECK(total / c.rows == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trained (2,2) autoencoder reaches near-coherent-BPSK reliability") {
  SingleAeConfig cfg;
  cfg.n = 2;
  cfg.k = 2;
  cfg.seed = 3;
  SingleAe ae = train_single_ae(cfg);

  // Four clearly separated signal points.
  Tensor c = ae.constellation();
  REQUIRE(c.rows == 4);
  double min_d2 = 1e9;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j) {
      double d2 = 0.0;
      for (size_t t = 0; t < c.cols; ++t) {
        const double d = c.at(i, t) - c.at(j, t);
        d2 += d * d;
      }
      min_d2 = std::min(min_d2, d2);
    }
  // Optimal 4-point layout on the energy-2 circle has min distance 2.
  CHECK(min_d2 > 1.5 * 1.5);

  // Every noiseless codeword decodes back to its own message.
  const std::vector<int> self = ae.decode(c);
  for (int i = 0; i < 4; ++i) CHECK(self[i] == i);

  // Block error rate at 7 dB close to two independent BPSK bits.
  BlerOptions opt;
  opt.min_errors = 200;
  ErrorRateResult res = run_bler(single_ae_system(ae), {7.0}, opt, 31);
  const double p = q_func(std::sqrt(2.0 * std::pow(10.0, 0.7)));
  const double oracle = 1.0 - (1.0 - p) * (1.0 - p);
  CHECK(res.points[0].rate > 0.4 * oracle);
  CHECK(res.points[0].rate < 2.0 * oracle);
}

TEST_CASE("autoencoder training is deterministic in the seed") {
  SingleAeConfig cfg;
  cfg.n = 2;
  cfg.k = 2;
  cfg.max_steps = 400;
  cfg.seed = 9;
  SingleAe a = train_single_ae(cfg);
  SingleAe b = train_single_ae(cfg);
  CHECK(a.steps_run == b.steps_run);
  CHECK(a.val_loss == b.val_loss);
  CHECK(a.constellation().v == b.constellation().v);

  cfg.seed = 10;
  SingleAe c = train_single_ae(cfg);
  CHECK(a.constellation().v != c.constellation().v);
}

TEST_CASE("autoencoder config validation") {
  SingleAeConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(train_single_ae(cfg), std::invalid_argument);
  cfg.k = 17;
  CHECK_THROWS_AS(train_single_ae(cfg), std::invalid_argument);
  cfg = {};
  cfg.lr = 0.0;
  CHECK_THROWS_AS(train_single_ae(cfg), std::invalid_argument);
  cfg = {};
  cfg.n = 0;
  CHECK_THROWS_AS(train_single_ae(cfg), std::invalid_argument);
}
