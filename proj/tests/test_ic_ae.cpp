#include "phylab/ic_ae.hpp"

#include <cmath>

#include "doctest.h"
#include "phylab/channel.hpp"

using namespace phylab;

namespace {

IcAeConfig quick_cfg() {
  IcAeConfig cfg;
  cfg.n = 1;
  cfg.k = 1;
  cfg.max_steps = 3000;
  cfg.eval_every = 100;
  cfg.patience = 800;
  cfg.finetune_steps = 0;
  cfg.seed = 1;
  return cfg;
}

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("both codebooks satisfy the average power constraint") {
  IcAeConfig cfg = quick_cfg();
  cfg.max_steps = 1;
  IcPair pair = train_ic_pair(cfg);
  for (int user : {1, 2}) {
    Tensor code = pair.codebook(user);
    CHECK(code.rows == 2);
    CHECK(code.cols == 2);
    double total = 0.0;
    for (double v : code.v) total += v * v;
    // average power one per complex channel use
    CHECK(total / double(code.rows) == doctest::Approx(double(cfg.n)).epsilon(1e-9));
  }
}

TEST_CASE("trained (1,1) pair approaches the single-user error rate") {
  IcAeConfig cfg = quick_cfg();
  IcPair pair = train_ic_pair(cfg);
  CHECK(pair.alpha_final > 0.0);
  CHECK(pair.alpha_final < 1.0);

  const double ortho = ic_orthogonality(pair);
  CHECK(ortho >= 0.0);
  CHECK(ortho <= 1.0 + 1e-12);

  // noiseless superposition of any message pair must decode exactly
  const Tensor c1 = pair.codebook(1);
  const Tensor c2 = pair.codebook(2);
  Tensor y(4, 2);
  std::vector<int> want1(4), want2(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int r = 2 * a + b;
      want1[r] = a;
      want2[r] = b;
      for (size_t j = 0; j < 2; ++j) y.at(r, j) = c1.at(a, j) + c2.at(b, j);
    }
  CHECK(pair.decode(1, y) == want1);
  CHECK(pair.decode(2, y) == want2);

  // two orthogonal binary users can each match isolated antipodal signaling
  const double ebno_db = 7.0;
  const double oracle = q_func(std::sqrt(2.0 * std::pow(10.0, ebno_db / 10.0)));
  TrialFn sys = ic_pair_system(pair);
  Rng rng = Rng::stream(42, 0, 0, 0);
  const uint64_t n_trials = 400000;
  const uint64_t errs = sys(ebno_db, n_trials, rng);
  const double bler = double(errs) / double(n_trials);
  CHECK(bler > oracle / 3.0);
  CHECK(bler < oracle * 3.0);
}

TEST_CASE("training is deterministic in the seed") {
  IcAeConfig cfg = quick_cfg();
  cfg.max_steps = 400;
  IcPair a = train_ic_pair(cfg);
  IcPair b = train_ic_pair(cfg);
  CHECK(a.val_loss == b.val_loss);
  CHECK(a.codebook(1).v == b.codebook(1).v);
  CHECK(a.codebook(2).v == b.codebook(2).v);

  cfg.seed = 2;
  IcPair c = train_ic_pair(cfg);
  CHECK(a.codebook(1).v != c.codebook(1).v);
}

TEST_CASE("bad configurations are rejected") {
  IcAeConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(train_ic_pair(cfg), std::invalid_argument);
  cfg = IcAeConfig{};
  cfg.n = 0;
  CHECK_THROWS_AS(train_ic_pair(cfg), std::invalid_argument);
  cfg = IcAeConfig{};
  cfg.lr = -1.0;
  CHECK_THROWS_AS(train_ic_pair(cfg), std::invalid_argument);

  IcAeConfig two = quick_cfg();
  two.k = 2;
  two.n = 2;
  two.max_steps = 1;
  IcPair pair = train_ic_pair(two);
  CHECK_THROWS_AS(ic_orthogonality(pair), std::invalid_argument);
}
