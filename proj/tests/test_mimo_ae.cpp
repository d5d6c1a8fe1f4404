#include "phylab/mimo_ae.hpp"

#include <cmath>

#include "doctest.h"
#include "phylab/cmat.hpp"

using namespace phylab;

namespace {

MimoAeConfig quick_cfg() {
  MimoAeConfig cfg;
  cfg.max_steps = 600;
  cfg.eval_every = 100;
  cfg.patience = 600;
  cfg.power = 10.0;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("codewords satisfy the average power constraint") {
  MimoAeConfig cfg = quick_cfg();
  cfg.max_steps = 1;
  MimoAe ae = train_mimo_ae(cfg, ChannelRealization{CMat::identity(2), 0.5});
  Tensor code = ae.codewords();
  CHECK(code.rows == 16);
  CHECK(code.cols == 4);
  double total = 0.0;
  for (double v : code.v) total += v * v;
  CHECK(total / double(code.rows) == doctest::Approx(cfg.power).epsilon(1e-9));
}

TEST_CASE("trained link works through its channel and fails through a crushed one") {
  MimoAeConfig cfg = quick_cfg();
  const CMat h = CMat::identity(2);
  MimoAe ae = train_mimo_ae(cfg, ChannelRealization{h, 0.5});

  Rng rng = Rng::stream(99, 0, 0, 0);
  const uint64_t n = 2000;
  const uint64_t errs = mimo_ae_block_errors(ae, h, n, rng);
  CHECK(double(errs) / double(n) < 0.2);

  // identity channel: noiseless receive vector is the codeword itself, and
  // a trained decoder must classify every one of its own codewords
  const std::vector<int> self = ae.decode(ae.codewords());
  for (int i = 0; i < int(self.size()); ++i) CHECK(self[i] == i);

  CMat crushed = h;
  for (auto& z : crushed.v) z *= 0.01;
  Rng rng2 = Rng::stream(99, 0, 0, 0);
  const uint64_t errs2 = mimo_ae_block_errors(ae, crushed, n, rng2);
  CHECK(double(errs2) / double(n) > 0.5);
}

TEST_CASE("training is deterministic in the seed") {
  MimoAeConfig cfg = quick_cfg();
  cfg.max_steps = 200;
  const ChannelRealization ch{CMat::identity(2), 0.5};
  MimoAe a = train_mimo_ae(cfg, ch);
  MimoAe b = train_mimo_ae(cfg, ch);
  CHECK(a.val_loss == b.val_loss);
  CHECK(a.steps_run == b.steps_run);
  CHECK(a.codewords().v == b.codewords().v);

  cfg.seed = 8;
  MimoAe c = train_mimo_ae(cfg, ch);
  CHECK(a.codewords().v != c.codewords().v);
}

TEST_CASE("estimation-error evaluation picks entries sensibly") {
  MimoAeConfig cfg = quick_cfg();
  cfg.max_steps = 400;
  CMat swap(2, 2);
  swap.at(0, 1) = 1.0;
  swap.at(1, 0) = 1.0;
  MimoCodebook book = build_mimo_codebook(cfg, {CMat::identity(2), swap});
  REQUIRE(book.entries.size() == 2);

  const CMat truth = CMat::identity(2);
  const double clean = eval_mimo_with_estimation_error(book, truth, 0.0, 3000, 5);
  const double noisy = eval_mimo_with_estimation_error(book, truth, 1.0, 3000, 5);
  CHECK(clean >= 0.0);
  CHECK(clean <= 1.0);
  CHECK(noisy > clean);  // frequent wrong retrievals must hurt
  CHECK(eval_mimo_with_estimation_error(book, truth, 0.0, 3000, 5) == clean);

  MimoCodebook empty;
  CHECK_THROWS_AS(eval_mimo_with_estimation_error(empty, truth, 0.0, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_mimo_with_estimation_error(book, truth, -0.1, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("bad configurations are rejected") {
  MimoAeConfig cfg;
  cfg.k = 9;  // 9 bits x 2 antennas = 2^18 messages
  CHECK_THROWS_AS(train_mimo_ae(cfg, ChannelRealization{CMat::identity(2), 0.5}),
                  std::invalid_argument);
  cfg = MimoAeConfig{};
  cfg.power = 0.0;
  CHECK_THROWS_AS(train_mimo_ae(cfg, ChannelRealization{CMat::identity(2), 0.5}),
                  std::invalid_argument);
  cfg = MimoAeConfig{};
  CHECK_THROWS_AS(train_mimo_ae(cfg, ChannelRealization{CMat::identity(3), 0.5}),
                  std::invalid_argument);
}
