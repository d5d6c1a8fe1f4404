#include "phylab/game.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "phylab/channel.hpp"

namespace phylab {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void check_prob(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be within [0, 1]");
}

void validate(const Scenario& sc, const GameConfig& cfg) {
  for (double p : {sc.tx_power_db, sc.background_power_db, sc.jam_power_db})
    if (!std::isfinite(p)) throw std::invalid_argument("powers must be finite");
  if (!(sc.sinr_threshold > 0.0) || !std::isfinite(sc.sinr_threshold))
    throw std::invalid_argument("sinr_threshold must be positive");
  if (!(sc.shadowing_sigma_db >= 0.0) || !std::isfinite(sc.shadowing_sigma_db))
    throw std::invalid_argument("shadowing_sigma_db must be nonnegative");
  check_prob(sc.arrival_rate, "arrival_rate");
  check_prob(sc.activation_prob, "activation_prob");
  check_prob(sc.ack_miss_prob, "ack_miss_prob");
  if (sc.sense_window == 0) throw std::invalid_argument("sense_window must be >= 1");
  if (sc.history == 0) throw std::invalid_argument("history must be >= 1");
  if (cfg.slots == 0) throw std::invalid_argument("slots must be >= 1");
  if (cfg.train_samples < 2)
    throw std::invalid_argument("train_samples must be >= 2");
  if (!(cfg.defense.p_d >= 0.0 && cfg.defense.p_d <= 100.0))
    throw std::invalid_argument("p_d must be within [0, 100]");
  if (!(cfg.defense.score_threshold > 0.0 && cfg.defense.score_threshold < 1.0))
    throw std::invalid_argument("score_threshold must be within (0, 1)");
  if (cfg.attack == AttackPolicy::kSensingJammer &&
      !(cfg.sensing_tau > 0.0 && std::isfinite(cfg.sensing_tau)))
    throw std::invalid_argument("sensing_tau must be positive");
  const Point pts[] = {sc.tx, sc.rx, sc.background, sc.adversary};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (point_distance(pts[i], pts[j]) <= 0.0)
        throw std::invalid_argument("node positions must be distinct");
}

}  // namespace

double point_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool step_background(BackgroundState& state, const Scenario& sc, Rng& rng) {
  if (state.busy && state.queue == 0) state.busy = false;
  if (!state.busy && state.queue > 0 && rng.bernoulli(sc.activation_prob))
    state.busy = true;
  const bool busy_this_slot = state.busy;
  if (state.busy) {
    assert(state.queue >= 1);
    --state.queue;
  }
  if (rng.bernoulli(sc.arrival_rate)) ++state.queue;
  return busy_this_slot;
}

double sense(const std::vector<double>& gains, size_t window, Rng& rng) {
  if (window == 0) throw std::invalid_argument("sense window must be >= 1");
  const double csd = std::sqrt(0.5);  // CN(0,1) per component
  double acc = 0.0;
  for (size_t w = 0; w < window; ++w) {
    double re = 0.0, im = 0.0;
    for (double g : gains) {
      const double a = std::sqrt(g);
      re += a * rng.normal(0.0, csd);
      im += a * rng.normal(0.0, csd);
    }
    re += rng.normal(0.0, csd);
    im += rng.normal(0.0, csd);
    acc += re * re + im * im;
  }
  return acc / static_cast<double>(window);
}

Tensor sensing_windows(const std::vector<double>& readings, size_t k,
                       size_t first, size_t count) {
  if (k == 0) throw std::invalid_argument("window length must be >= 1");
  if (count == 0) throw std::invalid_argument("need at least one window");
  if (first + 1 < k)
    throw std::invalid_argument("not enough reading history for the first window");
  if (first + count > readings.size())
    throw std::invalid_argument("window range exceeds the reading history");
  Tensor x(count, k);
  for (size_t i = 0; i < count; ++i)
    for (size_t j = 0; j < k; ++j)
      x.at(i, j) = readings[first + i + 1 - k + j];
  return x;
}

bool sensing_jammer_decision(double reading, double tau) {
  assert(tau > 0.0);
  return reading > tau;
}

std::vector<size_t> defense_flip_slots(const std::vector<double>& scores,
                                       double p_d) {
  if (!(p_d >= 0.0 && p_d <= 100.0))
    throw std::invalid_argument("p_d must be within [0, 100]");
  const size_t n = scores.size();
  const auto budget =
      static_cast<size_t>(std::floor(p_d / 100.0 * static_cast<double>(n) + 1e-12));
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double ca = std::min(scores[a], 1.0 - scores[a]);
    const double cb = std::min(scores[b], 1.0 - scores[b]);
    return ca < cb;
  });
  order.resize(std::min(budget, n));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<uint8_t> apply_defense(const std::vector<double>& scores,
                                   const DefensePolicy& policy) {
  std::vector<uint8_t> transmit(scores.size());
  for (size_t i = 0; i < scores.size(); ++i)
    transmit[i] = scores[i] < policy.score_threshold ? 1 : 0;
  for (size_t i : defense_flip_slots(scores, policy.p_d))
    transmit[i] = transmit[i] ? 0 : 1;
  return transmit;
}

ClassifierConfig transmitter_classifier_config() {
  ClassifierConfig cfg;
  cfg.hidden = {100};
  cfg.hidden_act = Act::kSigmoid;
  cfg.log_features = true;
  cfg.restarts = 5;
  return cfg;
}

ClassifierConfig adversary_classifier_config() {
  ClassifierConfig cfg;
  cfg.hidden = {50, 50};
  cfg.hidden_act = Act::kTanh;
  cfg.log_features = true;
  cfg.restarts = 5;
  return cfg;
}

GameResult run_game(const Scenario& sc, const GameConfig& cfg) {
  validate(sc, cfg);
  const size_t k = sc.history;
  const size_t p1 = cfg.train_samples + k - 1;  // T probes and collects
  const size_t p2 = cfg.train_samples;          // A listens and collects
  const size_t p3 = cfg.slots;                  // measured under attack
  const size_t total = p1 + p2 + p3;

  const double power_t = db_to_linear(sc.tx_power_db);
  const double power_b = db_to_linear(sc.background_power_db);
  const double power_j = db_to_linear(sc.jam_power_db);
  const double sigma = sc.shadowing_sigma_db;
  const LinkModel link_bt{point_distance(sc.background, sc.tx), sc.background_power_db, sigma};
  const LinkModel link_ba{point_distance(sc.background, sc.adversary), sc.background_power_db, sigma};
  const LinkModel link_br{point_distance(sc.background, sc.rx), sc.background_power_db, sigma};
  const LinkModel link_tr{point_distance(sc.tx, sc.rx), sc.tx_power_db, sigma};
  const LinkModel link_ta{point_distance(sc.tx, sc.adversary), sc.tx_power_db, sigma};
  const LinkModel link_ar{point_distance(sc.adversary, sc.rx), sc.jam_power_db, sigma};

  Rng bg_rng = Rng::stream(cfg.seed, 0x6A3E, 0, 0);
  Rng sense_t_rng = Rng::stream(cfg.seed, 0x6A3E, 1, 0);
  Rng sense_a_rng = Rng::stream(cfg.seed, 0x6A3E, 2, 0);
  Rng sinr_rng = Rng::stream(cfg.seed, 0x6A3E, 3, 0);
  Rng jam_rng = Rng::stream(cfg.seed, 0x6A3E, 4, 0);
  Rng ack_rng = Rng::stream(cfg.seed, 0x6A3E, 5, 0);
  const uint64_t seed_clf_t = Rng::stream(cfg.seed, 0x6A3E, 6, 0).next_u64();
  const uint64_t seed_clf_a = Rng::stream(cfg.seed, 0x6A3E, 7, 0).next_u64();

  // The channel occupancy and both nodes' readings never depend on anyone's
  // transmit or jam decisions (sensing happens at the slot start, before the
  // data period), so the whole horizon can be drawn up front.
  std::vector<int> busy(total);
  std::vector<double> hist_t(total), hist_a(total);
  BackgroundState bg;
  for (size_t t = 0; t < total; ++t) {
    busy[t] = step_background(bg, sc, bg_rng) ? 1 : 0;
    std::vector<double> gains_t, gains_a;
    if (busy[t]) {
      gains_t.push_back(power_b * link_gain(link_bt, sense_t_rng));
      gains_a.push_back(power_b * link_gain(link_ba, sense_a_rng));
    }
    hist_t[t] = sense(gains_t, sc.sense_window, sense_t_rng);
    hist_a[t] = sense(gains_a, sc.sense_window, sense_a_rng);
  }

  // ACK iff the SINR at R clears the threshold, with whoever else is on the
  // air that slot as interference on top of unit noise.
  auto resolve_ack = [&](bool tx_on, bool busy_now, bool jam_now) -> bool {
    if (!tx_on) return false;
    const double signal = power_t * link_gain(link_tr, sinr_rng);
    double interference = 1.0;
    if (busy_now) interference += power_b * link_gain(link_br, sinr_rng);
    if (jam_now) interference += power_j * link_gain(link_ar, sinr_rng);
    return signal / interference > sc.sinr_threshold;
  };

  GameResult out;

  // Phase 1: T transmits in every slot and labels each sampled slot busy
  // exactly when the transmission went unacknowledged.
  std::vector<int> ack1(p1);
  for (size_t t = 0; t < p1; ++t) ack1[t] = resolve_ack(true, busy[t] != 0, false) ? 1 : 0;
  out.features_t = sensing_windows(hist_t, k, k - 1, cfg.train_samples);
  out.labels_t.resize(cfg.train_samples);
  out.truth_t.resize(cfg.train_samples);
  for (size_t i = 0; i < cfg.train_samples; ++i) {
    out.labels_t[i] = ack1[k - 1 + i] ? 0 : 1;
    out.truth_t[i] = busy[k - 1 + i];
  }
  out.classifier_t =
      train_binary_classifier(out.features_t, out.labels_t, transmitter_classifier_config(), seed_clf_t);

  // Score T's live rule against the true channel state on the held-out half.
  {
    const size_t half = cfg.train_samples / 2;
    const size_t rest = cfg.train_samples - half;
    Tensor xh(rest, k);
    for (size_t i = 0; i < rest; ++i)
      for (size_t j = 0; j < k; ++j) xh.at(i, j) = out.features_t.at(half + i, j);
    const std::vector<double> s = out.classifier_t.prob_positive(xh);
    uint64_t idle = 0, busy_n = 0, idle_as_busy = 0, busy_as_idle = 0;
    for (size_t i = 0; i < rest; ++i) {
      const bool said_busy = s[i] >= cfg.defense.score_threshold;
      if (out.truth_t[half + i]) {
        ++busy_n;
        if (!said_busy) ++busy_as_idle;
      } else {
        ++idle;
        if (said_busy) ++idle_as_busy;
      }
    }
    out.e_t_idle_as_busy = idle ? double(idle_as_busy) / double(idle) : 0.0;
    out.e_t_busy_as_idle = busy_n ? double(busy_as_idle) / double(busy_n) : 0.0;
  }

  // Phase 2: T runs its classifier (with any defense flips) while A listens
  // and records which slots end in an ACK.
  std::vector<double> score2;
  {
    const Tensor xw = sensing_windows(hist_t, k, p1, p2);
    score2 = out.classifier_t.prob_positive(xw);
  }
  const std::vector<uint8_t> act2 = apply_defense(score2, cfg.defense);
  out.features_a = sensing_windows(hist_a, k, p1, p2);
  out.labels_a.resize(p2);
  for (size_t i = 0; i < p2; ++i) {
    const size_t t = p1 + i;
    const bool ack = resolve_ack(act2[i] != 0, busy[t] != 0, false);
    bool observed = ack;
    if (ack && sc.ack_miss_prob > 0.0 && ack_rng.bernoulli(sc.ack_miss_prob))
      observed = false;
    out.labels_a[i] = observed ? 1 : 0;
  }

  if (cfg.attack == AttackPolicy::kDlJammer) {
    const int first = out.labels_a.empty() ? 0 : out.labels_a.front();
    bool mixed = false;
    for (int v : out.labels_a) mixed = mixed || v != first;
    if (!mixed)
      throw TrainingError("adversary observed a single outcome class; cannot train");
    out.classifier_a =
        train_binary_classifier(out.features_a, out.labels_a, adversary_classifier_config(), seed_clf_a);
    out.adversary_trained = true;
  }

  // Phase 3: measured slots.
  std::vector<double> score3;
  {
    const Tensor xw = sensing_windows(hist_t, k, p1 + p2, p3);
    score3 = out.classifier_t.prob_positive(xw);
  }
  const std::vector<size_t> flips = defense_flip_slots(score3, cfg.defense.p_d);
  std::vector<uint8_t> act3(p3), flip3(p3, 0);
  for (size_t i = 0; i < p3; ++i)
    act3[i] = score3[i] < cfg.defense.score_threshold ? 1 : 0;
  for (size_t i : flips) {
    act3[i] = act3[i] ? 0 : 1;
    flip3[i] = 1;
  }

  std::vector<uint8_t> jam3(p3, 0);
  if (cfg.attack == AttackPolicy::kDlJammer) {
    const Tensor xa = sensing_windows(hist_a, k, p1 + p2, p3);
    const std::vector<double> pa = out.classifier_a.prob_positive(xa);
    for (size_t i = 0; i < p3; ++i) jam3[i] = pa[i] > 0.5 ? 1 : 0;
  }

  out.slot_log.resize(p3);
  GameMetrics& m = out.metrics;
  m.slots = p3;
  for (size_t i = 0; i < p3; ++i) {
    const size_t t = p1 + p2 + i;
    if (cfg.attack == AttackPolicy::kSensingJammer) {
      // Reactive: A reads the data period itself, so T's own signal is in it.
      std::vector<double> gains;
      if (act3[i]) gains.push_back(power_t * link_gain(link_ta, jam_rng));
      if (busy[t]) gains.push_back(power_b * link_gain(link_ba, jam_rng));
      jam3[i] = sensing_jammer_decision(sense(gains, sc.sense_window, jam_rng),
                                        cfg.sensing_tau)
                    ? 1
                    : 0;
    }
    const bool ack = resolve_ack(act3[i] != 0, busy[t] != 0, jam3[i] != 0);
    SlotLog& log = out.slot_log[i];
    log.t = i;
    log.channel_busy = busy[t] != 0;
    log.sensing_t = hist_t[t];
    log.sensing_a = hist_a[t];
    log.t_transmitted = act3[i] != 0;
    log.a_jammed = jam3[i] != 0;
    log.ack = ack;
    log.score_t = score3[i];
    log.flipped = flip3[i] != 0;
    if (act3[i]) ++m.attempts;
    if (jam3[i]) ++m.jams;
    if (ack) ++m.successes;
  }
  m.throughput = double(m.successes) / double(m.slots);
  m.success_ratio = m.attempts ? double(m.successes) / double(m.attempts) : 0.0;
  out.flip_fraction = double(flips.size()) / double(p3);
  return out;
}

}  // namespace phylab
