#ifndef PHYLAB_GAME_HPP
#define PHYLAB_GAME_HPP

#include <cstdint>
#include <vector>

#include "phylab/classifier.hpp"
#include "phylab/rng.hpp"
#include "phylab/tensor.hpp"

namespace phylab {

struct Point {
  double x = 0.0, y = 0.0;
};

double point_distance(const Point& a, const Point& b);

// Four-node spectrum game on a 10 x 10 grid: transmitter T talks to
// receiver R whenever it believes the channel is free, background node B
// occupies the channel in bursts, and adversary A tries to jam T's
// transmissions. Powers are dB above the unit receiver noise floor; every
// link sees independent log-normal shadowing redrawn each slot.
struct Scenario {
  Point tx{0.0, 0.0};           // T
  Point rx{10.0, 0.0};          // R
  Point background{0.0, 10.0};  // B
  Point adversary{10.0, 10.0};  // A
  double tx_power_db = 30.0;
  double background_power_db = 30.0;
  double jam_power_db = 30.0;
  double sinr_threshold = 3.0;       // linear; ACK iff SINR at R exceeds it
  double shadowing_sigma_db = 3.04;
  double arrival_rate = 0.2;         // packets per slot entering B's queue
  double activation_prob = 0.8;      // chance an idle B with backlog starts
  size_t sense_window = 16;          // intra-slot samples behind one reading
  size_t history = 10;               // readings per classifier input window
  double ack_miss_prob = 0.0;        // chance A fails to observe an ACK
};

// B's queue. Arrivals are Bernoulli(arrival_rate); an idle node with
// backlog activates with activation_prob and then transmits every slot
// until the queue drains. Arrivals land after the service decision, so a
// fresh packet is first served in a later slot.
struct BackgroundState {
  uint64_t queue = 0;
  bool busy = false;
};

// Advances one slot and returns whether the channel is busy during it.
bool step_background(BackgroundState& state, const Scenario& sc, Rng& rng);

// One received-power reading: the mean over `window` samples of
// |sum_i sqrt(gains[i]) x_i + n|^2 with x_i, n iid CN(0,1). `gains` are the
// received linear powers of the active transmitters; with none the reading
// averages pure noise (mean 1).
double sense(const std::vector<double>& gains, size_t window, Rng& rng);

// Feature rows for slots [first, first + count): row i holds
// readings[first + i - k + 1 .. first + i]. Requires first >= k - 1.
Tensor sensing_windows(const std::vector<double>& readings, size_t k,
                       size_t first, size_t count);

// Threshold jammer: jam exactly when the current reading exceeds tau.
bool sensing_jammer_decision(double reading, double tau);

struct DefensePolicy {
  double p_d = 0.0;              // percent of slots whose action flips
  double score_threshold = 0.25; // T transmits iff its busy score is below
};

// Indices of the floor(p_d% of n) most confidently scored slots, ranked by
// min(score, 1 - score) ascending with ties broken by slot order.
std::vector<size_t> defense_flip_slots(const std::vector<double>& scores,
                                       double p_d);

// Transmit decisions from busy scores (transmit iff score below the
// threshold) with the selected slots flipped. Throws std::invalid_argument
// when p_d is outside [0, 100].
std::vector<uint8_t> apply_defense(const std::vector<double>& scores,
                                   const DefensePolicy& policy);

enum class AttackPolicy { kNone, kDlJammer, kSensingJammer };

struct GameConfig {
  AttackPolicy attack = AttackPolicy::kNone;
  double sensing_tau = 3.4;  // threshold for AttackPolicy::kSensingJammer
  DefensePolicy defense;
  size_t slots = 500;          // measured test slots
  size_t train_samples = 1000; // collected per classifier before the test
  uint64_t seed = 1;
};

struct SlotLog {
  uint64_t t = 0;              // index within the test phase
  bool channel_busy = false;   // ground truth for B
  double sensing_t = 0.0;      // T's slot-start reading
  double sensing_a = 0.0;      // A's slot-start reading
  bool t_transmitted = false;
  bool a_jammed = false;
  bool ack = false;
  double score_t = 0.0;        // T's busy score for the slot
  bool flipped = false;
};

struct GameMetrics {
  uint64_t slots = 0;
  uint64_t attempts = 0;   // slots where T transmitted
  uint64_t successes = 0;  // slots acknowledged by R
  uint64_t jams = 0;       // slots where A transmitted
  double throughput = 0.0;     // successes / slots
  double success_ratio = 0.0;  // successes / attempts, 0 with no attempts
};

struct GameResult {
  GameMetrics metrics;
  std::vector<SlotLog> slot_log;  // test phase only

  BinaryClassifier classifier_t;
  // Held-out error of T's live decision rule against the true channel
  // state: idle slots called busy, and busy slots called idle.
  double e_t_idle_as_busy = 0.0;
  double e_t_busy_as_idle = 0.0;

  BinaryClassifier classifier_a;  // trained only for AttackPolicy::kDlJammer
  bool adversary_trained = false;

  // Collected datasets (one row per sampled slot, `history` readings wide).
  Tensor features_t;
  std::vector<int> labels_t;  // 1 = busy, derived from missing ACKs
  std::vector<int> truth_t;   // actual channel state per sampled slot
  Tensor features_a;
  std::vector<int> labels_a;  // 1 = ACK observed by A

  double flip_fraction = 0.0;  // realized over the test phase
};

// Plays the full game: T probes while collecting its dataset, trains its
// sensing classifier, then operates under the defense policy while A
// collects; A trains its own classifier when the attack is kDlJammer; the
// final `slots` slots are measured with the attack active.
GameResult run_game(const Scenario& sc, const GameConfig& cfg);

// Hyperparameters for T's channel-state classifier: one hidden layer of
// 100 sigmoid units.
ClassifierConfig transmitter_classifier_config();

// Hyperparameters for A's ACK predictor: two hidden layers of 50 tanh units.
ClassifierConfig adversary_classifier_config();

}  // namespace phylab

#endif  // PHYLAB_GAME_HPP
