// Per-UE learning automaton over price levels: one action-probability vector
// per buffer state, linear reward/penalty updates driven by end-to-end
// delivery feedback.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "woin/rng.hpp"
#include "woin/time_types.hpp"

namespace woin {

struct RewardValue {
  double raw = 0.0;         // beta_asla / P
  double normalized = 0.0;  // raw / beta_asla = 1/P
};

struct PenaltyValue {
  double raw = 0.0;         // (T - beta_sla - beta_asla)*P, or -beta_asla*P
  double normalized = 0.0;  // (raw + beta_asla*P_bar) / (beta_asla*P_bar)
};

struct Outcome {
  bool failure = false;     // B
  std::int64_t delivered_bytes = 0;
  double raw_value = 0.0;
  double normalized_value = 0.0;
};

// Snapshot taken when a price decision is made; resolved exactly once.
struct PendingFeedback {
  int ue = -1;
  std::int64_t tti = -1;
  int state = 0;
  int action = -1;
  std::int64_t beta_sla = 0;
  std::int64_t beta_asla = 0;
  std::int64_t price = 0;
  bool deferred = false;  // true once ASLA bytes actually left for the ONU
};

std::vector<double> init_probs(int action_count);

int select_action(const std::vector<double>& probs, RngStream* rng);

RewardValue la_reward(std::int64_t beta_asla, std::int64_t price);

PenaltyValue la_penalty(std::int64_t beta_sla, std::int64_t beta_asla,
                        std::int64_t delivered, std::int64_t price, std::int64_t price_bar);

// Linear reward/penalty step on probs in place. failure=false rewards action
// a; failure=true penalizes it, spreading v/(n-1) over the others (or
// v/(1-n) when raw_negative_spread, reproducing the unnormalized variant).
void la_update(std::vector<double>* probs, int action, bool failure, double value,
               bool raw_negative_spread = false);

class LearningAutomaton {
 public:
  LearningAutomaton() = default;
  LearningAutomaton(int state_count, int action_count, bool raw_negative_spread = false);

  const std::vector<double>& probs(int state) const;
  int pick_action(int state, RngStream* rng);

  // Applies the reward/penalty implied by delivered bytes vs the snapshot.
  Outcome resolve(const PendingFeedback& pending, std::int64_t delivered_bytes,
                  std::int64_t price_bar);

  std::int64_t updates_applied() const { return updates_applied_; }

 private:
  std::vector<std::vector<double>> per_state_;  // [state-1] -> probs over actions
  bool raw_negative_spread_ = false;
  std::int64_t updates_applied_ = 0;
};

}  // namespace woin
