#include "woin/learning_automaton.hpp"

#include <stdexcept>

namespace woin {

std::vector<double> init_probs(int action_count) {
  if (action_count < 1) throw std::invalid_argument("init_probs: need at least one action");
  return std::vector<double>(static_cast<std::size_t>(action_count),
                             1.0 / static_cast<double>(action_count));
}

int select_action(const std::vector<double>& probs, RngStream* rng) {
  return rng->categorical(probs);
}

RewardValue la_reward(std::int64_t beta_asla, std::int64_t price) {
  if (beta_asla <= 0) throw std::invalid_argument("la_reward: no ASLA decision to reward");
  if (price < 1) throw std::invalid_argument("la_reward: price must be >= 1");
  RewardValue r;
  r.raw = static_cast<double>(beta_asla) / static_cast<double>(price);
  // R_min = 0, R_max = beta_asla
  r.normalized = 1.0 / static_cast<double>(price);
  return r;
}

PenaltyValue la_penalty(std::int64_t beta_sla, std::int64_t beta_asla,
                        std::int64_t delivered, std::int64_t price, std::int64_t price_bar) {
  if (beta_asla <= 0) throw std::invalid_argument("la_penalty: no ASLA decision to penalize");
  PenaltyValue l;
  if (delivered >= beta_sla) {
    l.raw = static_cast<double>(delivered - beta_sla - beta_asla) * static_cast<double>(price);
  } else {
    l.raw = -static_cast<double>(beta_asla) * static_cast<double>(price);
  }
  // L_min = -beta_asla * P_bar, L_max = 0
  const double scale = static_cast<double>(beta_asla) * static_cast<double>(price_bar);
  l.normalized = (l.raw + scale) / scale;
  return l;
}

void la_update(std::vector<double>* probs, int action, bool failure, double value,
               bool raw_negative_spread) {
  auto& p = *probs;
  const int n = static_cast<int>(p.size());
  if (action < 0 || action >= n) throw std::invalid_argument("la_update: bad action index");
  if (value < 0.0 || value > 1.0) throw std::invalid_argument("la_update: value outside [0,1]");
  if (!failure) {
    for (int j = 0; j < n; ++j) p[j] = (1.0 - value) * p[j];
    p[action] += value;
  } else {
    if (n == 1) return;  // no alternative to shift mass to
    const double spread = raw_negative_spread ? value / static_cast<double>(1 - n)
                                              : value / static_cast<double>(n - 1);
    for (int j = 0; j < n; ++j) p[j] = spread + (1.0 - value) * p[j];
    p[action] -= spread;
  }
}

LearningAutomaton::LearningAutomaton(int state_count, int action_count,
                                     bool raw_negative_spread)
    : raw_negative_spread_(raw_negative_spread) {
  if (state_count < 1) throw std::invalid_argument("LearningAutomaton: state_count >= 1");
  per_state_.assign(static_cast<std::size_t>(state_count), init_probs(action_count));
}

const std::vector<double>& LearningAutomaton::probs(int state) const {
  if (state < 1 || state > static_cast<int>(per_state_.size())) {
    throw std::out_of_range("LearningAutomaton: state index");
  }
  return per_state_[static_cast<std::size_t>(state - 1)];
}

int LearningAutomaton::pick_action(int state, RngStream* rng) {
  return select_action(probs(state), rng);
}

Outcome LearningAutomaton::resolve(const PendingFeedback& pending,
                                   std::int64_t delivered_bytes, std::int64_t price_bar) {
  Outcome out;
  out.delivered_bytes = delivered_bytes;
  out.failure = delivered_bytes < pending.beta_sla + pending.beta_asla;
  if (!out.failure) {
    const RewardValue r = la_reward(pending.beta_asla, pending.price);
    out.raw_value = r.raw;
    out.normalized_value = r.normalized;
  } else {
    const PenaltyValue l = la_penalty(pending.beta_sla, pending.beta_asla, delivered_bytes,
                                      pending.price, price_bar);
    out.raw_value = l.raw;
    out.normalized_value = l.normalized;
  }
  auto& vec = per_state_[static_cast<std::size_t>(pending.state - 1)];
  la_update(&vec, pending.action, out.failure, out.normalized_value, raw_negative_spread_);
  ++updates_applied_;
  return out;
}

}  // namespace woin
