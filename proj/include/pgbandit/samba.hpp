#pragma once

#include <span>
#include <vector>

#include "pgbandit/bandit.hpp"

namespace pgbandit {

/// Policy on the open probability simplex with its current leader (the
/// highest-probability arm, lowest index on ties).
class SambaState {
 public:
  /// Throws invalid_argument unless probs sum to 1 (1e-9), lie in (0,1), and
  /// alpha lies in (0,1].
  static SambaState make(std::vector<double> probs, double alpha);
  static SambaState uniform(std::size_t arms, double alpha);

  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t arms() const noexcept { return probs_.size(); }
  Arm leader() const noexcept { return leader_; }
  double alpha() const noexcept { return alpha_; }

 private:
  friend SambaState samba_step(const SambaState&, Arm, int, std::span<const double>);
  SambaState() = default;
  void refresh_leader();

  std::vector<double> probs_;
  Arm leader_ = 0;
  double alpha_ = 0.0;
};

/// One importance-sampled SAMBA update. For every a other than the leader,
///   p_a <- p_a + alpha_a p_a^2 (R I_a / p_a - R I_lead / p_lead)
/// with all right-hand values taken before the step; the leader then absorbs
/// 1 - sum of the others and the leader is recomputed. `alpha` overrides the
/// state's base rate per arm when non-empty (used by state-dependent
/// schedules). Throws simplex_violation when any probability leaves (0,1).
SambaState samba_step(const SambaState& state, Arm played_arm, int reward, std::span<const double> alpha = {});

Arm sample_arm(const SambaState& state, RngStream& rng);

/// Largest base rate for which a single worst-case step (leader played,
/// reward 1) keeps every probability positive. The decrement of p_a is
/// alpha p_a^2 / p_lead <= alpha p_a, so the answer is 1 for every state
/// (attained only in the limit; alpha = 1 can hit the boundary).
double admissible_alpha_bound(const SambaState& state);

/// Closed-form expected one-step increment: alpha p_a^2 (r_a - r_lead) for
/// non-leaders, minus their sum for the leader.
std::vector<double> samba_expected_drift(const SambaState& state, const BanditInstance& instance);

}  // namespace pgbandit
