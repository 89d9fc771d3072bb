#include "pgbandit/samba.hpp"

#include <cmath>
#include <string>

#include "pgbandit/error.hpp"

namespace pgbandit {
namespace {

Arm argmax_lowest(const std::vector<double>& v) {
  Arm best = 0;
  for (Arm a = 1; a < v.size(); ++a) {
    if (v[a] > v[best]) best = a;
  }
  return best;
}

}  // namespace

SambaState SambaState::make(std::vector<double> probs, double alpha) {
  if (probs.size() < 2) fail(ErrorCode::invalid_argument, "SAMBA state needs at least 2 arms");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::invalid_argument, "SAMBA base rate must lie in (0,1], got " + std::to_string(alpha));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (!(probs[a] > 0.0 && probs[a] < 1.0)) {
      fail(ErrorCode::invalid_argument, "probability of arm " + std::to_string(a) + " outside (0,1)");
    }
    total += probs[a];
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::invalid_argument, "probabilities do not sum to 1");
  SambaState s;
  s.probs_ = std::move(probs);
  s.alpha_ = alpha;
  s.refresh_leader();
  return s;
}

SambaState SambaState::uniform(std::size_t arms, double alpha) {
  return make(std::vector<double>(arms, 1.0 / static_cast<double>(arms)), alpha);
}

void SambaState::refresh_leader() { leader_ = argmax_lowest(probs_); }

SambaState samba_step(const SambaState& state, Arm played_arm, int reward, std::span<const double> alpha) {
  const std::size_t n = state.arms();
  if (played_arm >= n) fail(ErrorCode::invalid_argument, "played arm out of range");
  if (reward != 0 && reward != 1) fail(ErrorCode::invalid_argument, "reward must be 0 or 1");
  if (!alpha.empty() && alpha.size() != n) fail(ErrorCode::dimension_mismatch, "learning-rate size mismatch");

  SambaState next = state;
  if (reward == 0) return next;

  const auto& p = state.probs_;
  const Arm lead = state.leader_;
  const double leader_term = played_arm == lead ? 1.0 / p[lead] : 0.0;
  double others = 0.0;
  for (Arm a = 0; a < n; ++a) {
    if (a == lead) continue;
    const double rate = alpha.empty() ? state.alpha_ : alpha[a];
    const double own_term = played_arm == a ? 1.0 / p[a] : 0.0;
    const double updated = p[a] + rate * p[a] * p[a] * (own_term - leader_term);
    if (!(updated > 0.0 && updated < 1.0)) {
      fail(ErrorCode::simplex_violation, "SAMBA step drove p_" + std::to_string(a) + " to " +
                                             std::to_string(updated) + " (learning rate too large)");
    }
    next.probs_[a] = updated;
    others += updated;
  }
  next.probs_[lead] = 1.0 - others;
  if (!(next.probs_[lead] > 0.0 && next.probs_[lead] < 1.0)) {
    fail(ErrorCode::simplex_violation, "SAMBA step drove the leader probability to " +
                                           std::to_string(next.probs_[lead]) + " (learning rate too large)");
  }
  next.refresh_leader();
  return next;
}

Arm sample_arm(const SambaState& state, RngStream& rng) { return sample_categorical(state.probs(), rng); }

double admissible_alpha_bound(const SambaState&) { return 1.0; }

std::vector<double> samba_expected_drift(const SambaState& state, const BanditInstance& instance) {
  if (state.arms() != instance.arms()) fail(ErrorCode::dimension_mismatch, "state and instance arm counts differ");
  const auto& p = state.probs();
  const Arm lead = state.leader();
  std::vector<double> drift(p.size(), 0.0);
  double total = 0.0;
  for (Arm a = 0; a < p.size(); ++a) {
    if (a == lead) continue;
    drift[a] = state.alpha() * p[a] * p[a] * (instance.mean(a) - instance.mean(lead));
    total += drift[a];
  }
  drift[lead] = -total;
  return drift;
}

}  // namespace pgbandit
