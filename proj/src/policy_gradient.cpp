#include "pgbandit/policy_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgbandit/error.hpp"

namespace pgbandit {

std::vector<double> softmax(std::span<const double> weights) {
  if (weights.empty()) fail(ErrorCode::invalid_argument, "softmax of an empty vector");
  std::vector<double> out(weights.size());
  double max_w = -kWeightClip;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (!std::isfinite(weights[a])) {
      fail(ErrorCode::invalid_argument, "non-finite weight at arm " + std::to_string(a));
    }
    out[a] = std::clamp(weights[a], -kWeightClip, kWeightClip);
    max_w = std::max(max_w, out[a]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - max_w);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

Eigen::MatrixXd softmax_jacobian(std::span<const double> probs) {
  const auto n = static_cast<Eigen::Index>(probs.size());
  Eigen::MatrixXd jac(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      jac(a, b) = probs[a] * ((a == b ? 1.0 : 0.0) - probs[b]);
    }
  }
  return jac;
}

SoftmaxState SoftmaxState::uniform(std::size_t arms) {
  return from_weights(std::vector<double>(arms, 0.0));
}

SoftmaxState SoftmaxState::from_weights(std::vector<double> weights) {
  SoftmaxState s;
  s.probs_ = softmax(weights);
  s.weights_ = std::move(weights);
  return s;
}

void SoftmaxState::shift_weights(std::span<const double> delta) {
  if (delta.size() != weights_.size()) fail(ErrorCode::dimension_mismatch, "weight increment size mismatch");
  for (std::size_t a = 0; a < weights_.size(); ++a) weights_[a] += delta[a];
  probs_ = softmax(weights_);
}

double Baseline::value() const {
  return std::visit(
      [](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ZeroBaseline>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, FixedBaseline>) {
          return b.value;
        } else {
          return b.count == 0 ? 0.0 : b.sum / static_cast<double>(b.count);
        }
      },
      kind_);
}

void Baseline::observe(int reward) {
  if (auto* running = std::get_if<RunningMeanBaseline>(&kind_)) {
    running->sum += reward;
    ++running->count;
  }
}

SoftmaxState pg_step(const SoftmaxState& state, Arm played_arm, int reward, double baseline_value,
                     std::span<const double> alpha) {
  const std::size_t n = state.arms();
  if (played_arm >= n) fail(ErrorCode::invalid_argument, "played arm out of range");
  if (reward != 0 && reward != 1) fail(ErrorCode::invalid_argument, "reward must be 0 or 1");
  if (!std::isfinite(baseline_value)) fail(ErrorCode::invalid_argument, "non-finite baseline");
  if (alpha.size() != 1 && alpha.size() != n) fail(ErrorCode::dimension_mismatch, "learning-rate size mismatch");

  const double advantage = reward - baseline_value;
  const auto& p = state.probs();
  std::vector<double> delta(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double rate = alpha.size() == 1 ? alpha[0] : alpha[a];
    if (!(rate > 0.0)) fail(ErrorCode::invalid_argument, "learning rate must be positive");
    delta[a] = rate * advantage * ((a == played_arm ? 1.0 : 0.0) - p[a]);
  }
  SoftmaxState next = state;
  next.shift_weights(delta);
  return next;
}

SoftmaxState pg_step(const SoftmaxState& state, Arm played_arm, int reward, double baseline_value,
                     double alpha) {
  return pg_step(state, played_arm, reward, baseline_value, std::span<const double>(&alpha, 1));
}

std::vector<double> expected_update_direction(std::span<const double> probs, std::span<const double> means,
                                              double reference, double alpha) {
  if (probs.size() != means.size()) fail(ErrorCode::dimension_mismatch, "state and instance arm counts differ");
  // sum_a'' p_a''(r_a'' - ref)(I_a'a'' - p_a') = p_a'(r_a' - ref) - p_a' * sum_a'' p_a''(r_a'' - ref)
  double weighted = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) weighted += probs[a] * (means[a] - reference);
  std::vector<double> out(probs.size());
  for (std::size_t a = 0; a < probs.size(); ++a) {
    out[a] = alpha * probs[a] * ((means[a] - reference) - weighted);
  }
  return out;
}

std::vector<double> expected_update_direction(const SoftmaxState& state, const BanditInstance& instance,
                                              double alpha) {
  return expected_update_direction(state.probs(), instance.means(), instance.optimal_mean(), alpha);
}

}  // namespace pgbandit
