#pragma once

#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pgbandit/bandit.hpp"

namespace pgbandit {

/// Weights are clipped to this magnitude before exponentiation.
inline constexpr double kWeightClip = 700.0;

/// Max-subtracted softmax; throws on non-finite weights.
std::vector<double> softmax(std::span<const double> weights);

/// d p_a / d w_a' = p_a (I_aa' - p_a'). Symmetric, rows sum to zero.
Eigen::MatrixXd softmax_jacobian(std::span<const double> probs);

class SoftmaxState {
 public:
  static SoftmaxState uniform(std::size_t arms);
  static SoftmaxState from_weights(std::vector<double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t arms() const noexcept { return weights_.size(); }

  /// Adds `delta` to the weights and refreshes the cached probabilities.
  void shift_weights(std::span<const double> delta);

 private:
  std::vector<double> weights_;
  std::vector<double> probs_;
};

struct ZeroBaseline {};
struct FixedBaseline {
  double value;
};
/// Empirical mean of every reward observed so far (0 before the first).
struct RunningMeanBaseline {
  double sum = 0.0;
  std::size_t count = 0;
};

/// Arm-independent reward offset B. The value is read before the current
/// reward is folded in, so it never depends on the arm being updated.
class Baseline {
 public:
  using Kind = std::variant<ZeroBaseline, FixedBaseline, RunningMeanBaseline>;

  Baseline() = default;
  explicit Baseline(Kind kind) : kind_(kind) {}

  double value() const;
  void observe(int reward);
  const Kind& kind() const noexcept { return kind_; }

 private:
  Kind kind_ = RunningMeanBaseline{};
};

/// w_a <- w_a + alpha_a (R - B)(I_{a,played} - p_a) for all arms at once, using
/// the probabilities from before the update. `alpha` has one entry per arm or a
/// single shared entry.
SoftmaxState pg_step(const SoftmaxState& state, Arm played_arm, int reward, double baseline_value,
                     std::span<const double> alpha);
SoftmaxState pg_step(const SoftmaxState& state, Arm played_arm, int reward, double baseline_value,
                     double alpha);

/// Mean-field drift of the weights:
///   dw_a'/dt = alpha * sum_a'' p_a'' (r_a'' - r*) (I_a'a'' - p_a').
std::vector<double> expected_update_direction(const SoftmaxState& state, const BanditInstance& instance,
                                              double alpha);

/// Same drift with r* replaced by an arbitrary reference reward.
std::vector<double> expected_update_direction(std::span<const double> probs, std::span<const double> means,
                                              double reference, double alpha);

}  // namespace pgbandit
