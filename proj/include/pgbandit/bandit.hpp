#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pgbandit {

using Arm = std::size_t;

/// Bernoulli bandit: arm a pays 1 with probability means[a], else 0.
/// Immutable once built; the optimal arm is the lowest index attaining the max.
class BanditInstance {
 public:
  static BanditInstance make(std::span<const double> means);

  std::size_t arms() const noexcept { return means_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& gaps() const noexcept { return gaps_; }
  double mean(Arm a) const { return means_.at(a); }
  double gap(Arm a) const { return gaps_.at(a); }
  Arm optimal_arm() const noexcept { return optimal_arm_; }
  double optimal_mean() const noexcept { return optimal_mean_; }

 private:
  BanditInstance() = default;
  std::vector<double> means_;
  std::vector<double> gaps_;
  Arm optimal_arm_ = 0;
  double optimal_mean_ = 0.0;
};

/// Counter-based random stream. Output k of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, k), so replications never share state and
/// sequences are identical on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

int sample_reward(const BanditInstance& instance, Arm arm, RngStream& rng);

/// Inverse-CDF draw from a probability vector. The last arm with positive
/// mass absorbs any rounding shortfall of the cumulative sum.
Arm sample_categorical(std::span<const double> probs, RngStream& rng);

/// Running pseudo-regret: sum of gaps of the arms played.
class RegretLedger {
 public:
  struct Sample {
    double time;
    double cumulative;
  };

  void record_step(double gap);
  /// Snapshots the current cumulative regret at `time`.
  void checkpoint(double time) { samples_.push_back({time, cumulative_}); }

  double cumulative_pseudo_regret() const noexcept { return cumulative_; }
  std::size_t step_count() const noexcept { return steps_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }

 private:
  double cumulative_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<Sample> samples_;
};

}  // namespace pgbandit
