#include "pgbandit/bandit.hpp"

#include <cmath>
#include <string>

#include "pgbandit/error.hpp"

namespace pgbandit {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

BanditInstance BanditInstance::make(std::span<const double> means) {
  if (means.size() < 2) {
    fail(ErrorCode::invalid_argument,
         "bandit instance needs at least 2 arms, got " + std::to_string(means.size()));
  }
  BanditInstance inst;
  inst.means_.assign(means.begin(), means.end());
  for (std::size_t a = 0; a < means.size(); ++a) {
    const double r = means[a];
    if (!(r >= 0.0 && r <= 1.0)) {
      fail(ErrorCode::invalid_argument,
           "mean of arm " + std::to_string(a) + " outside [0,1]: " + std::to_string(r));
    }
    if (r > inst.means_[inst.optimal_arm_]) inst.optimal_arm_ = a;
  }
  inst.optimal_mean_ = inst.means_[inst.optimal_arm_];
  inst.gaps_.resize(means.size());
  for (std::size_t a = 0; a < means.size(); ++a) inst.gaps_[a] = inst.optimal_mean_ - inst.means_[a];
  return inst;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id), key_(mix64(mix64(seed + kGolden) ^ (stream_id * kGolden + 1))) {}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

int sample_reward(const BanditInstance& instance, Arm arm, RngStream& rng) {
  if (arm >= instance.arms()) {
    fail(ErrorCode::invalid_argument, "arm index " + std::to_string(arm) + " out of range");
  }
  return rng.uniform() < instance.mean(arm) ? 1 : 0;
}

Arm sample_categorical(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  Arm last_positive = 0;
  for (Arm a = 0; a < probs.size(); ++a) {
    if (probs[a] <= 0.0) continue;
    last_positive = a;
    cumulative += probs[a];
    if (u < cumulative) return a;
  }
  return last_positive;
}

void RegretLedger::record_step(double gap) {
  if (!(gap >= 0.0)) fail(ErrorCode::invalid_argument, "negative gap: " + std::to_string(gap));
  cumulative_ += gap;
  ++steps_;
}

}  // namespace pgbandit
