// Brute-force two-arm SAMBA written without the library, used once to
// calibrate the stochastic sublinearity thresholds in the acceptance suite.
//
//   sublinearity_baseline [batches] [replications] [steps]
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

namespace {

struct Checkpoints {
  double quarter = 0, half = 0, full = 0;
};

Checkpoints run_once(std::mt19937_64& gen, long steps) {
  const double mean[2] = {0.5, 0.7};
  const double alpha = 0.1;
  double p[2] = {0.5, 0.5};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Checkpoints out;
  double regret = 0.0;
  for (long t = 1; t <= steps; ++t) {
    regret += (mean[1] - mean[0]) * p[0];
    const int lead = p[1] > p[0] ? 1 : 0;
    const int other = 1 - lead;
    const int arm = u(gen) < p[0] ? 0 : 1;
    const double r = u(gen) < mean[arm] ? 1.0 : 0.0;
    const double gain = (arm == other ? r / p[other] : 0.0) - (arm == lead ? r / p[lead] : 0.0);
    p[other] += alpha * p[other] * p[other] * gain;
    p[lead] = 1.0 - p[other];
    if (t == steps / 4) out.quarter = regret;
    if (t == steps / 2) out.half = regret;
  }
  out.full = regret;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const int batches = argc > 1 ? std::atoi(argv[1]) : 20;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 100;
  const long steps = argc > 3 ? std::atol(argv[3]) : 100000;
  std::mt19937_64 gen(20240601);
  std::vector<double> ratios, per_step;
  for (int b = 0; b < batches; ++b) {
    Checkpoints mean;
    for (int k = 0; k < reps; ++k) {
      const auto c = run_once(gen, steps);
      mean.quarter += c.quarter / reps;
      mean.half += c.half / reps;
      mean.full += c.full / reps;
    }
    const double ratio = (mean.full - mean.half) / (mean.half - mean.quarter);
    ratios.push_back(ratio);
    per_step.push_back(mean.full / static_cast<double>(steps));
    std::printf("batch %2d  Rg: %.3f %.3f %.3f  Rg/T %.6f  ratio %.4f\n", b, mean.quarter, mean.half, mean.full,
                per_step.back(), ratio);
  }
  double m = 0, s = 0;
  for (double r : ratios) m += r / ratios.size();
  for (double r : ratios) s += (r - m) * (r - m) / (ratios.size() - 1);
  std::printf("ratio mean %.4f sd %.4f min %.4f max %.4f; max Rg/T %.6f\n", m, std::sqrt(s),
              *std::min_element(ratios.begin(), ratios.end()), *std::max_element(ratios.begin(), ratios.end()),
              *std::max_element(per_step.begin(), per_step.end()));
}
