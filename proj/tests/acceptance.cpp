// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pgbandit/bandit.hpp"
#include "pgbandit/error.hpp"
#include "pgbandit/experiment.hpp"
#include "pgbandit/ode.hpp"
#include "pgbandit/policy_gradient.hpp"
#include "pgbandit/samba.hpp"
#include "pgbandit/schedules.hpp"

using namespace pgbandit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::vector<double> geometric_times(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int j = 0; j <= n; ++j) out.push_back(lo * std::pow(10.0, static_cast<double>(j) / per_decade));
  return out;
}

// Ordinary least squares slope of y against log t.
double log_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (auto [t, y] : pts) {
    const double x = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) total += (v = expo(gen) + 1e-3);
  for (double& v : p) v /= total;
  return p;
}

const std::vector<double> kThreeArm{0.2, 0.5, 0.9};

Outcome closed_form_match() {
  const auto inst = BanditInstance::make(kThreeArm);
  const double alpha = 0.5;
  const auto start = std::chrono::steady_clock::now();
  IntegrationOptions opts;
  opts.record_every = 1;
  const auto traj = rk4_integrate(OdeSystem::samba_ode, inst, {ScheduleKind::constant, alpha},
                                  OdeState::uniform(OdeSystem::samba_ode, 3), 1e3, 1e-2, opts);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    double others = 0.0;
    for (Arm a = 0; a < 3; ++a) {
      if (a == inst.optimal_arm()) continue;
      const double exact = closed_form_samba(1.0 / 3.0, inst.gap(a), alpha, s.time);
      worst = std::max(worst, std::abs(s.probs[a] - exact));
      others += exact;
    }
    worst = std::max(worst, std::abs(s.probs[inst.optimal_arm()] - (1.0 - others)));
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-8 && elapsed < 1.0,
          fmt("max abs error %.3e (< 1e-8), %zu samples, %.3f s (< 1 s)", worst, traj.samples.size(), elapsed)};
}

Outcome samba_regret_slope() {
  const auto inst = BanditInstance::make(kThreeArm);
  const double alpha = 0.5;
  const auto start = std::chrono::steady_clock::now();
  IntegrationOptions opts;
  opts.record_times = geometric_times(1e4, 1e6, 20);
  const auto traj = rk4_integrate(OdeSystem::samba_ode, inst, {ScheduleKind::constant, alpha},
                                  OdeState::uniform(OdeSystem::samba_ode, 3), 1e6, 1e-2, opts);
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : traj.samples)
    if (s.time >= 1e4 * (1 - 1e-12)) pts.emplace_back(s.time, s.cumulative_regret);
  const double slope = log_slope(pts);
  const double predicted = theorem2_log_slope(inst, alpha);
  const double rel = std::abs(slope - predicted) / predicted;
  const double elapsed = seconds_since(start);
  return {rel < 0.05 && elapsed < 60.0,
          fmt("fitted slope %.4f over %zu points, predicted %.4f, relative error %.3f (< 0.05), %.1f s (< 60 s)",
              slope, pts.size(), predicted, rel, elapsed)};
}

const std::vector<double> kTwoArm{0.3, 0.7};

double rg_of_weights(const std::vector<double>& w, const BanditInstance& inst) {
  return instantaneous_regret(softmax(w), inst);
}

Outcome decay_identity() {
  const auto inst = BanditInstance::make(kTwoArm);
  const double alpha = 1.0;
  const Schedule sched{ScheduleKind::constant, alpha};
  const double h = 1e-3;
  auto centres = geometric_times(0.1, 1e3, 25);  // 101 times
  for (double& t : centres) t = std::round(t / h) * h;  // keep the stencil on the step grid
  IntegrationOptions opts;
  for (double t : centres) opts.record_times.push_back(t - 2 * h);
  const auto traj = rk4_integrate(OdeSystem::softmax_ode, inst, sched, OdeState::uniform(OdeSystem::softmax_ode, 2),
                                  centres.back() - 2 * h, 1e-4, opts);
  double worst_rel = 0.0, worst_slack = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < centres.size() && checked < 100; ++i) {
    const auto it = std::find_if(traj.samples.begin(), traj.samples.end(),
                                 [&](const TrajectorySample& s) { return std::abs(s.time - (centres[i] - 2 * h)) < 1e-8; });
    if (it == traj.samples.end()) continue;
    OdeState local{0.0, it->probs, it->weights};
    IntegrationOptions fine;
    fine.record_times = {h, 2 * h, 3 * h, 4 * h};
    const auto seg = rk4_integrate(OdeSystem::softmax_ode, inst, sched, local, 4 * h, h / 20, fine);
    auto rg_at = [&](double dtau) {
      for (const auto& s : seg.samples)
        if (std::abs(s.time - dtau) < 1e-9) return s.rg;
      throw std::runtime_error("missing stencil sample");
    };
    const double rg_m2 = it->rg, rg_m1 = rg_at(h), rg_p1 = rg_at(3 * h), rg_p2 = rg_at(4 * h);
    const double numeric = (rg_m2 - 8 * rg_m1 + 8 * rg_p1 - rg_p2) / (12 * h);
    std::vector<double> centre_w;
    for (const auto& s : seg.samples)
      if (std::abs(s.time - 2 * h) < 1e-9) centre_w = s.weights;
    const auto diag = regret_diagnostics(softmax(centre_w), inst, alpha);
    const double analytic = -alpha * diag.decay_norm_sq;
    worst_rel = std::max(worst_rel, std::abs(numeric - analytic) / std::abs(analytic));
    worst_slack = std::min(worst_slack, diag.theorem1_bound_slack);
    ++checked;
  }
  return {checked == 100 && worst_rel < 1e-6 && worst_slack >= -1e-12,
          fmt("%zu times, max relative error %.3e (< 1e-6), min bound slack %.3e (>= -1e-12)", checked, worst_rel,
              worst_slack)};
}

Outcome pathwise_bound() {
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (const auto& means : {kTwoArm, kThreeArm}) {
    const auto inst = BanditInstance::make(means);
    const double alpha = 1.0;
    const auto init = OdeState::uniform(OdeSystem::softmax_ode, means.size());
    const double rg0 = instantaneous_regret(init.probs, inst);
    IntegrationOptions opts;
    opts.record_every = 100;
    const auto traj =
        rk4_integrate(OdeSystem::softmax_ode, inst, {ScheduleKind::constant, alpha}, init, 1e4, 1e-2, opts);
    for (const auto& s : traj.samples) {
      const double bound = theorem1_regret_bound(s.optimal_floor, rg0, alpha, s.time);
      worst_excess = std::max(worst_excess, s.rg - bound);
      ++checked;
    }
  }
  return {worst_excess <= 1e-6,
          fmt("%zu samples over T = 1e4 (N = 2, 3), max rg - bound %.3e (<= 1e-6)", checked, worst_excess)};
}

Outcome softmax_slope() {
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::softmax_ode;
  cfg.instance_means = kTwoArm;
  cfg.schedule = {ScheduleKind::constant, 1.0};
  cfg.horizon = 1e5;
  cfg.dt = 1e-2;
  cfg.checkpoint_times = geometric_times(1e2, 1e5, 20);
  const auto res = run_experiment(cfg);
  if (!res.fit) return {false, "fit unavailable: " + res.fit_error};
  const double slope = res.fit->log_slope;
  const double cap = theorem1_log_slope(2, 1.0) * 1.05;
  return {std::isfinite(slope) && slope > 0 && slope <= cap,
          fmt("slope %.4f over [%.0f, %.0f], finite, positive, cap %.2f", slope, res.fit->window_start,
              res.fit->window_end, cap)};
}

Outcome samba_drift_enumeration() {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t states = 0;
  for (std::size_t n : {2u, 3u, 5u}) {
    for (int k = 0; k < 200; ++k) {
      std::vector<double> means(n);
      for (double& m : means) m = unit(gen);
      const auto inst = BanditInstance::make(means);
      const double alpha = 0.05 + 0.9 * unit(gen);
      const auto state = SambaState::make(random_simplex(gen, n), alpha);
      const auto p = state.probs();
      std::vector<double> drift(n, 0.0);
      for (Arm a = 0; a < n; ++a) {
        for (int r : {0, 1}) {
          const double weight = p[a] * (r ? means[a] : 1.0 - means[a]);
          if (weight == 0.0) continue;
          const auto next = samba_step(state, a, r);
          for (Arm b = 0; b < n; ++b) drift[b] += weight * (next.probs()[b] - p[b]);
        }
      }
      const Arm lead = state.leader();
      double leader_drift = 0.0;
      for (Arm a = 0; a < n; ++a) {
        if (a == lead) continue;
        const double expected = alpha * p[a] * p[a] * (means[a] - means[lead]);
        worst = std::max(worst, std::abs(drift[a] - expected));
        leader_drift -= expected;
      }
      worst = std::max(worst, std::abs(drift[lead] - leader_drift));
      ++states;
    }
  }
  return {worst < 1e-12, fmt("%zu states (200 each for N = 2, 3, 5), max deviation %.3e (< 1e-12)", states, worst)};
}

Outcome samba_simplex() {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long steps = 0, violations = 0;
  double worst_sum = 0.0;
  for (std::size_t n : {2u, 3u, 5u, 10u}) {
    std::vector<double> means(n);
    for (double& m : means) m = unit(gen);
    const auto inst = BanditInstance::make(means);
    RngStream rng(7, n);
    auto state = SambaState::uniform(n, 0.5);
    for (long t = 0; t < 250000; ++t, ++steps) {
      const Arm a = sample_arm(state, rng);
      state = samba_step(state, a, sample_reward(inst, a, rng));
      const auto p = state.probs();
      double sum = 0.0;
      bool ok = true;
      for (double v : p) {
        sum += v;
        ok = ok && v > 0.0 && v < 1.0;
      }
      ok = ok && p[state.leader()] == *std::max_element(p.begin(), p.end());
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      if (!ok || std::abs(sum - 1.0) > 1e-9) ++violations;
    }
  }
  bool raised = false;
  std::string what;
  try {
    samba_step(SambaState::make(std::vector<double>{0.5, 0.5}, 1.0), 1, 1);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::simplex_violation;
    what = to_string(e.code());
  }
  return {violations == 0 && raised,
          fmt("%ld steps at alpha 0.5, %ld invariant violations, max |sum - 1| %.2e; alpha 1.0 worst case raised %s",
              steps, violations, worst_sum, raised ? what.c_str() : "nothing")};
}

Outcome stochastic_sublinearity() {
  // Frozen from the brute-force baseline: doubling ratio 0.997 +/- 0.030 over
  // 20 batches of 100 replications, Rg/T at most 0.0007.
  constexpr double kPerStepCap = 0.01;
  constexpr double kRatioCap = 1.15;
  ExperimentConfig cfg;
  cfg.algorithm = Algorithm::samba;
  cfg.instance_means = {0.5, 0.7};
  cfg.schedule = {ScheduleKind::constant, 0.1};
  cfg.horizon = 1e5;
  cfg.replications = 100;
  cfg.base_seed = 2024;
  cfg.checkpoint_times = std::vector<double>{2.5e4, 5e4, 1e5};
  const auto start = std::chrono::steady_clock::now();
  const auto res = run_experiment(cfg);
  const double elapsed = seconds_since(start);
  const double q = res.rows[0].mean_regret, h = res.rows[1].mean_regret, f = res.rows[2].mean_regret;
  const double per_step = f / 1e5;
  const double ratio = (f - h) / (h - q);
  return {per_step < kPerStepCap && ratio < kRatioCap && elapsed < 120.0,
          fmt("Rg = %.2f / %.2f / %.2f at 2.5e4 / 5e4 / 1e5; Rg/T %.5f (< %.2f); doubling ratio %.4f (< %.2f); %.1f s",
              q, h, f, per_step, kPerStepCap, ratio, kRatioCap, elapsed)};
}

Outcome jacobian_check() {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double eps = 1e-6;
  double worst = 0.0;
  for (std::size_t n : {2u, 5u, 10u}) {
    for (int k = 0; k < 20; ++k) {
      std::vector<double> w(n);
      for (double& x : w) x = u(gen);
      const auto jac = softmax_jacobian(softmax(w));
      for (std::size_t j = 0; j < n; ++j) {
        auto up = w, down = w;
        up[j] += eps;
        down[j] -= eps;
        const auto pu = softmax(up), pd = softmax(down);
        for (std::size_t i = 0; i < n; ++i)
          worst = std::max(worst, std::abs(jac(i, j) - (pu[i] - pd[i]) / (2 * eps)));
      }
    }
  }
  return {worst < 1e-6, fmt("60 weight vectors (N = 2, 5, 10), max abs error %.3e (< 1e-6)", worst)};
}

Outcome lyapunov_constancy() {
  const auto inst = BanditInstance::make(kThreeArm);
  const double alpha = 0.5, p0 = 1.0 / 3.0;
  double closed_dev = 0.0;
  for (double t : geometric_times(1e-2, 1e3, 50)) {
    for (Arm a = 0; a < 3; ++a) {
      if (a == inst.optimal_arm()) continue;
      const double p = closed_form_samba(p0, inst.gap(a), alpha, t);
      closed_dev = std::max(closed_dev, std::abs(lyapunov_value(p, alpha * inst.gap(a) * t, 1.0) - 1.0 / p0));
    }
  }
  IntegrationOptions opts;
  opts.record_every = 10;
  const auto traj = rk4_integrate(OdeSystem::samba_ode, inst, {ScheduleKind::constant, alpha},
                                  OdeState::uniform(OdeSystem::samba_ode, 3), 1e3, 1e-2, opts);
  double rk4_dev = 0.0;
  for (const auto& s : traj.samples)
    for (Arm a = 0; a < 3; ++a) {
      if (a == inst.optimal_arm()) continue;
      rk4_dev = std::max(rk4_dev, std::abs(lyapunov_value(s.probs[a], alpha * inst.gap(a) * s.time, 1.0) - 1.0 / p0));
    }
  return {closed_dev < 1e-6 && rk4_dev < 1e-5,
          fmt("closed form drift %.3e (< 1e-6), RK4 drift %.3e (< 1e-5)", closed_dev, rk4_dev)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "pgbandit_acceptance_determinism";
  fs::remove_all(root);
  std::vector<ExperimentConfig> configs(3);
  configs[0].algorithm = Algorithm::samba;
  configs[0].horizon = 2e4;
  configs[0].replications = 8;
  configs[0].base_seed = 11;
  configs[1].algorithm = Algorithm::softmax_pg;
  configs[1].instance_means = kThreeArm;
  configs[1].horizon = 2e4;
  configs[1].replications = 8;
  configs[2].algorithm = Algorithm::softmax_ode;
  configs[2].horizon = 1e3;
  std::size_t identical = 0, compared = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto a = root / (std::to_string(i) + "a"), b = root / (std::to_string(i) + "b");
    emit_outputs(run_experiment(configs[i]), a);
    emit_outputs(run_experiment(configs[i]), b);
    for (const char* name : {"regret.csv", "fit.json"}) {
      const auto x = slurp(a / name);
      ++compared;
      if (!x.empty() && x == slurp(b / name)) ++identical;
    }
  }
  return {identical == compared,
          fmt("%zu of %zu file pairs byte-identical (samba, softmax_pg, softmax_ode)", identical, compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"samba ode matches closed form", closed_form_match},
      {"samba ode regret log-slope", samba_regret_slope},
      {"softmax regret decay identity", decay_identity},
      {"softmax pathwise regret bound", pathwise_bound},
      {"softmax ode regret log-slope cap", softmax_slope},
      {"samba one-step drift enumeration", samba_drift_enumeration},
      {"samba simplex preservation", samba_simplex},
      {"stochastic samba sublinearity", stochastic_sublinearity},
      {"softmax jacobian gradient check", jacobian_check},
      {"samba lyapunov constancy", lyapunov_constancy},
      {"experiment determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += out.pass ? 0 : 1;
    std::printf("[%s] %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
