#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "pgbandit/error.hpp"
#include "pgbandit/experiment.hpp"
#include "pgbandit/samba.hpp"

namespace pgbandit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReplicationOutcome {
  std::vector<double> regret;  // cumulative, per checkpoint
  std::vector<double> rg;      // instantaneous, per checkpoint
  std::exception_ptr error;
  std::size_t failed_step = 0;
};

// Cumulative regret of the softmax policy when p_{a*} is held at 1/N:
// the integral of rg0 / (1 + rg0 alpha t / N^2).
double theorem1_uniform_floor_integral(const BanditInstance& instance, double alpha, double t) {
  const double n = static_cast<double>(instance.arms());
  const double rg0 = std::accumulate(instance.gaps().begin(), instance.gaps().end(), 0.0) / n;
  if (rg0 == 0.0) return 0.0;
  return n * n / alpha * std::log1p(rg0 * alpha * t / (n * n));
}

ReplicationOutcome run_replication(const ExperimentConfig& config, const BanditInstance& instance,
                                   const std::vector<std::size_t>& checkpoint_steps, std::size_t rep) {
  ReplicationOutcome out;
  out.regret.reserve(checkpoint_steps.size());
  out.rg.reserve(checkpoint_steps.size());
  RngStream rng(config.base_seed, rep);
  RegretLedger ledger;
  const std::size_t n = instance.arms();
  const auto steps = static_cast<std::size_t>(config.horizon);
  const bool softmax = config.algorithm == Algorithm::softmax_pg;
  const bool per_arm = config.schedule.kind == ScheduleKind::state_dependent;

  SoftmaxState pg = SoftmaxState::uniform(n);
  Baseline baseline(config.baseline);
  std::optional<SambaState> samba;
  if (!softmax) samba = SambaState::uniform(n, std::min(config.schedule.alpha0, 1.0));
  std::vector<double> rates(n);
  auto next_checkpoint = checkpoint_steps.begin();

  auto snapshot = [&] {
    const auto& p = softmax ? pg.probs() : samba->probs();
    while (next_checkpoint != checkpoint_steps.end() && *next_checkpoint == ledger.step_count()) {
      out.regret.push_back(ledger.cumulative_pseudo_regret());
      out.rg.push_back(instantaneous_regret(p, instance));
      ++next_checkpoint;
    }
  };

  std::size_t step = 0;
  try {
    snapshot();
    for (step = 0; step < steps; ++step) {
      const auto t = static_cast<double>(step);
      const auto& p = softmax ? pg.probs() : samba->probs();
      if (per_arm) {
        for (std::size_t a = 0; a < n; ++a) rates[a] = rate_at(config.schedule, t, p[a]);
      } else {
        std::fill(rates.begin(), rates.end(), rate_at(config.schedule, t));
      }
      const Arm arm = sample_categorical(p, rng);
      const int reward = sample_reward(instance, arm, rng);
      if (softmax) {
        pg = pg_step(pg, arm, reward, baseline.value(), rates);
        baseline.observe(reward);
      } else {
        samba = samba_step(*samba, arm, reward, rates);
      }
      ledger.record_step(instance.gap(arm));
      snapshot();
    }
  } catch (...) {
    out.error = std::current_exception();
    out.failed_step = step;
  }
  return out;
}

void run_stochastic(const ExperimentConfig& config, const BanditInstance& instance,
                    const std::vector<double>& checkpoints, ExperimentResult& result) {
  std::vector<std::size_t> checkpoint_steps;
  for (double t : checkpoints) checkpoint_steps.push_back(static_cast<std::size_t>(t));

  const std::size_t reps = config.replications;
  std::vector<ReplicationOutcome> outcomes(reps);
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, reps);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t rep = w; rep < reps; rep += workers) {
          outcomes[rep] = run_replication(config, instance, checkpoint_steps, rep);
        }
      });
    }
  }

  for (std::size_t rep = 0; rep < reps; ++rep) {
    const auto& o = outcomes[rep];
    if (!o.error) continue;
    try {
      std::rethrow_exception(o.error);
    } catch (const Error& e) {
      throw ReplicationError(e.code(), "replication " + std::to_string(rep) + ", step " +
                                           std::to_string(o.failed_step) + ": " + e.what(),
                             rep, o.failed_step);
    }
  }

  const double alpha0 = config.schedule.alpha0;
  const bool constant = config.schedule.kind == ScheduleKind::constant;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    double sum = 0.0;
    double rg_sum = 0.0;
    for (const auto& o : outcomes) {
      sum += o.regret[c];
      rg_sum += o.rg[c];
    }
    const double mean = sum / static_cast<double>(reps);
    double var = 0.0;
    for (const auto& o : outcomes) var += (o.regret[c] - mean) * (o.regret[c] - mean);
    const double sd = reps > 1 ? std::sqrt(var / static_cast<double>(reps - 1)) : 0.0;

    double bound = kNaN;
    if (constant) {
      bound = config.algorithm == Algorithm::samba ? theorem2_regret_bound(instance, alpha0, checkpoints[c])
                                                   : theorem1_uniform_floor_integral(instance, alpha0, checkpoints[c]);
    }
    result.rows.push_back({checkpoints[c], rg_sum / static_cast<double>(reps), mean, sd, bound});
  }

  result.replication_regret.reserve(reps);
  for (auto& o : outcomes) result.replication_regret.push_back(std::move(o.regret));
  result.diagnostics["replications"] = static_cast<double>(reps);
  result.diagnostics["steps_per_replication"] = config.horizon;
}

void run_ode(const ExperimentConfig& config, const BanditInstance& instance, const std::vector<double>& checkpoints,
             ExperimentResult& result) {
  const OdeSystem system = config.algorithm == Algorithm::softmax_ode ? OdeSystem::softmax_ode : OdeSystem::samba_ode;
  const double alpha0 = config.schedule.alpha0;
  const bool constant = config.schedule.kind == ScheduleKind::constant;
  const OdeState initial = OdeState::uniform(system, instance.arms());
  const double rg0 = instantaneous_regret(initial.probs, instance);

  // Integrated pathwise regret bound rg0 / (1 + rg0 alpha m(s)^2 s), with
  // m the running minimum of p_{a*}; trapezoid on the same grid as the regret.
  struct BoundTracker {
    double prev_t = 0.0;
    double prev_bound = 0.0;
    double integral = 0.0;
    double floor = 1.0;
    std::vector<std::pair<double, double>> at_checkpoints;
  } tracker;
  tracker.prev_bound = rg0;
  tracker.floor = initial.probs[instance.optimal_arm()];
  std::size_t pending = 0;
  while (pending < checkpoints.size() && checkpoints[pending] <= 0.0) {
    tracker.at_checkpoints.emplace_back(0.0, 0.0);
    ++pending;
  }
  double max_drift = 0.0;
  double min_slack = std::numeric_limits<double>::infinity();

  IntegrationOptions options;
  options.record_times = checkpoints;
  options.observer = [&](double t, std::span<const double> p, double) {
    double total = 0.0;
    for (double v : p) total += v;
    max_drift = std::max(max_drift, std::abs(total - 1.0));
    if (system != OdeSystem::softmax_ode || !constant) return;
    tracker.floor = std::min(tracker.floor, p[instance.optimal_arm()]);
    const double bound = theorem1_regret_bound(tracker.floor, rg0, alpha0, t);
    const double h = t - tracker.prev_t;
    tracker.integral += 0.5 * h * (tracker.prev_bound + bound);
    tracker.prev_t = t;
    tracker.prev_bound = bound;
    while (pending < checkpoints.size() && t > checkpoints[pending] - 0.5 * h) {
      tracker.at_checkpoints.emplace_back(t, tracker.integral);
      ++pending;
    }
  };

  Trajectory traj = rk4_integrate_refining(system, instance, config.schedule, initial, config.horizon, config.dt,
                                           options);

  auto nearest_sample = [&](double t) -> const TrajectorySample& {
    auto it = std::lower_bound(traj.samples.begin(), traj.samples.end(), t,
                               [](const TrajectorySample& s, double v) { return s.time < v; });
    if (it == traj.samples.end()) return traj.samples.back();
    if (it != traj.samples.begin() && std::abs(std::prev(it)->time - t) <= std::abs(it->time - t)) {
      return *std::prev(it);
    }
    return *it;
  };
  auto tracked_bound = [&](double t) {
    double best = kNaN;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& [time, value] : tracker.at_checkpoints) {
      if (std::abs(time - t) < best_dist) {
        best_dist = std::abs(time - t);
        best = value;
      }
    }
    return best;
  };

  double max_closed_form_error = 0.0;
  for (double c : checkpoints) {
    const TrajectorySample& s = nearest_sample(c);
    double bound = kNaN;
    if (constant) {
      bound = system == OdeSystem::samba_ode ? theorem2_regret_bound(instance, alpha0, s.time) : tracked_bound(s.time);
    }
    result.rows.push_back({s.time, s.rg, s.cumulative_regret, 0.0, bound});

    if (system == OdeSystem::softmax_ode) {
      const auto diag = regret_diagnostics(s.probs, instance, rate_at(config.schedule, s.time));
      min_slack = std::min(min_slack, diag.theorem1_bound_slack);
    } else if (constant) {
      for (Arm a = 0; a < instance.arms(); ++a) {
        if (a == instance.optimal_arm()) continue;
        const double exact = closed_form_samba(initial.probs[a], instance.gap(a), alpha0, s.time);
        max_closed_form_error = std::max(max_closed_form_error, std::abs(s.probs[a] - exact));
      }
    }
  }

  result.diagnostics["step_size"] = traj.step_size;
  result.diagnostics["max_simplex_drift"] = max_drift;
  result.diagnostics["min_optimal_prob"] = traj.samples.back().optimal_floor;
  if (system == OdeSystem::softmax_ode && !checkpoints.empty()) {
    result.diagnostics["min_theorem1_slack"] = min_slack;
  }
  if (system == OdeSystem::samba_ode && constant) {
    result.diagnostics["max_closed_form_error"] = max_closed_form_error;
  }
  result.trajectory = std::move(traj);
}

// Linear interpolation of regret in log T.
double interpolate_log(std::span<const std::pair<double, double>> pts, double t) {
  auto it = std::lower_bound(pts.begin(), pts.end(), t, [](const auto& p, double v) { return p.first < v; });
  if (it == pts.begin()) return it->second;
  if (it == pts.end()) return pts.back().second;
  const auto& [t1, y1] = *std::prev(it);
  const auto& [t2, y2] = *it;
  const double w = (std::log(t) - std::log(t1)) / (std::log(t2) - std::log(t1));
  return y1 + w * (y2 - y1);
}

}  // namespace

FitResult fit_log_regret(std::span<const std::pair<double, double>> checkpoints) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : checkpoints) {
    if (p.first > 0.0) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 5) {
    fail(ErrorCode::fit, "need at least 5 checkpoints with T > 0, got " + std::to_string(pts.size()));
  }
  const double t_max = pts.back().first;
  if (t_max < 10.0 * pts.front().first * (1.0 - 1e-12)) {
    fail(ErrorCode::fit, "checkpoints must span at least one decade in T");
  }

  FitResult fit;
  fit.window_end = t_max;
  fit.window_start = t_max / 10.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& [t, y] : pts) {
    if (t < fit.window_start * (1.0 - 1e-12)) continue;
    const double x = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) fail(ErrorCode::fit, "fewer than 2 checkpoints in the final decade");
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  fit.log_slope = (md * sxy - sx * sy) / denom;
  fit.points_used = m;
  fit.doubling_increment = pts.back().second - interpolate_log(pts, t_max / 2.0);
  return fit;
}

double predicted_log_slope(Algorithm algorithm, const BanditInstance& instance, double alpha0) {
  if (algorithm == Algorithm::softmax_pg || algorithm == Algorithm::softmax_ode) {
    return theorem1_log_slope(instance.arms(), alpha0);
  }
  return theorem2_log_slope(instance, alpha0);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const BanditInstance instance = BanditInstance::make(config.instance_means);
  const std::vector<double> checkpoints = config.resolved_checkpoints();

  ExperimentResult result;
  result.config = config;
  if (is_ode(config.algorithm)) {
    run_ode(config, instance, checkpoints, result);
  } else {
    run_stochastic(config, instance, checkpoints, result);
  }

  std::vector<std::pair<double, double>> curve;
  for (const auto& row : result.rows) curve.emplace_back(row.time, row.mean_regret);
  try {
    FitResult fit = fit_log_regret(curve);
    fit.predicted_slope = predicted_log_slope(config.algorithm, instance, config.schedule.alpha0);
    fit.ratio = fit.predicted_slope > 0.0 ? fit.log_slope / fit.predicted_slope : 0.0;
    result.fit = fit;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::fit) throw;
    result.fit_error = e.what();
  }
  return result;
}

}  // namespace pgbandit
