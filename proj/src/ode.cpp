#include "pgbandit/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pgbandit/error.hpp"
#include "pgbandit/policy_gradient.hpp"

namespace pgbandit {
namespace {

void check_arms(std::size_t got, const BanditInstance& instance) {
  if (got != instance.arms()) {
    fail(ErrorCode::dimension_mismatch,
         "state has " + std::to_string(got) + " arms, instance has " + std::to_string(instance.arms()));
  }
}

void softmax_into(std::span<const double> w, std::span<double> p) {
  double max_w = -kWeightClip;
  for (std::size_t a = 0; a < w.size(); ++a) {
    p[a] = std::clamp(w[a], -kWeightClip, kWeightClip);
    max_w = std::max(max_w, p[a]);
  }
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - max_w);
    total += v;
  }
  for (double& v : p) v /= total;
}

void rates_into(const Schedule& schedule, double t, std::span<const double> probs, std::span<double> rates) {
  if (schedule.kind != ScheduleKind::state_dependent) {
    std::fill(rates.begin(), rates.end(), rate_at(schedule, t));
    return;
  }
  for (std::size_t a = 0; a < probs.size(); ++a) {
    rates[a] = rate_at(schedule, t, std::clamp(probs[a], 1e-300, 1.0));
  }
}

void softmax_rhs_into(std::span<const double> probs, const BanditInstance& instance, std::span<const double> rates,
                      std::span<double> out) {
  const double r_star = instance.optimal_mean();
  const auto& means = instance.means();
  double weighted = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) weighted += probs[a] * (means[a] - r_star);
  for (std::size_t a = 0; a < probs.size(); ++a) {
    out[a] = rates[a] * probs[a] * ((means[a] - r_star) - weighted);
  }
}

void samba_rhs_into(std::span<const double> probs, const BanditInstance& instance, std::span<const double> rates,
                    std::span<double> out) {
  const Arm star = instance.optimal_arm();
  double total = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (a == star) continue;
    out[a] = -rates[a] * probs[a] * probs[a] * instance.gap(a);
    total += out[a];
  }
  out[star] = -total;
}

// Evaluates the system derivative at (t, y). `probs` and `rates` are scratch.
struct System {
  OdeSystem kind;
  const BanditInstance& instance;
  const Schedule& schedule;
  std::vector<double> probs;
  std::vector<double> rates;

  void operator()(double t, std::span<const double> y, std::span<double> dy) {
    if (kind == OdeSystem::softmax_ode) {
      softmax_into(y, probs);
      rates_into(schedule, t, probs, rates);
      softmax_rhs_into(probs, instance, rates, dy);
    } else {
      rates_into(schedule, t, y, rates);
      samba_rhs_into(y, instance, rates, dy);
    }
  }
};

}  // namespace

const char* to_string(OdeSystem system) noexcept {
  return system == OdeSystem::softmax_ode ? "softmax_ode" : "samba_ode";
}

std::vector<double> softmax_ode_rhs(std::span<const double> weights, const BanditInstance& instance, double alpha) {
  check_arms(weights.size(), instance);
  const auto probs = softmax(weights);
  return expected_update_direction(probs, instance.means(), instance.optimal_mean(), alpha);
}

std::vector<double> samba_ode_rhs(std::span<const double> probs, const BanditInstance& instance, double alpha) {
  check_arms(probs.size(), instance);
  std::vector<double> out(probs.size());
  const std::vector<double> rates(probs.size(), alpha);
  samba_rhs_into(probs, instance, rates, out);
  return out;
}

OdeState OdeState::uniform(OdeSystem system, std::size_t arms) {
  OdeState s;
  s.probs.assign(arms, 1.0 / static_cast<double>(arms));
  if (system == OdeSystem::softmax_ode) s.weights.assign(arms, 0.0);
  return s;
}

Trajectory rk4_integrate(OdeSystem system, const BanditInstance& instance, const Schedule& schedule,
                         const OdeState& initial, double horizon, double dt, const IntegrationOptions& options) {
  if (!(dt > 0.0)) fail(ErrorCode::invalid_argument, "step size must be positive");
  if (!(horizon >= dt)) fail(ErrorCode::invalid_argument, "horizon must be at least one step");
  const std::size_t n = instance.arms();
  const bool softmax_system = system == OdeSystem::softmax_ode;

  std::vector<double> y = softmax_system ? initial.weights : initial.probs;
  check_arms(y.size(), instance);
  if (softmax_system && initial.weights.empty()) fail(ErrorCode::invalid_argument, "softmax system needs weights");

  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  auto time_of = [&](std::size_t k) { return k == steps ? initial.time + horizon : initial.time + k * dt; };

  std::vector<std::size_t> record;
  record.reserve(options.record_times.size() + 2);
  record.push_back(0);
  for (double t : options.record_times) {
    const double rel = std::clamp((t - initial.time) / dt, 0.0, static_cast<double>(steps));
    record.push_back(static_cast<std::size_t>(std::llround(rel)));
  }
  record.push_back(steps);
  std::sort(record.begin(), record.end());
  record.erase(std::unique(record.begin(), record.end()), record.end());
  auto next_record = record.begin();

  System rhs{system, instance, schedule, std::vector<double>(n), std::vector<double>(n)};
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), probs(n);
  const Arm star = instance.optimal_arm();

  auto probs_of = [&](std::span<const double> state) {
    if (softmax_system) {
      softmax_into(state, probs);
    } else {
      std::copy(state.begin(), state.end(), probs.begin());
    }
  };

  Trajectory traj{system, dt, {}};
  probs_of(y);
  double rg = instantaneous_regret(probs, instance);
  double cumulative = 0.0;
  double floor = probs[star];

  auto emit = [&](std::size_t k) {
    traj.samples.push_back(TrajectorySample{time_of(k), probs, softmax_system ? y : std::vector<double>{}, rg,
                                            cumulative, floor});
  };
  if (*next_record == 0) {
    emit(0);
    ++next_record;
  }

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = time_of(k);
    const double h = time_of(k + 1) - t;
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * k3[i];
    rhs(t + h, stage, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    probs_of(y);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(probs[i] > -options.simplex_tolerance)) {
        fail(ErrorCode::integration_failure, "probability of arm " + std::to_string(i) +
                                                 " went negative at t=" + std::to_string(t + h) +
                                                 "; step size too large");
      }
      total += probs[i];
    }
    if (!(std::abs(total - 1.0) <= options.simplex_tolerance)) {
      fail(ErrorCode::integration_failure,
           "state left the simplex at t=" + std::to_string(t + h) + "; step size too large");
    }

    const double next_rg = instantaneous_regret(probs, instance);
    cumulative += 0.5 * h * (rg + next_rg);
    rg = next_rg;
    floor = std::min(floor, probs[star]);
    if (options.observer) options.observer(t + h, probs, rg);

    const bool scheduled = next_record != record.end() && *next_record == k + 1;
    if (scheduled) ++next_record;
    if (scheduled || (options.record_every != 0 && (k + 1) % options.record_every == 0)) emit(k + 1);
  }
  return traj;
}

Trajectory rk4_integrate_refining(OdeSystem system, const BanditInstance& instance, const Schedule& schedule,
                                  const OdeState& initial, double horizon, double dt,
                                  const IntegrationOptions& options, int max_refinements) {
  for (int attempt = 0;; ++attempt) {
    try {
      return rk4_integrate(system, instance, schedule, initial, horizon, dt, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::integration_failure || attempt >= max_refinements) throw;
      dt *= 0.5;
    }
  }
}

double closed_form_samba(double p0, double gap, double alpha, double t) {
  return p0 / (1.0 + alpha * gap * p0 * t);
}

double instantaneous_regret(std::span<const double> probs, const BanditInstance& instance) {
  double rg = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) rg += instance.gap(a) * probs[a];
  return rg;
}

RegretDiagnostics regret_diagnostics(std::span<const double> probs, const BanditInstance& instance, double alpha) {
  check_arms(probs.size(), instance);
  const auto n = static_cast<Eigen::Index>(probs.size());
  const Eigen::Map<const Eigen::VectorXd> p(probs.data(), n);

  RegretDiagnostics d;
  d.d_matrix.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) d.d_matrix(a, b) = (a == b ? 1.0 : 0.0) - p(b);
  }
  d.rg_vector.resize(probs.size());
  for (std::size_t a = 0; a < probs.size(); ++a) {
    d.rg_vector[a] = instance.gap(a) * probs[a];
    d.rg += d.rg_vector[a];
  }
  if (d.rg == 0.0) return d;

  // Component a of D^T rg_vector is Delta_a p_a - rg p_a.
  const Eigen::Map<const Eigen::VectorXd> rg_vec(d.rg_vector.data(), n);
  d.decay_norm_sq = (d.d_matrix.transpose() * rg_vec).squaredNorm();

  const auto weight_rate = expected_update_direction(probs, instance.means(), instance.optimal_mean(), alpha);
  const Eigen::VectorXd prob_rate =
      softmax_jacobian(probs) * Eigen::Map<const Eigen::VectorXd>(weight_rate.data(), n);
  const Eigen::Map<const Eigen::VectorXd> gaps(instance.gaps().data(), n);
  d.decay_rate = gaps.dot(prob_rate);
  d.decay_identity_residual = std::abs(d.decay_rate + alpha * d.decay_norm_sq);

  const double p_star = probs[instance.optimal_arm()];
  d.theorem1_bound_slack = alpha * d.decay_norm_sq - alpha * p_star * p_star * d.rg * d.rg;
  return d;
}

double lyapunov_value(double x, double elapsed_alpha_integral, double lambda_exponent) {
  if (!(x > 0.0)) fail(ErrorCode::invalid_argument, "Lyapunov argument must be positive");
  if (!(lambda_exponent > 0.0)) fail(ErrorCode::invalid_argument, "Lyapunov exponent must be positive");
  return std::pow(x, -lambda_exponent) - elapsed_alpha_integral;
}

double theorem1_regret_bound(double p_star_floor, double rg0, double alpha, double t) {
  return rg0 / (1.0 + rg0 * alpha * p_star_floor * p_star_floor * t);
}

double theorem2_regret_bound(const BanditInstance& instance, double alpha, double horizon) {
  if (!(alpha > 0.0)) fail(ErrorCode::invalid_argument, "alpha must be positive");
  if (!(horizon >= 0.0)) fail(ErrorCode::invalid_argument, "horizon must be non-negative");
  const double arms = static_cast<double>(instance.arms());
  double bound = 0.0;
  for (Arm a = 0; a < instance.arms(); ++a) {
    if (a == instance.optimal_arm()) continue;
    const double rate = alpha * instance.gap(a);
    bound += rate > 0.0 ? std::log1p(rate * horizon / arms) / rate : horizon / arms;
  }
  return bound;
}

double theorem1_log_slope(std::size_t arms, double alpha) {
  return static_cast<double>(arms * arms) / alpha;
}

double theorem2_log_slope(const BanditInstance& instance, double alpha) {
  double slope = 0.0;
  for (double gap : instance.gaps()) {
    if (gap > 0.0) slope += 1.0 / (alpha * gap);
  }
  return slope;
}

}  // namespace pgbandit
