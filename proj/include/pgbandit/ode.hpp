#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pgbandit/bandit.hpp"
#include "pgbandit/schedules.hpp"

namespace pgbandit {

enum class OdeSystem { softmax_ode, samba_ode };

const char* to_string(OdeSystem system) noexcept;

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

/// dw_a'/dt = alpha sum_a'' p_a'' (r_a'' - r*)(I_a'a'' - p_a') with p = softmax(w).
std::vector<double> softmax_ode_rhs(std::span<const double> weights, const BanditInstance& instance, double alpha);

/// dp_a/dt = -alpha p_a^2 Delta_a for a != a*, and the negated sum for a*.
/// The leader is pinned to the true optimal arm.
std::vector<double> samba_ode_rhs(std::span<const double> probs, const BanditInstance& instance, double alpha);

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

struct OdeState {
  double time = 0.0;
  std::vector<double> probs;
  std::vector<double> weights;  // softmax system only

  static OdeState uniform(OdeSystem system, std::size_t arms);
};

struct TrajectorySample {
  double time;
  std::vector<double> probs;
  std::vector<double> weights;  // empty for the SAMBA system
  double rg;
  double cumulative_regret;
  double optimal_floor;  // min over s <= time of p_{a*}(s), tracked on every step
};

struct Trajectory {
  OdeSystem system;
  double step_size;
  std::vector<TrajectorySample> samples;
};

struct IntegrationOptions {
  /// Times at which to record a sample; each is snapped to the nearest grid
  /// point. The initial state and the final time are always recorded.
  std::vector<double> record_times;
  /// Additionally record every k-th step (0 disables).
  std::size_t record_every = 0;
  /// Maximum tolerated |sum p - 1| or negative mass before the step is rejected.
  double simplex_tolerance = 1e-6;
  /// Called after every accepted step with (t, probs, rg).
  std::function<void(double, std::span<const double>, double)> observer;
};

/// Classical fixed-step RK4 from `initial` to `horizon`. The learning rate at
/// each stage is rate_at(schedule, t, p_a) per arm. Cumulative regret is the
/// trapezoid rule over the rg values on the step grid. Throws
/// integration_failure if the state leaves the simplex.
Trajectory rk4_integrate(OdeSystem system, const BanditInstance& instance, const Schedule& schedule,
                         const OdeState& initial, double horizon, double dt,
                         const IntegrationOptions& options = {});

/// rk4_integrate, halving dt (up to `max_refinements` times) whenever the
/// simplex check trips.
Trajectory rk4_integrate_refining(OdeSystem system, const BanditInstance& instance, const Schedule& schedule,
                                  const OdeState& initial, double horizon, double dt,
                                  const IntegrationOptions& options = {}, int max_refinements = 6);

// ---------------------------------------------------------------------------
// Closed forms, diagnostics and bounds
// ---------------------------------------------------------------------------

/// p(t) = p0 / (1 + alpha gap p0 t), the exact solution of p' = -alpha gap p^2.
double closed_form_samba(double p0, double gap, double alpha, double t);

/// Instantaneous regret sum_a Delta_a p_a.
double instantaneous_regret(std::span<const double> probs, const BanditInstance& instance);

struct RegretDiagnostics {
  double rg = 0.0;
  std::vector<double> rg_vector;  // Delta_a p_a
  Eigen::MatrixXd d_matrix;       // (a, a') = I_aa' - p_a'
  /// sum_a (Delta_a p_a - rg p_a)^2; equals the squared norm of D^T rg_vector.
  double decay_norm_sq = 0.0;
  /// d(rg)/dt along the softmax flow, by the chain rule through the jacobian.
  double decay_rate = 0.0;
  /// |decay_rate + alpha * decay_norm_sq|
  double decay_identity_residual = 0.0;
  /// alpha * decay_norm_sq - alpha p_{a*}^2 rg^2; never negative in exact arithmetic.
  double theorem1_bound_slack = 0.0;
};

RegretDiagnostics regret_diagnostics(std::span<const double> probs, const BanditInstance& instance, double alpha);

/// x^{-lambda} - elapsed_alpha_integral.
double lyapunov_value(double x, double elapsed_alpha_integral, double lambda_exponent);

/// rg0 / (1 + rg0 alpha floor^2 t): the integrated decay bound with p_{a*} >= floor.
double theorem1_regret_bound(double p_star_floor, double rg0, double alpha, double t);

/// sum over suboptimal arms of log(1 + alpha Delta_a T / N) / (alpha Delta_a),
/// with T / N substituted for arms whose gap is zero.
double theorem2_regret_bound(const BanditInstance& instance, double alpha, double horizon);

/// Predicted log-slopes: N^2 / alpha (softmax) and sum_{Delta_a > 0} 1/(alpha Delta_a) (SAMBA).
double theorem1_log_slope(std::size_t arms, double alpha);
double theorem2_log_slope(const BanditInstance& instance, double alpha);

}  // namespace pgbandit
