#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgbandit/ode.hpp"
#include "pgbandit/policy_gradient.hpp"
#include "pgbandit/schedules.hpp"

namespace pgbandit {

enum class Algorithm { softmax_pg, samba, softmax_ode, samba_ode };

const char* to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(const std::string& name);
bool is_ode(Algorithm algorithm) noexcept;

/// "zero", "running_mean" or "fixed:<value>".
std::string baseline_to_string(const Baseline::Kind& kind);
Baseline::Kind parse_baseline(const std::string& text);

struct ExperimentConfig {
  std::vector<double> instance_means{0.3, 0.7};
  Algorithm algorithm = Algorithm::samba_ode;
  Schedule schedule{ScheduleKind::constant, 0.1};
  Baseline::Kind baseline = RunningMeanBaseline{};
  /// Time horizon for ODE runs, step count for stochastic runs.
  double horizon = 1e4;
  double dt = 1e-2;
  std::size_t replications = 1;
  std::uint64_t base_seed = 0;
  /// Unset means geometric spacing, 20 points per decade; an empty list
  /// means no checkpoints at all.
  std::optional<std::vector<double>> checkpoint_times;
  std::string output_dir = "results";

  /// Throws ErrorCode::config naming the offending field.
  void validate() const;
  /// Checkpoint times actually used by run_experiment.
  std::vector<double> resolved_checkpoints() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Strict: unknown keys are rejected. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
/// Applies a single CLI-style override such as ("means", "0.3,0.7").
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

struct CheckpointRow {
  double time;
  double mean_rg;
  double mean_regret;
  double std_regret;
  double theorem_bound;  // NaN when no closed-form bound applies
};

struct FitResult {
  double log_slope = 0.0;
  double predicted_slope = 0.0;
  double ratio = 0.0;
  double doubling_increment = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  std::size_t points_used = 0;
};

/// Least-squares slope of regret against log T over the final decade of the
/// checkpoints. Needs at least 5 checkpoints spanning a decade.
/// predicted_slope is left at 0 (and ratio at 0) for the caller to fill.
FitResult fit_log_regret(std::span<const std::pair<double, double>> checkpoints);

/// Theorem-predicted log-slope for an algorithm at base rate alpha0.
double predicted_log_slope(Algorithm algorithm, const BanditInstance& instance, double alpha0);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CheckpointRow> rows;
  std::optional<Trajectory> trajectory;
  /// Cumulative regret per replication at each checkpoint (stochastic runs).
  std::vector<std::vector<double>> replication_regret;
  std::optional<FitResult> fit;
  std::string fit_error;
  std::map<std::string, double> diagnostics;
};

/// Deterministic given the config: replication k draws from RngStream(base_seed, k).
/// Module errors inside a replication are rethrown as ReplicationError.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct EmitOptions {
  bool per_replication = false;
  bool plot = false;
};

/// Writes config.json, regret.csv, fit.json, diagnostics.json, and for ODE
/// runs trajectory.csv. Returns the paths written.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                                                const EmitOptions& options = {});

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_number(double value);

}  // namespace pgbandit
