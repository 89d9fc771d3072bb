#include "pgbandit/pgbandit.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pgbandit/error.hpp"
#include "pgbandit/experiment.hpp"
#include "pgbandit/ode.hpp"
#include "pgbandit/samba.hpp"

struct pgb_instance {
  pgbandit::BanditInstance impl;
};

struct pgb_config {
  pgbandit::ExperimentConfig impl;
};

struct pgb_result {
  pgbandit::ExperimentResult impl;
};

namespace {

using pgbandit::ErrorCode;

thread_local std::string g_last_error;
thread_local std::string g_last_error_json = "null";

pgb_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return PGB_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return PGB_ERR_DIMENSION;
    case ErrorCode::simplex_violation: return PGB_ERR_SIMPLEX;
    case ErrorCode::integration_failure: return PGB_ERR_INTEGRATION;
    case ErrorCode::config: return PGB_ERR_CONFIG;
    case ErrorCode::io: return PGB_ERR_IO;
    case ErrorCode::fit: return PGB_ERR_FIT;
  }
  return PGB_ERR_INTERNAL;
}

pgb_status set_error(pgb_status status, const std::string& kind, const std::string& message,
                     const nlohmann::json& extra = nlohmann::json::object()) {
  g_last_error = message;
  nlohmann::json doc = extra;
  doc["status"] = static_cast<int>(status);
  doc["kind"] = kind;
  doc["message"] = message;
  g_last_error_json = doc.dump();
  return status;
}

template <class F>
pgb_status guarded(F&& body) {
  try {
    body();
    return PGB_OK;
  } catch (const pgbandit::ReplicationError& e) {
    return set_error(status_of(e.code()), pgbandit::to_string(e.code()), e.what(),
                     {{"replication", e.replication()}, {"step", e.step()}});
  } catch (const pgbandit::Error& e) {
    return set_error(status_of(e.code()), pgbandit::to_string(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(PGB_ERR_CONFIG, "config", e.what());
  } catch (const std::exception& e) {
    return set_error(PGB_ERR_INTERNAL, "internal", e.what());
  } catch (...) {
    return set_error(PGB_ERR_INTERNAL, "internal", "unknown exception");
  }
}

#define PGB_REQUIRE(ptr)                                                                 \
  do {                                                                                   \
    if ((ptr) == nullptr) return set_error(PGB_ERR_NULL_POINTER, "null_pointer", #ptr " is null"); \
  } while (0)

pgb_status copy_string(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr || capacity < s.size() + 1) {
    return set_error(PGB_ERR_BUFFER_TOO_SMALL, "buffer_too_small",
                     "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return PGB_OK;
}

}  // namespace

extern "C" {

const char* pgb_version(void) { return "1.0.0"; }
const char* pgb_last_error(void) { return g_last_error.c_str(); }
const char* pgb_last_error_json(void) { return g_last_error_json.c_str(); }

pgb_status pgb_instance_create(const double* means, size_t arms, pgb_instance** out) {
  PGB_REQUIRE(means);
  PGB_REQUIRE(out);
  return guarded([&] {
    *out = new pgb_instance{pgbandit::BanditInstance::make(std::span<const double>(means, arms))};
  });
}

void pgb_instance_destroy(pgb_instance* instance) { delete instance; }

pgb_status pgb_instance_arms(const pgb_instance* instance, size_t* arms) {
  PGB_REQUIRE(instance);
  PGB_REQUIRE(arms);
  *arms = instance->impl.arms();
  return PGB_OK;
}

pgb_status pgb_instance_optimal_arm(const pgb_instance* instance, size_t* arm) {
  PGB_REQUIRE(instance);
  PGB_REQUIRE(arm);
  *arm = instance->impl.optimal_arm();
  return PGB_OK;
}

pgb_status pgb_instance_gaps(const pgb_instance* instance, double* gaps, size_t capacity) {
  PGB_REQUIRE(instance);
  PGB_REQUIRE(gaps);
  const auto& g = instance->impl.gaps();
  if (capacity < g.size()) return set_error(PGB_ERR_BUFFER_TOO_SMALL, "buffer_too_small", "gap buffer too small");
  std::copy(g.begin(), g.end(), gaps);
  return PGB_OK;
}

pgb_status pgb_softmax(const double* weights, size_t arms, double* probs) {
  PGB_REQUIRE(weights);
  PGB_REQUIRE(probs);
  return guarded([&] {
    const auto p = pgbandit::softmax(std::span<const double>(weights, arms));
    std::copy(p.begin(), p.end(), probs);
  });
}

pgb_status pgb_samba_step(double* probs, size_t arms, double alpha, size_t played_arm, int reward) {
  PGB_REQUIRE(probs);
  return guarded([&] {
    auto state = pgbandit::SambaState::make(std::vector<double>(probs, probs + arms), alpha);
    const auto next = pgbandit::samba_step(state, played_arm, reward);
    std::copy(next.probs().begin(), next.probs().end(), probs);
  });
}

pgb_status pgb_closed_form_samba(double p0, double gap, double alpha, double t, double* out) {
  PGB_REQUIRE(out);
  *out = pgbandit::closed_form_samba(p0, gap, alpha, t);
  return PGB_OK;
}

pgb_status pgb_theorem1_regret_bound(double p_star_floor, double rg0, double alpha, double t, double* out) {
  PGB_REQUIRE(out);
  *out = pgbandit::theorem1_regret_bound(p_star_floor, rg0, alpha, t);
  return PGB_OK;
}

pgb_status pgb_theorem2_regret_bound(const pgb_instance* instance, double alpha, double horizon, double* out) {
  PGB_REQUIRE(instance);
  PGB_REQUIRE(out);
  return guarded([&] { *out = pgbandit::theorem2_regret_bound(instance->impl, alpha, horizon); });
}

pgb_status pgb_regret_diagnostics(const pgb_instance* instance, const double* probs, double alpha, double* rg,
                                  double* decay_norm_sq, double* decay_identity_residual,
                                  double* theorem1_bound_slack) {
  PGB_REQUIRE(instance);
  PGB_REQUIRE(probs);
  return guarded([&] {
    const auto d = pgbandit::regret_diagnostics(std::span<const double>(probs, instance->impl.arms()),
                                                instance->impl, alpha);
    if (rg) *rg = d.rg;
    if (decay_norm_sq) *decay_norm_sq = d.decay_norm_sq;
    if (decay_identity_residual) *decay_identity_residual = d.decay_identity_residual;
    if (theorem1_bound_slack) *theorem1_bound_slack = d.theorem1_bound_slack;
  });
}

pgb_status pgb_config_create(pgb_config** out) {
  PGB_REQUIRE(out);
  return guarded([&] { *out = new pgb_config{}; });
}

pgb_status pgb_config_from_json(const char* json, pgb_config** out) {
  PGB_REQUIRE(json);
  PGB_REQUIRE(out);
  return guarded([&] {
    auto doc = nlohmann::json::parse(json);
    *out = new pgb_config{pgbandit::config_from_json(doc)};
  });
}

pgb_status pgb_config_from_file(const char* path, pgb_config** out) {
  PGB_REQUIRE(path);
  PGB_REQUIRE(out);
  std::ifstream in(path);
  if (!in) return set_error(PGB_ERR_IO, "io", std::string("cannot read ") + path, {{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  return pgb_config_from_json(text.c_str(), out);
}

pgb_status pgb_config_set(pgb_config* config, const char* key, const char* value) {
  PGB_REQUIRE(config);
  PGB_REQUIRE(key);
  PGB_REQUIRE(value);
  return guarded([&] { pgbandit::apply_override(config->impl, key, value); });
}

pgb_status pgb_config_validate(const pgb_config* config) {
  PGB_REQUIRE(config);
  return guarded([&] { config->impl.validate(); });
}

pgb_status pgb_config_to_json(const pgb_config* config, char* buf, size_t capacity, size_t* needed) {
  PGB_REQUIRE(config);
  return copy_string(pgbandit::to_json(config->impl).dump(2), buf, capacity, needed);
}

pgb_status pgb_config_output_dir(const pgb_config* config, char* buf, size_t capacity, size_t* needed) {
  PGB_REQUIRE(config);
  return copy_string(config->impl.output_dir, buf, capacity, needed);
}

void pgb_config_destroy(pgb_config* config) { delete config; }

pgb_status pgb_run_experiment(const pgb_config* config, pgb_result** out) {
  PGB_REQUIRE(config);
  PGB_REQUIRE(out);
  return guarded([&] { *out = new pgb_result{pgbandit::run_experiment(config->impl)}; });
}

pgb_status pgb_result_checkpoint_count(const pgb_result* result, size_t* count) {
  PGB_REQUIRE(result);
  PGB_REQUIRE(count);
  *count = result->impl.rows.size();
  return PGB_OK;
}

pgb_status pgb_result_checkpoint(const pgb_result* result, size_t index, double* time, double* mean_rg,
                                 double* mean_regret, double* std_regret, double* theorem_bound) {
  PGB_REQUIRE(result);
  if (index >= result->impl.rows.size()) {
    return set_error(PGB_ERR_INVALID_ARGUMENT, "invalid_argument", "checkpoint index out of range");
  }
  const auto& row = result->impl.rows[index];
  if (time) *time = row.time;
  if (mean_rg) *mean_rg = row.mean_rg;
  if (mean_regret) *mean_regret = row.mean_regret;
  if (std_regret) *std_regret = row.std_regret;
  if (theorem_bound) *theorem_bound = row.theorem_bound;
  return PGB_OK;
}

pgb_status pgb_result_fit(const pgb_result* result, double* log_slope, double* predicted_slope, double* ratio) {
  PGB_REQUIRE(result);
  const auto& fit = result->impl.fit;
  if (!fit) return set_error(PGB_ERR_FIT, "fit", result->impl.fit_error);
  if (log_slope) *log_slope = fit->log_slope;
  if (predicted_slope) *predicted_slope = fit->predicted_slope;
  if (ratio) *ratio = fit->ratio;
  return PGB_OK;
}

pgb_status pgb_result_emit(const pgb_result* result, const char* output_dir, int per_replication, int plot) {
  PGB_REQUIRE(result);
  PGB_REQUIRE(output_dir);
  try {
    pgbandit::emit_outputs(result->impl, output_dir, {per_replication != 0, plot != 0});
    return PGB_OK;
  } catch (const pgbandit::Error& e) {
    return set_error(status_of(e.code()), pgbandit::to_string(e.code()), e.what(), {{"path", output_dir}});
  } catch (const std::exception& e) {
    return set_error(PGB_ERR_INTERNAL, "internal", e.what(), {{"path", output_dir}});
  }
}

void pgb_result_destroy(pgb_result* result) { delete result; }

}  // extern "C"
