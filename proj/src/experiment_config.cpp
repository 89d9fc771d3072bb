#include <cmath>
#include <set>
#include <sstream>

#include "pgbandit/error.hpp"
#include "pgbandit/experiment.hpp"

namespace pgbandit {
namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::config, field + ": " + what);
}

double parse_double(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) config_error(field, "trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    config_error(field, "not a number: '" + text + "'");
  }
}

std::uint64_t parse_u64(const std::string& field, const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text[0] == '-') config_error(field, "must be non-negative");
    const auto v = std::stoull(text, &used);
    if (used != text.size()) config_error(field, "trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    config_error(field, "not an unsigned integer: '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_double(field, item));
  }
  return out;
}

}  // namespace

const char* to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::softmax_pg: return "softmax_pg";
    case Algorithm::samba: return "samba";
    case Algorithm::softmax_ode: return "softmax_ode";
    case Algorithm::samba_ode: return "samba_ode";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "softmax_pg") return Algorithm::softmax_pg;
  if (name == "samba") return Algorithm::samba;
  if (name == "softmax_ode") return Algorithm::softmax_ode;
  if (name == "samba_ode") return Algorithm::samba_ode;
  config_error("algorithm", "unknown algorithm '" + name + "'");
}

bool is_ode(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::softmax_ode || algorithm == Algorithm::samba_ode;
}

std::string baseline_to_string(const Baseline::Kind& kind) {
  if (std::holds_alternative<ZeroBaseline>(kind)) return "zero";
  if (const auto* fixed = std::get_if<FixedBaseline>(&kind)) return "fixed:" + format_number(fixed->value);
  return "running_mean";
}

Baseline::Kind parse_baseline(const std::string& text) {
  if (text == "zero") return ZeroBaseline{};
  if (text == "running_mean") return RunningMeanBaseline{};
  if (text.rfind("fixed:", 0) == 0) {
    const double v = parse_double("baseline", text.substr(6));
    if (!std::isfinite(v)) config_error("baseline", "fixed baseline must be finite");
    return FixedBaseline{v};
  }
  config_error("baseline", "expected zero, running_mean or fixed:<value>, got '" + text + "'");
}

void ExperimentConfig::validate() const {
  try {
    (void)BanditInstance::make(instance_means);
  } catch (const Error& e) {
    config_error("instance_means", e.what());
  }
  if (!(schedule.alpha0 > 0.0) || !std::isfinite(schedule.alpha0)) config_error("alpha0", "must be positive");
  if (algorithm == Algorithm::samba && schedule.alpha0 > 1.0) {
    config_error("alpha0", "SAMBA needs alpha0 <= 1 to stay on the simplex");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) config_error("horizon", "must be positive");
  if (is_ode(algorithm)) {
    if (!(dt > 0.0) || !std::isfinite(dt)) config_error("dt", "must be positive");
    if (horizon < dt) config_error("horizon", "must be at least one step dt");
  } else if (horizon != std::floor(horizon)) {
    config_error("horizon", "stochastic runs need an integer step count");
  }
  if (replications < 1) config_error("replications", "must be at least 1");
  if (checkpoint_times) {
    for (double t : *checkpoint_times) {
      if (!(t >= 0.0 && t <= horizon)) config_error("checkpoint_times", "entries must lie in [0, horizon]");
    }
  }
  if (output_dir.empty()) config_error("output_dir", "must not be empty");
}

std::vector<double> ExperimentConfig::resolved_checkpoints() const {
  std::vector<double> times;
  if (checkpoint_times) {
    times = *checkpoint_times;
  } else {
    for (int j = 0;; ++j) {
      const double t = std::pow(10.0, j / 20.0);
      if (t > horizon * (1.0 - 1e-12)) break;
      times.push_back(t);
    }
    times.push_back(horizon);
  }
  if (!is_ode(algorithm)) {
    for (double& t : times) t = std::round(t);
  }
  std::set<double> unique(times.begin(), times.end());
  return {unique.begin(), unique.end()};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json doc;
  doc["instance_means"] = c.instance_means;
  doc["algorithm"] = to_string(c.algorithm);
  doc["alpha0"] = c.schedule.alpha0;
  doc["schedule"] = to_string(c.schedule.kind);
  doc["baseline"] = baseline_to_string(c.baseline);
  doc["horizon"] = c.horizon;
  doc["dt"] = c.dt;
  doc["replications"] = c.replications;
  doc["base_seed"] = c.base_seed;
  doc["checkpoint_times"] = c.checkpoint_times ? nlohmann::json(*c.checkpoint_times) : nlohmann::json(nullptr);
  doc["output_dir"] = c.output_dir;
  return doc;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) config_error("config", "top level must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "instance_means") {
        c.instance_means = value.get<std::vector<double>>();
      } else if (key == "algorithm") {
        c.algorithm = parse_algorithm(value.get<std::string>());
      } else if (key == "alpha0") {
        c.schedule.alpha0 = value.get<double>();
      } else if (key == "schedule") {
        c.schedule.kind = parse_schedule_kind(value.get<std::string>());
      } else if (key == "baseline") {
        c.baseline = parse_baseline(value.get<std::string>());
      } else if (key == "horizon") {
        c.horizon = value.get<double>();
      } else if (key == "dt") {
        c.dt = value.get<double>();
      } else if (key == "replications") {
        if (!value.is_number_unsigned()) config_error(key, "must be a positive integer");
        c.replications = value.get<std::size_t>();
      } else if (key == "base_seed") {
        if (!value.is_number_unsigned()) config_error(key, "must be an unsigned 64-bit integer");
        c.base_seed = value.get<std::uint64_t>();
      } else if (key == "checkpoint_times") {
        if (value.is_null()) {
          c.checkpoint_times.reset();
        } else {
          c.checkpoint_times = value.get<std::vector<double>>();
        }
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else {
        config_error(key, "unknown configuration key");
      }
    } catch (const nlohmann::json::exception& e) {
      config_error(key, e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::config) throw;
      config_error(key, e.what());
    }
  }
  return c;
}

void apply_override(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "means" || key == "instance_means") {
      c.instance_means = parse_list(key, value);
    } else if (key == "algorithm") {
      c.algorithm = parse_algorithm(value);
    } else if (key == "alpha0") {
      c.schedule.alpha0 = parse_double(key, value);
    } else if (key == "schedule") {
      c.schedule.kind = parse_schedule_kind(value);
    } else if (key == "baseline") {
      c.baseline = parse_baseline(value);
    } else if (key == "horizon") {
      c.horizon = parse_double(key, value);
    } else if (key == "dt") {
      c.dt = parse_double(key, value);
    } else if (key == "replications") {
      c.replications = parse_u64(key, value);
    } else if (key == "seed" || key == "base_seed") {
      c.base_seed = parse_u64(key, value);
    } else if (key == "checkpoints" || key == "checkpoint_times") {
      if (value == "default") {
        c.checkpoint_times.reset();
      } else {
        c.checkpoint_times = parse_list(key, value);
      }
    } else if (key == "out" || key == "output_dir") {
      c.output_dir = value;
    } else {
      config_error(key, "unknown override");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    config_error(key, e.what());
  }
}

}  // namespace pgbandit
