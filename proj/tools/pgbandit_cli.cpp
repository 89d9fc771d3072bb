// Experiment runner for the softmax policy-gradient and SAMBA bandit
// algorithms and their mean-field ODEs. Links only the C interface.
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pgbandit/pgbandit.h"

namespace {

int report_failure(pgb_status status) {
  std::fprintf(stderr, "%s\n", pgb_last_error_json());
  return static_cast<int>(status);
}

void print_error_json(const std::string& kind, const std::string& message) {
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') escaped += '\\';
    if (c == '\n') {
      escaped += "\\n";
      continue;
    }
    escaped += c;
  }
  std::fprintf(stderr, "{\"kind\":\"%s\",\"message\":\"%s\",\"status\":%d}\n", kind.c_str(), escaped.c_str(),
               static_cast<int>(PGB_ERR_CONFIG));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run bandit policy-gradient experiments and write regret curves"};

  std::string config_path;
  bool per_rep = false;
  bool plot = false;
  app.add_option("--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);

  // Flag name -> config override key, applied in this order after --config.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"algorithm", "softmax_pg | samba | softmax_ode | samba_ode"},
      {"means", "comma-separated Bernoulli means, e.g. 0.3,0.7"},
      {"alpha0", "base learning rate"},
      {"schedule", "constant | inverse_log_time | state_dependent"},
      {"baseline", "zero | running_mean | fixed:<value> (softmax_pg only)"},
      {"horizon", "ODE time horizon or stochastic step count"},
      {"dt", "RK4 step size (ODE runs)"},
      {"replications", "number of seeded replications (stochastic runs)"},
      {"seed", "base seed; replication k uses stream k"},
      {"checkpoints", "comma-separated checkpoint times, or 'default'"},
      {"out", "output directory"},
  };
  std::vector<std::optional<std::string>> values(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    app.add_option("--" + flags[i].first, values[i], flags[i].second);
  }
  app.add_flag("--per-rep", per_rep, "also write rep_<k>.csv per replication");
  app.add_flag("--plot", plot, "also write regret.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error_json("usage", e.what());
    return static_cast<int>(PGB_ERR_CONFIG);
  }

  pgb_config* raw_config = nullptr;
  pgb_status status = config_path.empty() ? pgb_config_create(&raw_config)
                                          : pgb_config_from_file(config_path.c_str(), &raw_config);
  if (status != PGB_OK) return report_failure(status);
  std::unique_ptr<pgb_config, decltype(&pgb_config_destroy)> config(raw_config, &pgb_config_destroy);

  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!values[i]) continue;
    status = pgb_config_set(config.get(), flags[i].first.c_str(), values[i]->c_str());
    if (status != PGB_OK) return report_failure(status);
  }
  if ((status = pgb_config_validate(config.get())) != PGB_OK) return report_failure(status);

  pgb_result* raw_result = nullptr;
  if ((status = pgb_run_experiment(config.get(), &raw_result)) != PGB_OK) return report_failure(status);
  std::unique_ptr<pgb_result, decltype(&pgb_result_destroy)> result(raw_result, &pgb_result_destroy);

  std::size_t needed = 0;
  pgb_config_output_dir(config.get(), nullptr, 0, &needed);
  std::string out_dir(needed, '\0');
  if ((status = pgb_config_output_dir(config.get(), out_dir.data(), out_dir.size(), &needed)) != PGB_OK) {
    return report_failure(status);
  }
  out_dir.resize(needed - 1);

  if ((status = pgb_result_emit(result.get(), out_dir.c_str(), per_rep ? 1 : 0, plot ? 1 : 0)) != PGB_OK) {
    return report_failure(status);
  }

  std::size_t rows = 0;
  pgb_result_checkpoint_count(result.get(), &rows);
  double slope = 0, predicted = 0, ratio = 0;
  if (pgb_result_fit(result.get(), &slope, &predicted, &ratio) == PGB_OK) {
    std::printf("{\"output_dir\":\"%s\",\"checkpoints\":%zu,\"log_slope\":%.10g,\"predicted_slope\":%.10g,"
                "\"ratio\":%.10g}\n",
                out_dir.c_str(), rows, slope, predicted, ratio);
  } else {
    std::printf("{\"output_dir\":\"%s\",\"checkpoints\":%zu,\"fit\":null}\n", out_dir.c_str(), rows);
  }
  return 0;
}
