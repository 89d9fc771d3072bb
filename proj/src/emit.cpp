#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pgbandit/error.hpp"
#include "pgbandit/experiment.hpp"

namespace pgbandit {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) fail(ErrorCode::io, "write failed for " + path.string());
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string regret_csv(const ExperimentResult& r) {
  std::string out = "time,mean_rg,mean_Rg,std_Rg,theorem_bound\n";
  for (const auto& row : r.rows) {
    out += format_number(row.time) + ',' + format_number(row.mean_rg) + ',' + format_number(row.mean_regret) + ',' +
           format_number(row.std_regret) + ',' + format_number(row.theorem_bound) + '\n';
  }
  return out;
}

std::string trajectory_csv(const ExperimentResult& r) {
  const std::size_t n = r.config.instance_means.size();
  std::string out = "time";
  for (std::size_t a = 0; a < n; ++a) out += ",p_" + std::to_string(a);
  out += ",rg,Rg\n";
  for (const auto& row : r.rows) {
    // Rows were taken from trajectory samples; find the matching one.
    for (const auto& s : r.trajectory->samples) {
      if (s.time != row.time) continue;
      out += format_number(s.time);
      for (double p : s.probs) out += ',' + format_number(p);
      out += ',' + format_number(s.rg) + ',' + format_number(s.cumulative_regret) + '\n';
      break;
    }
  }
  return out;
}

nlohmann::json fit_json(const ExperimentResult& r) {
  nlohmann::json doc;
  if (!r.fit) {
    doc["status"] = "insufficient_checkpoints";
    doc["error"] = r.fit_error;
    return doc;
  }
  const FitResult& f = *r.fit;
  doc["status"] = "ok";
  doc["log_slope"] = number_or_null(f.log_slope);
  doc["predicted_slope"] = number_or_null(f.predicted_slope);
  doc["ratio"] = number_or_null(f.ratio);
  doc["doubling_increment"] = number_or_null(f.doubling_increment);
  doc["window"] = {f.window_start, f.window_end};
  doc["points_used"] = f.points_used;
  return doc;
}

std::string replication_csv(const ExperimentResult& r, std::size_t rep) {
  std::string out = "time,Rg\n";
  for (std::size_t c = 0; c < r.rows.size(); ++c) {
    out += format_number(r.rows[c].time) + ',' + format_number(r.replication_regret[rep][c]) + '\n';
  }
  return out;
}

// Regret against log10 T with the theorem bound overlaid.
std::string plot_svg(const ExperimentResult& r) {
  constexpr double width = 640, height = 420, margin = 50;
  std::vector<const CheckpointRow*> rows;
  for (const auto& row : r.rows) {
    if (row.time > 0.0) rows.push_back(&row);
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (rows.size() >= 2) {
    const double x0 = std::log10(rows.front()->time);
    const double x1 = std::log10(rows.back()->time);
    double y1 = 0.0;
    for (const auto* row : rows) {
      y1 = std::max(y1, row->mean_regret);
      if (std::isfinite(row->theorem_bound)) y1 = std::max(y1, row->theorem_bound);
    }
    if (y1 <= 0.0) y1 = 1.0;
    auto px = [&](double t) { return margin + (std::log10(t) - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - y / y1 * (height - 2 * margin); };
    auto polyline = [&](auto value, const char* colour) {
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
      for (const auto* row : rows) {
        const double v = value(*row);
        if (std::isfinite(v)) svg << px(row->time) << ',' << py(v) << ' ';
      }
      svg << "\"/>\n";
    };
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    polyline([](const CheckpointRow& row) { return row.mean_regret; }, "steelblue");
    polyline([](const CheckpointRow& row) { return row.theorem_bound; }, "firebrick");
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">log10 T</text>\n"
        << "<text x=\"" << margin << "\" y=\"" << margin - 10 << "\">Rg (blue), bound (red), max "
        << format_number(y1) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<fs::path> emit_outputs(const ExperimentResult& result, const fs::path& dir, const EmitOptions& options) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  auto put = [&](const std::string& name, const std::string& contents) {
    write_file(dir / name, contents);
    written.push_back(dir / name);
  };

  put("config.json", to_json(result.config).dump(2) + "\n");
  put("regret.csv", regret_csv(result));
  if (result.trajectory) put("trajectory.csv", trajectory_csv(result));
  put("fit.json", fit_json(result).dump(2) + "\n");

  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : result.diagnostics) diag[k] = number_or_null(v);
  put("diagnostics.json", diag.dump(2) + "\n");

  if (options.per_replication) {
    for (std::size_t rep = 0; rep < result.replication_regret.size(); ++rep) {
      put("rep_" + std::to_string(rep) + ".csv", replication_csv(result, rep));
    }
  }
  if (options.plot) put("regret.svg", plot_svg(result));
  return written;
}

}  // namespace pgbandit
