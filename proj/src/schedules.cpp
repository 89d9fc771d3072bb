#include "pgbandit/schedules.hpp"

#include <cmath>
#include <numbers>

#include "pgbandit/error.hpp"

namespace pgbandit {
namespace {

template <class F>
double simpson(F&& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

}  // namespace

const char* to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::inverse_log_time: return "inverse_log_time";
    case ScheduleKind::state_dependent: return "state_dependent";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "constant") return ScheduleKind::constant;
  if (name == "inverse_log_time") return ScheduleKind::inverse_log_time;
  if (name == "state_dependent") return ScheduleKind::state_dependent;
  fail(ErrorCode::invalid_argument, "unknown schedule '" + name + "'");
}

double rate_at(const Schedule& schedule, double t, double p_a) {
  if (!(schedule.alpha0 > 0.0)) fail(ErrorCode::invalid_argument, "alpha0 must be positive");
  switch (schedule.kind) {
    case ScheduleKind::constant:
      return schedule.alpha0;
    case ScheduleKind::inverse_log_time:
      if (!(t >= 0.0)) fail(ErrorCode::invalid_argument, "schedule time must be non-negative");
      return schedule.alpha0 / std::log(std::numbers::e + t);
    case ScheduleKind::state_dependent:
      if (!(p_a > 0.0 && p_a <= 1.0)) {
        fail(ErrorCode::invalid_argument, "state-dependent rate needs p_a in (0,1]");
      }
      return schedule.alpha0 / (1.0 - std::log(p_a));
  }
  return schedule.alpha0;
}

double alpha_integral(const Schedule& schedule, double t) {
  if (!(t >= 0.0)) fail(ErrorCode::invalid_argument, "integration horizon must be non-negative");
  switch (schedule.kind) {
    case ScheduleKind::constant:
      return schedule.alpha0 * t;
    case ScheduleKind::inverse_log_time: {
      auto f = [&](double s) { return schedule.alpha0 / std::log(std::numbers::e + s); };
      double total = 0.0;
      double lo = 0.0;
      double hi = std::min(t, 1.0);
      while (lo < t) {
        total += simpson(f, lo, hi, 256);
        lo = hi;
        hi = std::min(t, 2.0 * hi);
      }
      return total;
    }
    case ScheduleKind::state_dependent:
      fail(ErrorCode::invalid_argument,
           "alpha_integral is path-dependent for state-dependent schedules; accumulate along the trajectory");
  }
  return 0.0;
}

}  // namespace pgbandit
