#pragma once

#include <string>

namespace pgbandit {

enum class ScheduleKind {
  constant,          // alpha0
  inverse_log_time,  // alpha0 / log(e + t)
  state_dependent,   // alpha0 / (1 - log p_a)
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::constant;
  double alpha0 = 0.1;

  bool time_based() const noexcept { return kind != ScheduleKind::state_dependent; }
};

const char* to_string(ScheduleKind kind) noexcept;
ScheduleKind parse_schedule_kind(const std::string& name);

/// Learning rate at time t for an arm with probability p_a. Always in (0, alpha0].
double rate_at(const Schedule& schedule, double t, double p_a = 1.0);

/// Integral of the rate over [0, t] for time-based schedules. The
/// inverse-log schedule is integrated with composite Simpson on
/// geometrically growing panels. Throws for state_dependent schedules.
double alpha_integral(const Schedule& schedule, double t);

}  // namespace pgbandit
