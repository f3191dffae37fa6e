#pragma once

#include <map>
#include <string>
#include <vector>

#include "secalloc/types.hpp"

namespace secalloc {

/// Sporadic real-time task with implicit deadline. Priorities are ranks:
/// lower rank means higher priority, assigned by assign_rm_priorities.
struct RealTimeTask {
    std::string id;
    TimeValue wcet;
    TimeValue period;
    TimeValue deadline;
    int priority = -1;

    Rational utilization() const { return ratio(wcet, period); }

    bool operator==(const RealTimeTask&) const = default;
};

/// Sporadic security-monitoring task. The assigned period is chosen later,
/// anywhere in [desired_period, max_period]; priority ranks come from
/// assign_security_priorities (ascending max_period).
struct SecurityTask {
    std::string id;
    TimeValue wcet;
    TimeValue desired_period;
    TimeValue max_period;
    Rational weight = 1;
    int priority = -1;

    Rational desired_frequency() const { return Rational(1) / to_rational(desired_period); }

    bool operator==(const SecurityTask&) const = default;
};

/// M identical cores plus the static real-time partition (task id -> core).
struct Platform {
    int core_count = 0;
    std::map<std::string, int> rt_partition;

    bool operator==(const Platform&) const = default;
};

struct SystemConfig {
    Platform platform;
    std::vector<RealTimeTask> rt_tasks;
    std::vector<SecurityTask> sec_tasks;

    bool operator==(const SystemConfig&) const = default;
};

/// Security-task placement: one core per task, one period per task,
/// tightness = desired_period / period held exactly.
struct Allocation {
    std::map<std::string, int> assignment;
    std::map<std::string, TimeValue> periods;
    std::map<std::string, Rational> tightness;

    bool operator==(const Allocation&) const = default;
};

/// Rate-monotonic ranks: ascending period, ties by id. Returns the tasks in
/// their input order with `priority` filled; idempotent and order-stable.
std::vector<RealTimeTask> assign_rm_priorities(std::vector<RealTimeTask> tasks);

/// Security ranks: ascending max_period, ties by ascending desired_period
/// then id. hp_S(s) is everything with a smaller rank.
std::vector<SecurityTask> assign_security_priorities(std::vector<SecurityTask> tasks);

struct Violation {
    std::string code;
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// Collects every invariant violation; empty means the config is well formed.
std::vector<Violation> validate_config(const SystemConfig& config);

} // namespace secalloc
