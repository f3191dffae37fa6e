#pragma once

#include <optional>
#include <vector>

#include "secalloc/task_model.hpp"

namespace secalloc {

/// Maximum cumulative execution demand of jobs of `task` that release and
/// have their deadline inside a window of length t:
///   max(0, (floor((t - D) / T) + 1) * C).
TimeValue dbf(const RealTimeTask& task, TimeValue t);

/// Default analysis horizon: LCM of the real-time periods, capped at 1e9 us.
struct Horizon {
    TimeValue value;
    bool truncated = false;
};
Horizon default_horizon(const std::vector<RealTimeTask>& rt_tasks);

/// Necessary condition for a partitioned taskset on M cores:
///   sum_r DBF(tau_r, t) <= M * t  at every step point of the sum up to the
/// horizon. Step points are the absolute deadlines D_r + k * T_r, where the
/// left side changes; checking them is exact over [0, horizon].
bool necessary_condition(const std::vector<RealTimeTask>& rt_tasks, int cores, TimeValue horizon);

/// Upper bound on higher-priority execution that a security task with
/// candidate period `period` suffers on `core`:
///   I = sum_{rt on core} (1 + T_s/T_r) C_r
///     + sum_{hp sec assigned to core} (1 + T_s/T_h) C_h
/// Throws std::logic_error if a higher-priority security task assigned to
/// the core has no fixed period yet (allocation order violated).
Rational interference(const SecurityTask& sec_task, int core, const SystemConfig& config,
                      const Allocation& partial_alloc, TimeValue period);

/// C_s + I <= T_s, compared exactly.
bool security_schedulable(const SecurityTask& sec_task, int core, const SystemConfig& config,
                          const Allocation& partial_alloc, TimeValue period);

/// Exact response-time iteration R = C + sum_j ceil(R/T_j) C_j over the
/// strictly-higher-priority tasks on the same core. nullopt when the
/// iteration exceeds the deadline (the task does not fit there).
std::optional<TimeValue> rt_response_time(const RealTimeTask& task,
                                          const std::vector<RealTimeTask>& higher_priority_cohabitants);

} // namespace secalloc
