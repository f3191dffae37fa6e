#pragma once

#include <optional>

#include "secalloc/schedulability.hpp"

namespace secalloc {

struct PeriodSolution {
    TimeValue period;    // T*
    Rational tightness;  // desired_period / T*
    Rational slack;      // T* - C_s - I(T*), non-negative when feasible
};

/// eta = desired / assigned, exact. Throws when t < t_des.
Rational tightness(TimeValue t_des, TimeValue t);

/// Maximizes eta over T in [desired_period, max_period] subject to
/// C_s + I(T) <= T on `core`. The interference bound is affine in T, so the
/// constraint rearranges to T (1 - U) >= B with
///   U = sum C_r/T_r + sum C_h/T_h   (utilization of interfering tasks)
///   B = C_s + sum C_r + sum C_h     (constant term),
/// giving T_min = B / (1 - U) when U < 1. Since eta strictly decreases in T,
/// the maximizer is T* = max(desired, ceil(T_min)) if it fits under
/// max_period; rounding up to the microsecond grid keeps the constraint
/// satisfied because its slack grows with T. Returns nullopt when U >= 1 or
/// T* would exceed max_period.
std::optional<PeriodSolution> optimize_period(const SecurityTask& sec_task, int core,
                                              const SystemConfig& config,
                                              const Allocation& partial_alloc);

/// Weighted cumulative tightness sum_s w_s * eta_s over a complete
/// allocation. Throws when a task is missing an assignment or period.
Rational objective_value(const Allocation& allocation, const std::vector<SecurityTask>& sec_tasks);

} // namespace secalloc
