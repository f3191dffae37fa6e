#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secalloc/schedulability.hpp"

namespace secalloc {

struct PartitionResult {
    std::optional<Platform> platform;
    std::string failed_task;  // set when no core admits the task

    bool ok() const { return platform.has_value(); }
};

/// Best-fit bin packing under the exact per-core response-time test.
/// Tasks are placed in decreasing-utilization order (ties by id); each task
/// goes to the core with maximal current utilization among those where the
/// whole prospective core set stays schedulable (ties by lowest index).
/// Requires RM priorities to be assigned.
PartitionResult best_fit_partition(const std::vector<RealTimeTask>& rt_tasks, int core_count);

} // namespace secalloc
