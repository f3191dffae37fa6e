#pragma once

#include <cstdint>
#include <optional>

#include "secalloc/partitioner.hpp"
#include "secalloc/period_opt.hpp"

namespace secalloc {

enum class AllocationStatus {
    ok,
    unschedulable,
    limit_exceeded,
};

/// Reserved failure tag for the single-core scheme when the real-time tasks
/// do not fit on M-1 cores.
inline constexpr const char* RT_PARTITION_FAILED = "rt_partition_failed";

struct AllocationOutcome {
    AllocationStatus status = AllocationStatus::unschedulable;
    std::optional<Allocation> allocation;
    std::string failed_task;  // task id, or RT_PARTITION_FAILED
    Rational objective = 0;
    std::vector<Rational> per_core_security_util;
    /// Platform the allocation is valid against. Equals the input platform
    /// except for the single-core scheme, which repacks the real-time tasks.
    Platform platform;

    bool schedulable() const { return status == AllocationStatus::ok; }
};

/// Iterative greedy allocation: walk the security tasks from highest to
/// lowest priority, solve the period subproblem on every core, and commit
/// each task to the core whose solution has maximum tightness (ties to the
/// lowest core index). Fails on the first task with no feasible core.
AllocationOutcome hydra_allocate(const SystemConfig& config);

/// Baseline: repack the real-time tasks onto cores 0..M-2 and dedicate the
/// highest-indexed core to all security tasks, periods solved in priority
/// order with zero real-time interference.
AllocationOutcome single_core_allocate(const SystemConfig& config);

struct ExhaustiveLimits {
    std::uint64_t max_assignments = 1'000'000;
};

/// Enumerates every task-to-core assignment (periods per assignment solved
/// greedily in priority order, mirroring the subproblem HYDRA optimizes)
/// and keeps the feasible one with maximum objective; ties go to the
/// lexicographically smallest assignment vector. Status limit_exceeded when
/// M^N_S would pass the guard.
AllocationOutcome exhaustive_optimal(const SystemConfig& config, const ExhaustiveLimits& limits = {});

/// Relative cumulative-tightness gap (eta_opt - eta_heur) / eta_opt * 100,
/// unweighted. nullopt when either outcome is not schedulable.
std::optional<Rational> delta_eta(const AllocationOutcome& optimal, const AllocationOutcome& heuristic);

/// Unweighted sum of tightness values of a completed allocation.
Rational cumulative_tightness(const AllocationOutcome& outcome);

} // namespace secalloc
