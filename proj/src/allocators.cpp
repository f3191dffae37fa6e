#include "secalloc/allocators.hpp"

#include <algorithm>

namespace secalloc {

namespace {

std::vector<const SecurityTask*> by_priority(const std::vector<SecurityTask>& tasks) {
    std::vector<const SecurityTask*> order;
    order.reserve(tasks.size());
    for (const auto& t : tasks)
        order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const SecurityTask* a, const SecurityTask* b) { return a->priority < b->priority; });
    return order;
}

std::vector<Rational> security_core_utils(const Allocation& alloc, const SystemConfig& config,
                                          int core_count) {
    std::vector<Rational> util(core_count, Rational(0));
    for (const auto& s : config.sec_tasks) {
        auto it = alloc.assignment.find(s.id);
        if (it == alloc.assignment.end())
            continue;
        util[it->second] += ratio(s.wcet, alloc.periods.at(s.id));
    }
    return util;
}

AllocationOutcome finish(const SystemConfig& config, Platform platform, Allocation alloc) {
    // post-hoc check: every task must satisfy the schedulability constraint
    // on its assigned core with the final period vector
    SystemConfig effective = config;
    effective.platform = platform;
    for (const auto& s : config.sec_tasks) {
        if (!security_schedulable(s, alloc.assignment.at(s.id), effective, alloc,
                                  alloc.periods.at(s.id)))
            throw std::logic_error("allocator produced an unschedulable assignment for " + s.id);
    }

    AllocationOutcome out;
    out.status = AllocationStatus::ok;
    out.objective = objective_value(alloc, config.sec_tasks);
    out.per_core_security_util = security_core_utils(alloc, config, platform.core_count);
    out.platform = std::move(platform);
    out.allocation = std::move(alloc);
    return out;
}

AllocationOutcome unschedulable(const SystemConfig& config, std::string failed) {
    AllocationOutcome out;
    out.status = AllocationStatus::unschedulable;
    out.failed_task = std::move(failed);
    out.platform = config.platform;
    return out;
}

/// Fix periods for a given assignment, walking tasks in priority order.
/// Returns the failing task id on infeasibility.
std::optional<std::string> solve_periods(const SystemConfig& config, Allocation& alloc) {
    for (const SecurityTask* task : by_priority(config.sec_tasks)) {
        int core = alloc.assignment.at(task->id);
        auto sol = optimize_period(*task, core, config, alloc);
        if (!sol)
            return task->id;
        alloc.periods[task->id] = sol->period;
        alloc.tightness[task->id] = sol->tightness;
    }
    return std::nullopt;
}

} // namespace

AllocationOutcome hydra_allocate(const SystemConfig& config) {
    const int cores = config.platform.core_count;
    Allocation alloc;

    for (const SecurityTask* task : by_priority(config.sec_tasks)) {
        std::optional<PeriodSolution> best;
        int best_core = -1;
        for (int m = 0; m < cores; ++m) {
            auto sol = optimize_period(*task, m, config, alloc);
            if (!sol)
                continue;
            if (!best || sol->tightness > best->tightness) {
                best = sol;
                best_core = m;
            }
        }
        if (!best)
            return unschedulable(config, task->id);
        alloc.assignment[task->id] = best_core;
        alloc.periods[task->id] = best->period;
        alloc.tightness[task->id] = best->tightness;
    }

    return finish(config, config.platform, std::move(alloc));
}

AllocationOutcome single_core_allocate(const SystemConfig& config) {
    const int cores = config.platform.core_count;
    if (cores < 2)
        return unschedulable(config, RT_PARTITION_FAILED);

    auto repack = best_fit_partition(config.rt_tasks, cores - 1);
    if (!repack.ok())
        return unschedulable(config, RT_PARTITION_FAILED);

    Platform platform = *repack.platform;
    platform.core_count = cores;
    const int security_core = cores - 1;

    SystemConfig repacked = config;
    repacked.platform = platform;

    Allocation alloc;
    for (const SecurityTask* task : by_priority(config.sec_tasks)) {
        alloc.assignment[task->id] = security_core;
        auto sol = optimize_period(*task, security_core, repacked, alloc);
        if (!sol)
            return unschedulable(config, task->id);
        alloc.periods[task->id] = sol->period;
        alloc.tightness[task->id] = sol->tightness;
    }

    return finish(repacked, platform, std::move(alloc));
}

AllocationOutcome exhaustive_optimal(const SystemConfig& config, const ExhaustiveLimits& limits) {
    const int cores = config.platform.core_count;
    const auto order = by_priority(config.sec_tasks);
    const std::size_t n = order.size();

    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (combos > limits.max_assignments / static_cast<std::uint64_t>(cores)) {
            AllocationOutcome out;
            out.status = AllocationStatus::limit_exceeded;
            out.platform = config.platform;
            return out;
        }
        combos *= static_cast<std::uint64_t>(cores);
    }

    std::optional<AllocationOutcome> best;
    std::string first_failure;
    std::vector<int> digits(n, 0);

    for (std::uint64_t k = 0; k < combos; ++k) {
        // k in base M, most significant digit = highest-priority task, so the
        // scan runs in lexicographic assignment order and strict improvement
        // keeps the lexicographically smallest maximizer.
        std::uint64_t rem = k;
        for (std::size_t i = n; i-- > 0;) {
            digits[i] = static_cast<int>(rem % static_cast<std::uint64_t>(cores));
            rem /= static_cast<std::uint64_t>(cores);
        }

        Allocation alloc;
        for (std::size_t i = 0; i < n; ++i)
            alloc.assignment[order[i]->id] = digits[i];
        if (auto failed = solve_periods(config, alloc)) {
            if (first_failure.empty())
                first_failure = *failed;
            continue;
        }

        Rational obj = objective_value(alloc, config.sec_tasks);
        if (!best || obj > best->objective) {
            best = finish(config, config.platform, std::move(alloc));
        }
    }

    if (!best)
        return unschedulable(config, first_failure);
    return *best;
}

Rational cumulative_tightness(const AllocationOutcome& outcome) {
    if (!outcome.allocation)
        throw std::invalid_argument("cumulative_tightness: outcome has no allocation");
    Rational sum = 0;
    for (const auto& [id, eta] : outcome.allocation->tightness) {
        (void)id;
        sum += eta;
    }
    return sum;
}

std::optional<Rational> delta_eta(const AllocationOutcome& optimal, const AllocationOutcome& heuristic) {
    if (!optimal.schedulable() || !heuristic.schedulable())
        return std::nullopt;
    Rational eta_opt = cumulative_tightness(optimal);
    Rational eta_heur = cumulative_tightness(heuristic);
    if (eta_opt == 0)
        return Rational(0);
    return (eta_opt - eta_heur) / eta_opt * 100;
}

} // namespace secalloc
