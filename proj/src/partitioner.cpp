#include "secalloc/partitioner.hpp"

#include <algorithm>

namespace secalloc {

namespace {

/// Every task on the core must keep a convergent response time when the
/// candidate joins; adding a task can only hurt lower-priority cohabitants.
bool core_schedulable(std::vector<const RealTimeTask*> core_tasks) {
    std::sort(core_tasks.begin(), core_tasks.end(),
              [](const RealTimeTask* a, const RealTimeTask* b) { return a->priority < b->priority; });
    std::vector<RealTimeTask> higher;
    for (const RealTimeTask* t : core_tasks) {
        if (!rt_response_time(*t, higher))
            return false;
        higher.push_back(*t);
    }
    return true;
}

} // namespace

PartitionResult best_fit_partition(const std::vector<RealTimeTask>& rt_tasks, int core_count) {
    if (core_count <= 0)
        throw std::invalid_argument("best_fit_partition: core count must be positive");
    for (const auto& t : rt_tasks)
        if (t.priority < 0)
            throw std::invalid_argument("best_fit_partition: task " + t.id + " has no RM priority");

    std::vector<const RealTimeTask*> order;
    order.reserve(rt_tasks.size());
    for (const auto& t : rt_tasks)
        order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const RealTimeTask* a, const RealTimeTask* b) {
        Rational ua = a->utilization(), ub = b->utilization();
        if (ua != ub)
            return ua > ub;
        return a->id < b->id;
    });

    std::vector<std::vector<const RealTimeTask*>> cores(core_count);
    std::vector<Rational> load(core_count, Rational(0));
    Platform platform;
    platform.core_count = core_count;

    for (const RealTimeTask* task : order) {
        int best = -1;
        for (int m = 0; m < core_count; ++m) {
            auto candidate = cores[m];
            candidate.push_back(task);
            if (!core_schedulable(std::move(candidate)))
                continue;
            if (best < 0 || load[m] > load[best])
                best = m;
        }
        if (best < 0)
            return PartitionResult{std::nullopt, task->id};
        cores[best].push_back(task);
        load[best] += task->utilization();
        platform.rt_partition[task->id] = best;
    }

    return PartitionResult{platform, ""};
}

} // namespace secalloc
