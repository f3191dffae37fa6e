#include "secalloc/schedulability.hpp"

#include <algorithm>

namespace secalloc {

TimeValue dbf(const RealTimeTask& task, TimeValue t) {
    if (t.us < 0)
        throw std::invalid_argument("dbf: negative window");
    if (t < task.deadline)
        return TimeValue{0};
    std::int64_t jobs = (t.us - task.deadline.us) / task.period.us + 1;
    return TimeValue{jobs * task.wcet.us};
}

Horizon default_horizon(const std::vector<RealTimeTask>& rt_tasks) {
    constexpr std::int64_t CAP = 1'000'000'000;
    Horizon h{TimeValue{1}, false};
    std::int64_t l = 1;
    for (const auto& t : rt_tasks)
        l = lcm_capped(l, t.period.us, CAP, h.truncated);
    h.value = TimeValue{l};
    return h;
}

bool necessary_condition(const std::vector<RealTimeTask>& rt_tasks, int cores, TimeValue horizon) {
    if (horizon.us <= 0)
        throw std::invalid_argument("necessary_condition: horizon must be positive");
    if (rt_tasks.empty())
        return true;

    std::vector<std::int64_t> checkpoints;
    for (const auto& t : rt_tasks)
        for (std::int64_t d = t.deadline.us; d <= horizon.us; d += t.period.us)
            checkpoints.push_back(d);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    for (std::int64_t t : checkpoints) {
        std::int64_t demand = 0;
        for (const auto& task : rt_tasks)
            demand += dbf(task, TimeValue{t}).us;
        if (demand > static_cast<std::int64_t>(cores) * t)
            return false;
    }
    return true;
}

Rational interference(const SecurityTask& sec_task, int core, const SystemConfig& config,
                      const Allocation& partial_alloc, TimeValue period) {
    Rational total = 0;
    Rational t_s = to_rational(period);

    for (const auto& rt : config.rt_tasks) {
        auto it = config.platform.rt_partition.find(rt.id);
        if (it == config.platform.rt_partition.end() || it->second != core)
            continue;
        total += (Rational(1) + t_s / to_rational(rt.period)) * to_rational(rt.wcet);
    }

    for (const auto& other : config.sec_tasks) {
        if (other.priority >= sec_task.priority)
            continue;
        auto it = partial_alloc.assignment.find(other.id);
        if (it == partial_alloc.assignment.end() || it->second != core)
            continue;
        auto pit = partial_alloc.periods.find(other.id);
        if (pit == partial_alloc.periods.end())
            throw std::logic_error("interference: higher-priority security task " + other.id +
                                   " on core has no assigned period");
        total += (Rational(1) + t_s / to_rational(pit->second)) * to_rational(other.wcet);
    }

    return total;
}

bool security_schedulable(const SecurityTask& sec_task, int core, const SystemConfig& config,
                          const Allocation& partial_alloc, TimeValue period) {
    Rational lhs = to_rational(sec_task.wcet) + interference(sec_task, core, config, partial_alloc, period);
    return lhs <= to_rational(period);
}

std::optional<TimeValue> rt_response_time(const RealTimeTask& task,
                                          const std::vector<RealTimeTask>& higher_priority_cohabitants) {
    std::int64_t r = task.wcet.us;
    for (;;) {
        if (r > task.deadline.us)
            return std::nullopt;
        std::int64_t next = task.wcet.us;
        for (const auto& h : higher_priority_cohabitants)
            next += ceil_div(r, h.period.us) * h.wcet.us;
        if (next == r)
            return TimeValue{r};
        r = next;
    }
}

} // namespace secalloc
