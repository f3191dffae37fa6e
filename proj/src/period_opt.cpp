#include "secalloc/period_opt.hpp"

namespace secalloc {

Rational tightness(TimeValue t_des, TimeValue t) {
    if (t_des.us <= 0)
        throw std::invalid_argument("tightness: desired period must be positive");
    if (t < t_des)
        throw std::invalid_argument("tightness: assigned period below desired period");
    return ratio(t_des, t);
}

std::optional<PeriodSolution> optimize_period(const SecurityTask& sec_task, int core,
                                              const SystemConfig& config,
                                              const Allocation& partial_alloc) {
    Rational util = 0;
    Rational base = to_rational(sec_task.wcet);

    for (const auto& rt : config.rt_tasks) {
        auto it = config.platform.rt_partition.find(rt.id);
        if (it == config.platform.rt_partition.end() || it->second != core)
            continue;
        util += rt.utilization();
        base += to_rational(rt.wcet);
    }
    for (const auto& other : config.sec_tasks) {
        if (other.priority >= sec_task.priority)
            continue;
        auto it = partial_alloc.assignment.find(other.id);
        if (it == partial_alloc.assignment.end() || it->second != core)
            continue;
        auto pit = partial_alloc.periods.find(other.id);
        if (pit == partial_alloc.periods.end())
            throw std::logic_error("optimize_period: higher-priority security task " + other.id +
                                   " on core has no assigned period");
        util += ratio(other.wcet, pit->second);
        base += to_rational(other.wcet);
    }

    if (util >= 1)
        return std::nullopt;

    // compare in rationals first: T_min can exceed any representable time
    // when 1 - U is minuscule
    Rational t_min = base / (Rational(1) - util);
    if (t_min > to_rational(sec_task.max_period))
        return std::nullopt;
    TimeValue period{std::max(sec_task.desired_period.us, ceil_to_int64(t_min))};
    if (period > sec_task.max_period)
        return std::nullopt;

    // The grid rounding cannot break feasibility while 1 - U > 0; checked anyway.
    Rational load = to_rational(sec_task.wcet) +
                    interference(sec_task, core, config, partial_alloc, period);
    if (load > to_rational(period))
        return std::nullopt;

    return PeriodSolution{period, tightness(sec_task.desired_period, period),
                          to_rational(period) - load};
}

Rational objective_value(const Allocation& allocation, const std::vector<SecurityTask>& sec_tasks) {
    Rational total = 0;
    for (const auto& s : sec_tasks) {
        if (!allocation.assignment.count(s.id))
            throw std::invalid_argument("objective_value: security task " + s.id + " is unassigned");
        auto pit = allocation.periods.find(s.id);
        if (pit == allocation.periods.end())
            throw std::invalid_argument("objective_value: security task " + s.id + " has no period");
        total += s.weight * tightness(s.desired_period, pit->second);
    }
    return total;
}

} // namespace secalloc
