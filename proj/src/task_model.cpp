#include "secalloc/task_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace secalloc {

namespace {

template <typename Task, typename KeyLess>
std::vector<Task> rank_tasks(std::vector<Task> tasks, KeyLess less) {
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return less(tasks[a], tasks[b]); });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        tasks[order[rank]].priority = static_cast<int>(rank);
    return tasks;
}

} // namespace

std::vector<RealTimeTask> assign_rm_priorities(std::vector<RealTimeTask> tasks) {
    for (const auto& t : tasks)
        if (t.period.us <= 0)
            throw std::invalid_argument("assign_rm_priorities: non-positive period for task " + t.id);
    return rank_tasks(std::move(tasks), [](const RealTimeTask& a, const RealTimeTask& b) {
        return std::tie(a.period.us, a.id) < std::tie(b.period.us, b.id);
    });
}

std::vector<SecurityTask> assign_security_priorities(std::vector<SecurityTask> tasks) {
    for (const auto& t : tasks)
        if (t.max_period.us <= 0)
            throw std::invalid_argument("assign_security_priorities: non-positive max period for task " + t.id);
    return rank_tasks(std::move(tasks), [](const SecurityTask& a, const SecurityTask& b) {
        return std::tie(a.max_period.us, a.desired_period.us, a.id) <
               std::tie(b.max_period.us, b.desired_period.us, b.id);
    });
}

namespace {

void check_rank_order(std::vector<Violation>& out, const std::string& what,
                      const std::vector<int>& ranks, const std::vector<int>& expected) {
    if (ranks != expected) {
        out.push_back({what + "_priority_order",
                       what + " task priorities do not follow the required rank order"});
    }
}

} // namespace

std::vector<Violation> validate_config(const SystemConfig& config) {
    std::vector<Violation> out;
    const auto& p = config.platform;

    if (p.core_count <= 0)
        out.push_back({"core_count", "platform core count must be positive"});

    std::set<std::string> rt_ids;
    bool rt_periods_ok = true;
    for (const auto& t : config.rt_tasks) {
        if (!rt_ids.insert(t.id).second)
            out.push_back({"duplicate_id", "duplicate real-time task id " + t.id});
        if (t.period.us <= 0) {
            out.push_back({"period", "real-time task " + t.id + " has non-positive period"});
            rt_periods_ok = false;
        }
        if (t.wcet.us <= 0)
            out.push_back({"wcet", "real-time task " + t.id + " has non-positive wcet"});
        if (t.wcet > t.deadline)
            out.push_back({"wcet_exceeds_deadline", "real-time task " + t.id + " has wcet exceeding deadline"});
        if (t.deadline != t.period)
            out.push_back({"implicit_deadline", "real-time task " + t.id + " deadline differs from period"});
    }

    std::set<std::string> sec_ids;
    bool sec_periods_ok = true;
    for (const auto& t : config.sec_tasks) {
        if (!sec_ids.insert(t.id).second)
            out.push_back({"duplicate_id", "duplicate security task id " + t.id});
        if (t.desired_period.us <= 0 || t.max_period.us <= 0) {
            out.push_back({"period", "security task " + t.id + " has non-positive period bound"});
            sec_periods_ok = false;
        }
        if (t.wcet.us <= 0)
            out.push_back({"wcet", "security task " + t.id + " has non-positive wcet"});
        if (t.wcet > t.desired_period)
            out.push_back({"wcet_exceeds_desired_period",
                           "security task " + t.id + " wcet exceeds desired period"});
        if (t.desired_period > t.max_period)
            out.push_back({"period_bounds", "security task " + t.id + " desired period exceeds max period"});
        if (t.weight <= 0)
            out.push_back({"weight", "security task " + t.id + " weight must be positive"});
    }

    for (const auto& t : config.rt_tasks) {
        auto it = p.rt_partition.find(t.id);
        if (it == p.rt_partition.end())
            out.push_back({"unpartitioned_rt_task", "unpartitioned real-time task " + t.id});
        else if (it->second < 0 || it->second >= p.core_count)
            out.push_back({"core_index", "real-time task " + t.id + " pinned to core outside [0, M)"});
    }
    for (const auto& [id, core] : p.rt_partition) {
        (void)core;
        if (!rt_ids.count(id))
            out.push_back({"unknown_partition_entry", "partition names unknown real-time task " + id});
    }

    // Rank checks: priorities must be the permutation produced by the
    // assignment rules (RM for real-time, ascending T_max for security).
    if (!config.rt_tasks.empty() && rt_periods_ok) {
        auto ranked = assign_rm_priorities(config.rt_tasks);
        std::vector<int> got, want;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            got.push_back(config.rt_tasks[i].priority);
            want.push_back(ranked[i].priority);
        }
        check_rank_order(out, "rt", got, want);
    }
    if (!config.sec_tasks.empty() && sec_periods_ok) {
        auto ranked = assign_security_priorities(config.sec_tasks);
        std::vector<int> got, want;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            got.push_back(config.sec_tasks[i].priority);
            want.push_back(ranked[i].priority);
        }
        check_rank_order(out, "security", got, want);
    }

    return out;
}

} // namespace secalloc
