#pragma once

#include "secalloc/task_model.hpp"

namespace testing_helpers {

using namespace secalloc;

inline RealTimeTask rt(const std::string& id, std::int64_t wcet_us, std::int64_t period_us) {
    return {id, TimeValue{wcet_us}, TimeValue{period_us}, TimeValue{period_us}, -1};
}

inline SecurityTask sec(const std::string& id, std::int64_t wcet_us, std::int64_t desired_us,
                        std::int64_t max_us) {
    return {id, TimeValue{wcet_us}, TimeValue{desired_us}, TimeValue{max_us}, Rational(1), -1};
}

/// Config with RM/security ranks assigned and the given partition applied.
inline SystemConfig make_config(int cores, std::vector<RealTimeTask> rt_tasks,
                                std::map<std::string, int> partition,
                                std::vector<SecurityTask> sec_tasks) {
    SystemConfig config;
    config.platform.core_count = cores;
    config.platform.rt_partition = std::move(partition);
    config.rt_tasks = assign_rm_priorities(std::move(rt_tasks));
    config.sec_tasks = assign_security_priorities(std::move(sec_tasks));
    return config;
}

} // namespace testing_helpers
