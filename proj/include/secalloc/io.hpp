#pragma once

#include <string>

#include <json.hpp>

#include "secalloc/allocators.hpp"
#include "secalloc/simulator.hpp"
#include "secalloc/taskgen.hpp"

namespace secalloc {

/// Taskset schema: {"cores": M,
///   "rt_tasks":  [{"id", "wcet_us", "period_us", "core"?}],
///   "sec_tasks": [{"id", "wcet_us", "desired_period_us", "max_period_us", "weight"?}]}.
/// `core` may be omitted when the partitioner is to be run later. Weights
/// accept integers, doubles, or exact "p/q" / decimal strings. Priorities
/// are not stored; parsing reassigns them from the ranking rules.
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SystemConfig& config);

SystemConfig load_config(const std::string& path);
void save_config(const SystemConfig& config, const std::string& path);

/// Allocation schema: scheme, status, per-task {core, period_us, tightness},
/// objective and per-core security utilization (decimal plus exact "p/q"),
/// and the rt_partition whenever the scheme repacked the real-time tasks.
nlohmann::json allocation_to_json(const AllocationOutcome& outcome, const std::string& scheme);

struct StoredAllocation {
    std::string scheme;
    AllocationStatus status = AllocationStatus::unschedulable;
    std::string failed_task;
    Allocation allocation;
    int cores = 0;
    bool has_rt_partition = false;
    std::map<std::string, int> rt_partition;
};
StoredAllocation allocation_from_json(const nlohmann::json& j);
StoredAllocation load_allocation(const std::string& path);

GenParams gen_params_from_json(const nlohmann::json& j);
nlohmann::json gen_params_to_json(const GenParams& params);

void write_detection_csv(const std::string& path, const std::vector<DetectionSample>& samples);
void write_trace_csv(const std::string& path, const std::vector<SimEvent>& events);

Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& q);

} // namespace secalloc
