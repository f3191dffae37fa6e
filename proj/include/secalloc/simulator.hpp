#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secalloc/task_model.hpp"

namespace secalloc {

/// Kinds double as the deterministic tie order at equal timestamps:
/// completions land before deadline checks, which land before releases,
/// which land before preemptions caused by those releases.
enum class SimEventKind {
    completion,
    deadline_miss,
    release,
    preemption,
    attack_injected,
    attack_detected,
};

const char* to_string(SimEventKind kind);

struct SimEvent {
    TimeValue time;
    SimEventKind kind;
    std::string task;
    int core;
};

struct AttackEvent {
    TimeValue time;
    std::string target;  // security task expected to detect it
};

struct DetectionSample {
    TimeValue attack_time;
    TimeValue detect_time;
    std::string detecting_task;
    TimeValue latency;  // detect_time - attack_time
};

struct SecurityJob {
    TimeValue release;
    std::optional<TimeValue> completion;  // empty when still unfinished at the horizon
};

struct SimTrace {
    std::vector<SimEvent> events;
    std::vector<DetectionSample> detections;
    long censored_attacks = 0;
    std::map<std::string, long> deadline_misses;
    std::map<std::string, TimeValue> max_response;  // completed jobs only
    std::map<std::string, std::vector<SecurityJob>> security_jobs;
    TimeValue duration;
};

struct SimOptions {
    bool record_events = true;
    /// Reject allocations that fail the analysis checks (response times for
    /// real-time tasks, the schedulability constraint for security tasks).
    bool validate = true;
    /// Alternative detection rule: a job already executing when the attack
    /// lands may still detect it. Default is the conservative rule where
    /// only jobs released at or after the attack count.
    bool detect_in_progress = false;
};

/// Partitioned fixed-priority preemptive schedule, synchronous periodic
/// releases at t = 0, security tasks strictly below all real-time tasks on
/// their core. Jobs run for exactly their WCET. Events cover [0, duration].
SimTrace simulate(const SystemConfig& config, const Allocation& allocation, TimeValue duration,
                  const std::vector<AttackEvent>& attack_plan = {}, const SimOptions& options = {});

/// `count` attacks at integer times uniform in (0, duration), each aimed at
/// a security task chosen uniformly; sorted by time.
std::vector<AttackEvent> inject_attacks(const SystemConfig& config, int count, TimeValue duration,
                                        std::uint64_t seed);

struct DetectionResult {
    std::vector<DetectionSample> samples;
    long censored = 0;
};

/// Detection instant of an attack: completion of the first job of the
/// target released at or after the attack time (or, with in_progress, the
/// first job completing strictly after it). Attacks whose detecting job
/// does not complete inside the window are censored.
DetectionResult detection_latency(const SimTrace& trace, const std::vector<AttackEvent>& attack_plan,
                                  bool detect_in_progress = false);

/// Fraction of samples <= x, exact. Throws on empty samples.
Rational empirical_cdf(const std::vector<TimeValue>& samples, TimeValue x);

/// (mean(single) - mean(hydra)) / mean(single) * 100, exact.
Rational mean_detection_improvement(const std::vector<TimeValue>& hydra_latencies,
                                    const std::vector<TimeValue>& singlecore_latencies);

/// LCM of every period in the schedule (real-time and assigned security),
/// capped; `truncated` reports whether the cap bit.
TimeValue schedule_hyperperiod(const SystemConfig& config, const Allocation& allocation,
                               TimeValue cap, bool& truncated);

} // namespace secalloc
