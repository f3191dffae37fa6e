#include "secalloc/simulator.hpp"

#include <algorithm>
#include <queue>

#include "secalloc/rng.hpp"
#include "secalloc/schedulability.hpp"

namespace secalloc {

const char* to_string(SimEventKind kind) {
    switch (kind) {
    case SimEventKind::completion: return "completion";
    case SimEventKind::deadline_miss: return "deadline_miss";
    case SimEventKind::release: return "release";
    case SimEventKind::preemption: return "preemption";
    case SimEventKind::attack_injected: return "attack_injected";
    case SimEventKind::attack_detected: return "attack_detected";
    }
    return "unknown";
}

namespace {

struct CoreTask {
    std::string id;
    int cls;   // 0 = real-time, 1 = security
    int rank;  // priority rank within the class
    std::int64_t wcet;
    std::int64_t period;
    std::int64_t deadline;
};

struct Job {
    int task;
    std::int64_t remaining;
    std::int64_t release;
    long seq;  // per-task job index, FIFO within a task
};

struct JobOrder {
    const std::vector<CoreTask>* tasks;
    bool operator()(const Job& a, const Job& b) const {
        const CoreTask& ta = (*tasks)[a.task];
        const CoreTask& tb = (*tasks)[b.task];
        // priority_queue keeps the "largest"; invert so the highest-priority
        // (lowest class, lowest rank, earliest release) job is on top.
        return std::tie(ta.cls, ta.rank, a.release, a.seq) > std::tie(tb.cls, tb.rank, b.release, b.seq);
    }
};

void validate_allocation(const SystemConfig& config, const Allocation& allocation) {
    auto violations = validate_config(config);
    if (!violations.empty())
        throw std::invalid_argument("simulate: invalid config: " + violations.front().message);

    std::map<std::string, std::vector<RealTimeTask>> per_core;
    for (const auto& rt : config.rt_tasks)
        per_core[std::to_string(config.platform.rt_partition.at(rt.id))].push_back(rt);
    for (auto& [core, tasks] : per_core) {
        (void)core;
        std::sort(tasks.begin(), tasks.end(),
                  [](const RealTimeTask& a, const RealTimeTask& b) { return a.priority < b.priority; });
        std::vector<RealTimeTask> higher;
        for (const auto& t : tasks) {
            if (!rt_response_time(t, higher))
                throw std::invalid_argument("simulate: real-time task " + t.id +
                                            " is unschedulable on its core");
            higher.push_back(t);
        }
    }

    for (const auto& s : config.sec_tasks) {
        auto ait = allocation.assignment.find(s.id);
        auto pit = allocation.periods.find(s.id);
        if (ait == allocation.assignment.end() || pit == allocation.periods.end())
            throw std::invalid_argument("simulate: security task " + s.id + " lacks core or period");
        if (ait->second < 0 || ait->second >= config.platform.core_count)
            throw std::invalid_argument("simulate: security task " + s.id + " assigned out of range");
        if (pit->second < s.desired_period || pit->second > s.max_period)
            throw std::invalid_argument("simulate: security task " + s.id + " period outside bounds");
        if (!security_schedulable(s, ait->second, config, allocation, pit->second))
            throw std::invalid_argument("simulate: security task " + s.id +
                                        " fails the schedulability constraint");
    }
}

void simulate_core(const std::vector<CoreTask>& tasks, int core, std::int64_t duration,
                   const SimOptions& options, SimTrace& trace) {
    const std::size_t n = tasks.size();
    std::vector<std::int64_t> next_release(n, 0);
    std::vector<long> job_count(n, 0);
    std::priority_queue<Job, std::vector<Job>, JobOrder> ready{JobOrder{&tasks}};
    std::optional<Job> running;
    std::int64_t now = 0;

    auto record = [&](SimEventKind kind, const std::string& task, std::int64_t at) {
        if (options.record_events)
            trace.events.push_back({TimeValue{at}, kind, task, core});
    };
    auto note_miss = [&](const Job& job) {
        const CoreTask& t = tasks[job.task];
        std::int64_t deadline = job.release + t.deadline;
        if (deadline <= duration) {
            trace.deadline_misses[t.id] += 1;
            record(SimEventKind::deadline_miss, t.id, deadline);
        }
    };
    auto complete = [&](const Job& job, std::int64_t at) {
        const CoreTask& t = tasks[job.task];
        record(SimEventKind::completion, t.id, at);
        std::int64_t response = at - job.release;
        auto [it, inserted] = trace.max_response.try_emplace(t.id, TimeValue{response});
        if (!inserted && it->second.us < response)
            it->second = TimeValue{response};
        if (at > job.release + t.deadline)
            note_miss(job);
        if (t.cls == 1)
            trace.security_jobs[t.id][static_cast<std::size_t>(job.seq)].completion = TimeValue{at};
    };

    for (;;) {
        std::int64_t t_release = duration;  // sentinel: no further releases
        bool has_release = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (next_release[i] < duration && next_release[i] < t_release) {
                t_release = next_release[i];
                has_release = true;
            } else if (next_release[i] < duration && next_release[i] == t_release) {
                has_release = true;
            }
        }
        std::int64_t t_finish = running ? now + running->remaining : -1;
        bool has_finish = running && t_finish <= duration;

        std::int64_t t_next;
        if (has_finish && (!has_release || t_finish <= t_release))
            t_next = t_finish;
        else if (has_release)
            t_next = t_release;
        else
            break;

        if (running)
            running->remaining -= t_next - now;
        now = t_next;

        if (running && running->remaining == 0) {
            complete(*running, now);
            running.reset();
        }

        // Releases at `now`, highest priority first.
        std::vector<std::size_t> due;
        for (std::size_t i = 0; i < n; ++i)
            if (next_release[i] == now && next_release[i] < duration)
                due.push_back(i);
        std::sort(due.begin(), due.end(), [&](std::size_t a, std::size_t b) {
            return std::tie(tasks[a].cls, tasks[a].rank) < std::tie(tasks[b].cls, tasks[b].rank);
        });
        for (std::size_t i : due) {
            Job job{static_cast<int>(i), tasks[i].wcet, now, job_count[i]++};
            record(SimEventKind::release, tasks[i].id, now);
            if (tasks[i].cls == 1)
                trace.security_jobs[tasks[i].id].push_back({TimeValue{now}, std::nullopt});
            ready.push(job);
            next_release[i] += tasks[i].period;
        }

        if (!ready.empty()) {
            if (!running) {
                running = ready.top();
                ready.pop();
            } else {
                const Job& top = ready.top();
                const CoreTask& rt = tasks[running->task];
                const CoreTask& tt = tasks[top.task];
                if (std::tie(tt.cls, tt.rank) < std::tie(rt.cls, rt.rank)) {
                    record(SimEventKind::preemption, rt.id, now);
                    Job preempted = *running;
                    running = top;
                    ready.pop();
                    ready.push(preempted);
                }
            }
        }
    }

    // Jobs still pending at the horizon missed any deadline inside it.
    if (running)
        note_miss(*running);
    while (!ready.empty()) {
        note_miss(ready.top());
        ready.pop();
    }
}

} // namespace

SimTrace simulate(const SystemConfig& config, const Allocation& allocation, TimeValue duration,
                  const std::vector<AttackEvent>& attack_plan, const SimOptions& options) {
    if (duration.us <= 0)
        throw std::invalid_argument("simulate: duration must be positive");
    if (options.validate)
        validate_allocation(config, allocation);

    SimTrace trace;
    trace.duration = duration;

    std::vector<std::vector<CoreTask>> cores(config.platform.core_count);
    for (const auto& rt : config.rt_tasks)
        cores[config.platform.rt_partition.at(rt.id)].push_back(
            {rt.id, 0, rt.priority, rt.wcet.us, rt.period.us, rt.deadline.us});
    for (const auto& s : config.sec_tasks) {
        std::int64_t period = allocation.periods.at(s.id).us;
        cores[allocation.assignment.at(s.id)].push_back({s.id, 1, s.priority, s.wcet.us, period, period});
    }

    for (int m = 0; m < config.platform.core_count; ++m)
        simulate_core(cores[m], m, duration.us, options, trace);

    if (!attack_plan.empty()) {
        auto detection = detection_latency(trace, attack_plan, options.detect_in_progress);
        trace.detections = std::move(detection.samples);
        trace.censored_attacks = detection.censored;
        if (options.record_events) {
            std::map<std::string, int> sec_core;
            for (const auto& [id, core] : allocation.assignment)
                sec_core[id] = core;
            for (const auto& attack : attack_plan)
                trace.events.push_back({attack.time, SimEventKind::attack_injected, attack.target,
                                        sec_core.at(attack.target)});
            for (const auto& d : trace.detections)
                trace.events.push_back({d.detect_time, SimEventKind::attack_detected, d.detecting_task,
                                        sec_core.at(d.detecting_task)});
        }
    }

    if (options.record_events) {
        std::stable_sort(trace.events.begin(), trace.events.end(),
                         [](const SimEvent& a, const SimEvent& b) {
                             return std::tie(a.time.us, a.kind) < std::tie(b.time.us, b.kind);
                         });
    }
    return trace;
}

std::vector<AttackEvent> inject_attacks(const SystemConfig& config, int count, TimeValue duration,
                                        std::uint64_t seed) {
    if (config.sec_tasks.empty())
        throw std::invalid_argument("inject_attacks: no security tasks to target");
    if (count < 0)
        throw std::invalid_argument("inject_attacks: negative count");
    if (count > 0 && duration.us < 2)
        throw std::invalid_argument("inject_attacks: duration too short");

    Rng rng(seed);
    Rng times = rng.derive(1);
    Rng targets = rng.derive(2);
    std::vector<AttackEvent> plan;
    plan.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        TimeValue at{times.uniform_int(1, duration.us - 1)};
        const auto& target = config.sec_tasks[targets.next_below(config.sec_tasks.size())];
        plan.push_back({at, target.id});
    }
    std::sort(plan.begin(), plan.end(), [](const AttackEvent& a, const AttackEvent& b) {
        return std::tie(a.time.us, a.target) < std::tie(b.time.us, b.target);
    });
    return plan;
}

DetectionResult detection_latency(const SimTrace& trace, const std::vector<AttackEvent>& attack_plan,
                                  bool detect_in_progress) {
    DetectionResult result;
    for (const auto& attack : attack_plan) {
        auto it = trace.security_jobs.find(attack.target);
        if (it == trace.security_jobs.end()) {
            result.censored += 1;
            continue;
        }
        const auto& jobs = it->second;
        std::optional<TimeValue> detect;
        for (const auto& job : jobs) {
            bool candidate = detect_in_progress
                                 ? job.completion && job.completion->us > attack.time.us
                                 : job.release >= attack.time;
            if (!candidate)
                continue;
            if (job.completion)
                detect = job.completion;
            break;  // first candidate job decides; unfinished means censored
        }
        if (!detect) {
            result.censored += 1;
            continue;
        }
        result.samples.push_back({attack.time, *detect, attack.target, *detect - attack.time});
    }
    return result;
}

Rational empirical_cdf(const std::vector<TimeValue>& samples, TimeValue x) {
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    long count = 0;
    for (TimeValue s : samples)
        if (s <= x)
            ++count;
    Rational q(count, static_cast<long>(samples.size()));
    q.canonicalize();
    return q;
}

Rational mean_detection_improvement(const std::vector<TimeValue>& hydra_latencies,
                                    const std::vector<TimeValue>& singlecore_latencies) {
    if (hydra_latencies.empty() || singlecore_latencies.empty())
        throw std::invalid_argument("mean_detection_improvement: empty sample set");
    auto mean = [](const std::vector<TimeValue>& v) -> Rational {
        Rational sum = 0;
        for (TimeValue t : v)
            sum += to_rational(t);
        return sum / Rational(static_cast<long>(v.size()));
    };
    Rational single = mean(singlecore_latencies);
    Rational hydra = mean(hydra_latencies);
    return (single - hydra) / single * 100;
}

TimeValue schedule_hyperperiod(const SystemConfig& config, const Allocation& allocation,
                               TimeValue cap, bool& truncated) {
    std::int64_t l = 1;
    truncated = false;
    for (const auto& rt : config.rt_tasks)
        l = lcm_capped(l, rt.period.us, cap.us, truncated);
    for (const auto& s : config.sec_tasks)
        l = lcm_capped(l, allocation.periods.at(s.id).us, cap.us, truncated);
    return TimeValue{l};
}

} // namespace secalloc
