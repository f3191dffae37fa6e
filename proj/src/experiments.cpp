#include "secalloc/experiments.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace secalloc {

int worker_count(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("SECALLOC_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers < 1)
        workers = 1;
    if (n > 0 && static_cast<std::size_t>(workers) > n)
        workers = static_cast<int>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load())
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> guard(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<AppendixCompareRow> run_appendix_compare(const AppendixCompareOptions& options) {
    GenParams base = default_gen_params(options.cores);
    base.sec_count_range = options.sec_count_range;
    auto entries = sweep_params(base, options.replications, options.master_seed);

    std::vector<AppendixCompareRow> rows(entries.size());
    parallel_for(entries.size(), worker_count(options.workers), [&](std::size_t i) {
        const SweepEntry& entry = entries[i];
        AppendixCompareRow row;
        row.point_index = entry.point_index;
        row.total_rt_util = entry.params.total_rt_util;
        row.replication = entry.replication;
        row.seed = entry.params.seed;

        SystemConfig config;
        try {
            config = generate_taskset(entry.params);
        } catch (const TaskGenError&) {
            row.status = "generation_failed";
            rows[i] = std::move(row);
            return;
        }

        auto hydra = hydra_allocate(config);
        auto optimal = exhaustive_optimal(config, {options.max_assignments});
        if (optimal.status == AllocationStatus::limit_exceeded) {
            row.status = "limit_exceeded";
        } else if (!hydra.schedulable()) {
            row.status = "hydra_unschedulable";
        } else if (!optimal.schedulable()) {
            row.status = "optimal_unschedulable";
        } else {
            row.status = "ok";
            row.delta_eta_percent = delta_eta(optimal, hydra);
            row.eta_optimal = cumulative_tightness(optimal);
            row.eta_hydra = cumulative_tightness(hydra);
        }
        rows[i] = std::move(row);
    });
    return rows;
}

DetectionCdfResult run_detection_cdf(const DetectionCdfOptions& options) {
    struct Slot {
        int cores;
        int config_index;
        GenParams params;
    };
    std::vector<Slot> slots;
    Rng master(options.master_seed);
    for (int m : options.cores_list) {
        Rng per_m = master.derive(static_cast<std::uint64_t>(m));
        for (int c = 0; c < options.configs_per_cores; ++c) {
            GenParams p = default_gen_params(m);
            p.total_rt_util = options.util_factor * Rational(m);
            p.total_rt_util.canonicalize();
            p.seed = per_m.derive(static_cast<std::uint64_t>(c)).seed();
            slots.push_back({m, c, std::move(p)});
        }
    }

    DetectionCdfResult result;
    result.rows.resize(slots.size());
    std::vector<std::vector<TimeValue>> hydra_samples(slots.size());
    std::vector<std::vector<TimeValue>> single_samples(slots.size());

    parallel_for(slots.size(), worker_count(options.workers), [&](std::size_t i) {
        const Slot& slot = slots[i];
        DetectionCdfRow row;
        row.cores = slot.cores;
        row.config_index = slot.config_index;
        row.seed = slot.params.seed;

        SystemConfig config;
        try {
            config = generate_taskset(slot.params);
        } catch (const TaskGenError&) {
            row.status = "generation_failed";
            result.rows[i] = std::move(row);
            return;
        }

        auto hydra = hydra_allocate(config);
        auto single = single_core_allocate(config);
        if (!hydra.schedulable() && !single.schedulable())
            row.status = "both_unschedulable";
        else if (!hydra.schedulable())
            row.status = "hydra_unschedulable";
        else if (!single.schedulable())
            row.status = "single_unschedulable";
        else
            row.status = "ok";
        if (row.status != "ok") {
            result.rows[i] = std::move(row);
            return;
        }

        // Same attack plan against both schemes: the comparison is paired.
        auto plan = inject_attacks(config, options.attacks, options.duration,
                                   Rng(slot.params.seed).derive(7).seed());
        SimOptions sim_opts;
        sim_opts.record_events = false;

        auto hydra_trace = simulate(config, *hydra.allocation, options.duration, plan, sim_opts);
        SystemConfig single_config = config;
        single_config.platform = single.platform;
        auto single_trace =
            simulate(single_config, *single.allocation, options.duration, plan, sim_opts);

        for (const auto& d : hydra_trace.detections)
            hydra_samples[i].push_back(d.latency);
        for (const auto& d : single_trace.detections)
            single_samples[i].push_back(d.latency);

        row.hydra_detected = static_cast<long>(hydra_trace.detections.size());
        row.hydra_censored = hydra_trace.censored_attacks;
        row.single_detected = static_cast<long>(single_trace.detections.size());
        row.single_censored = single_trace.censored_attacks;
        if (row.hydra_detected > 0 && row.single_detected > 0) {
            row.improvement_percent =
                mean_detection_improvement(hydra_samples[i], single_samples[i]);
            Rational sum_h = 0, sum_s = 0;
            for (auto t : hydra_samples[i])
                sum_h += to_rational(t);
            for (auto t : single_samples[i])
                sum_s += to_rational(t);
            row.hydra_mean_us = sum_h / Rational(row.hydra_detected);
            row.single_mean_us = sum_s / Rational(row.single_detected);
        }
        result.rows[i] = std::move(row);
    });

    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& row = result.rows[i];
        auto& per_m = result.samples[slots[i].cores];
        for (auto t : hydra_samples[i])
            per_m["hydra"].push_back(t);
        for (auto t : single_samples[i])
            per_m["single-core"].push_back(t);
        (void)row;
    }

    for (int m : options.cores_list) {
        DetectionCdfSummary summary;
        summary.cores = m;
        Rational total = 0;
        for (const auto& row : result.rows) {
            if (row.cores != m)
                continue;
            if (row.status == "ok")
                summary.eligible += 1;
            if (row.improvement_percent) {
                summary.with_improvement += 1;
                total += *row.improvement_percent;
            }
        }
        if (summary.with_improvement > 0)
            summary.mean_improvement_percent = total / Rational(summary.with_improvement);
        result.summaries.push_back(std::move(summary));
    }
    return result;
}

std::vector<SweepRow> run_schedulability_sweep(const SweepOptions& options) {
    GenParams base = default_gen_params(options.cores);
    auto entries = sweep_params(base, options.replications, options.master_seed);

    std::vector<SweepRow> rows(entries.size());
    parallel_for(entries.size(), worker_count(options.workers), [&](std::size_t i) {
        const SweepEntry& entry = entries[i];
        SweepRow row;
        row.point_index = entry.point_index;
        row.total_rt_util = entry.params.total_rt_util;
        row.replication = entry.replication;
        row.seed = entry.params.seed;

        SystemConfig config;
        try {
            config = generate_taskset(entry.params);
            row.gen_status = "ok";
        } catch (const TaskGenError&) {
            row.gen_status = "generation_failed";
            row.hydra_status = "-";
            row.single_status = "-";
            rows[i] = std::move(row);
            return;
        }

        row.hydra_status = hydra_allocate(config).schedulable() ? "ok" : "unschedulable";
        row.single_status = single_core_allocate(config).schedulable() ? "ok" : "unschedulable";
        rows[i] = std::move(row);
    });
    return rows;
}

std::map<int, Rational> acceptance_ratios(const std::vector<SweepRow>& rows,
                                          const std::string& scheme) {
    std::map<int, std::pair<long, long>> counts;  // point -> (accepted, total)
    for (const auto& row : rows) {
        auto& [accepted, total] = counts[row.point_index];
        total += 1;
        const std::string& status = scheme == "hydra" ? row.hydra_status : row.single_status;
        if (status == "ok")
            accepted += 1;
    }
    std::map<int, Rational> ratios;
    for (const auto& [point, c] : counts) {
        Rational q(c.first, c.second);
        q.canonicalize();
        ratios[point] = q;
    }
    return ratios;
}

} // namespace secalloc
