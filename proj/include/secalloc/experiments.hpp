#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "secalloc/allocators.hpp"
#include "secalloc/simulator.hpp"
#include "secalloc/taskgen.hpp"

namespace secalloc {

/// Worker count for experiment fan-out: `requested` if positive, else the
/// SECALLOC_WORKERS environment variable, else hardware concurrency.
int worker_count(int requested = 0);

/// Runs fn(0..n-1) across workers; results must be written by index so the
/// merged output is deterministic regardless of scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// HYDRA vs exhaustive-optimal comparison over the utilization grid.

struct AppendixCompareOptions {
    int cores = 2;
    int replications = 25;
    std::uint64_t master_seed = 2024;
    std::pair<int, int> sec_count_range{2, 6};
    std::uint64_t max_assignments = 1'000'000;
    int workers = 0;
};

struct AppendixCompareRow {
    int point_index = 0;
    Rational total_rt_util;
    int replication = 0;
    std::uint64_t seed = 0;
    std::string status;  // ok | generation_failed | hydra_unschedulable | optimal_unschedulable | limit_exceeded
    std::optional<Rational> delta_eta_percent;
    Rational eta_optimal;
    Rational eta_hydra;
};

std::vector<AppendixCompareRow> run_appendix_compare(const AppendixCompareOptions& options);

// ---------------------------------------------------------------------------
// Detection-latency comparison (HYDRA vs SingleCore) at a fixed utilization.

struct DetectionCdfOptions {
    std::vector<int> cores_list{2, 4, 8};
    int configs_per_cores = 25;
    Rational util_factor{1, 2};  // total_rt_util = util_factor * M
    TimeValue duration = TimeValue::from_s(50);
    int attacks = 100;
    std::uint64_t master_seed = 2025;
    int workers = 0;
};

struct DetectionCdfRow {
    int cores = 0;
    int config_index = 0;
    std::uint64_t seed = 0;
    std::string status;  // ok | generation_failed | hydra_unschedulable | single_unschedulable | both_unschedulable
    long hydra_detected = 0;
    long hydra_censored = 0;
    long single_detected = 0;
    long single_censored = 0;
    std::optional<Rational> hydra_mean_us;
    std::optional<Rational> single_mean_us;
    std::optional<Rational> improvement_percent;
};

struct DetectionCdfSummary {
    int cores = 0;
    int eligible = 0;  // configs where both schemes were schedulable
    int with_improvement = 0;
    std::optional<Rational> mean_improvement_percent;
};

struct DetectionCdfResult {
    std::vector<DetectionCdfRow> rows;
    std::vector<DetectionCdfSummary> summaries;
    /// cores -> scheme ("hydra"/"single-core") -> pooled latency samples.
    std::map<int, std::map<std::string, std::vector<TimeValue>>> samples;
};

DetectionCdfResult run_detection_cdf(const DetectionCdfOptions& options);

// ---------------------------------------------------------------------------
// Acceptance ratios per utilization point per scheme.

struct SweepOptions {
    int cores = 2;
    int replications = 25;
    std::uint64_t master_seed = 2026;
    int workers = 0;
};

struct SweepRow {
    int point_index = 0;
    Rational total_rt_util;
    int replication = 0;
    std::uint64_t seed = 0;
    std::string gen_status;     // ok | generation_failed
    std::string hydra_status;   // ok | unschedulable | - (generation failed)
    std::string single_status;  // ok | unschedulable | -
};

std::vector<SweepRow> run_schedulability_sweep(const SweepOptions& options);

/// Fraction of replications with scheme status "ok" per grid point, keyed by
/// point index; generation failures count against the scheme.
std::map<int, Rational> acceptance_ratios(const std::vector<SweepRow>& rows,
                                          const std::string& scheme);

} // namespace secalloc
