#pragma once

#include <cstdint>
#include <utility>

#include "secalloc/rng.hpp"
#include "secalloc/task_model.hpp"

namespace secalloc {

/// Workload generation parameters. Count ranges default to [3M, 10M]
/// real-time and [2M, 5M] security tasks; security maximum periods are
/// sec_max_period_factor times the desired period; total security
/// utilization is sec_util_fraction of the real-time utilization.
struct GenParams {
    int cores = 2;
    std::pair<int, int> rt_count_range{6, 20};
    std::pair<int, int> sec_count_range{4, 10};
    std::pair<std::int64_t, std::int64_t> rt_period_range_us{10'000, 1'000'000};
    std::pair<std::int64_t, std::int64_t> sec_des_period_range_us{1'000'000, 3'000'000};
    int sec_max_period_factor = 10;
    Rational total_rt_util{1, 2};
    Rational sec_util_fraction{3, 10};
    bool rt_period_log_uniform = true;
    int redraw_limit = 1000;
    std::uint64_t seed = 0;
};

/// Count ranges scaled to the platform, everything else at defaults.
GenParams default_gen_params(int cores);

/// Throws std::invalid_argument naming the offending field.
void validate_gen_params(const GenParams& params);

struct TaskGenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// n values in [lo, hi] summing to `total`, drawn uniformly from the
/// constrained simplex (Stafford's construction), then renormalized so the
/// left-to-right double sum equals `total` exactly.
std::vector<double> randfixedsum(int n, double total, double lo, double hi, Rng& rng);

/// Draws one taskset per the synthetic-experiment protocol: counts uniform
/// in their ranges, utilizations split by randfixedsum, WCETs rounded to
/// whole microseconds (>= 1), real-time tasks best-fit partitioned. Redraws
/// any instance that fails partitioning, validation, or the necessary
/// condition; throws TaskGenError after redraw_limit attempts.
SystemConfig generate_taskset(const GenParams& params);

struct SweepEntry {
    int point_index;   // 1..39, total_rt_util = point_index * M / 40
    int replication;   // 0-based
    GenParams params;  // seed + utilization filled in
};

/// The 39-point utilization grid (0.025M .. 0.975M step 0.025M) times
/// `replications`, with per-entry seeds derived from master_seed as
/// derive(point).derive(replication).
std::vector<SweepEntry> sweep_params(const GenParams& base, int replications,
                                     std::uint64_t master_seed);

} // namespace secalloc
