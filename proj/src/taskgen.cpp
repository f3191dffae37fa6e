#include "secalloc/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "secalloc/partitioner.hpp"

namespace secalloc {

GenParams default_gen_params(int cores) {
    GenParams p;
    p.cores = cores;
    p.rt_count_range = {3 * cores, 10 * cores};
    p.sec_count_range = {2 * cores, 5 * cores};
    return p;
}

void validate_gen_params(const GenParams& params) {
    if (params.cores <= 0)
        throw std::invalid_argument("cores: must be positive");
    auto check_range = [](auto range, const char* name) {
        if (range.first > range.second || range.first <= 0) {
            std::ostringstream msg;
            msg << name << ": invalid range [" << range.first << ", " << range.second << "]";
            throw std::invalid_argument(msg.str());
        }
    };
    check_range(params.rt_count_range, "rt_count_range");
    check_range(params.sec_count_range, "sec_count_range");
    check_range(params.rt_period_range_us, "rt_period_range_us");
    check_range(params.sec_des_period_range_us, "sec_des_period_range_us");
    if (params.sec_max_period_factor < 1)
        throw std::invalid_argument("sec_max_period_factor: must be >= 1");
    if (params.total_rt_util <= 0 || params.total_rt_util > Rational(params.cores))
        throw std::invalid_argument("total_rt_util: must lie in (0, cores]");
    if (params.sec_util_fraction < 0)
        throw std::invalid_argument("sec_util_fraction: must be non-negative");
    if (params.redraw_limit <= 0)
        throw std::invalid_argument("redraw_limit: must be positive");
}

namespace {

/// Stafford's construction on the unit cube: x in [0,1]^n, sum(x) = s.
std::vector<double> randfixedsum_unit(int n, double s, Rng& rng) {
    if (n == 1)
        return {s};

    int k = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
    s = std::clamp(s, static_cast<double>(k), static_cast<double>(k + 1));

    std::vector<double> s1(n), s2(n);
    for (int j = 0; j < n; ++j) {
        s1[j] = s - k + j;
        s2[j] = k + n - j - s;
    }

    constexpr double huge = std::numeric_limits<double>::max();
    constexpr double tiny = std::numeric_limits<double>::denorm_min();

    // w: probability table (scaled by `huge` against underflow),
    // t: transition probabilities between simplex cells. 1-based indices.
    std::vector<std::vector<double>> w(n + 1, std::vector<double>(n + 2, 0.0));
    std::vector<std::vector<double>> t(n, std::vector<double>(n + 1, 0.0));
    w[1][2] = huge;
    for (int i = 2; i <= n; ++i) {
        for (int j = 1; j <= i; ++j) {
            double tmp1 = w[i - 1][j + 1] * s1[j - 1] / i;
            double tmp2 = w[i - 1][j] * s2[n - i + j - 1] / i;
            w[i][j + 1] = tmp1 + tmp2;
            double tmp3 = w[i][j + 1] + tiny;
            t[i - 1][j] = (s2[n - i + j - 1] > s1[j - 1]) ? tmp2 / tmp3 : 1.0 - tmp1 / tmp3;
        }
    }

    std::vector<double> x(n, 0.0);
    double s_cur = s;
    int col = k + 1;
    double sm = 0.0, pr = 1.0;
    for (int i = n - 1; i >= 1; --i) {
        double transition = rng.next_double();
        double position = rng.next_double();
        int e = transition <= t[i][col] ? 1 : 0;
        double sx = std::pow(position, 1.0 / i);
        sm += (1.0 - sx) * pr * s_cur / (i + 1);
        pr *= sx;
        x[n - i - 1] = sm + pr * e;
        s_cur -= e;
        col -= e;
    }
    x[n - 1] = sm + pr * s_cur;

    rng.shuffle(x);
    return x;
}

} // namespace

std::vector<double> randfixedsum(int n, double total, double lo, double hi, Rng& rng) {
    if (n <= 0)
        throw std::invalid_argument("randfixedsum: n must be positive");
    if (lo > hi || n * lo > total || total > n * hi)
        throw std::invalid_argument("randfixedsum: total outside [n*lo, n*hi]");

    std::vector<double> x;
    if (hi == lo) {
        x.assign(n, lo);
    } else {
        double s_unit = (total - n * lo) / (hi - lo);
        x = randfixedsum_unit(n, s_unit, rng);
        for (double& v : x)
            v = lo + (hi - lo) * std::clamp(v, 0.0, 1.0);
    }

    // Renormalize so the plain left-to-right sum equals `total` exactly.
    // The rounded sum is a monotone staircase in any single component, and
    // in the last-summed component its steps are single ulps of the total,
    // so a binary search on that component lands exactly on `total`. Fall
    // back to earlier components when the last one is pinned at a bound.
    auto resum = [&] {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s;
    };
    if (resum() == total)
        return x;
    for (int j = n - 1; j >= 0; --j) {
        double old = x[j];
        auto with = [&](double v) {
            x[j] = v;
            return resum();
        };
        if (with(lo) > total || with(hi) < total) {
            x[j] = old;
            continue;
        }
        if (with(lo) == total || with(hi) == total)
            return x;
        double vlo = lo, vhi = hi;  // invariant: with(vlo) < total < with(vhi)
        for (;;) {
            double mid = vlo + (vhi - vlo) / 2;
            if (mid <= vlo || mid >= vhi)
                break;
            double s = with(mid);
            if (s == total)
                return x;
            (s < total ? vlo : vhi) = mid;
        }
        if (with(std::nextafter(vlo, vhi)) == total || with(vlo) == total || with(vhi) == total)
            return x;
        x[j] = old;
    }
    throw TaskGenError("randfixedsum: failed to renormalize sum");
}

namespace {

std::int64_t draw_period(Rng& rng, std::pair<std::int64_t, std::int64_t> range, bool log_uniform) {
    if (range.first == range.second)
        return range.first;
    if (!log_uniform)
        return rng.uniform_int(range.first, range.second);
    double lo = std::log(static_cast<double>(range.first));
    double hi = std::log(static_cast<double>(range.second));
    auto v = static_cast<std::int64_t>(std::llround(std::exp(rng.uniform(lo, hi))));
    return std::clamp(v, range.first, range.second);
}

std::int64_t wcet_from_util(double util, std::int64_t period) {
    auto c = static_cast<std::int64_t>(std::llround(util * static_cast<double>(period)));
    return std::clamp<std::int64_t>(c, 1, period);
}

} // namespace

SystemConfig generate_taskset(const GenParams& params) {
    validate_gen_params(params);
    Rng root(params.seed);
    std::string last_failure = "no attempt";

    for (int attempt = 0; attempt < params.redraw_limit; ++attempt) {
        Rng draw = root.derive(100 + static_cast<std::uint64_t>(attempt));
        Rng counts = draw.derive(1);
        Rng rt_util_rng = draw.derive(2);
        Rng rt_period_rng = draw.derive(3);
        Rng sec_util_rng = draw.derive(4);
        Rng sec_period_rng = draw.derive(5);

        int n_rt = static_cast<int>(counts.uniform_int(params.rt_count_range.first,
                                                       params.rt_count_range.second));
        int n_sec = static_cast<int>(counts.uniform_int(params.sec_count_range.first,
                                                        params.sec_count_range.second));

        double rt_total = params.total_rt_util.get_d();
        auto rt_utils = randfixedsum(n_rt, rt_total, 0.0, 1.0, rt_util_rng);

        std::vector<RealTimeTask> rt_tasks;
        rt_tasks.reserve(n_rt);
        for (int i = 0; i < n_rt; ++i) {
            std::int64_t period =
                draw_period(rt_period_rng, params.rt_period_range_us, params.rt_period_log_uniform);
            std::int64_t wcet = wcet_from_util(rt_utils[i], period);
            rt_tasks.push_back({"rt" + std::to_string(i), TimeValue{wcet}, TimeValue{period},
                                TimeValue{period}, -1});
        }
        rt_tasks = assign_rm_priorities(std::move(rt_tasks));

        double sec_total = Rational(params.sec_util_fraction * params.total_rt_util).get_d();
        auto sec_utils = randfixedsum(n_sec, sec_total, 0.0, 1.0, sec_util_rng);

        std::vector<SecurityTask> sec_tasks;
        sec_tasks.reserve(n_sec);
        for (int i = 0; i < n_sec; ++i) {
            std::int64_t t_des = sec_period_rng.uniform_int(params.sec_des_period_range_us.first,
                                                            params.sec_des_period_range_us.second);
            std::int64_t wcet = wcet_from_util(sec_utils[i], t_des);
            sec_tasks.push_back({"sec" + std::to_string(i), TimeValue{wcet}, TimeValue{t_des},
                                 TimeValue{t_des * params.sec_max_period_factor}, Rational(1), -1});
        }
        sec_tasks = assign_security_priorities(std::move(sec_tasks));

        auto partition = best_fit_partition(rt_tasks, params.cores);
        if (!partition.ok()) {
            last_failure = "partitioning failed at task " + partition.failed_task;
            continue;
        }

        SystemConfig config{*partition.platform, std::move(rt_tasks), std::move(sec_tasks)};
        auto violations = validate_config(config);
        if (!violations.empty()) {
            last_failure = "validation: " + violations.front().message;
            continue;
        }
        Horizon horizon = default_horizon(config.rt_tasks);
        if (!necessary_condition(config.rt_tasks, params.cores, horizon.value)) {
            last_failure = "necessary condition failed";
            continue;
        }
        return config;
    }

    std::ostringstream msg;
    msg << "taskset generation gave up after " << params.redraw_limit
        << " redraws (last failure: " << last_failure << ")";
    throw TaskGenError(msg.str());
}

std::vector<SweepEntry> sweep_params(const GenParams& base, int replications,
                                     std::uint64_t master_seed) {
    std::vector<SweepEntry> entries;
    entries.reserve(39 * static_cast<std::size_t>(replications));
    Rng master(master_seed);
    for (int point = 1; point <= 39; ++point) {
        Rng point_rng = master.derive(static_cast<std::uint64_t>(point));
        for (int rep = 0; rep < replications; ++rep) {
            GenParams p = base;
            p.total_rt_util = Rational(point * base.cores, 40);
            p.total_rt_util.canonicalize();
            p.seed = point_rng.derive(static_cast<std::uint64_t>(rep)).seed();
            entries.push_back({point, rep, std::move(p)});
        }
    }
    return entries;
}

} // namespace secalloc
