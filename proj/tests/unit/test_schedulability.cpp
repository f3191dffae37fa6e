#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "secalloc/rng.hpp"
#include "secalloc/schedulability.hpp"

using namespace secalloc;
using testing_helpers::make_config;
using testing_helpers::rt;
using testing_helpers::sec;

TEST_SUITE_BEGIN("schedulability");

TEST_CASE("dbf at the first deadline and just before it") {
    auto task = rt("t", 2000, 5000);
    CHECK(dbf(task, TimeValue{5000}).us == 2000);
    CHECK(dbf(task, TimeValue{4000}).us == 0);
}

TEST_CASE("dbf matches the job-enumeration oracle") {
    auto task = rt("t", 2000, 5000);
    CHECK(oracles::dbf_enumerated(task, 12000) == 4000);
    CHECK(dbf(task, TimeValue{12000}).us == 4000);

    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::int64_t period = rng.uniform_int(1, 50);
        std::int64_t wcet = rng.uniform_int(1, period);
        auto t = rt("r", wcet, period);
        std::int64_t window = rng.uniform_int(0, 500);
        CHECK(dbf(t, TimeValue{window}).us == oracles::dbf_enumerated(t, window));
    }
}

TEST_CASE("dbf is a non-decreasing step function with dbf(kT) = kC") {
    auto task = rt("t", 3, 7);
    std::int64_t prev = 0;
    for (std::int64_t w = 0; w <= 70; ++w) {
        std::int64_t d = dbf(task, TimeValue{w}).us;
        CHECK(d >= prev);
        prev = d;
    }
    for (std::int64_t k = 0; k <= 10; ++k)
        CHECK(dbf(task, TimeValue{k * 7}).us == k * 3);
}

TEST_CASE("necessary condition on the documented instances") {
    auto one = rt("a", 1000, 2000);
    CHECK(necessary_condition({one}, 1, TimeValue{2000}));

    std::vector<RealTimeTask> three = {rt("a", 1000, 2000), rt("b", 1000, 2000), rt("c", 1000, 2000)};
    CHECK_FALSE(necessary_condition(three, 1, TimeValue{2000}));

    CHECK(necessary_condition({}, 1, TimeValue{1000}));
    CHECK(necessary_condition({}, 4, TimeValue{1}));
}

TEST_CASE("necessary condition agrees with brute force on random small instances") {
    Rng rng(23);
    int mismatches = 0;
    for (int trial = 0; trial < 150; ++trial) {
        int n = static_cast<int>(rng.uniform_int(1, 5));
        std::vector<RealTimeTask> tasks;
        bool truncated = false;
        std::int64_t hyper = 1;
        for (int i = 0; i < n; ++i) {
            std::int64_t period = rng.uniform_int(1, 40);
            std::int64_t wcet = rng.uniform_int(1, period);
            tasks.push_back(rt("t" + std::to_string(i), wcet, period));
            hyper = lcm_capped(hyper, period, 2'000'000, truncated);
        }
        if (truncated)
            continue;
        int cores = static_cast<int>(rng.uniform_int(1, 2));
        bool fast = necessary_condition(tasks, cores, TimeValue{hyper});
        bool brute = oracles::necessary_condition_brute(tasks, cores, hyper);
        if (fast != brute)
            ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("interference on the documented instances") {
    SUBCASE("empty core") {
        auto config = make_config(1, {}, {}, {sec("s", 1000, 5000, 50000)});
        CHECK(interference(config.sec_tasks[0], 0, config, {}, TimeValue{5000}) == 0);
    }
    SUBCASE("one real-time task") {
        auto config = make_config(1, {rt("r", 2000, 10000)}, {{"r", 0}},
                                  {sec("s", 1000, 10000, 100000)});
        // (1 + 10/10) * 2ms
        CHECK(interference(config.sec_tasks[0], 0, config, {}, TimeValue{10000}) == Rational(4000));
    }
    SUBCASE("real-time plus a higher-priority security task") {
        auto config = make_config(1, {rt("r", 2000, 10000)}, {{"r", 0}},
                                  {sec("hp", 1000, 10000, 50000), sec("s", 1000, 10000, 100000)});
        REQUIRE(config.sec_tasks[0].priority == 0);
        Allocation partial;
        partial.assignment["hp"] = 0;
        partial.periods["hp"] = TimeValue{20000};
        // 4ms + (1 + 10/20) * 1ms = 5.5ms
        Rational expected(11000, 2);
        expected.canonicalize();
        CHECK(interference(config.sec_tasks[1], 0, config, partial, TimeValue{10000}) == expected);
    }
}

TEST_CASE("interference errors when a higher-priority task has no period") {
    auto config = make_config(1, {}, {},
                              {sec("hp", 1000, 10000, 50000), sec("s", 1000, 10000, 100000)});
    Allocation partial;
    partial.assignment["hp"] = 0;  // period missing
    CHECK_THROWS_AS(interference(config.sec_tasks[1], 0, config, partial, TimeValue{10000}),
                    std::logic_error);
}

TEST_CASE("interference is monotone in the candidate period and in added load") {
    auto config = make_config(1, {rt("r", 2000, 10000)}, {{"r", 0}},
                              {sec("s", 1000, 10000, 100000)});
    Rng rng(5);
    Rational prev = -1;
    for (std::int64_t t = 10000; t <= 100000; t += rng.uniform_int(1000, 5000)) {
        Rational i = interference(config.sec_tasks[0], 0, config, {}, TimeValue{t});
        CHECK(i >= prev);
        prev = i;
    }

    auto heavier = make_config(1, {rt("r", 2000, 10000), rt("r2", 500, 7000)},
                               {{"r", 0}, {"r2", 0}}, {sec("s", 1000, 10000, 100000)});
    for (std::int64_t t : {10000, 20000, 77777}) {
        CHECK(interference(heavier.sec_tasks[0], 0, heavier, {}, TimeValue{t}) >=
              interference(config.sec_tasks[0], 0, config, {}, TimeValue{t}));
    }
}

TEST_CASE("security schedulability on the documented instances") {
    auto empty_core = make_config(1, {}, {}, {sec("s", 1000, 5000, 50000)});
    CHECK(security_schedulable(empty_core.sec_tasks[0], 0, empty_core, {}, TimeValue{5000}));

    auto light = make_config(1, {rt("r", 2000, 10000)}, {{"r", 0}},
                             {sec("s", 1000, 10000, 100000)});
    CHECK(security_schedulable(light.sec_tasks[0], 0, light, {}, TimeValue{10000}));

    auto heavy = make_config(1, {rt("r", 6000, 10000)}, {{"r", 0}},
                             {sec("s", 1000, 10000, 100000)});
    // 1 + (1 + 10/10) * 6 = 13 > 10
    CHECK_FALSE(security_schedulable(heavy.sec_tasks[0], 0, heavy, {}, TimeValue{10000}));
}

TEST_CASE("response time on the documented instances") {
    auto alone = rt("t", 3000, 100000);
    auto r = rt_response_time(alone, {});
    REQUIRE(r.has_value());
    CHECK(r->us == 3000);

    auto task = rt("t", 2000, 10000);
    auto cohabitant = assign_rm_priorities({rt("h", 1000, 4000)});
    r = rt_response_time(task, cohabitant);
    REQUIRE(r.has_value());
    CHECK(r->us == 3000);  // R0=2, R1=2+1=3, R2=3

    auto doomed = rt("t", 5000, 10000);
    auto heavy = assign_rm_priorities({rt("h", 4000, 6000)});
    CHECK_FALSE(rt_response_time(doomed, heavy).has_value());
}

TEST_CASE("response time equals the simulated worst case under synchronous release") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        int n = static_cast<int>(rng.uniform_int(1, 4));
        std::vector<RealTimeTask> tasks;
        for (int i = 0; i < n; ++i) {
            std::int64_t period = rng.uniform_int(5, 60);
            std::int64_t wcet = rng.uniform_int(1, std::max<std::int64_t>(1, period / n));
            tasks.push_back(rt("t" + std::to_string(i), wcet, period));
        }
        tasks = assign_rm_priorities(tasks);

        std::vector<RealTimeTask> by_rank = tasks;
        std::sort(by_rank.begin(), by_rank.end(),
                  [](const auto& a, const auto& b) { return a.priority < b.priority; });
        std::vector<RealTimeTask> higher;
        std::vector<std::optional<TimeValue>> rta;
        bool all_ok = true;
        for (const auto& t : by_rank) {
            auto r = rt_response_time(t, higher);
            rta.push_back(r);
            all_ok = all_ok && r.has_value();
            higher.push_back(t);
        }
        if (!all_ok)
            continue;

        bool truncated = false;
        std::int64_t hyper = 1;
        for (const auto& t : by_rank)
            hyper = lcm_capped(hyper, t.period.us, 1'000'000, truncated);
        if (truncated)
            continue;

        std::vector<oracles::StepTask> step_tasks;
        for (const auto& t : by_rank)
            step_tasks.push_back({t.wcet.us, t.period.us, 0, t.priority});
        auto completions = oracles::step_schedule(step_tasks, hyper);

        for (std::size_t i = 0; i < by_rank.size(); ++i) {
            std::int64_t worst = 0;
            for (const auto& [key, done] : completions) {
                if (key.first != static_cast<int>(i))
                    continue;
                std::int64_t release = key.second * by_rank[i].period.us;
                worst = std::max(worst, done - release);
            }
            CHECK(worst == rta[i]->us);
        }
    }
}

TEST_CASE("default horizon caps at 1e9 microseconds with the truncation flag") {
    std::vector<RealTimeTask> tasks = {rt("a", 1, 999'983), rt("b", 1, 999'979)};  // coprime
    auto h = default_horizon(tasks);
    CHECK(h.truncated);
    CHECK(h.value.us == 1'000'000'000);

    auto small = default_horizon({rt("a", 1, 100), rt("b", 1, 40)});
    CHECK_FALSE(small.truncated);
    CHECK(small.value.us == 200);
}

TEST_SUITE_END();
