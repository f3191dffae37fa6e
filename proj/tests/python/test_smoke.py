"""Smoke tests for the python bindings: exercise one end-to-end path per
major operation and check types crossing the boundary."""

from fractions import Fraction

import pytest

import secalloc as sa


def make_config():
    rt = sa.assign_rm_priorities(
        [sa.RealTimeTask("rt0", 2000, 10000), sa.RealTimeTask("rt1", 3000, 10000)]
    )
    sec = sa.assign_security_priorities(
        [
            sa.SecurityTask("sec0", 1000, 10000, 100000),
            sa.SecurityTask("sec1", 2000, 20000, 200000),
        ]
    )
    platform = sa.Platform(2, {"rt0": 0, "rt1": 1})
    return sa.SystemConfig(platform, rt, sec)


def test_validation_and_analysis():
    cfg = make_config()
    assert sa.validate_config(cfg) == []
    assert sa.dbf(cfg.rt_tasks[0], 12000) == 2000
    assert sa.necessary_condition(cfg.rt_tasks, 2)
    r = sa.rt_response_time(cfg.rt_tasks[0], [])
    assert r == 2000
    assert sa.tightness(1000000, 2500000) == Fraction(2, 5)


def test_allocation_round():
    cfg = make_config()
    out = sa.hydra_allocate(cfg)
    assert out.status == "ok"
    assert out.schedulable
    assert out.objective == Fraction(2)
    assert set(out.allocation.assignment) == {"sec0", "sec1"}

    single = sa.single_core_allocate(cfg)
    assert single.status == "ok"
    assert all(core == 1 for core in single.allocation.assignment.values())

    opt = sa.exhaustive_optimal(cfg)
    assert opt.objective >= out.objective
    assert sa.delta_eta(opt, out) >= 0


def test_period_optimizer_matches_documented_example():
    rt = sa.assign_rm_priorities([sa.RealTimeTask("r", 2000, 10000)])
    sec = sa.assign_security_priorities([sa.SecurityTask("s", 1000, 3000, 100000)])
    cfg = sa.SystemConfig(sa.Platform(1, {"r": 0}), rt, sec)
    sol = sa.optimize_period(cfg.sec_tasks[0], 0, cfg)
    assert sol.period_us == 3750
    assert sol.tightness == Fraction(4, 5)
    assert sa.interference(cfg.sec_tasks[0], 0, cfg, sa.Allocation(), 10000) == Fraction(4000)


def test_generation_partitioning_simulation():
    params = sa.default_gen_params(2)
    params.total_rt_util = Fraction(1, 2)
    params.seed = 7
    cfg = sa.generate_taskset(params)
    assert sa.validate_config(cfg) == []

    out = sa.hydra_allocate(cfg)
    assert out.schedulable

    plan = sa.inject_attacks(cfg, 20, 5_000_000, seed=3)
    trace = sa.simulate(cfg, out.allocation, 5_000_000, plan, record_events=False)
    assert trace.deadline_misses == {}
    assert len(trace.detections) + trace.censored_attacks == 20
    if trace.detections:
        latencies = [d.latency_us for d in trace.detections]
        assert sa.empirical_cdf(latencies, max(latencies)) == 1


def test_randfixedsum_and_json():
    xs = sa.randfixedsum(5, 2.0, 0.0, 1.0, seed=11)
    assert len(xs) == 5
    assert sum(xs) == 2.0
    assert all(0.0 <= x <= 1.0 for x in xs)

    cfg = make_config()
    text = sa.config_to_json(cfg)
    back = sa.config_from_json(text)
    assert sa.config_to_json(back) == text


def test_error_paths():
    with pytest.raises(ValueError):
        sa.tightness(1000, 999)
    bad = sa.SystemConfig(sa.Platform(1, {}), [], [sa.SecurityTask("s", 2000, 1000, 5000)])
    violations = sa.validate_config(bad)
    assert any(v.code == "wcet_exceeds_desired_period" for v in violations)
