"""Smoke tests for the Python bindings."""

import math

import pytest

spadaac = pytest.importorskip("spadaac")


def default_receiver():
    return spadaac.ReceiverConfig(
        pde=0.2,
        array_size=1,
        symbol_duration_ns=1000.0,
        dead_time_ns=9.0,
        gate_duration_ns=1.0,
        dark_rate_cpns=0.01,
    )


def test_version_and_kmax():
    assert spadaac.__version__
    assert spadaac.k_max(default_receiver()) == 100


def test_square_root_constellation():
    cons = spadaac.square_root_constellation(9.0, 4)
    assert cons.levels_cpns == pytest.approx([0.0, 1.0, 4.0, 9.0])


def test_pmf_rows_are_normalized():
    rx = default_receiver()
    est = spadaac.ChannelEstimate(50.0, 10.0)
    cons = spadaac.square_root_constellation(50.0, 4)
    model = spadaac.count_pmf(rx, est, cons, 0.8)
    assert model.k_max == 100
    for row in model.pmfs:
        assert math.isclose(sum(row), 1.0, abs_tol=1e-11)
    assert model.trigger_probs == sorted(model.trigger_probs)


def test_solvers_agree_on_saturated_channel():
    rx = default_receiver()
    est = spadaac.ChannelEstimate(50.0, 50.0)
    cons = spadaac.square_root_constellation(50.0, 4)
    s1 = spadaac.solve_rate_max(rx, est, cons)
    s2 = spadaac.solve_trigger_criterion(rx, est, cons)
    assert s1.converged and s2.converged
    assert 0 < s2.alpha_opt < s1.alpha_opt < 1
    assert s1.rate_bits >= s2.rate_bits - 1e-9
    assert abs(s2.avg_trigger - 0.7) <= 1e-6


def test_ser_and_thresholds():
    rx = default_receiver()
    est = spadaac.ChannelEstimate(50.0, 10.0)
    cons = spadaac.square_root_constellation(50.0, 4)
    model = spadaac.count_pmf(rx, est, cons, 0.5)
    rule = spadaac.ml_thresholds(model)
    assert list(rule.thresholds) == sorted(rule.thresholds)
    report = spadaac.symbol_error_rate(model, rule)
    assert 0.0 <= report.ser <= 0.75
    assert len(report.per_symbol_error) == 4


def test_simulator_determinism():
    rx = default_receiver()
    est = spadaac.ChannelEstimate(20.0, 5.0)
    cons = spadaac.square_root_constellation(20.0, 4)
    plan1 = spadaac.SimulationPlan(trials=5000, seed=42, threads=1)
    plan8 = spadaac.SimulationPlan(trials=5000, seed=42, threads=8)
    a = spadaac.simulate_counts(rx, est, cons, 0.9, plan1)
    b = spadaac.simulate_counts(rx, est, cons, 0.9, plan8)
    assert a.histograms == b.histograms
    assert all(sum(h) == 5000 for h in a.histograms)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(spadaac.SpadaacError):
        spadaac.square_root_constellation(1.0, 1)
    rx = default_receiver()
    est = spadaac.ChannelEstimate(10.0, 5.0)
    cons = spadaac.square_root_constellation(10.0, 4)
    with pytest.raises(spadaac.SpadaacError):
        spadaac.trigger_probability(rx, est, cons, 0, 1.5)
