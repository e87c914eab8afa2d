import math

import numpy as np
import pytest

from gstab import (
    DiscreteSystem,
    NonFiniteOutput,
    Outcome,
    builtin_example,
    builtin_gfunction,
    read_trajectory_csv,
    simulate,
    simulate_batch,
    step,
    verify_equilibrium,
    write_trajectory_csv,
)
from gstab.numerics import Box
from gstab.systems import tanh_minus_identity


@pytest.mark.parametrize("name,kw", [("Ex1", {}), ("Ex2", {}), ("Ex3", {"alpha": 0.5}),
                                     ("Ex4", {}), ("Ex4", {"f_choice": "ExpShift", "dim": 3})])
def test_every_example_fixes_the_origin(name, kw):
    assert verify_equilibrium(builtin_example(name, **kw))


def test_ex2_value_at_half_pi():
    sys_ = builtin_example("Ex2")
    assert step(sys_, [math.pi / 2])[0] == pytest.approx(4 / (3 * math.sqrt(3)), abs=1e-15)


def test_ex3_step():
    sys_ = builtin_example("Ex3", alpha=0.6)
    y = step(sys_, [2.0, 1.0])
    assert y[0] == pytest.approx(2.0 * math.exp(-1.0))
    assert y[1] == pytest.approx(1.2)


def test_ex4_reduces_to_f_beyond_one():
    quad = builtin_example("Ex4")
    shift = builtin_example("Ex4", f_choice="ExpShift")
    for x in (1.5, 2.0):
        assert step(quad, [x])[0] == pytest.approx(x * x)
        assert step(shift, [x])[0] == pytest.approx(math.exp(x * x) + 1 - math.e)


def test_tanh_series_matches_direct_form():
    x = np.array([0.01, 0.049, -0.03])
    assert np.allclose(tanh_minus_identity(x), np.tanh(x) - x, rtol=1e-9, atol=0)
    assert tanh_minus_identity(np.array([1e-100]))[0] == pytest.approx(-1e-300 / 3)


def test_step_rejects_non_finite():
    sys_ = DiscreteSystem.from_expressions(["1/x"])
    with pytest.raises(NonFiniteOutput):
        step(sys_, [0.0])


def test_unknown_example():
    with pytest.raises(ValueError):
        builtin_example("Ex9")
    with pytest.raises(ValueError):
        builtin_example("Ex4", f_choice="Cubic")


def test_simulate_from_origin_is_converged_immediately():
    rec = simulate(builtin_example("Ex2"), [0.0])
    assert rec.states.shape == (1, 1)
    assert rec.classification.outcome == Outcome.CONVERGED
    assert rec.classification.step == 0


@pytest.mark.parametrize("f_choice", ["Quadratic", "ExpShift"])
def test_ex4_dichotomy_near_one(f_choice):
    sys_ = builtin_example("Ex4", f_choice=f_choice)
    inside = simulate(sys_, [0.999999999])
    outside = simulate(sys_, [1.00000001])
    assert inside.classification.outcome == Outcome.CONVERGED
    assert outside.classification.outcome == Outcome.DIVERGED
    assert np.all(np.abs(outside.states) >= 1)


def test_simulate_inconclusive_and_validation():
    rot = DiscreteSystem.from_expressions(["-x"])
    rec = simulate(rot, [0.5], max_steps=20)
    assert rec.classification.outcome == Outcome.INCONCLUSIVE
    assert rec.states.shape[0] == 21
    with pytest.raises(ValueError):
        simulate(rot, [0.5], max_steps=0)
    with pytest.raises(ValueError):
        simulate(rot, [0.5], conv_tol=2.0, div_bound=1.0)


def test_batch_agrees_with_single_runs():
    sys_ = builtin_example("Ex4")
    X0 = np.array([[0.5], [0.999], [1.001], [-2.0]])
    classes, _ = simulate_batch(sys_, X0)
    for x0, c in zip(X0, classes):
        assert simulate(sys_, x0).classification == c


def test_trajectory_csv_round_trip(tmp_path):
    sys_ = builtin_example("Ex3", alpha=0.3)
    rec = simulate(sys_, [0.4, -0.2], g=builtin_gfunction("LogL1Norm", 2))
    p = tmp_path / "t.csv"
    write_trajectory_csv(rec, p)
    lines = p.read_text().splitlines()
    assert lines[0].startswith("# classification=converged")
    assert lines[1] == "k,x_1,x_2,g"
    assert read_trajectory_csv(p) == rec


def test_trajectory_csv_without_g(tmp_path):
    rec = simulate(builtin_example("Ex1"), [0.5])
    p = tmp_path / "t.csv"
    write_trajectory_csv(rec, p)
    back = read_trajectory_csv(p)
    assert back.g_values is None and back == rec


def test_domain_dimension_must_match():
    with pytest.raises(ValueError):
        DiscreteSystem(2, lambda X: X, Box((-1.0,), (1.0,)))
