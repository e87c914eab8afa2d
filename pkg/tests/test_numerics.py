import json
import math

import numpy as np
import pytest

from gstab import (
    NEG_INF,
    All,
    Ball,
    Box,
    Complement,
    EmptyRegion,
    ExtendedReal,
    SamplingPlan,
    SubLevel,
    UndefinedDifference,
    builtin_gfunction,
    region_contains,
    sample_region,
    xr_sub,
)
from gstab.exceptions import DimensionMismatch
from gstab.numerics import as_batch, as_state, norms, ray_directions, xr_from_json, xr_to_json


def test_extended_real_rejects_nan_and_pos_inf():
    with pytest.raises(ValueError):
        ExtendedReal(math.nan)
    with pytest.raises(ValueError):
        ExtendedReal(math.inf)
    assert ExtendedReal(-math.inf).is_neg_inf
    assert ExtendedReal(3.0).is_finite


def test_neg_inf_orders_below_everything():
    assert NEG_INF < ExtendedReal(-1e308)
    assert NEG_INF == ExtendedReal("-inf")
    assert sorted([ExtendedReal(2), NEG_INF, ExtendedReal(-5)]) == [NEG_INF, -5.0, 2.0]


def test_xr_sub():
    assert xr_sub(NEG_INF, 3.0).is_neg_inf
    assert xr_sub(5.0, 2.0) == 3.0
    with pytest.raises(UndefinedDifference):
        xr_sub(1.0, NEG_INF)
    with pytest.raises(UndefinedDifference):
        xr_sub(NEG_INF, NEG_INF)


def test_json_tokens_round_trip():
    for v in (-math.inf, 0.5, -2.0):
        assert xr_from_json(json.loads(json.dumps(xr_to_json(v)))) == v
    assert xr_to_json(math.nan) == "nan"
    assert xr_to_json(None) is None


def test_state_and_batch_validation():
    assert as_state(0.5).shape == (1,)
    with pytest.raises(DimensionMismatch):
        as_state([1.0, 2.0], 3)
    with pytest.raises(ValueError):
        as_state([math.nan])
    assert as_batch([1.0, 2.0]).shape == (1, 2)
    with pytest.raises(DimensionMismatch):
        as_batch(np.zeros((2, 2, 2)))


def test_norms_survive_underflow_and_overflow():
    X = np.array([[1e-300, 1e-300], [1e300, 1e300], [0.0, 0.0], [3.0, 4.0]])
    r = norms(X)
    assert r[0] == pytest.approx(math.sqrt(2) * 1e-300, rel=1e-15)
    assert r[1] == pytest.approx(math.sqrt(2) * 1e300, rel=1e-15)
    assert r[2] == 0.0 and r[3] == 5.0


def test_region_membership():
    assert region_contains(Ball(1.0), [0.5])
    assert not region_contains(Ball(1.0), [1.0])
    open_box = Box((-1.0,), (1.0,), closed=False)
    assert not region_contains(open_box, [1.0])
    assert region_contains(Box((-1.0,), (1.0,)), [1.0])
    g = builtin_gfunction("LogNorm")
    assert region_contains(SubLevel(g, 0.0), [0.9])
    assert not region_contains(SubLevel(g, 0.0), [1.0])
    comp = Complement(SubLevel(g, 0.0), Box((-3.0,), (3.0,)))
    assert region_contains(comp, [2.0]) and not region_contains(comp, [0.5])
    assert region_contains(All(2), [1e9, -1e9])


def test_box_rejects_bad_bounds():
    with pytest.raises(ValueError):
        Box((1.0,), (0.0,))
    with pytest.raises(DimensionMismatch):
        Box((0.0, 0.0), (1.0,))


def test_sampler_is_deterministic_and_respects_exclusion():
    plan = SamplingPlan(grid_points=51, random_count=200, seed=3)
    a = sample_region(Ball(1.0, 2), plan)
    b = sample_region(Ball(1.0, 2), plan)
    assert np.array_equal(a, b)
    assert np.all(norms(a) > plan.exclusion_radius)
    assert np.all(Ball(1.0, 2).contains(a))


def test_sampler_reaches_both_origin_and_boundary():
    plan = SamplingPlan(grid_points=11, random_count=0)
    X = sample_region(Box((-1.0,), (1.0,), closed=False), plan)
    r = np.abs(X[:, 0])
    assert r.min() < 1e-11
    assert r.max() > 1 - 1e-11


def test_sampler_grid_step_is_origin_anchored():
    plan = SamplingPlan(grid_step=0.25, random_count=0, shell_directions=0, boundary_decades=0)
    X = sample_region(Box((-1.0,), (1.0,)), plan)
    grid = X[np.isclose(X[:, 0] / 0.25, np.round(X[:, 0] / 0.25))]
    assert set(np.round(grid[:, 0], 12)) >= {-1.0, -0.5, 0.25, 1.0}


def test_sampler_errors():
    with pytest.raises(ValueError):
        sample_region(All(1), SamplingPlan())
    g = builtin_gfunction("NegSinc")
    with pytest.raises(EmptyRegion):
        sample_region(SubLevel(g, -1.0), SamplingPlan(grid_points=11, random_count=10), window=Box((-1.0,), (1.0,)))


def test_plan_round_trip_and_validation():
    plan = SamplingPlan(grid_step=0.1, seed=9)
    assert SamplingPlan.from_dict(plan.to_dict()) == plan
    with pytest.raises(ValueError):
        SamplingPlan(grid_step=0.0)
    with pytest.raises(ValueError):
        SamplingPlan(shell_min_radius=0.0)


def test_ray_directions_are_unit():
    rng = np.random.default_rng(0)
    for dim in (1, 2, 4):
        d = ray_directions(dim, 8, rng)
        assert np.allclose(np.linalg.norm(d, axis=1), 1.0)
