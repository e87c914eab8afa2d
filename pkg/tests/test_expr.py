import math

import numpy as np
import pytest

from gstab import DiscreteSystem, ExpressionError, GFunctionSpec, builtin_example
from gstab.expr import Expression, VectorExpression


def test_arithmetic_and_functions():
    X = np.array([[0.5, -2.0]])
    assert Expression("x1 * x2 + 3", 2)(X)[0] == pytest.approx(2.0)
    assert Expression("sin(x) ** 2 + cos(x) ** 2", 2)(X)[0] == pytest.approx(1.0)
    assert Expression("ln(e) + abs(y) - pi", 2)(X)[0] == pytest.approx(3.0 - math.pi)
    assert Expression("norm()", 2)(X)[0] == pytest.approx(math.hypot(0.5, 2.0))
    assert Expression("norm(x, 2*y)", 2)(X)[0] == pytest.approx(math.hypot(0.5, 4.0))
    assert Expression("-x + +y", 2)(X)[0] == pytest.approx(-2.5)


def test_constant_expression_broadcasts():
    assert Expression("2", 1)(np.zeros((4, 1))).shape == (4,)


@pytest.mark.parametrize("src", ["__import__('os')", "x.real", "x if x else y", "lambda: 1",
                                 "foo(x)", "sin(x, x)", "x // 2", "'a'", "z"])
def test_rejects_anything_outside_the_grammar(src):
    with pytest.raises(ExpressionError):
        Expression(src, 1)


def test_syntax_error_carries_column():
    with pytest.raises(ExpressionError, match="column"):
        Expression("x +* 2", 1)


def test_vector_expression_dimension():
    with pytest.raises(ExpressionError):
        VectorExpression(["x"], 2)


def test_expression_reproduces_builtin_examples():
    X = np.linspace(-0.9, 0.9, 37)[:, None]
    ex2 = DiscreteSystem.from_expressions(["sin(x) / (2 * cos(x / 3) ** 3)"])
    assert np.allclose(ex2.apply(X), builtin_example("Ex2").apply(X), rtol=1e-15, atol=0)
    P = np.random.default_rng(1).uniform(-3, 3, (50, 2))
    ex3 = DiscreteSystem.from_expressions(["x * y * exp(-y ** 2)", "0.6 * x"])
    assert np.allclose(ex3.apply(P), builtin_example("Ex3", alpha=0.6).apply(P), rtol=1e-15, atol=0)


def test_gfunction_from_expression_pins_removable_singularity():
    g = GFunctionSpec.from_expression("-sin(norm()) / norm()", 1, zeta_m=-1.0)
    assert g([0.0]) == -1.0
    assert g([0.5]) == pytest.approx(-math.sin(0.5) / 0.5)
    with pytest.raises(ValueError):
        GFunctionSpec.from_expression("-sin(norm()) / norm()", 1)
    assert GFunctionSpec.from_expression("ln(norm())", 2).zeta_m.is_neg_inf
