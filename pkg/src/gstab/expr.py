"""A small arithmetic grammar so run configurations stay data rather than code.

Supported: numbers, ``+ - * / **``, unary minus, the constants ``pi`` and
``e``, the functions ``sin cos tan tanh exp ln abs`` and ``norm``. State
coordinates are ``x1 .. xn``; ``x``, ``y``, ``z`` alias the first three.
``norm()`` is the Euclidean norm of the state, ``norm(a, b, ...)`` that of
its arguments.
"""

from __future__ import annotations

import ast

import numpy as np

from .exceptions import ExpressionError
from .numerics import norms

_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "tanh": np.tanh,
    "exp": np.exp,
    "ln": np.log,
    "abs": np.abs,
}
_CONSTS = {"pi": np.pi, "e": np.e}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


class Expression:
    """A parsed expression, callable on an ``(N, n)`` batch of states."""

    def __init__(self, source: str, dim: int):
        if not isinstance(source, str):
            raise ExpressionError(f"expression must be a string, got {type(source).__name__}")
        self.source = source
        self.dim = dim
        self._names = {f"x{i + 1}": i for i in range(dim)}
        for alias, i in zip("xyz", range(dim)):
            self._names.setdefault(alias, i)
        try:
            tree = ast.parse(source.strip(), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {source!r}: {exc.msg} (column {exc.offset})") from None
        self._check(tree.body)
        self._tree = tree.body

    def _fail(self, node, msg):
        col = getattr(node, "col_offset", None)
        where = f" at column {col + 1}" if col is not None else ""
        raise ExpressionError(f"{msg}{where} in {self.source!r}")

    def _check(self, node):
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                self._fail(node, f"unsupported literal {node.value!r}")
        elif isinstance(node, ast.Name):
            if node.id not in self._names and node.id not in _CONSTS:
                self._fail(node, f"unknown name {node.id!r}")
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                self._fail(node, "unsupported operator")
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                self._fail(node, "unsupported unary operator")
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.keywords:
                self._fail(node, "only plain calls to known functions are allowed")
            name = node.func.id
            if name == "norm":
                pass
            elif name in _FUNCS:
                if len(node.args) != 1:
                    self._fail(node, f"{name} takes exactly one argument")
            else:
                self._fail(node, f"unknown function {name!r}")
            for a in node.args:
                self._check(a)
        else:
            self._fail(node, f"unsupported syntax {type(node).__name__}")

    def _eval(self, node, X):
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id in self._names:
                return X[:, self._names[node.id]]
            return _CONSTS[node.id]
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, X), self._eval(node.right, X))
        if isinstance(node, ast.UnaryOp):
            v = self._eval(node.operand, X)
            return -v if isinstance(node.op, ast.USub) else v
        name = node.func.id
        if name == "norm":
            if not node.args:
                return norms(X)
            parts = [np.broadcast_to(np.asarray(self._eval(a, X), dtype=float), (X.shape[0],))
                     for a in node.args]
            return norms(np.stack(parts, axis=1))
        return _FUNCS[name](self._eval(node.args[0], X))

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        with np.errstate(all="ignore"):
            v = self._eval(self._tree, X)
        return np.broadcast_to(np.asarray(v, dtype=float), (X.shape[0],)).copy()

    def __repr__(self):
        return f"Expression({self.source!r}, dim={self.dim})"


class VectorExpression:
    """One expression per output coordinate; maps ``(N, n) -> (N, n)``."""

    def __init__(self, sources, dim: int):
        if isinstance(sources, str) or len(sources) != dim:
            raise ExpressionError(f"need {dim} component expressions, got {sources!r}")
        self.sources = list(sources)
        self.components = [Expression(s, dim) for s in sources]

    def __call__(self, X):
        return np.stack([c(X) for c in self.components], axis=1)
