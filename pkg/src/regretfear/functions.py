"""Utility, fear and regret function families.

Every family is a small frozen dataclass holding a family tag and its
parameters. Instances are callable on floats and render back to the textual
registry form used by the command line (``u:power:0.5``, ``v:sin:1`` ...).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from regretfear.errors import DomainViolation, NonFiniteInput, RootSolveFailed

HALF_PI = math.pi / 2


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _finite(x: float) -> float:
    if not math.isfinite(x):
        raise NonFiniteInput(f"expected a finite argument, got {x!r}")
    return x


def _odd_power(x: float, k: float) -> float:
    # Symmetric by construction so that f(-x) == -f(x) bit for bit.
    return math.copysign(abs(x) ** k, x)


# --------------------------------------------------------------------------- u


@dataclass(frozen=True)
class UtilityFn:
    """Choiceless utility ``u``: continuous and strictly increasing.

    ``power`` is applied sign-symmetrically, ``sign(x) * |x|**a``, so that
    losses are valued and ``u(0) == 0``.
    """

    family: str
    a: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if self.family not in ("identity", "affine", "power"):
            raise ValueError(f"unknown utility family {self.family!r}")
        if not self.a > 0 or not math.isfinite(self.a) or not math.isfinite(self.c):
            raise ValueError("utility parameters need a > 0 and finite c")

    @classmethod
    def identity(cls) -> UtilityFn:
        return cls("identity")

    @classmethod
    def affine(cls, a: float, c: float = 0.0) -> UtilityFn:
        return cls("affine", float(a), float(c))

    @classmethod
    def power(cls, a: float) -> UtilityFn:
        return cls("power", float(a))

    def __call__(self, x: float) -> float:
        _finite(x)
        if self.family == "identity":
            return x
        if self.family == "affine":
            return self.a * x + self.c
        return _odd_power(x, self.a)

    def inverse(self, y: float) -> float:
        _finite(y)
        if self.family == "identity":
            return y
        if self.family == "affine":
            return (y - self.c) / self.a
        return _odd_power(y, 1.0 / self.a)

    @property
    def zero_at_zero(self) -> bool:
        return self(0.0) == 0.0

    @property
    def spec(self) -> str:
        if self.family == "identity":
            return "u:identity"
        if self.family == "affine":
            return f"u:affine:{_fmt(self.a)}:{_fmt(self.c)}"
        return f"u:power:{_fmt(self.a)}"


# --------------------------------------------------------------------------- v


@dataclass(frozen=True)
class FearFn:
    """Fear function ``v`` mapping unknown mass ``p_u`` to a weight in [0, 1].

    ``poly(a)`` is ``1 - x**a``; ``sinpoly(a)`` is ``sin(pi/2 * (1 - x**a))``.
    Both satisfy ``v(0) == 1`` and ``v(1) == 0`` exactly in floating point.
    ``unit()`` is the constant 1, the fearless path on which the modified
    rule coincides with classical regret theory; it is not a normalized fear
    function and exists for negative controls.
    """

    family: str
    a: float = 1.0

    def __post_init__(self):
        if self.family not in ("poly", "sin", "unit"):
            raise ValueError(f"unknown fear family {self.family!r}")
        if not self.a > 0 or not math.isfinite(self.a):
            raise ValueError("fear exponent must be positive and finite")

    @classmethod
    def poly(cls, a: float = 1.0) -> FearFn:
        return cls("poly", float(a))

    @classmethod
    def linear(cls) -> FearFn:
        return cls("poly", 1.0)

    @classmethod
    def sinpoly(cls, a: float = 1.0) -> FearFn:
        return cls("sin", float(a))

    @classmethod
    def unit(cls) -> FearFn:
        return cls("unit")

    @property
    def is_normalized(self) -> bool:
        return self.family != "unit"

    def __call__(self, p_u: float) -> float:
        if not 0.0 <= p_u <= 1.0:
            raise DomainViolation(f"unknown mass must lie in [0, 1], got {p_u!r}")
        if self.family == "unit":
            return 1.0
        if self.family == "poly":
            return 1.0 - p_u ** self.a
        return math.sin(HALF_PI * (1.0 - p_u ** self.a))

    @property
    def spec(self) -> str:
        if self.family == "unit":
            return "v:none"
        return f"v:{self.family}:{_fmt(self.a)}"


# --------------------------------------------------------------------------- R, Q


@dataclass(frozen=True)
class RegretR:
    """Rejoice/regret function ``R`` with ``R(0) == 0``: zero, or ``beta * x**k`` for odd k."""

    family: str
    k: int = 1
    beta: float = 0.0

    def __post_init__(self):
        if self.family not in ("zero", "power"):
            raise ValueError(f"unknown R family {self.family!r}")
        if self.family == "power":
            if self.k < 1 or self.k % 2 == 0:
                raise ValueError("R exponent must be an odd integer >= 1")
            if not self.beta >= 0:
                raise ValueError("R scale must be non-negative")

    @classmethod
    def zero(cls) -> RegretR:
        return cls("zero")

    @classmethod
    def power_odd(cls, k: int, beta: float = 1.0) -> RegretR:
        return cls("power", int(k), float(beta))

    def __call__(self, x: float) -> float:
        _finite(x)
        if self.family == "zero":
            return 0.0
        return self.beta * _odd_power(x, self.k)

    @property
    def spec(self) -> str:
        if self.family == "zero":
            return "r:zero"
        return f"r:power:{self.k}:{_fmt(self.beta)}"


@dataclass(frozen=True)
class RegretQ:
    """Skew-symmetric, strictly increasing regret function ``Q``.

    ``from_r(R)`` builds ``Q(xi) = xi + R(xi) - R(-xi)``. ``custom`` wraps an
    arbitrary callable without checking any property; the audit negative
    controls use it to inject deliberately broken regret functions.
    """

    family: str
    k: int = 1
    r: RegretR | None = None
    fn: Callable[[float], float] | None = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if self.family not in ("power", "linear", "from_r", "custom"):
            raise ValueError(f"unknown Q family {self.family!r}")
        if self.family == "power" and (self.k < 1 or self.k % 2 == 0):
            raise ValueError("Q exponent must be an odd integer >= 1")
        if self.family == "from_r" and self.r is None:
            raise ValueError("from_r needs an R function")
        if self.family == "custom" and self.fn is None:
            raise ValueError("custom Q needs a callable")

    @classmethod
    def power_odd(cls, k: int) -> RegretQ:
        return cls("power", int(k))

    @classmethod
    def linear(cls) -> RegretQ:
        return cls("linear")

    @classmethod
    def from_r(cls, r: RegretR) -> RegretQ:
        return cls("from_r", r=r)

    @classmethod
    def custom(cls, fn: Callable[[float], float], name: str = "custom") -> RegretQ:
        return cls("custom", fn=fn, name=name)

    def __call__(self, xi: float) -> float:
        _finite(xi)
        if self.family == "power":
            return _odd_power(xi, self.k)
        if self.family == "linear":
            return xi
        if self.family == "from_r":
            return xi + self.r(xi) - self.r(-xi)
        return float(self.fn(xi))

    def inverse(self, y: float) -> float:
        """Solve ``Q(xi) = y``; closed form where available, else bracketed root solve."""
        _finite(y)
        if self.family == "power":
            return _odd_power(y, 1.0 / self.k)
        if self.family == "linear":
            return y
        if y == 0.0 and self(0.0) == 0.0:
            return 0.0
        lo, hi = -1.0, 1.0
        for _ in range(200):
            if self(lo) <= y <= self(hi):
                break
            lo, hi = 2 * lo, 2 * hi
        else:
            raise RootSolveFailed(f"cannot bracket Q^-1({y!r})")
        return brentq(lambda t: self(t) - y, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
                      maxiter=500)

    def is_convex_on_positive(self, upper: float = 10.0, n: int = 512,
                              tol: float = 1e-12) -> bool:
        """Sampled second-difference check of convexity on ``(0, upper]``."""
        xs = np.linspace(0.0, upper, n + 1)[1:]
        ys = np.array([self(float(x)) for x in xs])
        second = ys[2:] - 2 * ys[1:-1] + ys[:-2]
        return bool(np.all(second >= -tol * np.maximum(1.0, np.abs(ys[1:-1]))))

    @property
    def spec(self) -> str:
        if self.family == "power":
            return f"q:power:{self.k}"
        if self.family == "linear":
            return "q:linear"
        if self.family == "from_r":
            return self.r.spec
        return f"q:{self.name}"


# --------------------------------------------------------------------------- ops


def eval_u(u: UtilityFn, x: float) -> float:
    return u(x)


def eval_v(v: FearFn, p_u: float) -> float:
    return v(p_u)


def eval_q(q: RegretQ, xi: float) -> float:
    return q(xi)


def is_strictly_increasing(fn: Callable[[float], float], grid) -> bool:
    ys = [fn(float(x)) for x in grid]
    return all(b > a for a, b in zip(ys, ys[1:]))


def is_strictly_decreasing(fn: Callable[[float], float], grid) -> bool:
    ys = [fn(float(x)) for x in grid]
    return all(b < a for a, b in zip(ys, ys[1:]))
