"""Truncated bivariate power series with exact integer coefficients.

:class:`BivariateSeries` stores a dense table of Python ints for the
monomials ``x1^i x2^j`` with ``i <= cap1`` and ``j <= cap2``. Binary
operations truncate to the smaller caps of their operands, so every
stored coefficient is exact for the represented series.

Two independent ways to read a coefficient of the solution of a system
``w1 = t1 f1(w1, w2)``, ``w2 = t2 f2(w1, w2)`` are provided:

* :func:`solve_fixed_point` iterates the system from ``w = 0`` until the
  truncated table stops changing;
* :func:`lagrange_coeff` evaluates the bivariate Lagrange inversion
  formula directly, without solving anything.

The generating-function systems of plane trees counted by the partial
stack, helix and loop statistics are built by :func:`partial_stack_system`,
:func:`max_stack_system`, :func:`max_loop_system` and
:func:`max_both_system`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Union

logger = logging.getLogger(__name__)


class SeriesError(ValueError):
    """Division by a non-unit, insufficient caps, or no fixed point."""


Coefficient = Union[int, "BivariateSeries"]


class BivariateSeries:
    __slots__ = ("cap1", "cap2", "_c")

    def __init__(
        self, cap1: int, cap2: int, coeffs: list[list[int]] | None = None
    ) -> None:
        if cap1 < 0 or cap2 < 0:
            raise SeriesError(f"caps must be non-negative, got ({cap1}, {cap2})")
        self.cap1 = cap1
        self.cap2 = cap2
        table = [[0] * (cap2 + 1) for _ in range(cap1 + 1)]
        if coeffs is not None:
            for i, row in enumerate(coeffs[: cap1 + 1]):
                for j, c in enumerate(row[: cap2 + 1]):
                    table[i][j] = int(c)
        self._c = table

    # -- construction -------------------------------------------------- #

    @classmethod
    def zero(cls, cap1: int, cap2: int) -> BivariateSeries:
        return cls(cap1, cap2)

    @classmethod
    def constant(cls, value: int, cap1: int, cap2: int) -> BivariateSeries:
        return cls.monomial(0, 0, cap1, cap2, value)

    @classmethod
    def one(cls, cap1: int, cap2: int) -> BivariateSeries:
        return cls.constant(1, cap1, cap2)

    @classmethod
    def monomial(
        cls, i: int, j: int, cap1: int, cap2: int, coeff: int = 1
    ) -> BivariateSeries:
        s = cls(cap1, cap2)
        if i <= cap1 and j <= cap2:
            s._c[i][j] = coeff
        return s

    @classmethod
    def x1(cls, cap1: int, cap2: int) -> BivariateSeries:
        return cls.monomial(1, 0, cap1, cap2)

    @classmethod
    def x2(cls, cap1: int, cap2: int) -> BivariateSeries:
        return cls.monomial(0, 1, cap1, cap2)

    # -- access -------------------------------------------------------- #

    def coeff(self, i: int, j: int) -> int:
        if i < 0 or j < 0:
            return 0
        if i > self.cap1 or j > self.cap2:
            raise SeriesError(
                f"coefficient x1^{i} x2^{j} is beyond the caps "
                f"({self.cap1}, {self.cap2})"
            )
        return self._c[i][j]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.coeff(*key)

    def terms(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero ``(i, j, coefficient)`` triples."""
        for i, row in enumerate(self._c):
            for j, c in enumerate(row):
                if c:
                    yield i, j, c

    def to_rows(self) -> list[list[int]]:
        return [list(row) for row in self._c]

    def truncate(self, cap1: int, cap2: int) -> BivariateSeries:
        return BivariateSeries(min(cap1, self.cap1), min(cap2, self.cap2), self._c)

    @property
    def is_unit(self) -> bool:
        return self._c[0][0] in (1, -1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return (self.cap1, self.cap2, self._c) == (other.cap1, other.cap2, other._c)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x1^{i}*x2^{j}" for i, j, c in self.terms()) or "0"
        return f"BivariateSeries({body}; caps=({self.cap1}, {self.cap2}))"

    # -- arithmetic ---------------------------------------------------- #

    def _coerce(self, other: Coefficient) -> BivariateSeries:
        if isinstance(other, BivariateSeries):
            return other
        if isinstance(other, int):
            return BivariateSeries.constant(other, self.cap1, self.cap2)
        raise TypeError(f"cannot combine a series with {type(other).__name__}")

    def _caps_with(self, other: BivariateSeries) -> tuple[int, int]:
        return min(self.cap1, other.cap1), min(self.cap2, other.cap2)

    def __add__(self, other: Coefficient) -> BivariateSeries:
        o = self._coerce(other)
        c1, c2 = self._caps_with(o)
        out = BivariateSeries(c1, c2)
        for i in range(c1 + 1):
            for j in range(c2 + 1):
                out._c[i][j] = self._c[i][j] + o._c[i][j]
        return out

    __radd__ = __add__

    def __neg__(self) -> BivariateSeries:
        return BivariateSeries(
            self.cap1, self.cap2, [[-c for c in row] for row in self._c]
        )

    def __sub__(self, other: Coefficient) -> BivariateSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Coefficient) -> BivariateSeries:
        return self._coerce(other) - self

    def __mul__(self, other: Coefficient) -> BivariateSeries:
        if isinstance(other, int):
            return BivariateSeries(
                self.cap1, self.cap2, [[c * other for c in row] for row in self._c]
            )
        o = self._coerce(other)
        c1, c2 = self._caps_with(o)
        out = BivariateSeries(c1, c2)
        rows = out._c
        for i, j, a in self.terms():
            if i > c1 or j > c2:
                continue
            for p in range(c1 - i + 1):
                orow = o._c[p]
                row = rows[i + p]
                for q in range(c2 - j + 1):
                    b = orow[q]
                    if b:
                        row[j + q] += a * b
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BivariateSeries:
        if n < 0:
            return self.inverse() ** (-n)
        result = BivariateSeries.one(self.cap1, self.cap2)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> BivariateSeries:
        """Multiplicative inverse; the constant term must be +1 or -1."""
        c0 = self._c[0][0]
        if c0 not in (1, -1):
            raise SeriesError(
                f"division by a non-unit series (constant term {c0})"
            )
        out = BivariateSeries(self.cap1, self.cap2)
        inv = out._c
        src = self._c
        for i in range(self.cap1 + 1):
            for j in range(self.cap2 + 1):
                acc = 1 if i == 0 and j == 0 else 0
                for a in range(i + 1):
                    srow = src[a]
                    irow = inv[i - a]
                    for b in range(j + 1):
                        if (a or b) and srow[b]:
                            acc -= srow[b] * irow[j - b]
                inv[i][j] = acc * c0
        return out

    def __truediv__(self, other: Coefficient) -> BivariateSeries:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Coefficient) -> BivariateSeries:
        return self._coerce(other) * self.inverse()

    # -- operators ----------------------------------------------------- #

    def partial_derivative(self, var: int) -> BivariateSeries:
        """``d/dx_var``; the cap of that variable drops by one."""
        if var == 1:
            if self.cap1 == 0:
                raise SeriesError("cannot differentiate a series with cap1 = 0")
            rows = [[i * c for c in self._c[i]] for i in range(1, self.cap1 + 1)]
            return BivariateSeries(self.cap1 - 1, self.cap2, rows)
        if var == 2:
            if self.cap2 == 0:
                raise SeriesError("cannot differentiate a series with cap2 = 0")
            rows = [[j * row[j] for j in range(1, self.cap2 + 1)] for row in self._c]
            return BivariateSeries(self.cap1, self.cap2 - 1, rows)
        raise SeriesError(f"variable index must be 1 or 2, got {var}")

    def euler(self, var: int) -> BivariateSeries:
        """``x_var * d/dx_var``, computed coefficient-wise (caps kept)."""
        if var not in (1, 2):
            raise SeriesError(f"variable index must be 1 or 2, got {var}")
        rows = [
            [(i if var == 1 else j) * c for j, c in enumerate(row)]
            for i, row in enumerate(self._c)
        ]
        return BivariateSeries(self.cap1, self.cap2, rows)


def geometric(s: BivariateSeries) -> BivariateSeries:
    """``1 / (1 - s)``."""
    return (1 - s).inverse()


def truncated_geometric(s: BivariateSeries, top: int) -> BivariateSeries:
    """``1 + s + ... + s^top`` (``(1 - s^(top+1)) / (1 - s)``)."""
    acc = BivariateSeries.one(s.cap1, s.cap2)
    for _ in range(top):
        acc = acc * s + 1
    return acc


# -- solving ----------------------------------------------------------- #

Evaluator = Callable[[BivariateSeries, BivariateSeries], BivariateSeries]


def solve_fixed_point(
    f1: Evaluator, f2: Evaluator, cap1: int, cap2: int
) -> tuple[BivariateSeries, BivariateSeries]:
    """Solve ``w_i = t_i f_i(w1, w2)`` to the given caps.

    Starting from zero, round ``r`` fixes every coefficient of total degree
    below ``r``, so the iteration settles within ``cap1 + cap2 + 1``
    rounds; one more round confirms it.
    """
    t1 = BivariateSeries.x1(cap1, cap2)
    t2 = BivariateSeries.x2(cap1, cap2)
    w1 = BivariateSeries.zero(cap1, cap2)
    w2 = BivariateSeries.zero(cap1, cap2)
    for rounds in range(1, cap1 + cap2 + 3):
        n1 = (t1 * f1(w1, w2)).truncate(cap1, cap2)
        n2 = (t2 * f2(w1, w2)).truncate(cap1, cap2)
        if (n1.cap1, n1.cap2, n2.cap1, n2.cap2) != (cap1, cap2, cap1, cap2):
            raise SeriesError("evaluator lost precision below the requested caps")
        if n1 == w1 and n2 == w2:
            logger.debug(
                "fixed point at caps (%d, %d) after %d rounds", cap1, cap2, rounds
            )
            return w1, w2
        w1, w2 = n1, n2
    raise SeriesError(f"fixed point did not settle at caps ({cap1}, {cap2})")


def lagrange_coeff(
    g: BivariateSeries,
    f1: BivariateSeries,
    f2: BivariateSeries,
    p: int,
    q: int,
) -> int:
    """``[t1^p t2^q] g(w1, w2)`` by bivariate Lagrange inversion.

    The right-hand side is ``[x1^p x2^q] g f1^p f2^q det(d_ij - x_j/f_i
    df_i/dx_j)``. For ``p, q >= 1`` the determinant is multiplied through
    by ``f1 f2``, which needs no division, so ``f_i`` may vanish at the
    origin. Otherwise both ``f_i`` must be units.
    """
    if p < 0 or q < 0:
        raise SeriesError(f"exponents must be non-negative, got ({p}, {q})")
    for name, s in (("g", g), ("f1", f1), ("f2", f2)):
        if s.cap1 < p or s.cap2 < q:
            raise SeriesError(
                f"{name} caps ({s.cap1}, {s.cap2}) are below ({p}, {q})"
            )
    th1_f1 = f1.euler(1)
    th2_f1 = f1.euler(2)
    th1_f2 = f2.euler(1)
    th2_f2 = f2.euler(2)
    if p >= 1 and q >= 1:
        det = (f1 - th1_f1) * (f2 - th2_f2) - th2_f1 * th1_f2
        rhs = g * f1 ** (p - 1) * f2 ** (q - 1) * det
    else:
        if not (f1.is_unit and f2.is_unit):
            raise SeriesError("f1 and f2 must be units when p or q is zero")
        det = (1 - th1_f1 / f1) * (1 - th2_f2 / f2) - (th2_f1 / f1) * (th1_f2 / f2)
        rhs = g * f1**p * f2**q * det
    return rhs.coeff(p, q)


# -- tree systems ------------------------------------------------------ #


@dataclass(frozen=True)
class TreeSystem:
    """``w_i = t_i f_i(w1, w2)``; ``t1`` marks even-level, ``t2`` odd-level vertices."""

    name: str
    f1: Evaluator
    f2: Evaluator

    def fixed_point(
        self, cap1: int, cap2: int
    ) -> tuple[BivariateSeries, BivariateSeries]:
        return solve_fixed_point(self.f1, self.f2, cap1, cap2)

    def coefficient(self, p: int, q: int, method: str = "lagrange") -> int:
        """``[t1^p t2^q] w1`` by ``"lagrange"`` or ``"fixed-point"``."""
        if method == "fixed-point":
            w1, _ = self.fixed_point(p, q)
            return w1.coeff(p, q)
        if method == "lagrange":
            x1 = BivariateSeries.x1(p, q)
            x2 = BivariateSeries.x2(p, q)
            return lagrange_coeff(x1, self.f1(x1, x2), self.f2(x1, x2), p, q)
        raise SeriesError(f"unknown extraction method {method!r}")


def partial_stack_system() -> TreeSystem:
    """Trees whose root is internal, counted by even internal vertices.

    ``[t1^l t2^(b+1)] w1`` is the number of plane trees with ``l``
    even-level vertices, all internal, and ``b + 1`` odd-level vertices.
    """
    return TreeSystem(
        "partial-stacks",
        lambda w1, w2: w2 * geometric(w2),
        lambda w1, w2: geometric(w1),
    )


def max_stack_system(h: int) -> TreeSystem:
    """Even-level outdegree at most ``h``."""
    if h < 1:
        raise SeriesError(f"h must be at least 1, got {h}")
    return TreeSystem(
        f"max-stack(h={h})",
        lambda w1, w2: truncated_geometric(w2, h),
        lambda w1, w2: geometric(w1),
    )


def max_loop_system(l: int) -> TreeSystem:
    """Odd-level outdegree at most ``l - 1`` (loop size at most ``l``)."""
    if l < 1:
        raise SeriesError(f"l must be at least 1, got {l}")
    return TreeSystem(
        f"max-loop(l={l})",
        lambda w1, w2: geometric(w2),
        lambda w1, w2: truncated_geometric(w1, l - 1),
    )


def max_both_system(h: int, l: int) -> TreeSystem:
    if h < 1 or l < 1:
        raise SeriesError(f"h and l must be at least 1, got h={h}, l={l}")
    return TreeSystem(
        f"max-both(h={h}, l={l})",
        lambda w1, w2: truncated_geometric(w2, h),
        lambda w1, w2: truncated_geometric(w1, l - 1),
    )
