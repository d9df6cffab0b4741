"""Truncated complex power series and coefficient-level first-hit recursions.

A :class:`TruncatedSeries` holds Maclaurin coefficients c_0..c_T and does
ring arithmetic exactly through order T.  On top of it,
:func:`one_boundary_series` and :func:`two_boundary_series` solve the
coupled quadratic recurrences of the first-hit generating functions by a
single forward sweep over the coefficient index: every right-hand term of
the recurrences carries a factor z, so coefficient t only ever depends on
coefficients below t.  This route involves no square roots or branch
choices, which is why it serves as the analytic oracle that the closed
forms are checked against (not the reverse).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TruncatedSeries",
    "one_boundary_series",
    "two_boundary_series",
    "partial_absorption",
]

DEFAULT_ORDER = 1000


class TruncatedSeries:
    """Complex Maclaurin coefficients c_0..c_T, immutable by convention.

    Binary operations require equal truncation orders (no silent
    broadcasting between precisions).  Multiplication is the plain O(T^2)
    Cauchy convolution; T stays small here and exactness wins over
    transform tricks.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coeffs must be a nonempty 1-D sequence")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def zeros(cls, order: int) -> "TruncatedSeries":
        return cls(np.zeros(order + 1, dtype=complex))

    @classmethod
    def constant(cls, c: complex, order: int) -> "TruncatedSeries":
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = c
        return cls(coeffs)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        """The series z."""
        coeffs = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            coeffs[1] = 1.0
        return cls(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _same_order(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise ValueError(
                f"truncation order mismatch: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._same_order(other)
            return TruncatedSeries(self.coeffs + other.coeffs)
        return self + TruncatedSeries.constant(other, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            self._same_order(other)
            return TruncatedSeries(self.coeffs - other.coeffs)
        return self - TruncatedSeries.constant(other, self.order)

    def __rsub__(self, other):
        return TruncatedSeries.constant(other, self.order) - self

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._same_order(other)
            n = self.order + 1
            return TruncatedSeries(np.convolve(self.coeffs, other.coeffs)[:n])
        return TruncatedSeries(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self * (1.0 / complex(other))
        self._same_order(other)
        b0 = other.coeffs[0]
        if b0 == 0:
            raise ZeroDivisionError("divisor has zero constant term")
        a, b = self.coeffs, other.coeffs
        q = np.zeros(self.order + 1, dtype=complex)
        for t in range(self.order + 1):
            q[t] = (a[t] - np.dot(q[:t], b[t:0:-1])) / b0
        return TruncatedSeries(q)

    def shift(self, k: int = 1) -> "TruncatedSeries":
        """Multiply by z^k (coefficients move up, top ones truncate away)."""
        if k < 0:
            raise ValueError("shift must be >= 0")
        out = np.zeros(self.order + 1, dtype=complex)
        out[k:] = self.coeffs[: self.order + 1 - k]
        return TruncatedSeries(out)

    def sqrt(self, branch_constant: complex) -> "TruncatedSeries":
        """Series s with s*s = self through order T and s(0) = branch_constant.

        Newton iteration s <- (s + a/s)/2, which doubles the number of
        correct coefficients each pass; the branch constant picks which of
        the two roots is meant and must square to the constant term.
        """
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ValueError("sqrt needs a nonzero constant term")
        if abs(branch_constant * branch_constant - c0) > 1e-12:
            raise ValueError(
                f"branch constant {branch_constant!r} does not square to the "
                f"constant term {c0!r}"
            )
        s = TruncatedSeries.constant(branch_constant, self.order)
        passes = max(1, int(np.ceil(np.log2(self.order + 1))) + 1)
        for _ in range(passes):
            s = (s + self / s) * 0.5
        return s

    def evaluate(self, z: complex) -> complex:
        """Partial-sum value sum c_t z^t (Horner)."""
        acc = 0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def __repr__(self):
        head = ", ".join(f"{c:.4g}" for c in self.coeffs[:4])
        tail = ", ..." if self.order >= 4 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"


def _sweep(order: int, r_prev: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Forward sweep of the coupled recurrences given the inner r series.

    Solves, in coefficient form,
        l = -z/3 + (2z/3) s + (2z/3) l*q
        s =  2z/3 - (z/3)  s + (2z/3) l*q
        r =  2z/3 + (2z/3) s - (z/3)  l*q
    where q is ``r_prev`` (the next-narrower strip's r, two-boundary case)
    or, when ``r_prev`` is None, the system's own r (one-boundary case).
    Either way q has no constant or linear dependence that could reach
    index t, so the sweep over t is well founded.
    """
    l = np.zeros(order + 1, dtype=complex)
    s = np.zeros(order + 1, dtype=complex)
    r = np.zeros(order + 1, dtype=complex)
    self_coupled = r_prev is None
    for t in range(1, order + 1):
        inner = r if self_coupled else r_prev
        # (l*inner)_{t-1}; both factors start at z^1, so terms below t=3 vanish
        conv = np.dot(l[1 : t - 1], inner[1 : t - 1][::-1]) if t >= 3 else 0.0
        seed_l = -1.0 / 3.0 if t == 1 else 0.0
        seed = 2.0 / 3.0 if t == 1 else 0.0
        l[t] = seed_l + (2.0 / 3.0) * s[t - 1] + (2.0 / 3.0) * conv
        s[t] = seed - (1.0 / 3.0) * s[t - 1] + (2.0 / 3.0) * conv
        r[t] = seed + (2.0 / 3.0) * s[t - 1] - (1.0 / 3.0) * conv
    return l, s, r


def one_boundary_series(
    order: int = DEFAULT_ORDER,
) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """First-hit generating functions (l, s, r) for a single left boundary.

    Coefficient t of l (resp. s, r) is the amplitude of first arrival at
    the boundary site on step t when the walk starts in coin state L
    (resp. S, R) one site to the boundary's right.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    l, s, r = _sweep(order, None)
    return TruncatedSeries(l), TruncatedSeries(s), TruncatedSeries(r)


def two_boundary_series(
    n_right: int, order: int = DEFAULT_ORDER
) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    """First-hit generating functions with the right boundary n_right away.

    Iterates the widening recursion from the all-zero k=0 functions up to
    k = n_right: at each level the quadratic term couples to the previous
    level's r, so each level is again a single forward sweep.
    """
    if n_right < 0:
        raise ValueError("n_right must be >= 0")
    if order < 1:
        raise ValueError("order must be >= 1")
    l = np.zeros(order + 1, dtype=complex)
    s = np.zeros(order + 1, dtype=complex)
    r = np.zeros(order + 1, dtype=complex)
    for _ in range(n_right):
        l, s, r = _sweep(order, r)
    return TruncatedSeries(l), TruncatedSeries(s), TruncatedSeries(r)


def partial_absorption(f: TruncatedSeries) -> float:
    """Sum of |c_t|^2 for t = 1..T: a monotone lower bound of absorption."""
    return float(np.sum(np.abs(f.coeffs[1:]) ** 2))
