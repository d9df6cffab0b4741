"""Closed-form generating functions on the closed unit disk.

The one-boundary functions involve Delta = sqrt(9 + 6z + 9z^2), whose two
branch points (-1 +- 2*sqrt(2) i)/3 sit exactly on the unit circle.  The
quadratic avoids the negative real axis everywhere inside the open disk
(on the only line where it is real, Re z = -1/3, it equals 8 - 9 Im(z)^2 > 0),
so inside the disk the principal square root IS the analytic branch with
Delta(0) = +3.  On the circle the same branch has the explicit arc form

    |theta| <  theta_bp:  Delta = exp(i theta/2) sqrt(6 (1 + 3 cos theta))
    |theta| >  theta_bp:  Delta = -exp(i (theta + sign(theta) pi)/2)
                                   sqrt(-6 (1 + 3 cos theta))

with theta in (-pi, pi] and theta_bp = arccos(-1/3); each arc formula is
continuous on its arc and agrees with the disk branch at z = 1 (sqrt 24)
and z = -1 (sqrt 12), which pins it down since Delta only vanishes at the
branch points.  :class:`BranchTrace` rebuilds the same branch numerically
by continuity tracking along a theta grid, re-anchoring against the
disk-interior value after each branch point (continuity alone cannot pick
the sign across a zero of Delta: the limits on the two sides differ by a
factor of -i, making the two candidates equidistant).

The two-boundary functions are rational, built by iterating a Moebius
step in the inner strip's r; the transfer-matrix eigenvalue form and the
related identities live here as runnable checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BranchPointError",
    "PoleError",
    "BRANCH_POINTS",
    "BRANCH_ANGLES",
    "OMEGA",
    "BranchTrace",
    "delta",
    "delta_on_circle",
    "l_closed",
    "s_closed",
    "r_closed",
    "r_closed_uncorrected",
    "r_iterates",
    "lsr_from_previous",
    "two_boundary_eval",
    "lambda_pm",
    "r_closed_two_boundary",
    "check_prop8",
    "check_prop10",
    "check_contraction",
]


class BranchPointError(ValueError):
    """Evaluation point indistinguishably close to a branch point of Delta."""


class PoleError(ArithmeticError):
    """A denominator on the evaluation path is numerically zero."""


#: roots of 9 + 6z + 9z^2, both on the unit circle
BRANCH_POINTS = (
    (-1 + 2j * np.sqrt(2)) / 3,
    (-1 - 2j * np.sqrt(2)) / 3,
)

#: their angles in [0, 2pi): arccos(-1/3) and 2pi - arccos(-1/3)
BRANCH_ANGLES = (np.arccos(-1.0 / 3.0), 2 * np.pi - np.arccos(-1.0 / 3.0))

#: the root of 3z^2 - 2z + 3 in the upper half plane, on the unit circle
OMEGA = (1 + 2j * np.sqrt(2)) / 3

_CIRCLE_TOL = 1e-9
_BP_TOL = 1e-12


def _quadratic(z):
    return 9 + 6 * z + 9 * z * z


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _maybe_scalar(arr, scalar: bool):
    if scalar:
        return complex(np.asarray(arr).reshape(())[()])
    return arr


def _check_branch_distance(z_arr):
    for bp in BRANCH_POINTS:
        d = np.min(np.abs(z_arr - bp))
        if d < _BP_TOL:
            raise BranchPointError(
                f"point within {d:.1e} of branch point {bp:.6f}; refusing to pick a sign"
            )


def _delta_arc(theta):
    """Arc formula for Delta(e^{i theta}) on the disk-analytic branch."""
    theta = np.asarray(theta, dtype=float)
    tp = np.mod(theta + np.pi, 2 * np.pi) - np.pi
    tp = np.where(tp == -np.pi, np.pi, tp)
    w = 6.0 * (1.0 + 3.0 * np.cos(tp))
    inner = np.abs(tp) < BRANCH_ANGLES[0]
    out = np.empty(tp.shape, dtype=complex)
    ti, to = tp[inner], tp[~inner]
    out[inner] = np.exp(0.5j * ti) * np.sqrt(np.maximum(w[inner], 0.0))
    out[~inner] = -np.exp(0.5j * (to + np.sign(to) * np.pi)) * np.sqrt(
        np.maximum(-w[~inner], 0.0)
    )
    return out


def delta_on_circle(theta):
    """Delta(e^{i theta}) on the branch analytic in the disk, vectorized."""
    theta_arr, scalar = _as_complex_array(theta)
    th = np.atleast_1d(theta_arr.real.astype(float))
    _check_branch_distance(np.exp(1j * th))
    out = np.atleast_1d(_delta_arc(th))
    return _maybe_scalar(out.reshape(np.shape(theta_arr)), scalar)


def delta(z, trace: "BranchTrace | None" = None):
    """sqrt(9 + 6z + 9z^2) on the branch with Delta(0) = +3, |z| <= 1.

    On the circle this is the branch continuous along the circle from
    z = 1 (where Delta = +sqrt(24)) within each arc between the branch
    points.  Pass a :class:`BranchTrace` to resolve circle points against
    its tracked samples instead of the closed arc formula; both give the
    same branch (the trace construction asserts as much).
    """
    z_arr, scalar = _as_complex_array(z)
    zs = np.atleast_1d(z_arr)
    mags = np.abs(zs)
    if np.any(mags > 1 + _CIRCLE_TOL):
        raise ValueError("delta is only defined on the closed unit disk")
    _check_branch_distance(zs)
    on_circle = np.abs(mags - 1) <= _CIRCLE_TOL
    out = np.empty(zs.shape, dtype=complex)
    if np.any(~on_circle):
        out[~on_circle] = np.sqrt(_quadratic(zs[~on_circle]))
    if np.any(on_circle):
        thetas = np.mod(np.angle(zs[on_circle]), 2 * np.pi)
        if trace is None:
            out[on_circle] = _delta_arc(thetas)
        else:
            out[on_circle] = np.array([trace.resolve(t) for t in thetas])
    return _maybe_scalar(out.reshape(np.shape(z_arr)), scalar)


@dataclass(frozen=True)
class BranchTrace:
    """Continuity-tracked samples of Delta along the unit circle.

    The grid is split at the two branch angles.  Within a segment each
    sample's sign is chosen so the value stays close to its predecessor
    (|next - prev| <= |next + prev|); the first sample of each segment is
    instead anchored to the principal square root evaluated just inside
    the circle at radius 1 - 1e-6, the independent tie-breaker that
    continuity cannot supply across a zero.
    """

    theta_grid: np.ndarray
    values: np.ndarray

    @classmethod
    def build(cls, n: int = 4096) -> "BranchTrace":
        if n < 8:
            raise ValueError("grid too coarse to track the branch")
        base = 2 * np.pi * np.arange(n) / n
        keep = np.ones(n, dtype=bool)
        for ang in BRANCH_ANGLES:
            keep &= np.abs(base - ang) > 1e-9
        thetas = base[keep]
        seg = np.searchsorted(BRANCH_ANGLES, thetas)  # 0, 1, 2 per arc
        values = np.empty(thetas.shape, dtype=complex)
        prev_val = None
        prev_seg = -1
        for k, (th, sg) in enumerate(zip(thetas, seg)):
            cand = np.sqrt(_quadratic(np.exp(1j * th)))
            if sg != prev_seg:
                ref = np.sqrt(_quadratic((1 - 1e-6) * np.exp(1j * th)))
            else:
                ref = prev_val
            if abs(cand - ref) > abs(cand + ref):
                cand = -cand
            values[k] = cand
            prev_val = cand
            prev_seg = sg
        trace = cls(theta_grid=thetas, values=values)
        if abs(trace.values[0] - np.sqrt(24)) >= 1e-9:
            raise RuntimeError("branch tracking lost the +sqrt(24) anchor at theta = 0")
        return trace

    def resolve(self, theta: float) -> complex:
        """Branch-consistent Delta at e^{i theta} via the nearest tracked sample."""
        th = float(np.mod(theta, 2 * np.pi))
        z = np.exp(1j * th)
        _check_branch_distance(np.array([z]))
        seg = int(np.searchsorted(BRANCH_ANGLES, th))
        same = np.searchsorted(BRANCH_ANGLES, self.theta_grid) == seg
        if not np.any(same):
            raise ValueError("trace has no samples on this arc")
        idx = np.argmin(np.abs(self.theta_grid[same] - th))
        neighbor = self.values[same][idx]
        cand = np.sqrt(_quadratic(z))
        return complex(cand if abs(cand - neighbor) <= abs(cand + neighbor) else -cand)


def _delta_or(dl, z):
    return delta(z) if dl is None else dl


def _closed_eval(z, dl, numerator, z_factor, limit):
    """Evaluate numerator(z, delta)/z_factor(z), filling z = 0 with ``limit``.

    z = 0 is a removable singularity of all four closed forms; the filled
    value is the series constant term.
    """
    z_arr, scalar = _as_complex_array(z)
    flat = np.atleast_1d(z_arr)
    small = np.abs(flat) < 1e-15
    safe = np.where(small, 1.0, flat)
    d = np.atleast_1d(np.asarray(_delta_or(dl, z_arr), dtype=complex))
    d = np.broadcast_to(d, flat.shape)
    out = numerator(safe, d) / z_factor(safe)
    out = np.where(small, limit, out)
    return _maybe_scalar(out.reshape(np.shape(z_arr)), scalar)


def l_closed(z, dl=None):
    """One-boundary generating function for initial coin L."""
    return _closed_eval(
        z, dl,
        lambda w, d: -3 - 4 * w - 3 * w * w + (1 + w) * d,
        lambda w: 2 * w,
        0.0,
    )


def s_closed(z, dl=None):
    """One-boundary generating function for initial coin S."""
    return _closed_eval(
        z, dl,
        lambda w, d: -3 - w + d,
        lambda w: 2 * w,
        0.0,
    )


def r_closed(z, dl=None):
    """One-boundary generating function for initial coin R.

    The linear term of the numerator is -2z.  With +2z the expansion gains
    a spurious constant term (first-hit amplitudes start at step 1, so the
    true constant coefficient is 0); the -2z form is the one consistent
    with the coefficient recursion, the simulator, and the identity
    r = (l + z)/(1 + z l).  The +2z variant is kept as
    :func:`r_closed_uncorrected` for the regression test that documents
    the deviation.
    """
    return _closed_eval(
        z, dl,
        lambda w, d: 3 - 2 * w + 3 * w * w + (w - 1) * d,
        lambda w: 4 * w,
        0.0,
    )


def r_closed_uncorrected(z, dl=None):
    """The +2z sign variant of :func:`r_closed`; wrong, kept for regression.

    Its z = 0 limit is 1, not 0, which is exactly the defect the
    regression test pins down.
    """
    return _closed_eval(
        z, dl,
        lambda w, d: 3 + 2 * w + 3 * w * w + (w - 1) * d,
        lambda w: 4 * w,
        1.0,
    )


_DEN_TOL = 1e-14


def lsr_from_previous(r_prev, z):
    """One widening step of the two-boundary recursion, vectorized over z.

    Given r for the strip with the right boundary one site nearer, returns
    (l, s, r) for the current strip.  All three share the denominator
    3 + z - (2z + 2z^2) r_prev; a numerically vanishing denominator (for
    example z = 1, where the step is a removable 0/0) raises
    :class:`PoleError` rather than returning garbage.
    """
    z = np.asarray(z, dtype=complex)
    r_prev = np.asarray(r_prev, dtype=complex)
    den = 3 + z - (2 * z + 2 * z * z) * r_prev
    if np.any(np.abs(den) < _DEN_TOL):
        raise PoleError("two-boundary recursion denominator vanished on the path")
    l = (-z + z * z) / den
    s = (2 * z - 2 * z * z * r_prev) / den
    r = (2 * z + 2 * z * z - (z * z + 3 * z ** 3) * r_prev) / den
    return l, s, r


def r_iterates(max_k: int, z) -> list:
    """[r(0,z), r(1,z), ..., r(max_k,z)] by the widening recursion."""
    if max_k < 0:
        raise ValueError("max_k must be >= 0")
    z = np.asarray(z, dtype=complex)
    out = [np.zeros_like(z)]
    for _ in range(max_k):
        out.append(lsr_from_previous(out[-1], z)[2])
    return out


def two_boundary_eval(n: int, z):
    """(l, s, r) of the strip with right boundary n sites away, at z."""
    z_arr, scalar = _as_complex_array(z)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        zero = np.zeros_like(z_arr)
        return tuple(_maybe_scalar(np.atleast_1d(zero), scalar) for _ in range(3))
    r_prev = r_iterates(n - 1, z_arr)[-1]
    l, s, r = lsr_from_previous(r_prev, z_arr)
    return tuple(
        _maybe_scalar(np.atleast_1d(v).reshape(np.shape(z_arr)), scalar)
        for v in (l, s, r)
    )


def lambda_pm(z):
    """Eigenvalues of the widening-step transfer matrix, larger first at z=0.

    Their product is z^2 (1-z)^2 and their sum (3+z) - (z^2+3z^3); every
    consumer is symmetric under swapping the two, so the square-root
    branch is immaterial.
    """
    z = np.asarray(z, dtype=complex)
    disc = (3 + z + z * z + 3 * z ** 3) ** 2 - 4 * (2 * z + 2 * z * z) ** 2
    sq = np.sqrt(disc)
    tr = (3 + z) - (z * z + 3 * z ** 3)
    return (tr + sq) / 2, (tr - sq) / 2


def r_closed_two_boundary(n: int, z):
    """r for the width-n strip from eigenvalue powers; test oracle only.

    The iteration in :func:`r_iterates` is preferred in production since
    lambda_+^n grows; this form is used to cross-check it for moderate n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    z_arr, scalar = _as_complex_array(z)
    lp, lm = lambda_pm(z_arr)
    rn = lp ** n - lm ** n
    rn1 = lp ** (n + 1) - lm ** (n + 1)
    den = rn1 + z_arr * z_arr * (1 + 3 * z_arr) * rn
    if np.any(np.abs(den) < _DEN_TOL):
        raise PoleError("eigenvalue-form denominator vanished")
    out = 2 * z_arr * (z_arr + 1) * rn / den
    return _maybe_scalar(np.atleast_1d(out).reshape(np.shape(z_arr)), scalar)


def check_prop8(n: int, z):
    """Residual of the unit-circle reflection identity for r_n.

    For z on the circle, (1/z) r_n(z) r_n(1/z) should equal
    (2 / (3z^2 - 2z + 3)) (r_n(z) + r_n(1/z)); returns |lhs - rhs|.
    """
    z_arr, scalar = _as_complex_array(z)
    rn_z = r_iterates(n, z_arr)[-1]
    rn_zi = r_iterates(n, 1 / z_arr)[-1]
    lhs = rn_z * rn_zi / z_arr
    rhs = 2 / (3 * z_arr * z_arr - 2 * z_arr + 3) * (rn_z + rn_zi)
    out = np.abs(lhs - rhs)
    return float(out) if scalar else out


def check_prop10(n: int) -> tuple[float, float]:
    """(Re r_n(omega), real value of -(i/sqrt 2) r_n(omega)).

    r_n at omega is purely imaginary, and -(i/sqrt 2) r_n(omega) is the
    absorption probability p_n of the strip with the left boundary
    adjacent to the start; the first element should vanish and the second
    should match the scalar recurrence for p_n.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rn = complex(r_iterates(n, np.asarray(OMEGA))[-1])
    pn = (-1j / np.sqrt(2)) * rn
    return float(rn.real), float(pn.real)


def check_contraction(w, z):
    """|f(w, z)| for the widening-step Moebius map on the open bidisk.

    f(w, z) = (2z(z+1) - z^2(1+3z) w) / ((z+3) - 2z(z+1) w) maps the
    bidisk strictly inside the unit disk, which is what makes the
    two-boundary iteration converge; values must stay below 1.
    """
    w_arr = np.asarray(w, dtype=complex)
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(w_arr) >= 1) or np.any(np.abs(z_arr) >= 1):
        raise ValueError("contraction check expects |w| < 1 and |z| < 1")
    num = 2 * z_arr * (z_arr + 1) - z_arr * z_arr * (1 + 3 * z_arr) * w_arr
    den = (z_arr + 3) - 2 * z_arr * (z_arr + 1) * w_arr
    out = np.abs(num / den)
    return float(out) if out.ndim == 0 else out
