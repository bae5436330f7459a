"""Real root isolation for low-degree univariate polynomials on an interval.

Roots are isolated by Rolle splitting: the critical points of ``p`` (found
recursively from ``p'``) cut the interval into pieces on which ``p`` is
strictly monotone, so each piece holds at most one root and that root shows
up as a sign change.  Roots of even multiplicity sit on critical points and
are caught by testing ``|p|`` there.  Coefficients are in ascending order.
"""
import numpy as np
from numpy.polynomial import polynomial as P

from .config import get_tolerances


class IdenticallyZero(ValueError):
    """Raised when asked for the roots of the zero polynomial."""


def trim(coeffs, rel=1e-13):
    """Drop leading coefficients that are negligible against the largest one."""
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) > rel * scale)[0]
    return c[: keep[-1] + 1]


def is_zero_poly(coeffs, rel_to=None, atol=1e-12):
    c = np.asarray(coeffs, dtype=float)
    ref = 1.0 if rel_to is None else max(1.0, rel_to)
    return bool(np.all(np.abs(c) <= atol * ref))


def _bisect(c, a, b, fa, tol):
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = P.polyval(mid, c)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _polish(c, dc, x, a, b, steps=3):
    fx = abs(P.polyval(x, c))
    for _ in range(steps):
        d = P.polyval(x, dc)
        if d == 0.0:
            break
        nx = x - P.polyval(x, c) / d
        if not a <= nx <= b:
            break
        fn = abs(P.polyval(nx, c))
        if fn >= fx:
            break
        x, fx = nx, fn
    return x


def real_roots(coeffs, lo=0.0, hi=1.0, ztol=None):
    """All real roots of ``p`` in ``[lo, hi]``, sorted, with multiplicity ignored.

    ``ztol`` is the absolute threshold below which ``|p(x)|`` counts as zero at
    critical points and endpoints; by default it is ``1e-12`` times the sum
    of coefficient magnitudes (a bound on ``|p|`` over ``[0, 1]``).
    """
    c = trim(coeffs)
    if not np.any(c):
        raise IdenticallyZero("polynomial is identically zero")
    if ztol is None:
        reach = max(1.0, abs(lo), abs(hi)) ** (len(c) - 1)
        ztol = 1e-12 * float(np.sum(np.abs(c))) * reach
    roots = _roots(c, lo, hi, ztol, get_tolerances().bisection)
    return _merge(roots, 1e-9)


def _roots(c, lo, hi, ztol, btol):
    deg = len(c) - 1
    if deg == 0:
        return []
    if deg == 1:
        r = -c[0] / c[1]
        return [r] if lo <= r <= hi else []
    dc = P.polyder(c)
    dct = trim(dc)
    crit = _roots(dct, lo, hi, ztol, btol) if np.any(dct) else []
    knots = [lo] + [x for x in crit if lo < x < hi] + [hi]
    vals = [P.polyval(x, c) for x in knots]
    found = [x for x, v in zip(knots, vals) if abs(v) <= ztol]
    for (a, b), (fa, fb) in zip(zip(knots, knots[1:]), zip(vals, vals[1:])):
        if abs(fa) <= ztol or abs(fb) <= ztol:
            continue
        if (fa > 0) != (fb > 0):
            x = _bisect(c, a, b, fa, btol)
            found.append(_polish(c, dc, x, a, b))
    return sorted(found)


def _merge(xs, tol):
    out = []
    for x in sorted(xs):
        if out and x - out[-1] <= tol:
            continue
        out.append(float(x))
    return out


def real_root(value, k):
    """The real k-th root of ``value`` (negative values need odd k)."""
    if value < 0:
        if k % 2 == 0:
            raise ValueError(f"no real {k}-th root of {value}")
        return -real_root(-value, k)
    if value == 0:
        return 0.0
    r = value ** (1.0 / k)
    # one Newton step recovers exact roots of perfect powers
    r -= (r ** k - value) / (k * r ** (k - 1))
    return float(r)


def sign_intervals(coeffs_list, lo=0.0, hi=1.0):
    """Split ``[lo, hi]`` at the roots of several polynomials.

    Returns ``(a, b)`` pieces on the interiors of which none of the
    polynomials vanishes (identically zero polynomials are skipped).
    """
    cuts = {lo, hi}
    for c in coeffs_list:
        if not np.any(trim(c)):
            continue
        cuts.update(r for r in real_roots(c, lo, hi) if lo < r < hi)
    pts = sorted(cuts)
    return [(a, b) for a, b in zip(pts, pts[1:]) if b > a]
