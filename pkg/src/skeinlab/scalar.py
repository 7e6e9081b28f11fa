"""Complex scalar arithmetic with an explicit tolerance policy.

All algebra in the library is done over plain Python complex numbers; this
module centralizes the comparison policy (relative tolerances, never exact
zero tests on computed values) plus the few root-solving routines the
classification pipeline needs, including the branch normalization
Re q >= 0, Im q >= 0 used when recovering the braid parameter.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLeadingCoefficient,
    NoRealRoot,
    NonFiniteScalar,
    NonRealInput,
)

Scalar = complex


@dataclass(frozen=True)
class Tolerance:
    """Comparison thresholds used throughout the pipeline.

    eq_tol is relative, rank_tol is a ratio to the largest singular value,
    root_tol is an absolute residual bound for polished roots.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-8
    root_tol: float = 1e-12

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.rank_tol > 0 and self.root_tol > 0):
            raise ValueError("tolerances must be strictly positive")

    @classmethod
    def from_env(cls) -> "Tolerance":
        """Default tolerance, with SKEINLAB_TOL overriding eq_tol."""
        raw = os.environ.get("SKEINLAB_TOL")
        if raw is None:
            return cls()
        return cls(eq_tol=float(raw))


DEFAULT_TOL = Tolerance()


def check_finite(*values: Scalar) -> None:
    for v in values:
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise NonFiniteScalar(f"non-finite scalar {c!r}")


def close(x: Scalar, y: Scalar, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Relative comparison: |x - y| <= eq_tol * max(1, |x|, |y|)."""
    x, y = complex(x), complex(y)
    scale = max(1.0, abs(x), abs(y))
    return abs(x - y) <= tol.eq_tol * scale


def is_real(x: Scalar, tol: Tolerance = DEFAULT_TOL) -> bool:
    x = complex(x)
    return abs(x.imag) <= tol.eq_tol * max(1.0, abs(x))


def solve_quadratic(
    c2: Scalar, c1: Scalar, c0: Scalar, tol: Tolerance = DEFAULT_TOL
) -> tuple[Scalar, Scalar]:
    """Both roots of c2*x^2 + c1*x + c0, ordered by (real, imag).

    Raises DegenerateLeadingCoefficient when |c2| is below tolerance
    relative to the coefficient scale.
    """
    c2, c1, c0 = complex(c2), complex(c1), complex(c0)
    check_finite(c2, c1, c0)
    scale = max(abs(c2), abs(c1), abs(c0), 1.0)
    if abs(c2) <= tol.eq_tol * scale:
        raise DegenerateLeadingCoefficient(f"|c2| = {abs(c2)} too small")

    disc = cmath.sqrt(c1 * c1 - 4.0 * c2 * c0)
    # Citardauq form on the small-magnitude branch avoids cancellation.
    if abs(-c1 + disc) >= abs(-c1 - disc):
        r1 = (-c1 + disc) / (2.0 * c2)
    else:
        r1 = (-c1 - disc) / (2.0 * c2)
    r2 = c0 / (c2 * r1) if abs(r1) > 0 else -c1 / c2 - r1
    roots = sorted([r1, r2], key=lambda z: (z.real, z.imag))
    return roots[0], roots[1]


def principal_q_from_c(c: Scalar, tol: Tolerance = DEFAULT_TOL) -> Scalar:
    """The solution q of q^2 + q^-2 = c with Re q >= 0, Im q >= 0.

    c must be real.  For c <= 2 the solution lies on the unit circle; for
    c > 2 it is real and >= 1.
    """
    c = complex(c)
    check_finite(c)
    if not is_real(c, tol):
        raise NonRealInput(f"q^2+q^-2 = {c!r} is not real")
    cr = c.real

    # t = q^2 solves t + 1/t = cr.
    t1, t2 = solve_quadratic(1.0, -cr, 1.0, tol)
    best = None
    for t in (t1, t2):
        for q in (cmath.sqrt(t), -cmath.sqrt(t)):
            if q.real < -tol.eq_tol or q.imag < -tol.eq_tol:
                continue
            key = (round(q.real, 12), round(q.imag, 12))
            if best is None or key > best[0]:
                best = (key, q)
    if best is None:  # pragma: no cover - candidates always exist
        raise NoRealRoot(f"no normalized q for c = {cr}")
    q = best[1]
    # Snap the exactly-representable branches.
    if cr <= 2.0 + tol.eq_tol and abs(abs(q) - 1.0) < 1e-13:
        q /= abs(q)
    if abs(q.imag) < tol.eq_tol * max(1.0, abs(q)) and cr > 2.0:
        q = complex(q.real, 0.0)
    return q


def largest_real_root(
    coeffs: list[Scalar] | tuple[Scalar, ...], tol: Tolerance = DEFAULT_TOL
) -> Scalar:
    """Largest real root of the polynomial with the given coefficients.

    Coefficients are highest degree first, as in numpy.roots.  The chosen
    root is Newton-polished to root_tol.
    """
    arr = np.array([complex(c) for c in coeffs], dtype=complex)
    check_finite(*arr.tolist())
    roots = np.roots(arr)
    scale = max(1.0, float(np.max(np.abs(roots)))) if len(roots) else 1.0
    real_roots = [r for r in roots if abs(r.imag) <= 1e-8 * scale]
    if not real_roots:
        raise NoRealRoot("polynomial has no real root")
    x = max(r.real for r in real_roots)

    poly = np.polynomial.Polynomial(arr[::-1])
    dpoly = poly.deriv()
    for _ in range(100):
        fx = poly(x)
        if abs(fx) <= tol.root_tol:
            break
        dfx = dpoly(x)
        if dfx == 0:
            break
        x = x - (fx / dfx).real
    if abs(poly(x)) > tol.root_tol * max(1.0, float(np.max(np.abs(arr)))):
        raise NoRealRoot(f"Newton polish failed, residual {abs(poly(x))}")
    return complex(x)
