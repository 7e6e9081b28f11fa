"""End-to-end classification pipeline for the dim(3-box) = 14 loop values.

Given a loop value delta, decide whether it sits on one of the admissible
loci (the depth-3 cubic point, the root-of-unity series, or the real
continuum delta >= 4), solve for the trace split (y, a, b), recover the
braid parameters (q, r), and verify every defining relation numerically.
The verdict is PASS only when all residuals clear their tolerances;
inadmissible loop values are REJECTED, not errored.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDenominator,
    NoCanonicalRepresentative,
    SkeinlabError,
    SupportAmbiguous,
)
from .scalar import DEFAULT_TOL, Scalar, Tolerance, is_real, principal_q_from_c
from .threebox import enumerate_basis, gram, reidemeister_residuals, solve_triangle, ybe_residual
from .twobox import (
    DEPTH3_DELTA,
    TwoBoxModel,
    bmw_two_box_traces,
    braid_pair,
    trace_split,
)

# Even-l search cap for the root-of-unity series below delta = 4.
L_SERIES_MAX = 200


def delta_for_l(l: int) -> float:
    """Loop value of the root-of-unity point: q = e^{i pi/l}."""
    return 2.0 * math.cos(2.0 * math.pi / l) + 2.0 * math.cos(4.0 * math.pi / l)


@dataclass(frozen=True)
class Admissibility:
    case: str  # "Depth3" | "Sp4" | "Rejected"
    l: int | None = None
    note: str = ""


def admissible_check(delta: float, tol: Tolerance = DEFAULT_TOL) -> Admissibility:
    """Locate delta on the classification locus, or reject it."""
    delta = float(delta)
    if not delta > 0:
        return Admissibility("Rejected", note=f"delta = {delta} is not positive")
    if abs(delta - DEPTH3_DELTA) < 1e-6:
        return Admissibility("Depth3", note="cubic depth-3 loop value")
    if delta >= 4.0 - tol.eq_tol:
        return Admissibility("Sp4", note="real continuum, q >= 1")
    for l in range(12, L_SERIES_MAX + 1, 2):
        if abs(delta - delta_for_l(l)) < 1e-6:
            return Admissibility("Sp4", l=l, note=f"root-of-unity point l = {l}")
    return Admissibility(
        "Rejected",
        note=(
            f"delta = {delta} is neither the depth-3 value, in the even-l "
            f"series (l <= {L_SERIES_MAX}), nor >= 4"
        ),
    )


def solve_delta(delta: float, sigma: int, tol: Tolerance = DEFAULT_TOL):
    """(y, a, b) with y = b/a and a + b = delta^2 - 1 on the given branch."""
    return trace_split(float(delta), sigma, tol)


def recover_qr(
    delta: float,
    a: float,
    b: float,
    sigma: int = -1,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[Scalar, Scalar]:
    """Braid parameters (q, r) from (delta, a, b), using delta' = sigma*delta.

    q solves q^2 + q^-2 = (2(d-1)^4 - 4(d-1)^2 + 2(b-a)^2) / ((d-1)^4 - (b-a)^2)
    with d = delta'; r follows from the closure of the twisted strand.  The
    Brauer point q = 1 is returned with its limit r = 1.
    """
    dp = sigma * float(delta)
    u = (dp - 1.0) ** 2
    w = (b - a) ** 2
    denom = u * u - w
    scale = max(1.0, abs(u * u), abs(w))
    if abs(denom) <= tol.eq_tol * scale:
        raise DegenerateDenominator(
            f"(delta'-1)^4 - (b-a)^2 = {denom} vanishes at delta={delta}"
        )
    c = (2.0 * u * u - 4.0 * u + 2.0 * w) / denom
    q = principal_q_from_c(c, tol)
    if abs(q - 1.0) <= 1e-9:
        return complex(1.0), complex(1.0)
    r = ((dp - 1.0) ** 2 * (q - 1.0 / q) + (a - b) * (q + 1.0 / q)) / (2.0 * (dp - 1.0))
    # On the unit-circle branch the modulus is exact; snap the float noise.
    if abs(abs(q) - 1.0) <= tol.eq_tol and abs(abs(r) - 1.0) <= 1e-6:
        r /= abs(r)
    if is_real(q, tol) and abs(r.imag) <= 1e-9 * max(1.0, abs(r)):
        r = complex(r.real, 0.0)
    return q, r


def _bmw_orbit(r: Scalar, q: Scalar) -> list[tuple[Scalar, Scalar]]:
    """Closure of (r, q) under the parameter symmetries
    (r,q) -> (-r,-q), (r^-1,q^-1), (-r^-1,q)."""
    seen = {}
    stack = [(complex(r), complex(q))]
    while stack:
        rr, qq = stack.pop()
        key = (round(rr.real, 12), round(rr.imag, 12), round(qq.real, 12), round(qq.imag, 12))
        if key in seen:
            continue
        seen[key] = (rr, qq)
        stack.extend(
            [(-rr, -qq), (1.0 / rr, 1.0 / qq), (-1.0 / rr, qq)]
        )
        if len(seen) > 16:  # pragma: no cover - the group is small
            break
    return list(seen.values())


def normalize_bmw_params(
    r: Scalar, q: Scalar, tol: Tolerance = DEFAULT_TOL
) -> tuple[Scalar, Scalar]:
    """Canonical orbit representative: Re q >= 0, Im q >= 0, Re r >= 0 on the
    unit circle, or q >= 1, r >= 0 in the real case."""
    r, q = complex(r), complex(q)
    unit = abs(abs(q) - 1.0) <= 1e-9 and abs(abs(r) - 1.0) <= 1e-9
    candidates = []
    for rr, qq in _bmw_orbit(r, q):
        if unit:
            ok = (
                qq.real >= -tol.eq_tol
                and qq.imag >= -tol.eq_tol
                and rr.real >= -tol.eq_tol
            )
        else:
            ok = (
                abs(qq.imag) <= 1e-9 * max(1.0, abs(qq))
                and abs(rr.imag) <= 1e-9 * max(1.0, abs(rr))
                and qq.real >= 1.0 - 1e-9
                and rr.real >= -tol.eq_tol
            )
        if ok:
            candidates.append((rr, qq))
    if not candidates:
        raise NoCanonicalRepresentative(
            f"orbit of (r, q) = ({r}, {q}) misses the normalization region"
        )
    # Deterministic tie-break when the region boundary is hit.
    rr, qq = min(
        candidates, key=lambda p: (round(p[1].real, 12), round(p[1].imag, 12),
                                   round(p[0].real, 12), round(p[0].imag, 12))
    )
    return rr, qq


# -- principal graph prefix ---------------------------------------------


@dataclass(frozen=True)
class PrincipalGraphPrefix:
    """The hat-shaped graph up to depth 3."""

    depth2_weights: dict[str, float]
    depth3_neighbors: dict[str, tuple[str, ...]]
    edge_multiplicities: dict[tuple[str, str], int]
    supports: dict[str, tuple[str, ...]]


_BASIS_NAMES = ("e", "P1", "P2")


def _support(coeffs: np.ndarray, tol: Tolerance) -> tuple[str, ...]:
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    lo = tol.eq_tol * scale
    hi = 1e3 * lo
    out = []
    for name, c in zip(_BASIS_NAMES, coeffs):
        mag = abs(complex(c))
        if mag < lo:
            continue
        if mag < hi:
            raise SupportAmbiguous(
                f"coefficient of {name} is {mag:.3e}, inside the ambiguity band"
            )
        out.append(name)
    return tuple(out)


def principal_graph_prefix(
    model: TwoBoxModel, tol: Tolerance = DEFAULT_TOL
) -> PrincipalGraphPrefix:
    """Depth-3 prefix inferred from the coproduct supports."""
    cop = model.coproduct_table
    supports = {
        "P1*P1": _support(cop[1, 1], tol),
        "P1*P2": _support(cop[1, 2], tol),
        "P2*P2": _support(cop[2, 2], tol),
    }
    expected = {
        "P1*P1": ("e", "P2"),
        "P1*P2": ("P1", "P2"),
        "P2*P2": ("e", "P1", "P2"),
    }
    if supports != expected:
        raise SkeinlabError(
            f"coproduct supports {supports} off the classification pattern"
        )
    # Two depth-3 vertices: w1 shared between P1 and P2, w2 hangs off P2;
    # path counting then gives dim(S_3) = 9 + 4 + 1 = 14.
    neighbors = {"w1": ("P1", "P2"), "w2": ("P2",)}
    mults = {("w1", "P1"): 1, ("w1", "P2"): 1, ("w2", "P2"): 1}
    return PrincipalGraphPrefix(
        depth2_weights={"P1": model.a, "P2": model.b},
        depth3_neighbors=neighbors,
        edge_multiplicities=mults,
        supports=supports,
    )


# -- end-to-end pipeline -------------------------------------------------


# PASS thresholds per residual key.
RESIDUAL_TOLERANCES = {
    "chirality": 1e-8,
    "gram_psd_min_eigenvalue": 1e-8,
    "ybe": 1e-8,
    "r1": 1e-8,
    "r2": 1e-8,
    "quad": 1e-8,
    "qr_roundtrip": 1e-9,
}


@dataclass
class ClassificationResult:
    case: str
    delta: float
    sigma: int = 0
    l: int | None = None
    y: float | None = None
    a: float | None = None
    b: float | None = None
    q: Scalar | None = None
    r: Scalar | None = None
    residuals: dict[str, float] = field(default_factory=dict)
    verdict: str = "REJECTED"
    notes: list[str] = field(default_factory=list)
    graph: PrincipalGraphPrefix | None = None


def classify(delta: float, tol: Tolerance = DEFAULT_TOL) -> ClassificationResult:
    delta = float(delta)
    adm = admissible_check(delta, tol)
    if adm.case == "Rejected":
        return ClassificationResult(
            case="Rejected", delta=delta, verdict="REJECTED", notes=[adm.note]
        )

    sigma = +1 if adm.case == "Depth3" else -1
    if adm.case == "Depth3":
        delta = DEPTH3_DELTA  # snap user-typed approximations to the root
    result = ClassificationResult(
        case=adm.case, delta=delta, sigma=sigma, l=adm.l, notes=[adm.note]
    )
    try:
        y, a, b = solve_delta(delta, sigma, tol)
        result.y, result.a, result.b = y, a, b
        model = TwoBoxModel(delta, a, b, sigma, tol)

        q, r = recover_qr(delta, a, b, sigma, tol)
        result.q, result.r = q, r
        braid = braid_pair(model, q, r, tol)

        residuals: dict[str, float] = {}
        residuals["chirality"] = model.chirality_residual()

        basis = enumerate_basis(model)
        gm = gram(model, basis, tol)
        evals = gm.eigenvalues()
        lam_max = max(float(evals[-1]), 1e-300)
        residuals["gram_psd_min_eigenvalue"] = max(0.0, -float(evals[0]) / lam_max)

        table = solve_triangle(model, basis, gm, tol)
        residuals["ybe"] = ybe_residual(model, braid, table, tol)
        r1, r2, quad = reidemeister_residuals(model, braid, table)
        residuals["r1"], residuals["r2"], residuals["quad"] = r1, r2, quad

        if abs(q - 1.0) <= 1e-9:
            residuals["qr_roundtrip"] = 0.0
            result.notes.append("Brauer point: roundtrip taken as the q -> 1 limit")
        else:
            dp, t1, t2 = bmw_two_box_traces(q, r, tol)
            scale = max(1.0, delta * delta)
            residuals["qr_roundtrip"] = (
                max(abs(dp - sigma * delta), abs(t1 - a), abs(t2 - b)) / scale
            )

        result.residuals = residuals
        result.graph = principal_graph_prefix(model, tol)
        bad = [
            k for k, v in residuals.items() if v >= RESIDUAL_TOLERANCES[k]
        ]
        if bad:
            result.verdict = "FAIL"
            result.notes.append(f"residuals over tolerance: {', '.join(sorted(bad))}")
        else:
            result.verdict = "PASS"
    except SkeinlabError as exc:
        result.verdict = "FAIL"
        result.notes.append(f"{type(exc).__name__}: {exc}")
    return result
