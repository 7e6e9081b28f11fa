"""The 14-dimensional 3-box space: diagram basis, Gram matrix, triangle
reduction table, and the braid-relation residuals.

A 3-box is presented as a pattern in a disk with 6 boundary points, labeled
0..5 counterclockwise starting after the $-marker.  Points 0,1,2 are the
bottom of the box and 3,4,5 the top (right to left), so the adjoint is the
top-bottom reflection i -> 5-i and the trace closure of Y*X glues
X.i <-> mirror(Y).(5-i) for every i.

All inner products reduce to closed diagrams with at most 5 vertices, which
the skein engine evaluates without a triangle table (Euler counting leaves a
face with at most 2 sides at every step).
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GramRankDeficient,
    InternalEnumerationMismatch,
    InvariantViolation,
)
from .scalar import DEFAULT_TOL, Scalar, Tolerance
from .skein import Diagram, Vertex, evaluate
from .twobox import BoxVec, BraidPair, PLUS, TwoBoxModel

Dart = tuple[int, int]
Attachment = tuple  # ("v", vid, slot) or ("b", j)


@dataclass(frozen=True)
class Pattern:
    """A 3-box diagram: labeled vertices in a disk with 6 boundary points."""

    vertices: tuple[tuple[int, Vertex], ...]
    internal_edges: tuple[tuple[Dart, Dart], ...]
    boundary: tuple[Attachment, ...]

    def __post_init__(self):
        if len(self.boundary) != 6:
            raise InvariantViolation("a 3-box pattern has 6 boundary points")

    @property
    def vertex_map(self) -> dict[int, Vertex]:
        return dict(self.vertices)

    def key(self, ndigits: int = 9):
        """Canonical form under vertex renumbering (boundary points are
        fixed, so a boundary-first scan pins the order)."""
        order: dict[int, int] = {}

        def see(vid: int) -> int:
            if vid not in order:
                order[vid] = len(order)
            return order[vid]

        vmap = self.vertex_map
        adjacency = {}
        for (a, sa), (b, sb) in self.internal_edges:
            adjacency[(a, sa)] = (b, sb)
            adjacency[(b, sb)] = (a, sa)

        enc = []
        queue = []
        for att in self.boundary:
            if att[0] == "v":
                enc.append(("v", see(att[1]), att[2]))
                queue.append(att[1])
            else:
                enc.append(("b", att[1]))
        # encode each vertex in discovered order: label + internal edges
        idx = 0
        listed = sorted(order, key=order.get)
        while idx < len(listed):
            vid = listed[idx]
            idx += 1
            vert = vmap[vid]
            enc.append(
                tuple(
                    (round(c.real, ndigits) + 0.0, round(c.imag, ndigits) + 0.0)
                    for c in vert.coeffs
                )
            )
            for slot in range(4):
                link = adjacency.get((vid, slot))
                if link is None:
                    enc.append(("open", slot))
                else:
                    w, ws = link
                    enc.append(("e", see(w), ws))
                    if w not in listed:
                        listed.append(w)
        return tuple(enc)


def mirror(p: Pattern) -> Pattern:
    """Adjoint pattern: reflect top-bottom.  Boundary point i goes to 5-i,
    vertex darts reverse (slot -> 3-slot, keeping the $-region fixed), and
    labels conjugate coefficientwise."""
    verts = tuple(
        (vid, Vertex(tuple(c.conjugate() for c in v.coeffs), v.shading0))
        for vid, v in p.vertices
    )
    edges = tuple(
        ((a, 3 - sa), (b, 3 - sb)) for (a, sa), (b, sb) in p.internal_edges
    )
    bnd = []
    for i in range(6):
        att = p.boundary[5 - i]
        if att[0] == "v":
            bnd.append(("v", att[1], 3 - att[2]))
        else:
            bnd.append(("b", 5 - att[1]))
    return Pattern(verts, edges, tuple(bnd))


def _walk_connections(connections, is_connector):
    """Resolve chains through degree-2 connector nodes; returns terminal
    pairings and the number of pure-connector cycles."""
    adj = defaultdict(list)
    for cid, (u, v) in enumerate(connections):
        adj[u].append((cid, v))
        adj[v].append((cid, u))
    for node, links in adj.items():
        want = 2 if is_connector(node) else 1
        if len(links) != want:
            raise InvariantViolation(f"node {node} has {len(links)} links, wants {want}")
    used: set[int] = set()
    pairs = []
    for node in list(adj):
        if is_connector(node) or any(cid in used for cid, _ in adj[node]):
            continue
        cid, cur = adj[node][0]
        used.add(cid)
        while is_connector(cur):
            nxt = [(c, o) for c, o in adj[cur] if c not in used]
            if not nxt:
                raise InvariantViolation("dangling connector walk")
            cid, cur = nxt[0]
            used.add(cid)
        pairs.append((node, cur))
    loops = 0
    for cid0, (_, end) in enumerate(connections):
        if cid0 in used:
            continue
        used.add(cid0)
        cur = end
        while True:
            nxt = [(c, o) for c, o in adj[cur] if c not in used]
            if not nxt:
                break
            cid, cur = nxt[0]
            used.add(cid)
        loops += 1
    return pairs, loops


def closure(x: Pattern, y: Pattern) -> Diagram:
    """The closed diagram of tr_3(y* x): glue x with the mirror of y."""
    ym = mirror(y)
    off = max((vid for vid, _ in x.vertices), default=-1) + 1

    vertices = {vid: v for vid, v in x.vertices}
    vertices.update({vid + off: v for vid, v in ym.vertices})

    connections = []
    arc_seen = set()
    for i in range(6):
        # x side of glue point i
        att = x.boundary[i]
        if att[0] == "v":
            connections.append((("g", i), (att[1], att[2])))
        else:
            pair = tuple(sorted((i, att[1])))
            if ("x",) + pair not in arc_seen:
                arc_seen.add(("x",) + pair)
                connections.append((("g", pair[0]), ("g", pair[1])))
        # mirror-y side: its boundary point p sits on glue point 5-p
        att = ym.boundary[5 - i]
        if att[0] == "v":
            connections.append((("g", i), (att[1] + off, att[2])))
        else:
            pair = tuple(sorted((i, 5 - att[1])))
            if ("y",) + pair not in arc_seen:
                arc_seen.add(("y",) + pair)
                connections.append((("g", pair[0]), ("g", pair[1])))

    pairs, loops = _walk_connections(connections, lambda n: n[0] == "g")

    d = Diagram(vertices, {}, loops)
    for (a, sa), (b, sb) in x.internal_edges:
        d.add_edge((a, sa), (b, sb))
    for (a, sa), (b, sb) in ym.internal_edges:
        d.add_edge((a + off, sa), (b + off, sb))
    for a, b in pairs:
        d.add_edge(a, b)
    return d.infer_shading()


def inner(model: TwoBoxModel, x: Pattern, y: Pattern, tol: Tolerance = DEFAULT_TOL) -> Scalar:
    """<x, y> = tr_3(y* x); linear in x, conjugate-linear in y."""
    return evaluate(closure(x, y), model, None, tol)


# -- basis enumeration ---------------------------------------------------


def _noncrossing_matchings(points: list[int]) -> list[list[tuple[int, int]]]:
    if not points:
        return [[]]
    out = []
    first = points[0]
    for k in range(1, len(points), 2):
        inside = points[1:k]
        outside = points[k + 1 :]
        for m1 in _noncrossing_matchings(inside):
            for m2 in _noncrossing_matchings(outside):
                out.append([(first, points[k])] + m1 + m2)
    return out


def _tl_patterns() -> list[Pattern]:
    pats = []
    for matching in _noncrossing_matchings(list(range(6))):
        bnd: list[Attachment] = [None] * 6
        for i, j in matching:
            bnd[i] = ("b", j)
            bnd[j] = ("b", i)
        pats.append(Pattern((), (), tuple(bnd)))
    return pats


def _one_vertex_patterns(model: TwoBoxModel) -> list[Pattern]:
    t = Vertex(model.uncappable().coeffs)
    pats = []
    for i in range(6):
        bnd: list[Attachment] = [None] * 6
        bnd[i] = ("b", (i + 1) % 6)
        bnd[(i + 1) % 6] = ("b", i)
        for slot in range(4):
            bnd[(i + 2 + slot) % 6] = ("v", 0, slot)
        pats.append(Pattern(((0, t),), (), tuple(bnd)))
    return pats


def _two_vertex_patterns(model: TwoBoxModel) -> list[Pattern]:
    t = Vertex(model.uncappable().coeffs)
    seen = set()
    pats = []
    for j in range(6):
        bnd: list[Attachment] = [None] * 6
        for slot in range(3):
            bnd[(j + slot) % 6] = ("v", 0, slot)
            bnd[(j + 3 + slot) % 6] = ("v", 1, slot)
        p = Pattern(((0, t), (1, t)), (((0, 3), (1, 3)),), tuple(bnd))
        k = p.key()
        if k not in seen:
            seen.add(k)
            pats.append(p)
    return pats


@dataclass(frozen=True)
class Basis14:
    """The 14 face-free 3-box diagrams: 5 Temperley-Lieb, 6 one-vertex,
    3 two-vertex, in that order."""

    diagrams: tuple[Pattern, ...]

    @property
    def tl(self):
        return self.diagrams[:5]

    @property
    def one_vertex(self):
        return self.diagrams[5:11]

    @property
    def two_vertex(self):
        return self.diagrams[11:]


def enumerate_basis(model: TwoBoxModel) -> Basis14:
    tl = _tl_patterns()
    one = _one_vertex_patterns(model)
    two = _two_vertex_patterns(model)
    counts = (len(tl), len(one), len(two))
    if counts != (5, 6, 3):
        raise InternalEnumerationMismatch(f"basis counts {counts} != (5, 6, 3)")
    keys = {p.key() for p in tl + one + two}
    if len(keys) != 14:
        raise InternalEnumerationMismatch("basis diagrams are not pairwise distinct")
    return Basis14(tuple(tl + one + two))


# -- Gram matrix ---------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    """G[i, j] = <D_i, D_j> over the Basis14 order."""

    entries: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def rank(self, tol: Tolerance = DEFAULT_TOL) -> int:
        s = np.linalg.svd(self.entries, compute_uv=False)
        if len(s) == 0 or s[0] == 0:
            return 0
        return int(np.sum(s >= tol.rank_tol * s[0]))

    def hermiticity_defect(self) -> float:
        g = self.entries
        scale = max(1.0, float(np.max(np.abs(g))))
        return float(np.max(np.abs(g - g.conj().T))) / scale


def gram(
    model: TwoBoxModel,
    basis: Basis14 | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> GramMatrix:
    basis = basis or enumerate_basis(model)
    n = len(basis.diagrams)
    g = np.zeros((n, n), dtype=complex)
    for i, di in enumerate(basis.diagrams):
        for j, dj in enumerate(basis.diagrams):
            g[i, j] = inner(model, di, dj, tol)
    return GramMatrix(g)


def expand(
    model: TwoBoxModel,
    pattern: Pattern,
    basis: Basis14,
    gm: GramMatrix,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[np.ndarray, float]:
    """Coefficients c with pattern = sum_j c_j D_j, solved from
    <pattern, D_i> = (G^T c)_i; returns (c, normal-equation residual)."""
    v = np.array(
        [inner(model, pattern, di, tol) for di in basis.diagrams], dtype=complex
    )
    gt = gm.entries.T
    s = np.linalg.svd(gt, compute_uv=False)
    if s[0] == 0 or s[-1] / s[0] < tol.rank_tol:
        c, *_ = np.linalg.lstsq(gt, v, rcond=tol.rank_tol)
    else:
        c = np.linalg.solve(gt, v)
    scale = max(1.0, float(np.linalg.norm(v)))
    residual = float(np.linalg.norm(gt @ c - v)) / scale
    return c, residual


# -- triangle patterns and the reduction table --------------------------


def triangle_pattern(model: TwoBoxModel, labels=None) -> Pattern:
    """Three labeled vertices around a 3-gon, in the frame the reducer
    produces: face corners at dart 0 with face-orbit order u, v, w and
    edges u.1-v.0, v.1-w.0, w.1-u.0.  The orbit runs clockwise around the
    face, so the counterclockwise disk boundary is (u.2, u.3, w.2, w.3,
    v.2, v.3)."""
    t = model.uncappable().coeffs
    labels = labels if labels is not None else [t, t, t]
    verts = tuple((i, Vertex(tuple(labels[i]))) for i in range(3))
    edges = (((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (0, 0)))
    bnd = []
    for i in (0, 2, 1):
        bnd.append(("v", i, 2))
        bnd.append(("v", i, 3))
    return Pattern(verts, edges, tuple(bnd))


@dataclass(frozen=True)
class TriangleTable:
    """Expansions of the two 3-gon chiralities over Basis14."""

    left_coeffs: np.ndarray
    right_coeffs: np.ndarray
    residual_left: float
    residual_right: float
    basis: Basis14
    gram: GramMatrix

    # The skein reducer meets 3-gons in the "left" frame by construction.
    @property
    def reduction_coeffs(self) -> np.ndarray:
        return self.left_coeffs


def solve_triangle(
    model: TwoBoxModel,
    basis: Basis14 | None = None,
    gm: GramMatrix | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> TriangleTable:
    basis = basis or enumerate_basis(model)
    gm = gm or gram(model, basis, tol)
    rank = gm.rank(tol)
    if rank < 14:
        raise GramRankDeficient(f"Gram rank {rank} < 14; 3-box space degenerated")
    left = triangle_pattern(model)
    right = mirror(left)
    cl, rl = expand(model, left, basis, gm, tol)
    cr, rr = expand(model, right, basis, gm, tol)
    return TriangleTable(cl, cr, rl, rr, basis, gm)


# -- braid relation residuals -------------------------------------------


def _braid_pattern(model: TwoBoxModel, braid: BraidPair, side: str, roots=(0, 0, 0)) -> Pattern:
    """One side of the Yang-Baxter equation as a 3-box pattern.

    Side "A" composes the crossings (1-2, 2-3, 1-2) bottom to top, side "B"
    composes (2-3, 1-2, 2-3).  Each crossing is a U-labeled vertex with legs
    (down-left, down-right, up-right, up-left) at darts (0, 1, 2, 3) shifted
    by the per-vertex root offset (mod 2; two clicks act trivially on U).
    """
    u = braid.U

    def label(k):
        lab = u
        if k % 2:
            lab = model.rotate(lab)
        return Vertex(lab.coeffs)

    verts = tuple((i, label(roots[i])) for i in range(3))

    def leg(vid, which):
        # which in {dl, dr, ur, ul} -> dart slot with the root offset
        slot = {"dl": 0, "dr": 1, "ur": 2, "ul": 3}[which]
        return ("v", vid, (slot - roots[vid]) % 4)

    def dart(vid, which):
        att = leg(vid, which)
        return (att[1], att[2])

    bnd: list[Attachment] = [None] * 6
    if side == "A":
        # vertices: 0 = bottom 1-2 crossing, 1 = middle 2-3, 2 = top 1-2
        bnd[0] = leg(0, "dl")
        bnd[1] = leg(0, "dr")
        bnd[2] = leg(1, "dr")
        bnd[3] = leg(1, "ur")
        bnd[4] = leg(2, "ur")
        bnd[5] = leg(2, "ul")
        edges = (
            (dart(0, "ur"), dart(1, "dl")),
            (dart(1, "ul"), dart(2, "dr")),
            (dart(0, "ul"), dart(2, "dl")),
        )
    elif side == "B":
        # vertices: 0 = bottom 2-3 crossing, 1 = middle 1-2, 2 = top 2-3
        bnd[0] = leg(1, "dl")
        bnd[1] = leg(0, "dl")
        bnd[2] = leg(0, "dr")
        bnd[3] = leg(2, "ur")
        bnd[4] = leg(2, "ul")
        bnd[5] = leg(1, "ul")
        edges = (
            (dart(0, "ul"), dart(1, "dr")),
            (dart(1, "ur"), dart(2, "dl")),
            (dart(0, "ur"), dart(2, "dr")),
        )
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return Pattern(verts, edges, tuple(bnd))


def ybe_residual(
    model: TwoBoxModel,
    braid: BraidPair,
    table: TriangleTable,
    tol: Tolerance = DEFAULT_TOL,
    roots_a=(0, 0, 0),
    roots_b=(0, 0, 0),
) -> float:
    """Gram-norm distance between the Basis14 expansions of the two sides
    of the Yang-Baxter equation.

    The per-vertex root offsets shift label and legs together, which is the
    identity on the pattern; they are exposed only so tests can confirm the
    rerooting invariance."""
    pa = _braid_pattern(model, braid, "A", roots_a)
    pb = _braid_pattern(model, braid, "B", roots_b)
    ca, _ = expand(model, pa, table.basis, table.gram, tol)
    cb, _ = expand(model, pb, table.basis, table.gram, tol)
    d = ca - cb
    val = complex(d.conj() @ table.gram.entries @ d)
    norm_a = abs(complex(ca.conj() @ table.gram.entries @ ca))
    scale = max(1.0, norm_a)
    return float(np.sqrt(max(val.real, 0.0)) / np.sqrt(scale))


def reidemeister_residuals(
    model: TwoBoxModel, braid: BraidPair, table: TriangleTable | None = None
) -> tuple[float, float, float]:
    """(r1, r2, quad): twist, inverse, and quadratic relation defects.

    r1 compares both cap-twists of U against (sigma*r, 1/r); r2 is
    ||U V - id||; quad is ||U - V - (q - 1/q)(id - sigma*delta*e)||.
    """
    u, v = braid.U, braid.V
    q, r = braid.q, braid.r
    d = model.delta
    r1 = max(
        abs(model.cap(u, 0) - model.sigma * r),
        abs(model.cap(u, 1) - 1.0 / r),
    )
    r2 = (model.product(u, v) - model.identity()).norm()
    quad_rhs = (q - 1.0 / q) * (model.identity() - (model.sigma * d) * model.e())
    quad = ((u - v) - quad_rhs).norm()
    return float(r1), float(r2), float(quad)
