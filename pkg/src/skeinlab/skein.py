"""Closed planar diagrams with 2-box-labeled 4-valent vertices, and their
evaluation by face reduction.

A diagram is a combinatorial map: every vertex carries four darts in
counterclockwise order with dart 0 at the $-position, and the edges are a
fixed-point-free involution on darts.  Faces are the orbits of the face
permutation phi(v, d) = partner(v, d+1); planarity is enforced through the
Euler characteristic of every connected component.

Evaluation repeatedly removes a face with at most three sides:

  * free loop      -> factor delta
  * 1-gon          -> cap functional of the vertex label
  * 2-gon          -> fuse the two vertices into one labeled by the product
                      of suitably rotated labels
  * 3-gon          -> expand labels over {id, e, T} and substitute the
                      supplied triangle table for the pure-generator case

Each rewrite strictly decreases (vertex count, edge count), so evaluation
terminates.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvariantViolation,
    MalformedPairing,
    NonPlanar,
    ShadingInconsistent,
    TriangleTableRequired,
)
from .scalar import DEFAULT_TOL, Scalar, Tolerance
from .twobox import MINUS, PLUS, BoxVec, TwoBoxModel

Dart = tuple[int, int]


@dataclass(frozen=True)
class Vertex:
    """A labeled 4-valent vertex; coeffs are over (e, P1, P2) in the frame
    rooted at dart 0, shading0 is the parity of the region before dart 0."""

    coeffs: tuple[Scalar, Scalar, Scalar]
    shading0: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @property
    def side(self) -> str:
        return PLUS if self.shading0 == 0 else MINUS

    def boxvec(self) -> BoxVec:
        return BoxVec(self.side, self.coeffs)


class Diagram:
    """A closed diagram: labeled vertices, dart pairing, free loops."""

    def __init__(
        self,
        vertices: dict[int, Vertex] | None = None,
        edges: dict[Dart, Dart] | None = None,
        free_loops: int = 0,
    ):
        self.vertices: dict[int, Vertex] = dict(vertices or {})
        self.edges: dict[Dart, Dart] = dict(edges or {})
        self.free_loops = int(free_loops)

    # -- construction helpers -------------------------------------------

    def add_edge(self, a: Dart, b: Dart) -> None:
        if a == b:
            raise MalformedPairing(f"self-paired dart {a}")
        if a in self.edges or b in self.edges:
            raise MalformedPairing(f"dart {a if a in self.edges else b} paired twice")
        self.edges[a] = b
        self.edges[b] = a

    def copy(self) -> "Diagram":
        return Diagram(dict(self.vertices), dict(self.edges), self.free_loops)

    def partner(self, d: Dart) -> Dart:
        return self.edges[d]

    def darts(self):
        for v in self.vertices:
            for slot in range(4):
                yield (v, slot)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges) // 2

    # -- faces and components -------------------------------------------

    def _phi(self, d: Dart) -> Dart:
        v, slot = d
        return self.edges[(v, (slot + 1) % 4)]

    def faces(self) -> list[list[Dart]]:
        """Orbits of the face permutation; each corner (v, d) stands for the
        region counterclockwise after dart d."""
        seen: set[Dart] = set()
        out = []
        for start in self.darts():
            if start in seen:
                continue
            orbit = []
            d = start
            while True:
                orbit.append(d)
                seen.add(d)
                d = self._phi(d)
                if d == start:
                    break
                if d in seen:
                    raise MalformedPairing("face permutation is not a permutation")
            out.append(orbit)
        return out

    def components(self) -> list[set[int]]:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, _), (b, _) in self.edges.items():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups = defaultdict(set)
        for v in self.vertices:
            groups[find(v)].add(v)
        return list(groups.values())

    # -- validation ------------------------------------------------------

    @staticmethod
    def corner_parity(vertex: Vertex, slot: int) -> int:
        # Region after dart `slot`; regions alternate, the one before dart 0
        # (i.e. after dart 3) carries shading0.
        return (vertex.shading0 + slot + 1) % 2

    def validate(self, check_shading: bool = True) -> None:
        all_darts = set(self.darts())
        for a, b in self.edges.items():
            if a not in all_darts or b not in all_darts:
                raise MalformedPairing(f"edge endpoint {a if a not in all_darts else b} unknown")
            if a == b:
                raise MalformedPairing(f"self-paired dart {a}")
            if self.edges.get(b) != a:
                raise MalformedPairing("pairing is not an involution")
        missing = [d for d in all_darts if d not in self.edges]
        if missing:
            raise MalformedPairing(f"unpaired darts {sorted(missing)[:4]}")
        if self.free_loops < 0:
            raise MalformedPairing("negative free loop count")

        faces = self.faces()
        face_of: dict[Dart, int] = {}
        for i, f in enumerate(faces):
            for d in f:
                face_of[d] = i
        for comp in self.components():
            v = len(comp)
            e = sum(1 for (a, _), (b, _) in self.edges.items() if a in comp) // 2
            f = len({face_of[d] for d in face_of if d[0] in comp})
            if v - e + f != 2:
                raise NonPlanar(f"component {sorted(comp)}: V-E+F = {v - e + f} != 2")

        if check_shading:
            for face in faces:
                parities = {self.corner_parity(self.vertices[v], s) for v, s in face}
                if len(parities) > 1:
                    raise ShadingInconsistent(f"face {face} mixes shading parities")

    def infer_shading(self) -> "Diagram":
        """Reassign shading bits by propagation (root of each component keeps
        parity 0 at its $-region).  Always succeeds for valid closed maps."""
        d = self.copy()
        assigned: dict[int, int] = {}
        for comp in d.components():
            root = min(comp)
            assigned[root] = d.vertices[root].shading0
            stack = [root]
            seen = {root}
            while stack:
                v = stack.pop()
                for slot in range(4):
                    # Corner (v, slot) and corner alpha(v, slot+1) lie on the
                    # same face, hence share a shading parity.
                    w, wslot = d.edges[(v, (slot + 1) % 4)]
                    if w in seen:
                        continue
                    assigned[w] = (assigned[v] + slot - wslot) % 2
                    seen.add(w)
                    stack.append(w)
        d.vertices = {
            v: Vertex(vert.coeffs, assigned.get(v, vert.shading0))
            for v, vert in d.vertices.items()
        }
        return d

    # -- canonical form --------------------------------------------------

    def canonical_key(self, ndigits: int = 9):
        """Lexicographically minimal encoding over all BFS starting vertices;
        invariant under vertex renumbering."""

        def label_key(vert: Vertex):
            return tuple(
                (round(c.real, ndigits) + 0.0, round(c.imag, ndigits) + 0.0)
                for c in vert.coeffs
            ) + (vert.shading0,)

        if not self.vertices:
            return ("empty", self.free_loops)

        best = None
        for start in self.vertices:
            order = {start: 0}
            queue = [start]
            while queue:
                v = queue.pop(0)
                for slot in range(4):
                    w, _ = self.edges[(v, slot)]
                    if w not in order:
                        order[w] = len(order)
                        queue.append(w)
            if len(order) < len(self.vertices):
                # Disconnected: canonicalize per component and combine.
                return self._canonical_key_disconnected(ndigits)
            enc = []
            inv = sorted(order, key=order.get)
            for v in inv:
                vert = self.vertices[v]
                enc.append(label_key(vert))
                for slot in range(4):
                    w, wslot = self.edges[(v, slot)]
                    enc.append((order[w], wslot))
            key = tuple(enc)
            if best is None or key < best:
                best = key
        return ("diagram", self.free_loops, best)

    def _canonical_key_disconnected(self, ndigits: int):
        parts = []
        for comp in self.components():
            sub = Diagram(
                {v: self.vertices[v] for v in comp},
                {a: b for a, b in self.edges.items() if a[0] in comp},
                0,
            )
            parts.append(sub.canonical_key(ndigits))
        return ("multi", self.free_loops, tuple(sorted(map(repr, parts))))


# -- rewiring surgery ----------------------------------------------------


def _surgery(
    diagram: Diagram,
    removed: set[int],
    inner: list[tuple[Dart, Dart]],
    new_vertices: dict[int, Vertex] | None = None,
    new_edges: list[tuple[Dart, Dart]] | None = None,
) -> tuple[Diagram, int]:
    """Remove vertices, wiring their darts through `inner` arcs and the leg
    connections in `new_edges`; returns the new diagram and the number of
    closed loops formed.

    Removed-vertex darts without any inner/leg connection must be paired
    among themselves (they vanish with the vertices, e.g. the edges of a
    fused bigon)."""
    new_vertices = new_vertices or {}
    new_edges = new_edges or []

    connections: list[tuple[Dart, Dart]] = []
    linked: set[Dart] = set()
    for a, b in itertools.chain(inner, new_edges):
        connections.append((a, b))
        for d in (a, b):
            if d[0] in removed:
                linked.add(d)

    def is_connector(d: Dart) -> bool:
        return d[0] in removed

    seen_pairs = set()
    for a, b in diagram.edges.items():
        if (b, a) in seen_pairs:
            continue
        seen_pairs.add((a, b))
        a_rm, b_rm = is_connector(a), is_connector(b)
        if not a_rm and not b_rm:
            continue
        dead_a = a_rm and a not in linked
        dead_b = b_rm and b not in linked
        if dead_a or dead_b:
            if not (dead_a and dead_b):
                raise InvariantViolation("half-dead edge in surgery")
            continue
        connections.append((a, b))

    adj: dict[Dart, list[tuple[int, Dart]]] = defaultdict(list)
    for cid, (a, b) in enumerate(connections):
        adj[a].append((cid, b))
        adj[b].append((cid, a))

    for d, links in adj.items():
        want = 2 if is_connector(d) else 1
        if len(links) != want:
            raise InvariantViolation(f"dart {d} has {len(links)} links, wants {want}")

    used: set[int] = set()
    paired: list[tuple[Dart, Dart]] = []
    for d in list(adj):
        if is_connector(d) or any(cid in used for cid, _ in adj[d]):
            continue
        cid, cur = adj[d][0]
        used.add(cid)
        while is_connector(cur):
            nxt = [(c, o) for c, o in adj[cur] if c not in used]
            if not nxt:
                raise InvariantViolation("dangling connector walk")
            cid, cur = nxt[0]
            used.add(cid)
        paired.append((d, cur))

    loops = 0
    for cid0, (a0, _) in enumerate(connections):
        if cid0 in used:
            continue
        # connector-only cycle
        used.add(cid0)
        cid, cur = cid0, connections[cid0][1]
        while True:
            nxt = [(c, o) for c, o in adj[cur] if c not in used]
            if not nxt:
                break
            cid, cur = nxt[0]
            used.add(cid)
        loops += 1

    result = Diagram(
        {v: vert for v, vert in diagram.vertices.items() if v not in removed},
        {},
        diagram.free_loops + loops,
    )
    result.vertices.update(new_vertices)
    for a, b in diagram.edges.items():
        if not is_connector(a) and not is_connector(b) and a < b:
            result.add_edge(a, b)
    for a, b in paired:
        result.add_edge(a, b)
    return result, loops


# -- formal sums ---------------------------------------------------------


@dataclass
class FormalSum:
    """Scalar-weighted multiset of diagrams, deduplicated by canonical form."""

    terms: list[tuple[Scalar, Diagram]] = field(default_factory=list)

    def normalized(self, tol: Tolerance = DEFAULT_TOL) -> "FormalSum":
        buckets: dict[object, tuple[Scalar, Diagram]] = {}
        for coeff, diag in self.terms:
            key = diag.canonical_key()
            if key in buckets:
                prev, d0 = buckets[key]
                buckets[key] = (prev + coeff, d0)
            else:
                buckets[key] = (complex(coeff), diag)
        scale = max([abs(c) for c, _ in buckets.values()], default=1.0)
        kept = [
            (c, d) for c, d in buckets.values() if abs(c) > tol.eq_tol * 1e-3 * max(1.0, scale)
        ]
        return FormalSum(kept)

    @property
    def is_scalar(self) -> bool:
        return all(d.n_vertices == 0 and d.free_loops == 0 for _, d in self.terms)

    def scalar_value(self) -> Scalar:
        if not self.is_scalar:
            raise InvariantViolation("formal sum not fully reduced")
        return sum((c for c, _ in self.terms), complex(0.0))


# -- label frame changes ------------------------------------------------


def _reroot_coeffs(model: TwoBoxModel, coeffs, k: int) -> tuple:
    """Coefficients of the same box re-rooted so old dart k is the new dart 0."""
    vec = np.array([complex(c) for c in coeffs])
    if k % 2:
        vec = model.rotation @ vec
    return tuple(vec)


def _cap_scalar(model: TwoBoxModel, vert: Vertex, pair: int) -> Scalar:
    """Scalar left by capping the vertex on darts (pair, pair+1)."""
    x = BoxVec(PLUS, vert.coeffs)
    return model.cap(x, pair % 4)


def _id_e_t_decomposition(model: TwoBoxModel, coeffs) -> tuple[Scalar, Scalar, Scalar]:
    m = np.array(
        [[1.0, 1.0, 0.0], [1.0, 0.0, model.b], [1.0, 0.0, -model.a]], dtype=complex
    )
    sol = np.linalg.solve(m, np.array([complex(c) for c in coeffs]))
    return tuple(sol)


# -- face rewrites -------------------------------------------------------


def _apply_1gon(model: TwoBoxModel, coeff: Scalar, diag: Diagram, corner: Dart):
    u, d = corner
    vert = diag.vertices[u]
    s = _cap_scalar(model, vert, d)
    arcs = [((u, (d + 2) % 4), (u, (d + 3) % 4))]
    out, _ = _surgery(diag, {u}, arcs)
    return [(coeff * s, out)]


def _apply_2gon(model: TwoBoxModel, coeff: Scalar, diag: Diagram, face: list[Dart]):
    (u, d), (v, dp) = face
    if u == v:
        # A self-bigon forces the self-loop (d+1, d+2), i.e. a coexisting
        # 1-gon; reduce that one instead.
        return _apply_1gon(model, coeff, diag, (u, (d + 1) % 4))
    xu = diag.vertices[u]
    xv = diag.vertices[v]
    x = BoxVec(
        PLUS if (xu.shading0 + d + 3) % 2 == 0 else MINUS,
        _reroot_coeffs(model, xu.coeffs, d + 3),
    )
    y = BoxVec(
        PLUS if (xv.shading0 + dp + 1) % 2 == 0 else MINUS,
        _reroot_coeffs(model, xv.coeffs, dp + 1),
    )
    z = model.product(x, y)
    nid = max(itertools.chain(diag.vertices, [0])) + 1
    w = Vertex(z.coeffs, 0 if z.side == PLUS else 1)
    legs = [
        ((u, (d + 3) % 4), (nid, 0)),
        ((v, (dp + 2) % 4), (nid, 1)),
        ((v, (dp + 3) % 4), (nid, 2)),
        ((u, (d + 2) % 4), (nid, 3)),
    ]
    out, _ = _surgery(diag, {u, v}, [], {nid: w}, legs)
    return [(coeff, out)]


ID_ARCS = ((0, 1), (2, 3))
E_ARCS = ((3, 0), (1, 2))


def _apply_3gon(
    model: TwoBoxModel,
    coeff: Scalar,
    diag: Diagram,
    face: list[Dart],
    triangle,
    tol: Tolerance,
):
    if triangle is None:
        raise TriangleTableRequired("met a 3-gon face with no triangle table")
    corners = list(face)
    if len({u for u, _ in corners}) != 3:
        # A 3-gon revisiting a vertex comes from a self-loop; it always
        # coexists with a smaller reducible face, so rewrite that instead.
        alt = find_small_face(diag)
        if len(alt) == 1:
            return _apply_1gon(model, coeff, diag, alt[0])
        if len(alt) == 2:
            return _apply_2gon(model, coeff, diag, alt)
        raise InvariantViolation("degenerate 3-gon with no smaller face")

    decomp = []
    for u, d in corners:
        rerooted = _reroot_coeffs(model, diag.vertices[u].coeffs, d)
        decomp.append(_id_e_t_decomposition(model, rerooted))

    out_terms = []
    for choice in itertools.product(range(3), repeat=3):  # 0=id, 1=e, 2=T
        w = coeff
        for (alpha, beta, gamma), c in zip(decomp, choice):
            w *= (alpha, beta, gamma)[c]
        if abs(w) < 1e-14 * max(1.0, abs(coeff)):
            continue

        if all(c == 2 for c in choice):
            out_terms.extend(_substitute_triangle(model, w, diag, corners, triangle))
            continue

        removed = set()
        inner = []
        relabel = {}
        for (u, d), c in zip(corners, choice):
            if c == 0:
                removed.add(u)
                inner.extend(
                    (((u, (a + d) % 4), (u, (b + d) % 4))) for a, b in ID_ARCS
                )
            elif c == 1:
                removed.add(u)
                w /= model.delta
                inner.extend(
                    (((u, (a + d) % 4), (u, (b + d) % 4))) for a, b in E_ARCS
                )
            else:
                t_coeffs = _reroot_coeffs(model, (0.0, model.b, -model.a), d)
                relabel[u] = Vertex(t_coeffs, diag.vertices[u].shading0)
        work = diag.copy()
        work.vertices.update(relabel)
        reduced, loops = _surgery(work, removed, inner)
        w *= model.delta ** 0  # loops already recorded on the diagram
        out_terms.append((w, reduced))
    return out_terms


def _substitute_triangle(model, coeff, diag, corners, triangle):
    """Replace an all-generator 3-gon by the triangle table expansion."""
    # The face orbit lists corners clockwise around the 3-gon, so the
    # counterclockwise hole boundary visits them in reversed vertex order
    # (first corner, then the third, then the second).
    ext = []
    for u, d in (corners[0], corners[2], corners[1]):
        ext.append((u, (d + 2) % 4))
        ext.append((u, (d + 3) % 4))
    removed = {u for u, _ in corners}
    nid0 = max(itertools.chain(diag.vertices, [0])) + 1

    out = []
    for c_i, pattern in zip(triangle.reduction_coeffs, triangle.basis.diagrams):
        if abs(c_i) < 1e-13 * max(1.0, float(np.max(np.abs(triangle.reduction_coeffs)))):
            continue
        new_vertices = {}
        new_edges = []
        vid_map = {}
        for pv, vert in dict(pattern.vertices).items():
            vid_map[pv] = nid0 + pv
            new_vertices[nid0 + pv] = vert
        for (pa, sa), (pb, sb) in pattern.internal_edges:
            new_edges.append(((vid_map[pa], sa), (vid_map[pb], sb)))
        arcs_done = set()
        for i, att in enumerate(pattern.boundary):
            if att[0] == "v":
                _, pv, slot = att
                new_edges.append((ext[i], (vid_map[pv], slot)))
            else:
                j = att[1]
                if (min(i, j), max(i, j)) in arcs_done:
                    continue
                arcs_done.add((min(i, j), max(i, j)))
                new_edges.append((ext[i], ext[j]))
        reduced, _ = _surgery(diag, removed, [], new_vertices, new_edges)
        # Pattern vertices arrive with placeholder shading bits.
        out.append((coeff * c_i, reduced.infer_shading()))
    return out


# -- public operations ---------------------------------------------------


def validate(d: Diagram) -> None:
    d.validate(check_shading=True)


def small_faces(d: Diagram, max_size: int = 3) -> list[list[Dart]]:
    faces = [f for f in d.faces() if len(f) <= max_size]
    faces.sort(key=lambda f: (len(f), min(f)))
    return faces


def find_small_face(d: Diagram) -> list[Dart]:
    """A face with at most 3 sides (preference 1 < 2 < 3, ties by vertex id)."""
    if d.n_vertices == 0:
        raise InvariantViolation("diagram has no vertices")
    faces = small_faces(d)
    if not faces:
        raise InvariantViolation("valid planar 4-valent diagram lost its small faces")
    return faces[0]


def reduce_once(
    s: FormalSum,
    model: TwoBoxModel,
    triangle=None,
    tol: Tolerance = DEFAULT_TOL,
    chooser=None,
) -> FormalSum:
    """One rewrite on every term that still has vertices or loops."""
    out = []
    for coeff, diag in s.terms:
        if diag.free_loops:
            coeff = coeff * model.delta ** diag.free_loops
            diag = Diagram(dict(diag.vertices), dict(diag.edges), 0)
        if diag.n_vertices == 0:
            out.append((coeff, diag))
            continue
        face = chooser(diag) if chooser is not None else find_small_face(diag)
        if len(face) == 1:
            out.extend(_apply_1gon(model, coeff, diag, face[0]))
        elif len(face) == 2:
            out.extend(_apply_2gon(model, coeff, diag, face))
        elif len(face) == 3:
            out.extend(_apply_3gon(model, coeff, diag, face, triangle, tol))
        else:
            raise InvariantViolation(f"face of size {len(face)} is not reducible")
    return FormalSum(out).normalized(tol)


def evaluate_detailed(
    d: Diagram,
    model: TwoBoxModel,
    triangle=None,
    tol: Tolerance = DEFAULT_TOL,
    chooser=None,
) -> tuple[Scalar, int]:
    """Evaluate a closed diagram to a scalar; also return the rewrite count."""
    d.validate(check_shading=True)
    s = FormalSum([(complex(1.0), d)])
    steps = 0
    guard = 0
    while not s.is_scalar:
        s = reduce_once(s, model, triangle, tol, chooser)
        steps += 1
        guard += 1
        if guard > 10000:
            raise InvariantViolation("evaluation failed to terminate")
    return s.scalar_value(), steps


def evaluate(
    d: Diagram,
    model: TwoBoxModel,
    triangle=None,
    tol: Tolerance = DEFAULT_TOL,
    chooser=None,
) -> Scalar:
    return evaluate_detailed(d, model, triangle, tol, chooser)[0]
