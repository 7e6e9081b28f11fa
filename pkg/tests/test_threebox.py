import cmath
import math

import numpy as np
import pytest

from skeinlab import (
    BraidPair,
    braid_pair,
    enumerate_basis,
    evaluate,
    from_classification_data,
    gram,
    inner,
    mirror,
    reidemeister_residuals,
    solve_triangle,
    triangle_pattern,
    ybe_residual,
)
from skeinlab.threebox import _braid_pattern, closure, expand
from skeinlab.skein import FormalSum, reduce_once


# -- basis enumeration ---------------------------------------------------


def test_basis_counts(model12):
    basis = enumerate_basis(model12)
    assert len(basis.tl) == 5
    assert len(basis.one_vertex) == 6
    assert len(basis.two_vertex) == 3
    assert len(basis.diagrams) == 14


def test_basis_keys_distinct(model12):
    basis = enumerate_basis(model12)
    keys = {p.key() for p in basis.diagrams}
    assert len(keys) == 14


def test_tl_patterns_have_no_vertices(model12):
    basis = enumerate_basis(model12)
    for p in basis.tl:
        assert len(p.vertices) == 0
    for p in basis.one_vertex:
        assert len(p.vertices) == 1
    for p in basis.two_vertex:
        assert len(p.vertices) == 2


def test_mirror_is_involution(model12):
    basis = enumerate_basis(model12)
    for p in basis.diagrams:
        assert mirror(mirror(p)).key() == p.key()


# -- inner products and the Gram matrix ---------------------------------


def test_identity_pairing_is_delta_cubed(model12):
    basis = enumerate_basis(model12)
    # the through-strand TL pattern pairs with itself to a 3-circle closure
    id3 = next(
        p
        for p in basis.tl
        if p.boundary == (("b", 5), ("b", 4), ("b", 3), ("b", 2), ("b", 1), ("b", 0))
    )
    v = inner(model12, id3, id3)
    assert abs(v - model12.delta ** 3) < 1e-10


def test_gram_hermitian_psd_rank_14(model12, model_depth3, model_brauer):
    for m in (model12, model_depth3, model_brauer):
        gm = gram(m)
        assert gm.hermiticity_defect() < 1e-10
        eig = gm.eigenvalues()
        lam_max = float(np.max(eig))
        assert gm.min_eigenvalue() >= -1e-8 * lam_max
        assert gm.rank() == 14


def test_gram_real_at_real_locus(model12):
    gm = gram(model12)
    assert np.max(np.abs(gm.entries.imag)) < 1e-10


# -- triangle table ------------------------------------------------------


def test_triangle_residuals_small(table12):
    assert table12.residual_left < 1e-10
    assert table12.residual_right < 1e-10


def test_triangle_expansion_consistency(model12, table12):
    # <T-triangle, D_i> must match sum_j c_j <D_j, D_i> for every basis element
    left = triangle_pattern(model12)
    v = np.array(
        [inner(model12, left, di) for di in table12.basis.diagrams], dtype=complex
    )
    w = table12.gram.entries.T @ table12.left_coeffs
    assert np.max(np.abs(v - w)) < 1e-9 * max(1.0, float(np.max(np.abs(v))))


def test_triangle_substitution_matches_direct_evaluation(model12, table12):
    # closing the triangle pattern against each basis element directly must
    # agree with evaluating the same closure through the 3-gon rewrite
    left = triangle_pattern(model12)
    for i, di in enumerate(table12.basis.diagrams):
        direct = inner(model12, left, di)
        via_table = complex(
            (table12.gram.entries.T @ table12.left_coeffs)[i]
        )
        assert abs(direct - via_table) < 1e-9 * max(1.0, abs(direct))


def test_triangle_closure_reduces_via_table(model12, table12):
    # a full skein evaluation of the triangle glued to a basis diagram must
    # go through the table substitution and agree with the inner product
    left = triangle_pattern(model12)
    for di in table12.basis.diagrams:
        d = closure(left, di)
        got = evaluate(d, model12, table12)
        want = inner(model12, left, di)
        assert abs(got - want) < 1e-9 * max(1.0, abs(want))


def test_first_idempotent_triangle_null_when_rooted_at_legs(model12, table12):
    # with each corner label rotated one click (distinguished region on the
    # external leg) the triangle of first idempotents is the zero 3-box
    fp1 = model12.rotate(model12.p1())
    p = triangle_pattern(model12, labels=[fp1.coeffs] * 3)
    v = np.array(
        [inner(model12, p, di) for di in table12.basis.diagrams], dtype=complex
    )
    assert float(np.linalg.norm(v)) < 1e-8


def test_triangle_table_right_is_mirror(model12, table12):
    right = mirror(triangle_pattern(model12))
    v = np.array(
        [inner(model12, right, di) for di in table12.basis.diagrams], dtype=complex
    )
    w = table12.gram.entries.T @ table12.right_coeffs
    assert np.max(np.abs(v - w)) < 1e-9 * max(1.0, float(np.max(np.abs(v))))


# -- Yang-Baxter and Reidemeister ---------------------------------------


def test_ybe_residual_small_at_loci(model12, table12, braid12, model_depth3, braid_depth3):
    assert ybe_residual(model12, braid12, table12) < 1e-8
    table3 = solve_triangle(model_depth3)
    assert ybe_residual(model_depth3, braid_depth3, table3) < 1e-8


def test_ybe_residual_small_at_real_locus():
    m = from_classification_data(4.5, -1)
    # real q solving q^2 + 1/q^2 from the trace data
    from skeinlab import recover_qr

    q, r = recover_qr(4.5, m.a, m.b, sigma=-1)
    bp = braid_pair(m, q, r)
    table = solve_triangle(m)
    assert ybe_residual(m, bp, table) < 1e-8


def test_ybe_rerooting_invariance(model12, table12, braid12):
    rng = np.random.default_rng(13)
    base = ybe_residual(model12, braid12, table12)
    for _ in range(5):
        ra = tuple(int(k) for k in rng.integers(0, 4, size=3))
        rb = tuple(int(k) for k in rng.integers(0, 4, size=3))
        v = ybe_residual(model12, braid12, table12, roots_a=ra, roots_b=rb)
        assert abs(v - base) < 1e-9


def test_ybe_perturbed_q_fails(model12, table12, braid12):
    q = braid12.q * 1.01
    perturbed = BraidPair(
        q=q,
        r=braid12.r,
        z1=braid12.z1,
        z2=braid12.z2,
        U=braid12.U,
        V=braid12.V,
    )
    # rebuild U, V from the perturbed q directly
    m = model12
    from skeinlab.twobox import BoxVec, PLUS

    r = braid12.r
    u = BoxVec(PLUS, (1.0 / r, q, -1.0 / q))
    v = BoxVec(PLUS, (r, 1.0 / q, -q))
    perturbed = BraidPair(q=q, r=r, z1=1.0 / r, z2=-r, U=u, V=v)
    assert ybe_residual(m, perturbed, table12) > 1e-3


def test_reidemeister_residuals_at_loci(model12, braid12, model_depth3, braid_depth3):
    for m, bp in ((model12, braid12), (model_depth3, braid_depth3)):
        r1, r2, quad = reidemeister_residuals(m, bp)
        assert r1 < 1e-8
        assert r2 < 1e-8
        assert quad < 1e-8


def test_reidemeister_negative_control(model12, braid12):
    from skeinlab.twobox import BoxVec, PLUS

    q, r = braid12.q, -braid12.r
    u = BoxVec(PLUS, (1.0 / r, q, -1.0 / q))
    v = BoxVec(PLUS, (r, 1.0 / q, -q))
    bad = BraidPair(q=q, r=r, z1=1.0 / r, z2=-r, U=u, V=v)
    r1, _, _ = reidemeister_residuals(model12, bad)
    assert r1 > 1e-3


def test_braid_pattern_sides_differ_as_patterns(model12, braid12):
    pa = _braid_pattern(model12, braid12, "A")
    pb = _braid_pattern(model12, braid12, "B")
    assert pa.key() != pb.key()


def test_braid_pattern_rejects_bad_side(model12, braid12):
    with pytest.raises(ValueError):
        _braid_pattern(model12, braid12, "C")
