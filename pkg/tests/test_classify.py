import cmath
import math

import numpy as np
import pytest

from skeinlab import (
    DEPTH3_DELTA,
    admissible_check,
    bmw_two_box_traces,
    classify,
    delta_for_l,
    from_classification_data,
    normalize_bmw_params,
    principal_graph_prefix,
    recover_qr,
    solve_delta,
)
from skeinlab.errors import DegenerateDenominator, NoCanonicalRepresentative


# -- admissibility -------------------------------------------------------


def test_admissible_depth3():
    adm = admissible_check(DEPTH3_DELTA)
    assert adm.case == "Depth3"


def test_admissible_l_series():
    adm = admissible_check(1.0 + math.sqrt(3.0))
    assert adm.case == "Sp4"
    assert adm.l == 12
    adm = admissible_check(delta_for_l(14))
    assert adm.case == "Sp4"
    assert adm.l == 14


def test_admissible_real_continuum():
    for delta in (4.0, 4.5, 7.0):
        adm = admissible_check(delta)
        assert adm.case == "Sp4"
        assert adm.l is None


def test_rejected_values():
    for delta in (2.5, 3.0, 3.9):
        assert admissible_check(delta).case == "Rejected"


def test_delta_for_l_monotone_toward_four():
    vals = [delta_for_l(l) for l in range(12, 201, 2)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(1.0 + math.sqrt(3.0))
    assert vals[-1] < 4.0


# -- trace solving and parameter recovery --------------------------------


def test_solve_delta_matches_trace_split():
    y, a, b = solve_delta(4.0, -1)
    assert (y, a, b) == pytest.approx((2.0, 5.0, 10.0))


def test_recover_qr_brauer():
    q, r = recover_qr(4.0, 5.0, 10.0, sigma=-1)
    assert q == 1.0 and r == 1.0


def test_recover_qr_l12():
    delta = 1.0 + math.sqrt(3.0)
    _, a, b = solve_delta(delta, -1)
    q, r = recover_qr(delta, a, b, sigma=-1)
    q0 = cmath.exp(1j * math.pi / 12.0)
    assert abs(q - q0) < 1e-9
    assert abs(r - q0 ** -5) < 1e-9


def test_recover_qr_depth3():
    _, a, b = solve_delta(DEPTH3_DELTA, +1)
    q, r = recover_qr(DEPTH3_DELTA, a, b, sigma=+1)
    q0 = cmath.exp(2j * math.pi / 7.0)
    assert abs(q - q0) < 1e-9
    assert abs(r - q0 ** 2) < 1e-9


def test_recover_qr_roundtrip_twenty_random():
    rng = np.random.default_rng(21)
    for _ in range(20):
        if rng.random() < 0.5:
            l = 2 * int(rng.integers(6, 101))
            q = cmath.exp(1j * math.pi / l)
        else:
            q = complex(rng.uniform(1.0 + 1e-3, 2.0))
        r = q ** -5
        dp, t1, t2 = bmw_two_box_traces(q, r)
        delta = -dp.real  # sigma = -1 branch
        qq, rr = recover_qr(delta, t1.real, t2.real, sigma=-1)
        assert abs(qq - q) < 1e-9
        assert abs(rr - r) < 1e-9


def test_recover_qr_degenerate_denominator():
    # (delta'-1)^4 = (b-a)^2 forced by hand
    with pytest.raises(DegenerateDenominator):
        recover_qr(2.0, 1.0, 1.0 + 9.0, sigma=-1)


def test_sign_candidate_uniqueness():
    # among the four candidates (c1, c2) in {q, -1/q}^2, exactly one solves
    # the twisted-strand identity delta'*r - 1/r = c1*tr(P1) + c2*tr(P2)
    rng = np.random.default_rng(22)
    for _ in range(20):
        if rng.random() < 0.5:
            l = 2 * int(rng.integers(7, 80))
            q = cmath.exp(1j * math.pi / l)
        else:
            q = complex(rng.uniform(1.05, 1.9))
        r = q ** -5
        dp, t1, t2 = bmw_two_box_traces(q, r)
        lhs = dp * r - 1.0 / r
        winners = [
            (c1, c2)
            for c1 in (q, -1.0 / q)
            for c2 in (q, -1.0 / q)
            if abs(lhs - (c1 * t1 + c2 * t2)) < 1e-6
        ]
        assert winners == [(q, -1.0 / q)]


# -- normalization -------------------------------------------------------


def test_normalize_examples():
    q = cmath.exp(1j * math.pi / 12.0)
    r = q ** -5
    for seed in ((r, q), (-r, -q), (1.0 / r, 1.0 / q), (-1.0 / r, q)):
        rr, qq = normalize_bmw_params(*seed)
        assert abs(qq - q) < 1e-9
        assert abs(rr - 1.0 / r) < 1e-9 or abs(rr - r) < 1e-9
        assert qq.real >= 0 and qq.imag >= 0 and rr.real >= 0


def test_normalize_idempotent():
    rng = np.random.default_rng(23)
    for _ in range(20):
        l = 2 * int(rng.integers(6, 60))
        q = cmath.exp(1j * math.pi / l)
        r = q ** -5
        rr, qq = normalize_bmw_params(r, q)
        rr2, qq2 = normalize_bmw_params(rr, qq)
        assert abs(rr - rr2) < 1e-12 and abs(qq - qq2) < 1e-12


def test_normalize_real_branch():
    q = 1.3
    r = q ** -5.0
    rr, qq = normalize_bmw_params(r, q)
    assert qq.imag == 0.0 and qq.real >= 1.0
    assert rr.real >= 0.0


def test_normalize_no_representative():
    # a generic off-circle complex pair has no orbit point in the region
    with pytest.raises(NoCanonicalRepresentative):
        normalize_bmw_params(0.5 + 0.5j, 1.7 + 0.3j)


# -- principal graph -----------------------------------------------------


@pytest.mark.parametrize(
    "delta,sigma",
    [
        (DEPTH3_DELTA, +1),
        (1.0 + math.sqrt(3.0), -1),
        (delta_for_l(14), -1),
        (4.0, -1),
        (4.5, -1),
    ],
)
def test_principal_graph_prefix_hat_shape(delta, sigma):
    m = from_classification_data(delta, sigma)
    g = principal_graph_prefix(m)
    assert g.supports["P1*P1"] == ("e", "P2")
    assert g.supports["P1*P2"] == ("P1", "P2")
    assert g.supports["P2*P2"] == ("e", "P1", "P2")
    assert g.depth3_neighbors == {"w1": ("P1", "P2"), "w2": ("P2",)}
    assert g.depth2_weights["P1"] == pytest.approx(m.a)
    assert g.depth2_weights["P2"] == pytest.approx(m.b)


# -- end-to-end ----------------------------------------------------------


def test_classify_depth3_passes():
    res = classify(DEPTH3_DELTA)
    assert res.verdict == "PASS"
    assert res.case == "Depth3"
    assert res.sigma == +1
    d = res.delta
    assert res.a == pytest.approx(d / (d - 1.0), abs=1e-9)
    assert res.b == pytest.approx(d, abs=1e-9)
    assert abs(res.q - cmath.exp(2j * math.pi / 7.0)) < 1e-9


def test_classify_l12_passes():
    res = classify(1.0 + math.sqrt(3.0))
    assert res.verdict == "PASS"
    assert res.case == "Sp4"
    assert res.l == 12
    assert res.a == pytest.approx(1.0 + math.sqrt(3.0), abs=1e-9)
    assert res.b == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-9)
    for key, bound in (("ybe", 1e-8), ("r1", 1e-8), ("r2", 1e-8), ("quad", 1e-8)):
        assert res.residuals[key] < bound


def test_classify_brauer_passes():
    res = classify(4.0)
    assert res.verdict == "PASS"
    assert res.q == 1.0 and res.r == 1.0


def test_classify_real_continuum_passes():
    res = classify(4.5)
    assert res.verdict == "PASS"
    assert res.q.imag == 0.0 and res.q.real > 1.0


def test_classify_rejects():
    for delta in (2.5, 3.0):
        res = classify(delta)
        assert res.verdict == "REJECTED"
        assert res.case == "Rejected"
