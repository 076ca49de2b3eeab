from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from corpus import family_models, fixed_models
from npcert.cohomology import cohomology_cover
from npcert.covers import CyclicCover
from npcert.lattice import Hirzebruch, ProjectivePlane, intersect
from npcert.positivity import (
    Inapplicable,
    SlopeBound,
    VanishingFrom,
    Verdict,
    adjoint_vanishing_2k,
    adjoint_vanishing_k,
    best_slope,
    canonical_slope_check,
    h1_vanishing_from,
    is_ample,
    is_big,
    is_bpf,
    is_nef,
    is_nef_pullback,
    k_plus_b_bpf,
)

F1 = Hirzebruch(1)
P2 = ProjectivePlane()


def f1_cover(m):
    return CyclicCover(F1, 2, F1.cls(3, m + 3))


def test_nef_examples():
    assert is_nef(F1, F1.cls(0, 1))
    assert not is_nef(F1, F1.cls(1, 0))
    assert is_nef(F1, F1.cls(1, 1))
    assert not is_ample(F1, F1.cls(1, 1))
    assert is_bpf(F1, F1.cls(1, 1))
    assert is_ample(F1, F1.cls(1, 2))
    zero = P2.cls(0)
    assert is_nef(P2, zero) and is_bpf(P2, zero) and not is_big(P2, zero)


def test_family_nef_witnesses():
    X = f1_cover(5)
    B, K = X.pullback(F1.cls(1, 4)), X.K
    assert (3 * B - 2 * K).base_class.coords == (1, 2)
    assert is_nef_pullback(3 * B - 2 * K)
    assert (2 * B - 2 * K).base_class.coords == (0, -2)
    assert not is_nef_pullback(2 * B - 2 * K)
    assert is_nef_pullback(X.O)


@pytest.mark.parametrize("e", range(4))
def test_nef_cone_exhaustive(e):
    S = Hirzebruch(e)
    for a in range(-20, 21):
        for b in range(-20, 21):
            D = S.cls(a, b)
            expected = intersect(S, D, S.C0) >= 0 and intersect(S, D, S.f) >= 0
            assert is_nef(S, D) == expected
            if is_ample(S, D):
                assert is_nef(S, D) and is_big(S, D)
            if is_bpf(S, D):
                assert is_nef(S, D)


def test_slope_bound_reduces_and_validates():
    s = SlopeBound(2, 4)
    assert (s.a, s.b) == (1, 2)
    assert s.value == Fraction(1, 2) and s.inverse == 2
    for a, b in [(0, 1), (2, 2), (3, 2), (-1, 2)]:
        with pytest.raises(ValueError):
            SlopeBound(a, b)


def test_best_slope():
    assert best_slope(2, 4) == SlopeBound(1, 2)
    assert best_slope(14, 16) == SlopeBound(7, 8)
    assert best_slope(6, 6, cap=10) == SlopeBound(9, 10)
    with pytest.raises(ValueError):
        best_slope(2, 0)


def test_k_plus_b_bpf():
    X = f1_cover(5)
    assert k_plus_b_bpf(X, X.pullback(F1.cls(1, 4))) == Verdict(True, "Reider")
    Y = CyclicCover(P2, 2, P2.cls(5))
    assert k_plus_b_bpf(Y, Y.pullback(P2.H)) == Verdict(True, "base-class check")
    Z = CyclicCover(P2, 2, P2.cls(1))
    with pytest.raises(ValueError):
        k_plus_b_bpf(Z, Z.O)


def test_h1_vanishing_from_examples():
    Y = CyclicCover(P2, 3, P2.cls(3))
    B = Y.pullback(P2.H)
    rule = h1_vanishing_from(4, SlopeBound(1, 3), Y, B)
    assert isinstance(rule, VanishingFrom)
    assert all(rule(l) for l in range(1, 20))
    assert rule.provenance(10) == "propagated from 4B"
    assert isinstance(h1_vanishing_from(3, SlopeBound(1, 3), Y, B), Inapplicable)
    assert not h1_vanishing_from(3, SlopeBound(1, 3), Y, B)
    X = f1_cover(5)
    B = X.pullback(F1.cls(1, 4))
    rule = h1_vanishing_from(3, SlopeBound(7, 8), X, B)
    assert isinstance(rule, VanishingFrom)
    assert all(cohomology_cover(l * B).h1 == 0 for l in range(3, 14))


def test_h1_vanishing_from_rejects_bad_slope():
    Y = CyclicCover(P2, 2, P2.cls(5))
    B = Y.pullback(P2.H)
    assert isinstance(h1_vanishing_from(5, SlopeBound(2, 3), Y, B), Inapplicable)


def test_canonical_slope_check_examples():
    Y = CyclicCover(P2, 2, P2.cls(5))
    assert canonical_slope_check(SlopeBound(1, 2), Y, Y.pullback(P2.H)) is True
    X = CyclicCover(F1, 2, F1.cls(4, 7))
    assert canonical_slope_check(SlopeBound(1, 2), X, X.pullback(F1.cls(1, 2))) is True
    assert isinstance(canonical_slope_check(SlopeBound(2, 3), Y, Y.pullback(P2.H)), Inapplicable)


def test_adjoint_vanishing_examples():
    assert adjoint_vanishing_2k(2, 4, 0) is True
    assert adjoint_vanishing_2k(2, 3, 0) is False
    assert adjoint_vanishing_k(2, 5, 1) is True
    assert isinstance(adjoint_vanishing_2k(1, 9, 0), Inapplicable)
    assert isinstance(adjoint_vanishing_k(2, 9, -2), Inapplicable)
    X = f1_cover(5)
    B = X.pullback(F1.cls(1, 4))
    # 2B - K is nef here, so the nB-K predicate runs
    assert adjoint_vanishing_k(2, 5, 1, B) is True
    Y = CyclicCover(P2, 3, P2.cls(3))
    # 2B - 2K = -4H is not nef: the predicate must refuse, not answer False
    assert isinstance(adjoint_vanishing_2k(1 + 1, 10, 0, Y.pullback(P2.H)), Inapplicable)


def _check_vanishing(ctx):
    bad = []
    for n in range(2, 6):
        for l in range(0, 5):
            for m in range(0, 21):
                for pred in (adjoint_vanishing_2k, adjoint_vanishing_k):
                    if pred(n, m, l, ctx.B) is True:
                        h = cohomology_cover(m * ctx.B - l * ctx.K)
                        if h.h1 or h.h2:
                            bad.append((pred.__name__, n, m, l))
    return bad


@pytest.mark.parametrize("index", range(6))
def test_adjoint_vanishing_sound_on_fixed_models(index):
    assert _check_vanishing(fixed_models()[index]) == []


def test_adjoint_vanishing_sound_on_small_families():
    for ctx in family_models(b_max=8):
        assert _check_vanishing(ctx) == []


def test_nef_forces_slope_inequalities():
    for ctx in family_models(b_max=12) + fixed_models():
        for n in range(1, 12):
            if is_nef_pullback(n * ctx.B - ctx.K):
                assert n * ctx.B2 >= ctx.BK
            if is_nef_pullback((n + 1) * ctx.B - 2 * ctx.K):
                assert (n + 1) * ctx.B2 >= 2 * ctx.BK


@given(st.integers(1, 60), st.integers(1, 200))
def test_best_slope_is_valid(B2, BK):
    s = best_slope(B2, BK)
    assert 0 < s.value < 1
    if B2 < BK:
        assert s.value == Fraction(B2, BK)
    assert s.holds_for(B2, BK)


@given(st.integers(0, 3), st.integers(-20, 20), st.integers(-20, 20))
def test_implications(e, a, b):
    S = Hirzebruch(e)
    D = S.cls(a, b)
    if is_ample(S, D):
        assert is_nef(S, D) and is_big(S, D)
    if is_bpf(S, D):
        assert is_nef(S, D)


def test_inapplicable_is_falsy_but_distinct():
    x = Inapplicable("why")
    assert not x
    assert x is not False and x != False  # noqa: E712
