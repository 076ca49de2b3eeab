"""Example families of double (and higher) covers of F_1 and of the plane.

Each constructor builds the model, then checks every defining claim by direct
computation with the cohomology and positivity modules.  For the two
inequality families, membership is decided by the strict inequality system
and verification is independent; a member that fails verification raises
``FamilyInconsistency`` rather than being dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Tuple

from .cohomology import cohomology_cover
from .covers import CyclicCover, pushforward_summands
from .engine import Certificate, SurfaceContext, certify, render
from .lattice import Hirzebruch, ProjectivePlane
from .positivity import is_ample_pullback, is_bpf_pullback, is_nef_pullback

FAMILY_IDS = ("ex5_1", "ex5_2", "ex5_3", "ex5_4", "ex5_5", "ex5_7")

F1 = Hirzebruch(1)
P2 = ProjectivePlane()


class FamilyInconsistency(RuntimeError):
    """The inequality system and direct computation disagree."""


@dataclass(frozen=True)
class Claim:
    claim: str
    verdict: bool
    witness: Tuple[Tuple[str, object], ...] = ()

    def to_dict(self) -> dict:
        return {"claim": self.claim, "verdict": self.verdict, "witness": {k: render(v) for k, v in self.witness}}


@dataclass
class FamilySolution:
    family_id: str
    params: Dict[str, int]
    context: SurfaceContext
    verification: List[Claim] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(c.verdict for c in self.verification)

    def failures(self) -> List[str]:
        return [c.claim for c in self.verification if not c.verdict]

    def to_dict(self) -> dict:
        return {
            "family_id": self.family_id,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "invariants": {k: render(v) if v is not None else None for k, v in self.context.summary().items()},
            "verification": [c.to_dict() for c in self.verification],
        }


def _claim(text, verdict, **witness) -> Claim:
    return Claim(text, bool(verdict), tuple(sorted(witness.items())))


def _h1(cls) -> int:
    return cohomology_cover(cls).h1


def _common_claims(ctx: SurfaceContext) -> List[Claim]:
    B, K = ctx.B, ctx.K
    return [
        _claim("X is minimal (K nef)", ctx.minimal_certified, K=K.base_class.coords),
        _claim("X is of general type (K nef, K^2 > 0)", ctx.general_type_certified, K2=ctx.K2),
        _claim("B is ample", is_ample_pullback(B), B=B.base_class.coords),
        _claim("B is base point free", is_bpf_pullback(B), B=B.base_class.coords),
        _claim("K+B is base point free", ctx.k_plus_b.holds, provenance=ctx.k_plus_b.provenance, B2=ctx.B2),
    ]


# -- F_1 double covers with K = phi^*(C0 + mf) -------------------------------


def hirzebruch_model(b: int, m: int, degree: int = 2, n_max: int = 64) -> SurfaceContext:
    """Cover of F_1 branched in |d(3C0 + (m+3)f)| with B = phi^*(C0 + bf)."""
    cover = CyclicCover(F1, degree, F1.cls(3, m + 3))
    return SurfaceContext(cover, cover.pullback(F1.cls(1, b)), n_max=n_max)


def ex5_3_inequalities(n: int, b: int, m: int) -> bool:
    # m < (n+1)b - n + 1,  (n+1)b - 2m > n - 1,  nb - 2m < n - 2
    return m < (n + 1) * b - n + 1 and (n + 1) * b - 2 * m > n - 1 and n * b - 2 * m < n - 2


def ex5_4_inequalities(n: int, b: int, m: int) -> bool:
    # m < (n+1)b - n + 1,  m < nb - n + 1,  m > (n-1)b - n + 2
    return m < (n + 1) * b - n + 1 and m < n * b - n + 1 and m > (n - 1) * b - n + 2


def verify_ex5_3(ctx: SurfaceContext, n: int) -> List[Claim]:
    B, K = ctx.B, ctx.K
    upper = (n + 1) * B - 2 * K
    lower = n * B - 2 * K
    s, t = upper.base_class.coords
    claims = _common_claims(ctx) + [
        _claim("X is regular (q = 0)", ctx.q == 0, q=ctx.q),
        _claim("p_g >= 3", ctx.pg >= 3, pg=ctx.pg),
        _claim("B^2 >= 5", ctx.B2 >= 5, B2=ctx.B2),
        _claim(f"h1({n + 1}B) = 0", _h1((n + 1) * B) == 0, h1=_h1((n + 1) * B)),
        _claim(f"{n + 1}B-2K is nef", is_nef_pullback(upper), cls=upper.base_class.coords),
        _claim(f"{n}B-2K is not nef", not is_nef_pullback(lower), cls=lower.base_class.coords),
    ]
    # informational: the strict sufficient test t > s used to define the family
    claims.append(_claim(f"{n + 1}B-2K satisfies the strict test t > s", t > s, s=s, t=t))
    return claims


def verify_ex5_4(ctx: SurfaceContext, n: int) -> List[Claim]:
    B, K = ctx.B, ctx.K
    upper = n * B - K
    lower = (n - 1) * B - K
    return _common_claims(ctx) + [
        _claim(f"h1({n + 1}B) = 0", _h1((n + 1) * B) == 0, h1=_h1((n + 1) * B)),
        _claim(f"{n}B-K is nef", is_nef_pullback(upper), cls=upper.base_class.coords),
        _claim(f"{n - 1}B-K is not nef", not is_nef_pullback(lower), cls=lower.base_class.coords),
    ]


def _m_upper(n: int, b: int) -> int:
    # both families need m < (n+1)b - n + 1
    return (n + 1) * b - n


def _enumerate(family_id, inequalities, verifier, n, b_max, n_max) -> List[FamilySolution]:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if b_max < 2:
        raise ValueError(f"b_max must be at least 2, got {b_max}")
    out = []
    for b in range(2, b_max + 1):
        for m in range(1, _m_upper(n, b) + 1):
            if not inequalities(n, b, m):
                continue
            ctx = hirzebruch_model(b, m, n_max=n_max)
            sol = FamilySolution(family_id, {"n": n, "b": b, "m": m}, ctx, verifier(ctx, n))
            if not sol.verified:
                raise FamilyInconsistency(
                    f"{family_id} (n={n}, b={b}, m={m}) satisfies the inequalities but fails: {sol.failures()}"
                )
            out.append(sol)
    return out


def enumerate_ex5_3(n: int, b_max: int, n_max: int = 64) -> List[FamilySolution]:
    """All (b, m) with 2 <= b <= b_max, m >= 1 in the (n+1)B-2K nef / nB-2K not nef family."""
    return _enumerate("ex5_3", ex5_3_inequalities, verify_ex5_3, n, b_max, n_max)


def enumerate_ex5_4(n: int, b_max: int, n_max: int = 64) -> List[FamilySolution]:
    """All (b, m) with 2 <= b <= b_max, m >= 1 in the nB-K nef / (n-1)B-K not nef family."""
    return _enumerate("ex5_4", ex5_4_inequalities, verify_ex5_4, n, b_max, n_max)


def enumerate_ex5_5(
    degree: int, n: int, b_max: int, m_max: int, shape: str = "ex5_3", n_max: int = 64
) -> List[FamilySolution]:
    """Degree-d covers of F_1 branched in |d(3C0 + (m+3)f)|.

    No inequality system is available once d > 2 (K becomes
    phi^*(K_S + (d-1)L)), so membership is decided by direct verification of
    the chosen family's claims.
    """
    if degree < 2:
        raise ValueError(f"cover degree must be at least 2, got {degree}")
    verifier = {"ex5_3": verify_ex5_3, "ex5_4": verify_ex5_4}[shape]
    out = []
    for b in range(2, b_max + 1):
        for m in range(1, m_max + 1):
            ctx = hirzebruch_model(b, m, degree=degree, n_max=n_max)
            claims = verifier(ctx, n)
            if all(c.verdict for c in claims):
                out.append(FamilySolution("ex5_5", {"d": degree, "n": n, "b": b, "m": m}, ctx, claims))
    return out


def polytope_agreement(n: int, b_max: int, m_max: int) -> dict:
    """Compare the strict ex5_3 system with geometry on a (b, m) box.

    ``strict`` uses the sufficient nef test t > s for (n+1)B-2K = phi^*(sC0+tf)
    and must coincide with the system exactly.  ``exact`` uses the cone test
    with the boundary included; its disagreements with the system are
    reported and must all sit on a boundary line.  h1((n+1)B) is computed
    directly in both.
    """
    members, strict, exact, off_boundary = set(), set(), set(), []
    for b in range(2, b_max + 1):
        for m in range(1, m_max + 1):
            cover = CyclicCover(F1, 2, F1.cls(3, m + 3))
            B, K = cover.pullback(F1.cls(1, b)), cover.K
            upper = ((n + 1) * B - 2 * K).base_class.coords
            below = not is_nef_pullback(n * B - 2 * K)
            vanishing = cohomology_cover((n + 1) * B).h1 == 0
            if ex5_3_inequalities(n, b, m):
                members.add((b, m))
            if upper[1] > upper[0] >= 0 and below and vanishing:
                strict.add((b, m))
            if is_nef_pullback((n + 1) * B - 2 * K) and below and vanishing:
                exact.add((b, m))
    diff = sorted(members ^ exact)
    for b, m in diff:
        on_line = m == (n + 1) * b - n + 1 or (n + 1) * b - 2 * m == n - 1 or n * b - 2 * m == n - 2
        if not on_line:
            off_boundary.append((b, m))
    return {
        "members": sorted(members),
        "strict_agrees": members == strict,
        "discrepancies": diff,
        "off_boundary": off_boundary,
    }


# -- the F_1 family with a = 2, b = n+m-2 ------------------------------------


def regular_identity(total: int, a: int, b: int) -> Fraction:
    """(t-2) a^2/b^2 + (t-4) a/b  for t = n + m."""
    x = Fraction(a, b)
    return (total - 2) * x * x + (total - 4) * x


def build_ex5_7(n: int, m: int, n_max: int = 64) -> FamilySolution:
    if (n + m) % 2 or n + m < 6 or n < 1 or m < 1:
        raise ValueError(f"need positive n, m with n+m even and at least 6, got n={n}, m={m}")
    b_param = n + m - 2
    r, s = b_param // 2, b_param
    cover = CyclicCover(F1, 2, F1.cls(r + 2, s + 3))
    B = cover.pullback(F1.cls(1, 2))
    ctx = SurfaceContext(cover, B, n_max=n_max)
    K = ctx.K
    a = 2
    identity = regular_identity(n + m, a, b_param)
    obstruction = 2 * K - (b_param - 1) * B
    dual = (b_param - 1) * B - K
    claims = _common_claims(ctx) + [
        _claim("K = phi^*(rC0 + sf)", K.base_class.coords == (r, s), K=K.base_class.coords, r=r, s=s),
        _claim("X is regular (q = 0)", ctx.q == 0, q=ctx.q),
        _claim("p_g >= 3", ctx.pg >= 3, pg=ctx.pg),
        _claim("K^2 >= 2", ctx.K2 >= 2, K2=ctx.K2),
        _claim("B^2 = 6", ctx.B2 == 6, B2=ctx.B2),
        _claim("B.K = 2(r+s)", ctx.BK == 2 * (r + s), BK=ctx.BK, r=r, s=s),
        _claim("B.K > B^2", ctx.BK > ctx.B2, BK=ctx.BK, B2=ctx.B2),
        _claim(
            f"B^2 >= (2/{b_param}) B.K",
            b_param * ctx.B2 >= a * ctx.BK,
            lhs=Fraction(ctx.B2),
            rhs=Fraction(a * ctx.BK, b_param),
        ),
        _claim(f"regular-surface inequality equals 2 at a/b = 2/{b_param}", identity == 2, value=identity),
        _claim(f"h1({b_param}B) = 0", _h1(b_param * B) == 0, h1=_h1(b_param * B)),
        _claim(
            f"h0(2K-{b_param - 1}B) > 0",
            cohomology_cover(obstruction).h0 > 0,
            h0=cohomology_cover(obstruction).h0,
            cls=obstruction.base_class.coords,
        ),
        _claim(
            f"h2({b_param - 1}B-K) != 0",
            cohomology_cover(dual).h2 != 0,
            h2=cohomology_cover(dual).h2,
        ),
    ]
    return FamilySolution("ex5_7", {"n": n, "m": m, "b_param": b_param, "r": r, "s": s}, ctx, claims)


# -- plane covers ------------------------------------------------------------


def plane_model(degree: int, branch: int, n_max: int = 64) -> SurfaceContext:
    cover = CyclicCover(P2, degree, P2.cls(branch))
    return SurfaceContext(cover, cover.pullback(P2.H), n_max=n_max)


def load_pins() -> List[dict]:
    text = resources.files("npcert").joinpath("data/pinned_claims.json").read_text()
    return json.loads(text)["pins"]


def _cert_claim(ctx, p, r, rule=None) -> Claim:
    cert = certify(ctx, r, p)
    ok = isinstance(cert, Certificate) and (rule is None or cert.rule_id == rule)
    got = cert.rule_id if isinstance(cert, Certificate) else "none"
    text = f"N_{p} certified at r={r}" + (f" via {rule}" if rule else "")
    return _claim(text, ok, rule=got)


def build_classics(n_max: int = 64) -> List[FamilySolution]:
    """The double plane branched in degree 10 and the triple plane branched in degree 9."""
    out = []
    ctx = plane_model(2, 5, n_max)
    claims = _common_claims(ctx) + [
        _claim("K = phi^*(2H)", ctx.K.base_class.coords == (2,), K=ctx.K.base_class.coords),
        _claim("B^2 = 2", ctx.B2 == 2, B2=ctx.B2),
        _claim("B.K = 4", ctx.BK == 4, BK=ctx.BK),
        _claim("h1(B) = 0", ctx.h1(1) == 0, h1=ctx.h1(1)),
        _claim("K^2 = 8", ctx.K2 == 8, K2=ctx.K2),
        _claim("p_g = 6", ctx.pg == 6, pg=ctx.pg),
        _claim("q = 0", ctx.q == 0, q=ctx.q),
        _cert_claim(ctx, 0, 3),
    ]
    out.append(FamilySolution("ex5_1", {"d": 2, "branch": 5}, ctx, claims))

    ctx = plane_model(3, 3, n_max)
    h1s = [ctx.h1(l) for l in range(1, 11)]
    claims = _common_claims(ctx) + [
        _claim("K = phi^*(3H)", ctx.K.base_class.coords == (3,), K=ctx.K.base_class.coords),
        _claim("B^2 = 3", ctx.B2 == 3, B2=ctx.B2),
        _claim("B.K = 9", ctx.BK == 9, BK=ctx.BK),
        _claim("h1(lB) = 0 for l = 1..10", not any(h1s), max_h1=max(h1s)),
        _claim("q = 0", ctx.q == 0, q=ctx.q),
        _cert_claim(ctx, 1, 5, rule="n1_3"),
    ]
    out.append(FamilySolution("ex5_2", {"d": 3, "branch": 3}, ctx, claims))
    return out


def summands_of_structure_sheaf(ctx: SurfaceContext) -> List[Tuple[int, ...]]:
    return [c.coords for c in pushforward_summands(ctx.cover.O)]
