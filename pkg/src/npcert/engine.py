"""Certification of N_p properties for adjoint bundles K + rB.

Each rule is a sufficient condition stated over exact invariants of a
surface context.  Evaluating a rule produces a list of hypotheses, each one
a named comparison with both sides recorded exactly.  A rule applies when
every hypothesis holds; a certificate is emitted for the applicable rule
with the smallest r_min (ties broken by ``PRIORITY``), and the outcome of
every other rule is kept in the appendix.

Hypotheses carry the evaluator key and arguments that produced them, so a
certificate can be replayed against the base modules (see ``replay``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .cohomology import SurfaceInvariants, cohomology_cover, surface_invariants
from .covers import CyclicCover, PullbackClass
from .positivity import (
    Inapplicable,
    SlopeBound,
    Verdict,
    best_slope,
    canonical_slope_check,
    is_ample_pullback,
    k_plus_b_bpf,
    nef_margin,
)

Value = Union[int, Fraction, Tuple[int, ...]]

N0_RULES = ("n0_4", "n0_3", "n0_2", "n0_1")
N1_RULES = ("n1_3", "n1_2", "n1_5", "n1_1", "n1_0")
NP_RULES = ("main6", "main5", "main51")
PRIORITY = N0_RULES + N1_RULES + NP_RULES

REGULAR_RULES = frozenset({"n0_3", "n0_4", "n1_2", "n1_3", "n1_5", "main6"})

MODEL_ASSUMPTIONS = (
    "the branch divisor is a smooth member of |dL| (dL ample and base point free, characteristic 0)",
    "base point freeness of pullbacks is inferred from base point freeness of the base class",
)


class InternalInconsistency(RuntimeError):
    """An engine self-test failed; the model or the engine is wrong."""


_RELATIONS: Dict[str, Callable[[Value, Value], bool]] = {
    ">=": lambda x, y: x >= y,
    ">": lambda x, y: x > y,
    "==": lambda x, y: x == y,
    "!=": lambda x, y: x != y,
}


@dataclass(frozen=True)
class Hypothesis:
    name: str
    check: str
    args: Tuple[Tuple[str, object], ...]
    lhs: Value
    relation: str
    rhs: Value
    verdict: bool
    provenance: str = "direct"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "check": self.check,
            "args": {k: render(v) for k, v in self.args},
            "lhs": render(self.lhs),
            "relation": self.relation,
            "rhs": render(self.rhs),
            "verdict": self.verdict,
            "provenance": self.provenance,
        }


def render(v) -> str:
    """Decimal-string rendering used in machine output."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


@dataclass(frozen=True)
class RuleOutcome:
    rule_id: str
    r: int
    p: int
    hypotheses: Tuple[Hypothesis, ...]
    n: Optional[int] = None
    slope: Optional[SlopeBound] = None
    note: str = ""

    @property
    def applies(self) -> bool:
        return not self.note and all(h.verdict for h in self.hypotheses)

    @property
    def blocking(self) -> Optional[str]:
        if self.note:
            return self.note
        for h in self.hypotheses:
            if not h.verdict:
                return h.name
        return None


@dataclass(frozen=True)
class Certificate:
    rule_id: str
    p: int
    r: int
    r_min: int
    hypotheses: Tuple[Hypothesis, ...]
    n: Optional[int] = None
    slope: Optional[SlopeBound] = None
    assumptions: Tuple[str, ...] = MODEL_ASSUMPTIONS
    appendix: Tuple[dict, ...] = ()

    @property
    def conclusion(self) -> str:
        return f"K+rB has N_{self.p} for all r >= {self.r_min}"

    def to_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "p": str(self.p),
            "r": str(self.r),
            "r_min": str(self.r_min),
            "n": None if self.n is None else str(self.n),
            "slope": None if self.slope is None else str(self.slope),
            "conclusion": self.conclusion,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "assumptions": list(self.assumptions),
            "appendix": list(self.appendix),
        }


@dataclass(frozen=True)
class NotCertified(Inapplicable):
    """No rule applies; ``blocked`` maps each rule to its first failing hypothesis."""

    blocked: Tuple[Tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        return {"reason": self.reason, "blocked": {k: v for k, v in self.blocked}}


# -- surface context ---------------------------------------------------------


class SurfaceContext:
    """A cover, an ample class B on it, and everything the rules consume."""

    def __init__(self, cover: CyclicCover, B: PullbackClass, n_max: int = 64, r_cap: Optional[int] = None):
        if B.cover != cover:
            raise ValueError("B does not live on this cover")
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        self.cover = cover
        self.B = B
        self.K = cover.K
        self.n_max = n_max
        self.r_cap = 3 + 4 * n_max if r_cap is None else r_cap
        self.B2 = B.dot(B)
        self.BK = B.dot(self.K)
        self.K2 = self.K.dot(self.K)
        self.invariants: SurfaceInvariants = surface_invariants(cover)
        self.pg = self.invariants.pg
        self.q = self.invariants.q
        self.regular = self.invariants.regular
        self.minimal_certified = self.invariants.minimal
        self.general_type_certified = self.invariants.general_type
        self.B_ample = is_ample_pullback(B)
        if self.B_ample:
            self.k_plus_b = k_plus_b_bpf(cover, B)
        else:
            self.k_plus_b = Verdict(False, "B is not ample")
        self.slope = best_slope(self.B2, self.BK, cap=n_max) if self.BK > 0 else None
        self._h1: Dict[int, int] = {}
        self._outcomes: Dict[Tuple[str, int, int], RuleOutcome] = {}
        self._least_n: Dict[str, Optional[int]] = {}
        self._hyps: Dict[tuple, Hypothesis] = {}
        if self.slope is not None:
            verdict = canonical_slope_check(self.slope, cover, B)
            if verdict is False:
                raise InternalInconsistency(
                    f"B.K >= ({self.slope}) K^2 fails although B^2 >= ({self.slope}) B.K"
                )
            self.canonical_slope_verdict = verdict
        else:
            self.canonical_slope_verdict = Inapplicable("B.K <= 0")

    def h1(self, l: int) -> int:
        """h^1(lB), computed directly and cached."""
        if l not in self._h1:
            self._h1[l] = cohomology_cover(l * self.B).h1
        return self._h1[l]

    def slope_n(self) -> Optional[int]:
        """Least n >= 2 with B^2 >= (1/n) B.K, within n_max."""
        if self.B2 <= 0:
            return None
        n = max(2, -(-self.BK // self.B2))
        return n if n <= self.n_max else None

    def least_n(self, form: str) -> Optional[int]:
        """Least n in [2, n_max] with the nef hypothesis of ``form`` and h^1((n+1)B) = 0."""
        if form not in self._least_n:
            found = None
            for n in range(2, self.n_max + 1):
                if nef_margin(self.cover.base, _nef_class(self, form, n).base_class) >= 0 and self.h1(n + 1) == 0:
                    found = n
                    break
            self._least_n[form] = found
        return self._least_n[form]

    def least_nef_n(self, form: str, start: int = 1) -> Optional[int]:
        """Least n >= start with the nef hypothesis of ``form`` alone."""
        for n in range(start, self.n_max + 1):
            if nef_margin(self.cover.base, _nef_class(self, form, n).base_class) >= 0:
                return n
        return None

    def summary(self) -> dict:
        return {
            "B2": self.B2,
            "BK": self.BK,
            "K2": self.K2,
            "pg": self.pg,
            "q": self.q,
            "regular": self.regular,
            "minimal_certified": self.minimal_certified,
            "general_type_certified": self.general_type_certified,
            "k_plus_b_bpf": self.k_plus_b.holds,
            "k_plus_b_provenance": self.k_plus_b.provenance,
            "slope": None if self.slope is None else str(self.slope),
        }


def _nef_class(ctx: SurfaceContext, form: str, n: int) -> PullbackClass:
    if form == "2K":
        return (n + 1) * ctx.B - 2 * ctx.K
    if form == "K":
        return n * ctx.B - ctx.K
    raise ValueError(f"unknown nef form {form!r}")


# -- hypothesis evaluators ---------------------------------------------------
#
# Each evaluator maps (ctx, **args) to (name, lhs, relation, rhs, provenance).


def _ev_h1(ctx, multiple):
    return f"h1({multiple}B) = 0", ctx.h1(multiple), "==", 0, "direct"


def _ev_slope(ctx, a, b):
    return f"B^2 >= ({a}/{b}) B.K", Fraction(ctx.B2), ">=", Fraction(a, b) * ctx.BK, "direct"


def _ev_regular(ctx):
    return "q = 0", ctx.q, "==", 0, "direct"


def _ev_pg(ctx, bound):
    return f"p_g >= {bound}", ctx.pg, ">=", bound, "direct"


def _ev_K2(ctx, bound):
    return f"K^2 >= {bound}", ctx.K2, ">=", bound, "direct"


def _ev_K2_positive(ctx):
    return "K^2 > 0", ctx.K2, ">", 0, "direct"


def _ev_B2(ctx, bound):
    return f"B^2 >= {bound}", ctx.B2, ">=", bound, "direct"


def _ev_nef(ctx, b_mult, k_mult):
    cls = b_mult * ctx.B - k_mult * ctx.K
    k = "K" if k_mult == 1 else f"{k_mult}K"
    return f"{b_mult}B-{k} nef", nef_margin(ctx.cover.base, cls.base_class), ">=", 0, "cone criterion"


def _ev_K_nef(ctx):
    return "K nef", nef_margin(ctx.cover.base, ctx.K.base_class), ">=", 0, "cone criterion"


def _ev_ample(ctx):
    return "B ample", nef_margin(ctx.cover.base, ctx.B.base_class), ">", 0, "cone criterion"


def _ev_bpf(ctx):
    return "B base point free", nef_margin(ctx.cover.base, ctx.B.base_class), ">=", 0, "base-class check"


def _ev_kb(ctx):
    if ctx.B_ample and ctx.B2 >= 5:
        return "K+B base point free", ctx.B2, ">=", 5, "Reider"
    cls = ctx.K + ctx.B
    return "K+B base point free", nef_margin(ctx.cover.base, cls.base_class), ">=", 0, "base-class check"


def _ev_r_vs_slope(ctx, r, a, b, shift, relation):
    shift = Fraction(shift)
    rhs = Fraction(b, a) + shift
    return f"r {relation} {b}/{a} + {shift}", Fraction(r), relation, rhs, "arithmetic"


def _ev_quadratic(ctx, k, a, b):
    x = Fraction(a, b)
    lhs = k * x * x + (k - 2) * x
    return f"{k}(a/b)^2 + {k - 2}(a/b) >= 2", lhs, ">=", Fraction(2), "arithmetic"


def _ev_linear(ctx, c, a, b):
    return f"{c}({a}/{b}) > 2", c * Fraction(a, b), ">", Fraction(2), "arithmetic"


def _ev_r_bound(ctx, r, bound, relation):
    return f"r {relation} {bound}", r, relation, bound, "arithmetic"


def _ev_distinct(ctx, k_mult, b_mult):
    diff = (k_mult * ctx.K - b_mult * ctx.B).base_class
    zero = tuple(0 for _ in diff.coords)
    return f"{k_mult}K != {b_mult}B (numerically)", diff.coords, "!=", zero, "numerical class comparison"


def _ev_propagation(ctx, multiple, a, b):
    return (
        f"h1 gate propagates upward from {multiple}B",
        Fraction(multiple),
        ">",
        Fraction(b, a),
        "restriction to a curve in |B|",
    )


EVALUATORS: Dict[str, Callable] = {
    "h1": _ev_h1,
    "slope": _ev_slope,
    "regular": _ev_regular,
    "pg": _ev_pg,
    "K2": _ev_K2,
    "K2_positive": _ev_K2_positive,
    "B2": _ev_B2,
    "nef": _ev_nef,
    "K_nef": _ev_K_nef,
    "ample": _ev_ample,
    "bpf": _ev_bpf,
    "k_plus_b": _ev_kb,
    "r_vs_slope": _ev_r_vs_slope,
    "quadratic": _ev_quadratic,
    "linear": _ev_linear,
    "r_bound": _ev_r_bound,
    "distinct": _ev_distinct,
    "propagation": _ev_propagation,
}


def evaluate(ctx: SurfaceContext, check: str, **args) -> Hypothesis:
    name, lhs, rel, rhs, prov = EVALUATORS[check](ctx, **args)
    return Hypothesis(name, check, tuple(sorted(args.items())), lhs, rel, rhs, _RELATIONS[rel](lhs, rhs), prov)


def replay(cert: Certificate, ctx: SurfaceContext) -> List[str]:
    """Re-evaluate every hypothesis of ``cert``; return the names of any that differ."""
    mismatches = []
    for h in cert.hypotheses:
        again = evaluate(ctx, h.check, **dict(h.args))
        if again != h:
            mismatches.append(h.name)
    return mismatches


# -- rules -------------------------------------------------------------------


def _ev(ctx, check: str, **args) -> Hypothesis:
    # memoized per context; replay() deliberately bypasses this
    key = (check, tuple(sorted(args.items())))
    hyp = ctx._hyps.get(key)
    if hyp is None:
        hyp = ctx._hyps[key] = evaluate(ctx, check, **args)
    return hyp


def _standing(ctx) -> List[Hypothesis]:
    return [
        _ev(ctx, "ample"),
        _ev(ctx, "bpf"),
        _ev(ctx, "K_nef"),
        _ev(ctx, "K2_positive"),
        _ev(ctx, "B2", bound=2),
        _ev(ctx, "k_plus_b"),
    ]


def _regular_block(ctx) -> List[Hypothesis]:
    return [_ev(ctx, "regular"), _ev(ctx, "pg", bound=3), _ev(ctx, "K2", bound=2)]


def _either_strict_or_equal(ctx, r, a, b, shift, k_mult, b_mult) -> List[Hypothesis]:
    """r > b/a + shift, or equality together with k_mult K != b_mult B."""
    strict = _ev(ctx, "r_vs_slope", r=r, a=a, b=b, shift=shift, relation=">")
    if strict.verdict:
        return [strict]
    equal = _ev(ctx, "r_vs_slope", r=r, a=a, b=b, shift=shift, relation="==")
    if equal.verdict:
        return [equal, _ev(ctx, "distinct", k_mult=k_mult, b_mult=b_mult)]
    return [strict]


def _gate(ctx, multiple, slope) -> List[Hypothesis]:
    out = [_ev(ctx, "h1", multiple=multiple)]
    if slope is not None:
        out.append(_ev(ctx, "propagation", multiple=multiple, a=slope.a, b=slope.b))
    return out


def _rule_hypotheses(ctx: SurfaceContext, rule: str, r: int, p: int):
    """(hypotheses, n, slope, note) for ``rule`` at (r, p)."""
    hyps = _standing(ctx)
    n = None
    slope = None
    note = ""
    if rule in REGULAR_RULES:
        hyps += _regular_block(ctx)

    if rule in ("n0_1", "n1_0", "n0_3", "n1_2"):
        slope = ctx.slope
        if slope is None:
            return hyps, n, slope, "B.K <= 0, no slope bound"
        hyps.append(_ev(ctx, "slope", a=slope.a, b=slope.b))
    elif rule in ("n0_2", "n0_4", "n1_1", "n1_3"):
        n = ctx.slope_n()
        if n is None:
            return hyps, n, slope, f"no n <= {ctx.n_max} with n B^2 >= B.K"
        slope = SlopeBound(1, n)
        hyps.append(_ev(ctx, "slope", a=1, b=n))

    if rule == "n0_1":
        hyps += _gate(ctx, 2 * r - 2, slope)
        hyps += _either_strict_or_equal(ctx, r, slope.a, slope.b, "3/2", 2, 2 * r - 3)
    elif rule == "n0_2":
        hyps += _gate(ctx, 2 * r - 2, slope)
        hyps.append(_ev(ctx, "r_bound", r=r, bound=n + 2, relation=">="))
    elif rule == "n0_3":
        hyps.append(_ev(ctx, "quadratic", k=2 * r - 2, a=slope.a, b=slope.b))
        hyps += _gate(ctx, 2 * r - 2, slope)
    elif rule == "n0_4":
        hyps += _gate(ctx, 2 * r - 2, slope)
        hyps.append(_ev(ctx, "r_bound", r=r, bound=n + 1, relation=">="))
    elif rule == "n1_0":
        hyps += _gate(ctx, 2 * r - 3, slope)
        hyps += _either_strict_or_equal(ctx, r, slope.a, slope.b, "2", 2, 2 * r - 4)
    elif rule == "n1_1":
        hyps += _gate(ctx, 2 * r - 3, slope)
        wide = _ev(ctx, "r_bound", r=r, bound=n + 3, relation=">=")
        if wide.verdict:
            hyps.append(wide)
        else:
            edge = _ev(ctx, "r_bound", r=r, bound=n + 2, relation="==")
            hyps.append(edge if edge.verdict else wide)
            if edge.verdict:
                hyps.append(_ev(ctx, "distinct", k_mult=2, b_mult=2 * r - 4))
    elif rule == "n1_2":
        hyps += _gate(ctx, 2 * r - 3, slope)
        hyps.append(_ev(ctx, "r_vs_slope", r=r, a=slope.a, b=slope.b, shift="3/2", relation=">"))
        hyps.append(_ev(ctx, "linear", c=2 * r - 3, a=slope.a, b=slope.b))
    elif rule == "n1_3":
        hyps += _gate(ctx, 2 * r - 3, slope)
        hyps.append(_ev(ctx, "r_bound", r=r, bound=n + 2, relation=">="))
    elif rule == "n1_5":
        slope = SlopeBound(2, 2 * r - 3)
        hyps.append(_ev(ctx, "slope", a=2, b=2 * r - 3))
        hyps += _gate(ctx, r - 1, slope)
    elif rule in NP_RULES:
        form = "K" if rule == "main51" else "2K"
        n = ctx.least_n(form)
        if rule == "main6":
            hyps.append(_ev(ctx, "B2", bound=5))
        if n is None:
            cls = "nB-K" if form == "K" else "(n+1)B-2K"
            return hyps, n, slope, f"no n in [2, {ctx.n_max}] with {cls} nef and h1((n+1)B) = 0"
        if form == "K":
            hyps.append(_ev(ctx, "nef", b_mult=n, k_mult=1))
        else:
            hyps.append(_ev(ctx, "nef", b_mult=n + 1, k_mult=2))
        hyps.append(_ev(ctx, "h1", multiple=n + 1))
        bound = {"main5": n + p + 2, "main51": 2 * n + p + 1, "main6": n + p + 1}[rule]
        hyps.append(_ev(ctx, "r_bound", r=r, bound=bound, relation=">="))
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return hyps, n, slope, note


def evaluate_rule(ctx: SurfaceContext, rule: str, r: int, p: int) -> RuleOutcome:
    key = (rule, r, p)
    if key not in ctx._outcomes:
        hyps, n, slope, note = _rule_hypotheses(ctx, rule, r, p)
        ctx._outcomes[key] = RuleOutcome(rule, r, p, tuple(hyps), n, slope, note)
    return ctx._outcomes[key]


def rule_r_min(ctx: SurfaceContext, rule: str, r: int, p: int) -> Optional[int]:
    """Least r0 in [3, r] at which ``rule`` applies."""
    for r0 in range(3, r + 1):
        if evaluate_rule(ctx, rule, r0, p).applies:
            return r0
    return None


def _certify(ctx: SurfaceContext, r: int, p: int, rules: Sequence[str]) -> Union[Certificate, NotCertified]:
    if r < 3:
        raise ValueError(f"adjoint bundles K+rB are only treated for r >= 3, got r={r}")
    outcomes = [evaluate_rule(ctx, rule, r, p) for rule in rules]
    appendix = []
    best = None
    for o in outcomes:
        r_min = rule_r_min(ctx, o.rule_id, r, p) if o.applies else None
        appendix.append(
            {
                "rule_id": o.rule_id,
                "applies": o.applies,
                "blocking": o.blocking,
                "r_min": None if r_min is None else str(r_min),
            }
        )
        if o.applies:
            rank = (r_min, PRIORITY.index(o.rule_id))
            if best is None or rank < best[0]:
                best = (rank, o, r_min)
    if best is None:
        blocked = tuple((o.rule_id, o.blocking) for o in outcomes)
        summary = "; ".join(f"{k}: {v}" for k, v in blocked)
        return NotCertified(f"no rule certifies N_{p} at r={r} ({summary})", blocked)
    _, o, r_min = best
    winner = evaluate_rule(ctx, o.rule_id, r_min, p)
    return Certificate(
        rule_id=o.rule_id,
        p=p,
        r=r,
        r_min=r_min,
        hypotheses=winner.hypotheses,
        n=winner.n,
        slope=winner.slope,
        appendix=tuple(appendix),
    )


def _pick(rules, allowed):
    if rules is None:
        return allowed
    bad = [x for x in rules if x not in allowed]
    if bad:
        raise ValueError(f"rules {bad} do not belong to this syzygy level")
    return tuple(rules)


def certify_N0(ctx: SurfaceContext, r: int, rules: Optional[Sequence[str]] = None):
    return _certify(ctx, r, 0, _pick(rules, N0_RULES))


def certify_N1(ctx: SurfaceContext, r: int, rules: Optional[Sequence[str]] = None):
    return _certify(ctx, r, 1, _pick(rules, N1_RULES))


def certify_Np(ctx: SurfaceContext, r: int, p: int, rules: Optional[Sequence[str]] = None):
    if p < 2:
        raise ValueError(f"certify_Np handles p >= 2, got p={p}")
    return _certify(ctx, r, p, _pick(rules, NP_RULES))


def certify(ctx: SurfaceContext, r: int, p: int, rules: Optional[Sequence[str]] = None):
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    if p == 0:
        return certify_N0(ctx, r, rules)
    if p == 1:
        return certify_N1(ctx, r, rules)
    return certify_Np(ctx, r, p, rules)


def min_r_for_Np(ctx: SurfaceContext, p: int) -> Optional[Tuple[int, Certificate]]:
    """Smallest r >= 3 with a certificate for N_p, scanning up to ctx.r_cap."""
    for r in range(3, ctx.r_cap + 1):
        cert = certify(ctx, r, p)
        if isinstance(cert, Certificate):
            return r, cert
    return None
