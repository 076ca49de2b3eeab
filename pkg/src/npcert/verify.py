"""One-shot verification of the example corpus against pinned values.

A pin names a model, a quantity to compute on it and the expected value as a
decimal string.  ``verify_corpus`` evaluates pins; ``property_checks`` runs
small exhaustive versions of the library's invariants.  Both feed the
``verify-examples`` command.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Sequence

from . import families
from .cohomology import cohomology_base, cohomology_cover, euler_char
from .engine import Certificate, SurfaceContext, certify, min_r_for_Np, render, replay
from .lattice import Hirzebruch, ProjectivePlane, canonical_class
from .positivity import adjoint_vanishing_2k, adjoint_vanishing_k, is_ample

PIN_KINDS = ("B2", "BK", "K2", "pg", "q", "K", "h", "h1_max", "certify", "min_r", "summands",
             "contains", "solutions", "identity")


class PinError(ValueError):
    """A malformed pin (input error, not a verification failure)."""


@dataclass(frozen=True)
class Check:
    id: str
    ok: bool
    detail: str

    def to_dict(self) -> dict:
        return {"id": self.id, "ok": self.ok, "detail": self.detail}


def load_claims(path=None) -> List[dict]:
    if path is None:
        return families.load_pins()
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise PinError(f"{path}: cannot read: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise PinError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("pins"), list):
        raise PinError(f"{path}: expected an object with a 'pins' list")
    return doc["pins"]


@lru_cache(maxsize=None)
def _model(key: str):
    spec = json.loads(key)
    fam = spec.get("family")
    if fam == "ex5_1":
        return families.plane_model(2, 5)
    if fam == "ex5_2":
        return families.plane_model(3, 3)
    if fam in ("ex5_3", "ex5_4") and "b_max" in spec:
        enum = families.enumerate_ex5_3 if fam == "ex5_3" else families.enumerate_ex5_4
        return enum(spec["n"], spec["b_max"])
    if fam in ("ex5_3", "ex5_4"):
        return families.hirzebruch_model(spec["b"], spec["m"], degree=spec.get("d", 2))
    if fam == "ex5_7":
        return families.build_ex5_7(spec["n"], spec["m"])
    raise PinError(f"unknown model {spec}")


def _ctx(model) -> SurfaceContext:
    if isinstance(model, families.FamilySolution):
        return model.context
    if isinstance(model, SurfaceContext):
        return model
    raise PinError("this quantity needs a single model, not an enumeration")


def measure(pin: dict) -> str:
    """Compute the quantity a pin refers to, rendered as a decimal string."""
    try:
        model = _model(json.dumps(pin["model"], sort_keys=True))
        q = pin["quantity"]
        kind = q["kind"]
    except (KeyError, TypeError) as exc:
        raise PinError(f"pin {pin.get('id', '?')!r} is malformed: missing {exc}") from exc
    if kind not in PIN_KINDS:
        raise PinError(f"pin {pin.get('id')!r}: unknown quantity {kind!r}")
    if kind in ("contains", "solutions"):
        if not isinstance(model, list):
            raise PinError(f"pin {pin.get('id')!r}: {kind} needs an enumeration model")
        pairs = [(s.params["b"], s.params["m"]) for s in model]
        if kind == "contains":
            return render((q["b"], q["m"]) in pairs)
        return ";".join(str(m) for b, m in pairs if b == q["b"])
    if kind == "identity":
        if not isinstance(model, families.FamilySolution):
            raise PinError(f"pin {pin.get('id')!r}: identity needs the ex5_7 model")
        p = model.params
        return str(families.regular_identity(p["n"] + p["m"], 2, p["b_param"]))
    ctx = _ctx(model)
    if kind in ("B2", "BK", "K2", "pg", "q"):
        return str(getattr(ctx, kind))
    if kind == "K":
        return render(ctx.K.base_class.coords)
    if kind == "h":
        cls = q["B"] * ctx.B + q["K"] * ctx.K
        return str(cohomology_cover(cls).as_tuple()[q["index"]])
    if kind == "h1_max":
        return str(max(ctx.h1(l) for l in range(q["from"], q["to"] + 1)))
    if kind == "summands":
        return ";".join(render(c) for c in families.summands_of_structure_sheaf(ctx))
    if kind == "certify":
        cert = certify(ctx, q["r"], q["p"], q.get("rules"))
        if not isinstance(cert, Certificate):
            return "none"
        return "certified" if pin["expected"] == "certified" else cert.rule_id
    found = min_r_for_Np(ctx, q["p"])
    return "none" if found is None else str(found[0])


def _compare(got: str, expected: str, relation: str) -> bool:
    if relation == "==":
        return got == expected
    try:
        g, e = Fraction(got), Fraction(expected)
    except ValueError:
        return False
    if relation == "<=":
        return g <= e
    if relation == ">=":
        return g >= e
    raise PinError(f"unknown relation {relation!r}")


def verify_corpus(pins: Sequence[dict]) -> List[Check]:
    out = []
    for pin in pins:
        if "id" not in pin or "expected" not in pin:
            raise PinError(f"pin {pin!r} needs 'id' and 'expected'")
        expected = str(pin["expected"])
        relation = pin.get("relation", "==")
        got = measure(pin)
        out.append(Check(pin["id"], _compare(got, expected, relation), f"got {got}, expected {relation} {expected}"))
    return out


# -- property suites -----------------------------------------------------------


def _suite_base_duality() -> Check:
    bad = []
    for surface in [Hirzebruch(e) for e in range(4)]:
        K = canonical_class(surface)
        for a in range(-8, 9):
            for b in range(-8, 9):
                d = surface.cls(a, b)
                h = cohomology_base(surface, d)
                if h.chi != euler_char(surface, d) or h.h0 != cohomology_base(surface, K - d).h2:
                    bad.append(f"{surface} {d}")
    P2 = ProjectivePlane()
    for k in range(-12, 13):
        d = P2.cls(k)
        if cohomology_base(P2, d).chi != euler_char(P2, d):
            bad.append(f"P2 {d}")
    return Check("suite.riemann_roch_serre", not bad, "ok" if not bad else f"fails at {bad[:3]}")


def _suite_kawamata_viehweg() -> Check:
    F1 = Hirzebruch(1)
    K = canonical_class(F1)
    bad = [
        (a, b)
        for a in range(1, 13)
        for b in range(1, 13)
        if is_ample(F1, F1.cls(a, b)) and cohomology_base(F1, K + F1.cls(a, b)).as_tuple()[1:] != (0, 0)
    ]
    return Check("suite.kawamata_viehweg", not bad, "ok" if not bad else f"fails at {bad[:3]}")


def _corpus() -> List[SurfaceContext]:
    return [
        families.plane_model(2, 5),
        families.plane_model(3, 3),
        families.hirzebruch_model(4, 5),
        families.hirzebruch_model(3, 4),
        families.build_ex5_7(3, 3).context,
    ]


def _suite_cover_duality() -> Check:
    bad = []
    for ctx in _corpus():
        for i in range(-4, 5):
            for j in range(-2, 3):
                d = i * ctx.B + j * ctx.K
                h = cohomology_cover(d)
                if h.chi != euler_char(ctx.cover, d) or h.as_tuple() != cohomology_cover(ctx.K - d).as_tuple()[::-1]:
                    bad.append(f"{ctx.cover}: {i}B+{j}K")
    return Check("suite.cover_serre_rr", not bad, "ok" if not bad else f"fails at {bad[:3]}")


def _suite_vanishing() -> Check:
    bad = []
    for ctx in _corpus():
        for n in range(2, 6):
            for l in range(-1, 4):
                for m in range(0, 13):
                    for pred in (adjoint_vanishing_2k, adjoint_vanishing_k):
                        if pred(n, m, l, ctx.B) is True:
                            h = cohomology_cover(m * ctx.B - l * ctx.K)
                            if h.h1 or h.h2:
                                bad.append(f"{pred.__name__} n={n} m={m} l={l}")
    return Check("suite.vanishing_rules", not bad, "ok" if not bad else f"fails at {bad[:3]}")


def _suite_engine() -> Check:
    problems = []
    for ctx in _corpus():
        last = 0
        for p in range(0, 5):
            found = min_r_for_Np(ctx, p)
            if found is None:
                continue
            r, cert = found
            if r < last:
                problems.append(f"min r drops at p={p} on {ctx.cover}")
            last = r
            mismatched = replay(cert, ctx)
            if mismatched:
                problems.append(f"replay mismatch {mismatched} on {ctx.cover}")
            nxt = certify(ctx, r + 1, p)
            if not isinstance(nxt, Certificate):
                problems.append(f"not monotone in r at p={p} on {ctx.cover}")
    return Check("suite.engine_replay_monotone", not problems, "ok" if not problems else "; ".join(problems[:3]))


def _suite_families() -> List[Check]:
    # FamilyInconsistency propagates: it is an internal error, not a failed pin
    out = []
    for fam in families.build_classics():
        out.append(Check(f"family.{fam.family_id}", fam.verified, "ok" if fam.verified else str(fam.failures())))
    for n in range(2, 6):
        counts = [len(families.enumerate_ex5_3(n, bm)) for bm in (5, 10, 15)]
        grows = counts[0] > 0 and counts[0] < counts[1] < counts[2]
        out.append(Check(f"family.ex5_3.n{n}", grows, f"counts {counts}"))
        counts = [len(families.enumerate_ex5_4(n, bm)) for bm in (5, 10, 15)]
        grows = counts[0] > 0 and counts[0] < counts[1] < counts[2]
        out.append(Check(f"family.ex5_4.n{n}", grows, f"counts {counts}"))
    for bp in (4, 6, 8, 10):
        fam = families.build_ex5_7(bp + 1, 1)
        out.append(Check(f"family.ex5_7.b{bp}", fam.verified, "ok" if fam.verified else str(fam.failures())))
    agreement = families.polytope_agreement(2, 15, 40)
    ok = agreement["strict_agrees"] and not agreement["off_boundary"]
    out.append(Check("family.ex5_3.polytope", ok, f"{len(agreement['discrepancies'])} boundary discrepancies"))
    return out


@lru_cache(maxsize=1)
def property_checks() -> tuple:
    checks = [
        _suite_base_duality(),
        _suite_kawamata_viehweg(),
        _suite_cover_duality(),
        _suite_vanishing(),
        _suite_engine(),
    ]
    checks.extend(_suite_families())
    return tuple(checks)


def verify_examples(claims: Optional[Sequence[dict]] = None, properties: bool = True) -> List[Check]:
    pins = families.load_pins() if claims is None else claims
    checks = verify_corpus(pins)
    if properties:
        checks.extend(property_checks())
    return checks
