"""Command-line front end.

Exit codes: 0 everything requested passed, 1 a verification failed or no
certificate was found, 2 bad input, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import families
from .cohomology import cohomology_cover
from .engine import Certificate, InternalInconsistency, SurfaceContext, certify, min_r_for_Np, render
from .families import FamilyInconsistency
from .positivity import is_ample_pullback, is_bpf_pullback, is_nef_pullback
from .report import EXIT_FAILED, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK, Report
from .specfile import SpecError, SurfaceSpec, load_corpus, load_spec
from .verify import PinError, load_claims, verify_examples


class UsageError(ValueError):
    pass


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _twists(text: str) -> List[int]:
    """``a:b`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range a:b or a comma list, got {text!r}")


def _specs(args) -> List[SurfaceSpec]:
    if args.seed_corpus:
        if args.spec:
            raise UsageError("give either a spec file or --seed-corpus, not both")
        return load_corpus(args.seed_corpus)
    if not args.spec:
        raise UsageError("a spec file (or --seed-corpus DIR) is required")
    return [load_spec(args.spec)]


def _context(spec: SurfaceSpec, args) -> SurfaceContext:
    return spec.context(n_max=args.n_max, r_cap=args.r_cap)


def _label(spec: SurfaceSpec) -> str:
    return spec.name or spec.source


# -- commands ----------------------------------------------------------------


def cmd_describe(args) -> Report:
    rep = Report("describe", {"surfaces": []})
    for spec in _specs(args):
        ctx = _context(spec, args)
        B, K = ctx.B, ctx.K
        positivity = []
        for name, cls in (("B", B), ("K", K), ("K+B", K + B)):
            positivity.append(
                {
                    "class": name,
                    "base_class": render(cls.base_class.coords),
                    "nef": is_nef_pullback(cls),
                    "ample": is_ample_pullback(cls),
                    "bpf": is_bpf_pullback(cls),
                }
            )
        n2k = ctx.least_nef_n("2K")
        nk = ctx.least_nef_n("K")
        record = {
            "name": _label(spec),
            "spec": spec.to_dict(),
            "invariants": ctx.summary(),
            "K": render(K.base_class.coords),
            "positivity": positivity,
            "least_n_2K_nef": n2k,
            "least_n_K_nef": nk,
        }
        rep.machine["surfaces"].append(record)
        rep.add_line(f"surface: {_label(spec)}  ({ctx.cover})")
        rep.add_table(
            "invariants",
            ["quantity", "value"],
            [
                ["B^2", ctx.B2],
                ["B.K", ctx.BK],
                ["K^2", ctx.K2],
                ["p_g", ctx.pg],
                ["q", ctx.q],
                ["K", f"phi*({K.base_class})"],
                ["K+B bpf", f"{render(ctx.k_plus_b.holds)} ({ctx.k_plus_b.provenance})"],
                ["least n: (n+1)B-2K nef", "none" if n2k is None else n2k],
                ["least n: nB-K nef", "none" if nk is None else nk],
            ],
        )
        rep.add_table(
            "positivity",
            ["class", "base class", "nef", "ample", "bpf"],
            [[p["class"], p["base_class"], render(p["nef"]), render(p["ample"]), render(p["bpf"])] for p in positivity],
        )
        rep.add_line()
    return rep


def cmd_coh(args) -> Report:
    rep = Report("coh", {"surfaces": []})
    for spec in _specs(args):
        ctx = _context(spec, args)
        coords = args.cls if args.cls is not None else [0] * spec.base.rank
        if len(coords) != spec.base.rank:
            raise UsageError(f"--class needs {spec.base.rank} coordinate(s) on {spec.base}")
        D = ctx.cover.pullback(spec.base.cls(*coords))
        rows, records = [], []
        for t in args.twists:
            cls = D + t * ctx.B
            h = cohomology_cover(cls)
            records.append({"t": t, "class": render(cls.base_class.coords), "h0": h.h0, "h1": h.h1, "h2": h.h2})
            rows.append([t, f"phi*({cls.base_class})", h.h0, h.h1, h.h2])
        rep.machine["surfaces"].append({"name": _label(spec), "D": render(tuple(coords)), "rows": records})
        rep.add_table(f"h^i(phi*(D + tB)) on {_label(spec)}, D = {D.base_class}", ["t", "class", "h0", "h1", "h2"], rows)
    return rep


def cmd_certify(args) -> Report:
    rep = Report("certify", {"surfaces": []})
    failed = False
    for spec in _specs(args):
        ctx = _context(spec, args)
        if args.r is None:
            found = min_r_for_Np(ctx, args.p)
            result = None if found is None else found[1]
            r_used = None if found is None else found[0]
        else:
            result = certify(ctx, args.r, args.p, args.rules)
            r_used = args.r
        record = {"name": _label(spec), "p": args.p, "r": r_used}
        if isinstance(result, Certificate):
            record["certificate"] = result.to_dict()
            rep.add_line(f"{_label(spec)}: N_{args.p} certified by {result.rule_id}; {result.conclusion}")
            rep.add_table(
                "hypotheses",
                ["hypothesis", "lhs", "rel", "rhs", "verdict", "provenance"],
                [[h.name, render(h.lhs), h.relation, render(h.rhs), render(h.verdict), h.provenance] for h in result.hypotheses],
            )
            rep.add_table(
                "all rules",
                ["rule", "applies", "r_min", "blocked by"],
                [[a["rule_id"], render(a["applies"]), a["r_min"] or "-", a["blocking"] or "-"] for a in result.appendix],
            )
        else:
            failed = True
            if result is None:
                record["not_certified"] = {"reason": f"no certificate for r <= {ctx.r_cap}", "blocked": {}}
                rep.add_line(f"{_label(spec)}: no certificate for N_{args.p} with r <= {ctx.r_cap}")
            else:
                record["not_certified"] = result.to_dict()
                rep.add_line(f"{_label(spec)}: N_{args.p} not certified at r={args.r}")
                rep.add_table("blocking hypotheses", ["rule", "blocked by"], list(result.blocked))
        rep.add_line()
        rep.machine["surfaces"].append(record)
    rep.exit_code = EXIT_FAILED if failed else EXIT_OK
    return rep


def _family_solutions(args) -> List[families.FamilySolution]:
    fid = args.family_id
    if fid in ("ex5_1", "ex5_2"):
        return [s for s in families.build_classics(n_max=args.n_max or 64) if s.family_id == fid]
    if fid in ("ex5_3", "ex5_4"):
        enum = families.enumerate_ex5_3 if fid == "ex5_3" else families.enumerate_ex5_4
        return enum(args.n, args.b_max, n_max=args.n_max or 64)
    if fid == "ex5_5":
        return families.enumerate_ex5_5(args.d, args.n, args.b_max, args.m_max, shape=args.shape)
    if args.m is None:
        raise UsageError("ex5_7 needs --n and --m")
    return [families.build_ex5_7(args.n, args.m, n_max=args.n_max or 64)]


def cmd_family(args) -> Report:
    sols = _family_solutions(args)
    rep = Report("family", {"family_id": args.family_id, "solutions": [s.to_dict() for s in sols]})
    rows = []
    for s in sols:
        params = " ".join(f"{k}={v}" for k, v in sorted(s.params.items()))
        rows.append([params, s.context.B2, s.context.BK, s.context.K2, s.context.pg, len(s.verification), render(s.verified)])
    rep.add_table(
        f"{args.family_id}: {len(sols)} solution(s)", ["params", "B^2", "B.K", "K^2", "p_g", "claims", "verified"], rows
    )
    if not all(s.verified for s in sols):
        rep.exit_code = EXIT_FAILED
    return rep


def cmd_verify_examples(args) -> Report:
    claims = load_claims(args.claims)
    checks = verify_examples(claims)
    failed = [c for c in checks if not c.ok]
    rep = Report("verify-examples", {"checks": [c.to_dict() for c in checks], "failed": [c.id for c in failed]})
    rep.add_table("checks", ["claim", "ok", "detail"], [[c.id, render(c.ok), c.detail] for c in checks])
    rep.add_line()
    if failed:
        rep.add_line("FAILED: " + ", ".join(c.id for c in failed))
        rep.exit_code = EXIT_FAILED
    else:
        rep.add_line(f"all {len(checks)} checks passed")
    return rep


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print only the machine-readable section")
    common.add_argument("--n-max", type=int, default=None, help="largest n the engine searches (default 64)")
    common.add_argument("--r-cap", type=int, default=None, help="largest r scanned for minimal r (default 3+4*n_max)")

    surface = argparse.ArgumentParser(add_help=False)
    surface.add_argument("spec", nargs="?", help="surface definition file (JSON)")
    surface.add_argument("--seed-corpus", metavar="DIR", help="run on every *.json spec in DIR")

    parser = argparse.ArgumentParser(prog="npcert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", parents=[common, surface], help="invariants and positivity of a surface")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("coh", parents=[common, surface], help="cohomology of phi*(D + tB)")
    p.add_argument("--class", dest="cls", type=_int_list, default=None, help="base coordinates of D (default 0)")
    p.add_argument("--twists", type=_twists, default=[0, 1, 2, 3], help="t range a:b or list (default 0:3)")
    p.set_defaults(func=cmd_coh)

    p = sub.add_parser("certify", parents=[common, surface], help="certify N_p for K+rB")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="omit to search for the least r")
    p.add_argument("--rules", type=lambda s: s.split(","), default=None, help="restrict to these rule ids")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("family", parents=[common], help="enumerate or build an example family")
    p.add_argument("family_id", choices=families.FAMILY_IDS)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=None, help="second parameter for ex5_7")
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--m-max", type=int, default=40, help="m search bound for ex5_5")
    p.add_argument("--d", type=int, default=3, help="cover degree for ex5_5")
    p.add_argument("--shape", choices=("ex5_3", "ex5_4"), default="ex5_3", help="claim set for ex5_5")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify-examples", parents=[common], help="check pinned example values and property suites")
    p.add_argument("--claims", metavar="FILE", default=None, help="pinned-claims JSON (default: bundled corpus)")
    p.set_defaults(func=cmd_verify_examples)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("n_max", "r_cap"):
        value = getattr(args, flag, None)
        if value is not None and value < 2:
            parser.error(f"--{flag.replace('_', '-')} must be at least 2")
    try:
        rep = args.func(args)
    except (SpecError, UsageError, PinError) as exc:
        print(f"npcert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"npcert: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalInconsistency, FamilyInconsistency) as exc:
        print(f"npcert: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    sys.stdout.write(rep.machine_text() if args.json else rep.human_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
