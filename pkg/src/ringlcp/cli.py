"""``ringlcp`` command line.

Exit codes: 0 when a report was produced (whatever it says), 1 for usage or
input errors, 2 when applicable criteria disagree or an internal check
fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .budget import default_budget
from .codes import dual, min_distance, parity_generators, weight_distribution
from .config import load_code, load_ring
from .equiv import equivalent
from .errors import RingLcpError
from .lcp import CRITERIA, check_lcp, literals, projection_idempotent, security_parameter, theorem_5_3_pipeline
from .reproduce import EXAMPLES, reproduce


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with 2, which is reserved
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(obj, as_json: bool, human) -> None:
    if as_json:
        sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
    else:
        human(obj)


def _budget(args):
    b = default_budget()
    if getattr(args, "samples", None):
        b = b.with_(samples=args.samples)
    return b


def _codes(args, names):
    alg = load_ring(args.ring)
    return alg, [load_code(getattr(args, n), alg)[1] for n in names]


def _rows(alg, M) -> list[list[str]]:
    return [literals(alg, r) for r in M]


# ----------------------------------------------------------------------


def cmd_ring_info(args) -> int:
    alg = load_ring(args.ring)
    J = alg.jacobson_radical()
    cert = alg.frobenius_certificate()
    info = {
        "name": alg.name,
        "p": alg.p,
        "dim": alg.d,
        "order": alg.order,
        "basis": list(alg.basis_names),
        "units": int(alg.units_mask.sum()),
        "radical_basis": _rows(alg, J.basis),
        "radical_dim": J.dim,
        "nilpotency_index": alg.nilpotency_index(),
        "residue_dim": alg.residue_dim,
        "local": alg.is_local,
        "commutative": alg.commutative,
        "socle_right_dim": alg.socle_right().dim,
        "socle_left_dim": alg.socle_left().dim,
        "frobenius_certificate": cert.as_dict(),
    }

    def human(o):
        for k, v in o.items():
            print(f"{k:>22}: {v}")

    _emit(info, args.json, human)
    return 0


def cmd_check_lcp(args) -> int:
    alg, (C, D) = _codes(args, ["C", "D"])
    methods = None if args.methods == "all" else [m.strip() for m in args.methods.split(",") if m.strip()]
    if methods:
        bad = [m for m in methods if m not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}; choose from {', '.join(CRITERIA)}")
    report = check_lcp(
        C, D, methods, budget=_budget(args), sample=args.sample, seed=args.seed,
        workers=args.workers, timing=args.timing, security=args.security,
    )

    def human(o):
        print(f"ring {o['ring']}, n = {o['n']}: LCP = {o['verdict']}  (criteria consistent: {o['consistent']})")
        for v in o["criteria"]:
            line = f"  {v['criterion']:<20} {v['verdict']}"
            if v["witness"]:
                line += f"  witness={json.dumps(v['witness'], ensure_ascii=False)}"
            print(line)
        if o["security"]:
            print(f"  security: d(C) = {o['security']['d_C']}, d(D^perp) = {o['security']['d_Dperp']}")

    _emit(report.to_dict(), args.json, human)
    return 0 if report.consistent else 2


def cmd_dual(args) -> int:
    alg, (C,) = _codes(args, ["C"])
    Dl = dual(C)
    H, minimal = parity_generators(C)
    out = {
        "side": Dl.side,
        "n": Dl.n,
        "cardinality": Dl.cardinality,
        "dim_Fp": Dl.dim,
        "cardinality_product_matches": C.cardinality * Dl.cardinality == alg.order**C.n,
        "parity_generators": H.to_literals(),
        "parity_generators_minimal": minimal,
        "basis_Fp": _rows(alg, Dl.basis),
    }

    def human(o):
        print(f"dual: left submodule of R^{o['n']}, |C^perp| = {o['cardinality']}")
        print(f"parity generators ({'minimal' if minimal else 'not necessarily minimal'}):")
        for row in o["parity_generators"]:
            print("  " + "  ".join(row))

    _emit(out, args.json, human)
    return 0


def cmd_min_distance(args) -> int:
    alg, (C,) = _codes(args, ["C"])
    out = {"n": C.n, "cardinality": C.cardinality, "min_distance": min_distance(C, _budget(args)),
           "weight_distribution": weight_distribution(C, _budget(args))}
    _emit(out, args.json, lambda o: print(f"d(C) = {o['min_distance']}; weights {o['weight_distribution']}"))
    return 0


def cmd_security(args) -> int:
    alg, (C, D) = _codes(args, ["C", "D"])
    sec = security_parameter(C, D, _budget(args))
    _emit(sec.as_dict(), args.json, lambda o: print(f"d(C) = {o['d_C']}, d(D^perp) = {o['d_Dperp']}"))
    return 0


def cmd_idempotent(args) -> int:
    alg, (C, D) = _codes(args, ["C", "D"])
    pr = projection_idempotent(C, D)
    out = {
        "e": pr.e.to_literals(),
        "e_idempotent": pr.e_idempotent,
        "P_idempotent": pr.P_idempotent,
        "image_is_C": pr.image_is_C,
        "complement_is_D": pr.complement_is_D,
    }

    def human(o):
        print("e =")
        for row in o["e"]:
            print("  " + "  ".join(row))
        print(f"e^2 = e: {o['e_idempotent']}; projection P = e^T idempotent: {o['P_idempotent']}")

    _emit(out, args.json, human)
    return 0


def cmd_equivalence(args) -> int:
    alg, (C, D) = _codes(args, ["C", "D"])
    if args.pipeline:
        out = theorem_5_3_pipeline(C, D, _budget(args)).to_dict()
    else:
        out = equivalent(C.module, D.module, _budget(args)).to_dict()
    _emit(out, args.json, lambda o: print(json.dumps(o, indent=2, ensure_ascii=False)))
    return 0


def cmd_reproduce(args) -> int:
    examples = None if args.examples == "all" else [x.strip() for x in args.examples.split(",") if x.strip()]
    if examples:
        bad = [x for x in examples if x not in EXAMPLES]
        if bad:
            raise UsageError(f"unknown examples {bad}; choose from {', '.join(EXAMPLES)}")
    try:
        sweep = tuple(int(t) for t in args.q_sweep.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--q-sweep expects primes separated by commas, got {args.q_sweep!r}") from None
    rep = reproduce(examples, sweep, _budget(args), args.workers)

    def human(o):
        for e in o["examples"]:
            flag = "  [discrepancy]" if e["discrepancy"] else ""
            print(f"example {e['example']} over {e['observations']['ring']}{flag}")
            for c in e["claims"]:
                extra = f"  per q: {c['per_q']}" if "per_q" in c else ""
                print(f"  {c['status']:<21} {c['name']}: {c['statement']}{extra}")
        print(f"summary: {o['summary']}")

    _emit(rep, args.json, human)
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ringlcp", description="Linear complementary pairs of codes over finite rings.")
    ap.add_argument("--version", action="version", version=f"ringlcp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, workers=False):
        p.add_argument("--json", action="store_true", help="emit JSON")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="parallel workers (output does not depend on it)")
        return p

    p = common(sub.add_parser("ring-info", help="radical, units, socle and locality of a ring"))
    p.add_argument("ring", help="preset such as 'ut2(3)' or a ring file")
    p.set_defaults(func=cmd_ring_info)

    p = common(sub.add_parser("check-lcp", help="run every LCP criterion on a pair of codes"), workers=True)
    p.add_argument("ring")
    p.add_argument("C")
    p.add_argument("D")
    p.add_argument("--methods", default="all", help=f"'all' or a comma list of {', '.join(CRITERIA)}")
    p.add_argument("--timing", action="store_true", help="record per-criterion wall time")
    p.add_argument("--sample", action="store_true", help="sample x-scans that exceed the budget (one-sided)")
    p.add_argument("--samples", type=int, default=None, help="number of samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--security", action="store_true", help="also compute (d(C), d(D^perp))")
    p.set_defaults(func=cmd_check_lcp)

    p = common(sub.add_parser("dual", help="dual code and parity generators"))
    p.add_argument("ring")
    p.add_argument("C")
    p.set_defaults(func=cmd_dual)

    p = common(sub.add_parser("min-distance", help="minimum distance and weight distribution"))
    p.add_argument("ring")
    p.add_argument("C")
    p.set_defaults(func=cmd_min_distance)

    p = common(sub.add_parser("security", help="security parameter (d(C), d(D^perp))"))
    p.add_argument("ring")
    p.add_argument("C")
    p.add_argument("D")
    p.set_defaults(func=cmd_security)

    p = common(sub.add_parser("idempotent", help="projection idempotent of an LCP pair"))
    p.add_argument("ring")
    p.add_argument("C")
    p.add_argument("D")
    p.set_defaults(func=cmd_idempotent)

    p = common(sub.add_parser("equivalence", help="equivalence of two codes, or the duality pipeline"))
    p.add_argument("ring")
    p.add_argument("C")
    p.add_argument("D")
    p.add_argument("--pipeline", action="store_true", help="treat (C, D) as an LCP pair and compare duals with partners")
    p.set_defaults(func=cmd_equivalence)

    p = common(sub.add_parser("reproduce", help="re-check the worked examples"), workers=True)
    p.add_argument("--examples", default="all", help=f"'all' or a comma list of {', '.join(EXAMPLES)}")
    p.add_argument("--q-sweep", default="2,3,5", help="primes for the swept example")
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        ap.error("--workers must be at least 1")
    try:
        return args.func(args)
    except (UsageError, RingLcpError, ValueError, OSError) as exc:
        print(f"ringlcp: error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"ringlcp: internal check failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
