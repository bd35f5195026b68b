"""Command-line front end.

Exit codes: 0 verified / holds / true, 1 counterexample / witness found,
2 unknown after sampling, 3 precondition or budget failure, 4 parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cache import TableCache
from .checker import (
    COUNTEREXAMPLE,
    DEFAULT_BUDGET,
    DEFAULT_TRIALS,
    UNKNOWN,
    VERIFIED,
    MalformedWitness,
    classify,
    verify_certificate,
)
from .core import DEFAULT_CAP, RingError, TableRing
from .dsl import ParseError, build, canonical, parse_ring_expr
from .poly import NCPolynomial
from .structure import (
    center,
    idempotents,
    is_abelian,
    is_local,
    jacobson_radical,
    local_witness,
    nilpotents,
    units,
)
from .suite import CASES, SuitePrecondition, paper_suite
from .theorems import corpus_instances, validate_corpus

SCHEMA_VERSION = 1

EXIT_OK, EXIT_WITNESS, EXIT_UNKNOWN, EXIT_PRECONDITION, EXIT_PARSE = 0, 1, 2, 3, 4

TARGET_ALIASES = {
    "armendariz": "ZERO", "zero": "ZERO",
    "weak": "NIL", "nil": "NIL",
    "j": "JAC", "jac": "JAC",
}

log = logging.getLogger("armendariz")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PRECONDITION):
        super().__init__(message)
        self.code = code


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def _envelope(command: str, ring: TableRing | None, expr: str | None, parameters: dict,
              verdict, **payload) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "ring_expr": expr,
        "ring_size": ring.size if ring is not None else None,
        "parameters": parameters,
        "verdict": verdict,
    }
    doc.update(payload)
    return doc


class App:
    def __init__(self, args: argparse.Namespace, out):
        self.args = args
        self.out = out
        self.cache = TableCache(args.cache_dir) if args.cache_dir else None

    def emit(self, doc: dict, text: str) -> None:
        print(_dump(doc) if self.args.json else text, file=self.out)

    def ring(self, text: str) -> tuple[str, TableRing]:
        expr = parse_ring_expr(text)
        return canonical(expr), build(expr, cap=self.args.cap, cache=self.cache)

    # -- structure queries --------------------------------------------------

    def cmd_info(self) -> int:
        expr, R = self.ring(self.args.expr)
        J = jacobson_radical(R)
        ab = is_abelian(R)
        facts = {
            "size": R.size,
            "zero": R.label(R.zero),
            "one": R.label(R.one),
            "units": len(units(R)),
            "nilpotents": len(nilpotents(R)),
            "idempotents": len(idempotents(R)),
            "radical_size": len(J),
            "center_size": len(center(R)),
            "commutative": len(center(R)) == R.size,
            "local": is_local(R),
            "abelian": ab.abelian,
        }
        text = "\n".join([expr] + [f"  {k}: {v}" for k, v in facts.items()])
        self.emit(_envelope("info", R, expr, {}, True, info=facts), text)
        return EXIT_OK

    def cmd_radical(self) -> int:
        expr, R = self.ring(self.args.expr)
        J = jacobson_radical(R)
        labels = J.labels()
        text = f"J({expr}) has {len(J)} elements:\n" + "\n".join(f"  {s}" for s in labels)
        self.emit(_envelope("radical", R, expr, {}, True, radical=labels), text)
        return EXIT_OK

    def cmd_idempotents(self) -> int:
        expr, R = self.ring(self.args.expr)
        E = idempotents(R)
        Z = center(R)
        rows = [{"index": n, "label": R.label(e), "central": e in Z} for n, e in enumerate(E)]
        text = f"{len(E)} idempotents of {expr} (index for corner):\n" + "\n".join(
            f"  {r['index']}: {r['label']}{'' if r['central'] else '  (not central)'}" for r in rows)
        self.emit(_envelope("idempotents", R, expr, {}, True, idempotents=rows), text)
        return EXIT_OK

    def cmd_is_local(self) -> int:
        expr, R = self.ring(self.args.expr)
        local = is_local(R)
        w = None if local or R.size == 1 else local_witness(R)
        witness = None if w is None else {"element": R.label(w), "unit": False, "in_radical": False}
        if local:
            text = f"{expr} is local"
        elif w is None:
            text = f"{expr} is the zero ring, which is not local"
        else:
            text = f"{expr} is not local: {R.label(w)} is neither a unit nor in J"
        self.emit(_envelope("is-local", R, expr, {}, local, witness=witness), text)
        return EXIT_OK if local else EXIT_WITNESS

    def cmd_is_abelian(self) -> int:
        expr, R = self.ring(self.args.expr)
        ab = is_abelian(R)
        witness = None
        text = f"{expr} is abelian (every idempotent is central)"
        if not ab.abelian:
            e, x = ab.idempotent, ab.element
            witness = {"idempotent": R.label(e), "element": R.label(x),
                       "ex": R.label(R.mul(e, x)), "xe": R.label(R.mul(x, e))}
            text = (f"{expr} is not abelian: idempotent {R.label(e)} does not commute with "
                    f"{R.label(x)} ({witness['ex']} vs {witness['xe']})")
        self.emit(_envelope("is-abelian", R, expr, {}, ab.abelian, witness=witness), text)
        return EXIT_OK if ab.abelian else EXIT_WITNESS

    # -- classification -------------------------------------------------------

    def cmd_classify(self) -> int:
        a = self.args
        target = TARGET_ALIASES[a.target.lower()]
        expr, R = self.ring(a.expr)
        rep = classify(R, target, a.deg_f, a.deg_g, mode=a.mode, trials=a.trials, seed=a.seed,
                       budget=a.budget, workers=a.workers, ring_expr=expr)
        params = {"target": target, "deg_f": a.deg_f, "deg_g": a.deg_g, "mode": rep.mode}
        if rep.mode == "sampled":
            params.update(trials=a.trials, seed=a.seed)
        doc = _envelope("classify", R, expr, params, rep.verdict,
                        witness=rep.witness_dict(R),
                        stats={"f_examined": rep.f_examined, "g_leaves": rep.g_leaves,
                               "target_size": rep.target_size})
        self.emit(doc, _classify_text(R, rep))
        return {VERIFIED: EXIT_OK, COUNTEREXAMPLE: EXIT_WITNESS, UNKNOWN: EXIT_UNKNOWN}[rep.verdict]

    def cmd_check_theorems(self) -> int:
        a = self.args
        bounds = _parse_bounds(a.bounds)
        path = Path(a.corpus)
        if not path.exists():
            raise CliError(f"corpus file {path} not found")
        exprs = []
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                exprs.append(line)
        rings = [self.ring(e)[1] for e in exprs]
        results = []
        instances = corpus_instances(rings, max_size=a.max_size)
        for v in validate_corpus(instances, bounds, budget=a.budget, workers=a.workers):
            d = v.to_dict()
            if v.counterexample is not None:
                d["counterexample"] = v.counterexample.ring_expr
            results.append(d)
        failures = [r for r in results if r["status"] == "fails"]
        lines = [f"{r['theorem']:9s} {r['status']:16s} {' / '.join(r['instance'])}" for r in results]
        lines.append(f"{len(results)} instances at bounds {bounds}: {len(failures)} failing")
        params = {"bounds": list(bounds), "corpus": exprs, "max_size": a.max_size}
        doc = _envelope("check-theorems", None, None, params, not failures, results=results)
        self.emit(doc, "\n".join(lines))
        return EXIT_WITNESS if failures else EXIT_OK

    def cmd_verify_paper(self) -> int:
        a = self.args
        cases = CASES if a.case.lower() == "all" else (a.case.upper(),)
        results = paper_suite(a.truncation, budget=a.budget, cases=cases, workers=a.workers)
        ok = all(r.passed for r in results)
        lines = []
        for r in results:
            lines.append(f"{r.case}: {'pass' if r.passed else 'FAIL'}")
            lines += [f"    {'ok  ' if v else 'FAIL'} {k}" for k, v in r.checks.items()]
        params = {"case": a.case.lower(), "truncation": a.truncation}
        doc = _envelope("verify-paper", None, None, params, ok,
                        cases=[r.to_dict() for r in results])
        self.emit(doc, "\n".join(lines))
        return EXIT_OK if ok else EXIT_WITNESS

    def cmd_verify_cert(self) -> int:
        path = Path(self.args.file)
        try:
            cert = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise CliError(f"certificate {path} not found")
        except json.JSONDecodeError as exc:
            raise CliError(f"certificate is not JSON: {exc}")
        if not isinstance(cert, dict) or cert.get("command") != "classify":
            raise CliError("only classify certificates can be replayed")
        if cert.get("schema_version", 0) > SCHEMA_VERSION:
            raise CliError(f"certificate schema {cert.get('schema_version')} is newer than this tool")
        try:
            expr, R = self.ring(cert["ring_expr"])
            if cert.get("ring_size") not in (None, R.size):
                valid, how = False, "ring size differs"
            elif cert.get("witness"):
                valid, how = verify_certificate(R, cert), "witness recomputed"
            else:
                p = cert["parameters"]
                rep = classify(R, p["target"], int(p["deg_f"]), int(p["deg_g"]),
                               mode=p.get("mode", "exhaustive"),
                               trials=int(p.get("trials", DEFAULT_TRIALS)),
                               seed=int(p.get("seed", 0)), budget=self.args.budget,
                               workers=self.args.workers)
                valid, how = rep.verdict == cert.get("verdict"), "search rerun"
        except KeyError as exc:
            raise CliError(f"certificate lacks field {exc}")
        text = f"certificate {'valid' if valid else 'INVALID'} ({how})"
        doc = _envelope("verify-cert", R, expr, {"file": str(path)}, valid, method=how)
        self.emit(doc, text)
        return EXIT_OK if valid else EXIT_WITNESS


def _classify_text(R: TableRing, rep) -> str:
    head = (f"{rep.verdict}: {rep.ring_expr}, target {rep.target} (|set| = {rep.target_size}), "
            f"deg f <= {rep.bounds[0]}, deg g <= {rep.bounds[1]}, mode {rep.mode}")
    if rep.verdict == VERIFIED:
        return head + "\n  (bounded check only; higher degrees were not examined)"
    if rep.witness is None:
        return head + f"\n  no counterexample in {rep.trials} sampled f"
    w = rep.witness
    f = NCPolynomial(R, w.f)
    g = NCPolynomial(R, w.g)
    return "\n".join([
        head,
        f"  f = {f.render()}",
        f"  g = {g.render()}",
        "  f*g = 0",
        f"  a_{w.i} * b_{w.j} = {R.label(w.product)} is outside the target set",
    ])


def _parse_bounds(text: str) -> tuple[int, int]:
    try:
        n, m = (int(v) for v in text.split(","))
    except ValueError:
        raise CliError(f"bounds must look like N,M, got {text!r}")
    if n < 0 or m < 0:
        raise CliError("bounds must be non-negative")
    return n, m


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, suppress: bool):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--json", action="store_true", default=d(False),
                       help="emit one JSON document")
        p.add_argument("--cache-dir", default=d(None), help="Cayley-table cache directory")
        p.add_argument("--workers", type=int, default=d(1), help="search processes")
        p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET),
                       help="largest size**(deg_f+1) searched exhaustively")
        p.add_argument("--cap", type=int, default=d(DEFAULT_CAP),
                       help="largest ring materialized as tables")

    parser = argparse.ArgumentParser(
        prog="armendariz",
        description="Finite rings, Jacobson radicals and bounded Armendariz-type checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, suppress=True)

    for name, helptext in [("info", "size and structural counts"),
                           ("radical", "list the Jacobson radical"),
                           ("idempotents", "list idempotents in corner() index order"),
                           ("is-local", "exit 0 if local, 1 with a witness otherwise"),
                           ("is-abelian", "exit 0 if every idempotent is central")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("expr")

    p = sub.add_parser("classify", parents=[common], help="bounded Armendariz-type search")
    p.add_argument("expr")
    p.add_argument("--target", choices=sorted(TARGET_ALIASES), type=str.lower, default="j")
    p.add_argument("--deg-f", type=int, default=1)
    p.add_argument("--deg-g", type=int, default=1)
    p.add_argument("--mode", choices=["auto", "exhaustive", "sample", "sampled"], default="auto")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("check-theorems", parents=[common], help="run closure validators on a corpus")
    p.add_argument("--corpus", required=True, help="file with one ring expression per line")
    p.add_argument("--bounds", default="1,1")
    p.add_argument("--max-size", type=int, default=64,
                   help="skip constructed rings above this size")

    p = sub.add_parser("verify-paper", parents=[common], help="reproduce the worked examples")
    p.add_argument("--case", default="all", type=str.lower,
                   choices=["all"] + [c.lower() for c in CASES])
    p.add_argument("--truncation", type=int, default=3)

    p = sub.add_parser("verify-cert", parents=[common], help="replay a classify certificate")
    p.add_argument("file")
    return parser


def run_command(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors are malformed input
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    app = App(args, out)
    handler = getattr(app, "cmd_" + args.command.replace("-", "_"))
    try:
        return handler()
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (RingError, SuitePrecondition, ValueError, MalformedWitness) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main(argv: Sequence[str] | None = None) -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run_command(argv))
