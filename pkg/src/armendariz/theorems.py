"""Bounded checks of the closure results for J-Armendariz rings.

Every proof involved maps polynomials to polynomials of the same or smaller
degree, so each statement has an exact analogue at fixed bounds (df, dg):
"J-Armendariz" is read as "classify(..., JAC, df, dg) is Verified".
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .checker import COUNTEREXAMPLE, VERIFIED, ClassificationReport, DEFAULT_BUDGET, classify
from .constructions import (
    BimoduleTriangularSpec,
    corner,
    direct_product,
    ideal_closure,
    quotient,
    triangular,
    trivial_extension,
    upper_triangular,
)
from .core import TableRing, materialize
from .structure import idempotents, is_abelian, is_local, jacobson_radical

THEOREM_IDS = ("V-QUOT", "V-LOCAL", "V-PROD", "V-TRI", "V-TN", "V-TRIV", "V-CORNER")


@dataclass
class TheoremVerdict:
    theorem_id: str
    instance: list[str]
    bounds: tuple[int, int]
    holds: bool
    vacuous: bool = False
    detail: dict[str, str] = field(default_factory=dict)
    counterexample: ClassificationReport | None = None

    @property
    def status(self) -> str:
        if not self.holds:
            return "fails"
        return "holds-vacuously" if self.vacuous else "holds"

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "instance": self.instance,
            "bounds": list(self.bounds),
            "status": self.status,
            "detail": dict(self.detail),
        }


def table_digest(R: TableRing) -> str:
    """Content hash of a table ring; equal digests mean identical tables."""
    h = hashlib.sha256()
    h.update(f"{R.size}:{R.zero}:{R.one}:".encode())
    h.update(R.add_table.tobytes())
    h.update(R.mul_table.tobytes())
    return h.hexdigest()


class _Runner:
    def __init__(self, bounds, budget, workers, memo: dict | None = None):
        self.df, self.dg = bounds
        self.budget = budget
        self.workers = workers
        self.memo = memo
        self.reports: dict[str, ClassificationReport] = {}

    def jarm(self, name: str, R) -> bool:
        R = materialize(R)
        key = (table_digest(R), self.df, self.dg) if self.memo is not None else None
        rep = self.memo.get(key) if key is not None else None
        if rep is None:
            rep = classify(R, "JAC", self.df, self.dg, mode="exhaustive",
                           budget=self.budget, workers=self.workers)
            if key is not None:
                self.memo[key] = rep
        self.reports[name] = rep
        return rep.verdict == VERIFIED

    def detail(self) -> dict[str, str]:
        return {k: v.verdict for k, v in self.reports.items()}

    def failing(self, *names) -> ClassificationReport | None:
        for n in names:
            rep = self.reports.get(n)
            if rep is not None and rep.verdict == COUNTEREXAMPLE:
                return rep
        return None


def _equivalence(tid, names, run: _Runner, whole: str, parts: list[str], bounds):
    whole_ok = run.reports[whole].verdict == VERIFIED
    parts_ok = all(run.reports[p].verdict == VERIFIED for p in parts)
    holds = whole_ok == parts_ok
    cex = None
    if not holds:
        cex = run.failing(whole) if parts_ok else run.failing(*parts)
    return TheoremVerdict(tid, names, bounds, holds, False, run.detail(), cex)


def validate_theorem(theorem_id: str, instance: tuple, bounds=(1, 1),
                     budget: int = DEFAULT_BUDGET, workers: int = 1,
                     memo: dict | None = None) -> TheoremVerdict:
    """Evaluate one closure statement on concrete rings.

    Instances: V-QUOT (R, ideal generators or None for J(R)); V-LOCAL (R,);
    V-PROD (R, S); V-TRI (R,); V-TN (R, n); V-TRIV (R,); V-CORNER (R, e).
    ``memo`` shares verdicts between calls, keyed by table content and bounds.
    """
    tid = theorem_id.upper()
    bounds = tuple(bounds)
    run = _Runner(bounds, budget, workers, memo)
    R = materialize(instance[0])
    names = [R.name]

    if tid == "V-QUOT":
        gens = instance[1] if len(instance) > 1 else None
        J = jacobson_radical(R)
        gens = tuple(J) if gens is None else tuple(gens)
        names.append("<" + ",".join(R.label(g) for g in gens) + ">")
        inside = ideal_closure(R, gens) <= set(J)
        Q = quotient(R, gens)
        q_ok = run.jarm("R/I", Q)
        r_ok = run.jarm("R", R)
        run_detail = run.detail()
        run_detail["I_in_J"] = str(inside)
        if not inside or not q_ok:
            return TheoremVerdict(tid, names, bounds, True, True, run_detail)
        return TheoremVerdict(tid, names, bounds, r_ok, False, run_detail,
                              None if r_ok else run.failing("R"))

    if tid == "V-LOCAL":
        local = is_local(R)
        if not local:
            return TheoremVerdict(tid, names, bounds, True, True, {"local": "False"})
        ok = run.jarm("R", R)
        d = run.detail()
        d["local"] = "True"
        return TheoremVerdict(tid, names, bounds, ok, False, d, run.failing("R"))

    if tid == "V-PROD":
        S = materialize(instance[1])
        names.append(S.name)
        run.jarm("R", R)
        run.jarm("S", S)
        run.jarm("RxS", direct_product(R, S))
        return _equivalence(tid, names, run, "RxS", ["R", "S"], bounds)

    if tid == "V-TRI":
        run.jarm("R", R)
        run.jarm("T", triangular(BimoduleTriangularSpec(R, R)))
        return _equivalence(tid, names, run, "T", ["R"], bounds)

    if tid == "V-TN":
        n = int(instance[1]) if len(instance) > 1 else 2
        names.append(f"n={n}")
        run.jarm("R", R)
        run.jarm("Tn", upper_triangular(n, R))
        return _equivalence(tid, names, run, "Tn", ["R"], bounds)

    if tid == "V-TRIV":
        run.jarm("R", R)
        run.jarm("T(R,R)", trivial_extension(R))
        return _equivalence(tid, names, run, "T(R,R)", ["R"], bounds)

    if tid == "V-CORNER":
        e = instance[1]
        names.append(f"e={R.label(e)}")
        C = corner(R, e)
        r_ok = run.jarm("R", R)
        c_ok = run.jarm("eRe", C)
        d = run.detail()
        abelian = bool(is_abelian(R))
        d["abelian"] = str(abelian)
        forward = (not r_ok) or c_ok
        if not forward:
            return TheoremVerdict(tid, names, bounds, False, False, d, run.failing("eRe"))
        if abelian:
            # converse: eRe J-Armendariz => R J-Armendariz, for abelian R
            converse = (not c_ok) or r_ok
            return TheoremVerdict(tid, names, bounds, converse, not r_ok and not c_ok, d,
                                  None if converse else run.failing("R"))
        return TheoremVerdict(tid, names, bounds, True, not r_ok, d)

    raise ValueError(f"unknown theorem {theorem_id!r}; expected one of {THEOREM_IDS}")


def corpus_instances(rings: list[TableRing], max_size: int = 64) -> list[tuple[str, tuple]]:
    """Every validator instance generated from a ring corpus.

    Constructed rings larger than ``max_size`` are left out.
    """
    out: list[tuple[str, tuple]] = []
    for R in rings:
        out.append(("V-LOCAL", (R,)))
        J = jacobson_radical(R)
        out.append(("V-QUOT", (R, None)))
        seen = {frozenset(J)}
        for j in J:
            I = ideal_closure(R, [j])
            if I not in seen:
                seen.add(I)
                out.append(("V-QUOT", (R, (j,))))
        if R.size**2 <= max_size:
            out.append(("V-TRIV", (R,)))
        if R.size**3 <= max_size:
            out.append(("V-TRI", (R,)))
            out.append(("V-TN", (R, 2)))
        for e in idempotents(R):
            out.append(("V-CORNER", (R, e)))
    for i, R in enumerate(rings):
        for S in rings[i:]:
            if R.size * S.size <= max_size:
                out.append(("V-PROD", (R, S)))
    return out


def validate_corpus(instances, bounds=(1, 1), budget: int = DEFAULT_BUDGET,
                    workers: int = 1) -> list[TheoremVerdict]:
    """Run every instance, classifying each distinct ring once."""
    memo: dict = {}
    return [validate_theorem(tid, inst, bounds, budget, workers, memo) for tid, inst in instances]
