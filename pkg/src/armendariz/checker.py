"""Bounded-degree Armendariz-type classification.

Given a table ring R, a target set (``ZERO`` = {0}, ``NIL`` = Nil(R),
``JAC`` = J(R)) and degree bounds (df, dg), :func:`classify` decides whether
every pair of nonzero polynomials f, g with deg f <= df, deg g <= dg and
f g = 0 has all coefficient products a_i b_j inside the target.  A verdict is
only ever about those bounds.
"""

from __future__ import annotations

import itertools
import multiprocessing
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .core import ElementNotInRing, FiniteRing, NotMaterialized, RingError, TableRing
from .poly import NCPolynomial, coefficient_products, poly_mul
from .structure import ElementSet, is_nilpotent, jacobson_radical, nilpotents

TARGET_KINDS = ("ZERO", "NIL", "JAC")
DEFAULT_BUDGET = 10**7
DEFAULT_TRIALS = 10**5
STABILIZER_WORK = 10**6

VERIFIED = "Verified"
COUNTEREXAMPLE = "Counterexample"
UNKNOWN = "Unknown"


class BudgetExceeded(RingError):
    pass


class MalformedWitness(RingError):
    pass


@dataclass(frozen=True)
class TargetSet:
    kind: str
    resolved: ElementSet

    @property
    def mask(self) -> np.ndarray:
        return self.resolved.mask()


def resolve_target(R: TableRing, kind: str) -> TargetSet:
    kind = kind.upper()
    if kind == "ZERO":
        return TargetSet(kind, ElementSet(R, (R.zero,), "ideal"))
    if kind == "NIL":
        return TargetSet(kind, nilpotents(R))
    if kind == "JAC":
        return TargetSet(kind, jacobson_radical(R))
    raise ValueError(f"unknown target {kind!r}; expected one of {TARGET_KINDS}")


@dataclass
class Witness:
    f: tuple[int, ...]
    g: tuple[int, ...]
    i: int
    j: int
    product: int


@dataclass
class ClassificationReport:
    ring_expr: str
    ring_size: int
    target: str
    target_size: int
    bounds: tuple[int, int]
    mode: str
    verdict: str
    witness: Witness | None = None
    trials: int | None = None
    seed: int | None = None
    f_examined: int = 0
    g_leaves: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def witness_dict(self, R: TableRing) -> dict | None:
        w = self.witness
        if w is None:
            return None
        out = {
            "f": [R.label(a) for a in w.f],
            "g": [R.label(b) for b in w.g],
            "i": w.i,
            "j": w.j,
            "product": R.label(w.product),
            "target": self.target,
            "target_size": self.target_size,
        }
        if self.target == "NIL":
            out["power_trace"] = power_trace(R, w.product)
        return out


def power_trace(R: FiniteRing, x) -> list[str]:
    """Labels of x, x^2, ... up to the first repeated power."""
    seen = []
    p = x
    while p not in seen:
        seen.append(p)
        p = R.mul(p, x)
    return [R.label(v) for v in seen] + [R.label(p)]


# -- search kernel ----------------------------------------------------------------

class _Search:
    """Backtracking over g for a fixed f; all state is read-only after init."""

    def __init__(self, R: TableRing, target: TargetSet, df: int, dg: int):
        self.R = R
        self.n = R.size
        self.df = df
        self.dg = dg
        self.zero = R.zero
        self.add = R.add_rows
        self.mul = R.mul_rows
        self.neg = R._neg_l
        self.ok = target.mask.tolist()
        # ZERO and JAC are additive subgroups; Nil(R) need not be
        self.additive = target.kind in ("ZERO", "JAC")
        self._fibers: dict[int, dict[int, list[int]]] = {}
        self._stabilizers: dict[int, list[tuple[list, list]]] = {}
        from .structure import unit_mask

        self.units = [int(u) for u in np.flatnonzero(unit_mask(R))]

    def stabilizer(self, a0: int) -> list[tuple[list, list]]:
        """Row pairs (u*, *v) for unit pairs with u a0 v = a0, identity excluded."""
        st = self._stabilizers.get(a0)
        if st is None:
            mul, one = self.mul, self.R.one
            st = []
            # skipping the reduction is always sound, only slower
            units = self.units if len(self.units) ** 2 <= STABILIZER_WORK else []
            for u in units:
                ua = mul[u][a0]
                for v in units:
                    if mul[ua][v] == a0 and (u, v) != (one, one):
                        st.append((mul[u], [mul[x][v] for x in range(self.n)]))
            self._stabilizers[a0] = st
        return st

    def orbit_least(self, f: Sequence[int]) -> bool:
        """False when some u f v with u a0 v = a0 is lexicographically smaller."""
        if len(f) == 1:
            return True
        tail = f[1:]
        for left, right in self.stabilizer(f[0]):
            for a in tail:
                w = right[left[a]]
                if w != a:
                    if w < a:
                        return False
                    break
        return True

    def fiber_map(self, a: int) -> dict[int, list[int]]:
        fib = self._fibers.get(a)
        if fib is None:
            fib = {}
            for b, c in enumerate(self.mul[a]):
                fib.setdefault(c, []).append(b)
            self._fibers[a] = fib
        return fib

    def search(self, f: Sequence[int]) -> tuple[tuple | None, int]:
        """First g (lexicographic in b_0, b_1, ...) violating the target, and leaf count."""
        add, mul, neg, zero = self.add, self.mul, self.neg, self.zero
        dg = self.dg
        d = len(f) - 1
        fib = self.fiber_map(f[0])
        b = [zero] * (dg + 1)
        leaves = 0
        ok = self.ok

        def leaf():
            for k in range(dg + 1, d + dg + 1):
                acc = zero
                for i in range(k - dg, d + 1):
                    acc = add[acc][mul[f[i]][b[k - i]]]
                if acc != zero:
                    return None
            for i in range(d + 1):
                row = mul[f[i]]
                for j in range(dg + 1):
                    p = row[b[j]]
                    if not ok[p]:
                        return (tuple(b), i, j, p)
            return None

        def step(j):
            nonlocal leaves
            if j > dg:
                if all(v == zero for v in b):
                    return None
                leaves += 1
                return leaf()
            acc = zero
            for i in range(1, min(d, j) + 1):
                acc = add[acc][mul[f[i]][b[j - i]]]
            for v in fib.get(neg[acc], ()):
                b[j] = v
                hit = step(j + 1)
                if hit is not None:
                    return hit
            b[j] = zero
            return None

        return step(0), leaves

    def extend(self, f: Sequence[int], e: int, b0: int) -> list[int] | None:
        """Some (b0, b1, ..., b_e) with f g = 0, or None if b0 does not extend."""
        add, mul, neg, zero = self.add, self.mul, self.neg, self.zero
        d = len(f) - 1
        fib = self.fiber_map(f[0])
        b = [b0] + [zero] * e
        rows = [mul[a] for a in f]

        def step(j):
            acc = zero
            for i in range(1, min(d, j) + 1):
                acc = add[acc][rows[i][b[j - i]]]
            cands = fib.get(neg[acc], ())
            if j < e:
                for v in cands:
                    b[j] = v
                    if step(j + 1):
                        return True
                return False
            # coefficient k > e of f g is a_{k-e} b_e + (terms fixed by b_0..b_{e-1})
            reqs = []
            for k in range(e + 1, e + d + 1):
                rest = zero
                for i in range(k - e + 1, d + 1):
                    rest = add[rest][rows[i][b[k - i]]]
                reqs.append((rows[k - e], neg[rest]))
            for v in cands:
                for row, want in reqs:
                    if row[v] != want:
                        break
                else:
                    b[e] = v
                    return True
            return False

        return b if step(1) else None

    def lifts(self, f: Sequence[int], e: int) -> list[list[int]]:
        """Solutions (b0, ..., b_e) whose b0 values generate the projection of
        {g : f g = 0, deg g <= e} onto b0.

        That projection is a subgroup of the right annihilator of a0, so a b0
        already in the span found so far, or in a coset known not to extend,
        needs no search.
        """
        add, neg, zero = self.add, self.neg, self.zero
        span = {zero}
        bad: list[int] = []
        out = []
        for b0 in self.fiber_map(f[0]).get(zero, ()):
            if b0 in span:
                continue
            if any(add[b0][neg[r]] in span for r in bad):
                continue
            g = self.extend(f, e, b0)
            if g is None:
                bad.append(b0)
                continue
            out.append(g)
            multiples = [zero]
            m = b0
            while m != zero:
                multiples.append(m)
                m = add[m][b0]
            span = {add[p][m] for p in span for m in multiples}
        return out

    def violates_additive(self, f: Sequence[int]) -> tuple[bool, int]:
        """Decide whether some g violates, for a target closed under addition.

        {g : f g = 0, deg g <= e} is an additive group whose elements with
        b0 = 0 are x * (solutions of degree <= e - 1).  Lifts of generators of
        its b0-projection, level by level, generate it; the product map into
        R / target is additive, so checking those generators is exact.
        """
        mul, ok = self.mul, self.ok
        count = 0
        for e in range(self.dg, 0, -1):
            for g in self.lifts(f, e):
                count += 1
                for a in f:
                    row = mul[a]
                    for v in g:
                        if not ok[row[v]]:
                            return True, count
        return False, count

    def solution_group(self, f: Sequence[int], e: int) -> np.ndarray:
        """Every g = (b0, ..., b_e) with f g = 0, as rows."""
        R = self.R
        mt, at = R.mul_table, R.add_table
        if e == 0:
            fa = np.asarray(f)
            consts = np.flatnonzero(np.all(mt[fa] == self.zero, axis=0))
            return consts.reshape(-1, 1).astype(np.int64)
        lower = self.solution_group(f, e - 1)
        group = np.hstack([np.full((len(lower), 1), self.zero, dtype=np.int64), lower])
        weights = self.n ** np.arange(e, -1, -1, dtype=np.int64)
        add, zero = self.add, self.zero
        for g in self.lifts(f, e):
            multiples = []
            m = [zero] * (e + 1)
            while True:
                m = [add[u][v] for u, v in zip(m, g)]
                if all(v == zero for v in m):
                    break
                multiples.append(m)
            layers = [group] + [at[group, np.asarray(m)].astype(np.int64) for m in multiples]
            stacked = np.vstack(layers)
            _, keep = np.unique(stacked @ weights, return_index=True)
            group = stacked[np.sort(keep)]
        return group

    def violates_by_enumeration(self, f: Sequence[int]) -> tuple[bool, int]:
        group = self.solution_group(f, self.dg)
        mt = self.R.mul_table
        okv = np.asarray(self.ok)
        for a in f:
            if not okv[mt[a][group]].all():
                return True, len(group)
        return False, len(group)


def unit_orbit_minima(R: TableRing, max_work: int = 5 * 10**7) -> list[bool]:
    """Flag each a that is least in its orbit {u a v : u, v units}.

    (u f v, v^-1 g u^-1) is a violating pair exactly when (f, g) is, for every
    target kind, so only f with an orbit-least a0 need searching.  Falls back
    to flagging everything when the orbit scan would be too costly.
    """
    from .structure import unit_mask

    U = np.flatnonzero(unit_mask(R))
    if len(U) ** 2 * R.size > max_work:
        return [True] * R.size
    mul = R.mul_table
    least = [False] * R.size
    done = np.zeros(R.size, dtype=bool)
    for a in range(R.size):
        if done[a]:
            continue
        left = np.unique(mul[U, a])
        orbit = np.unique(mul[left[:, None], U[None, :]])
        done[orbit] = True
        least[int(orbit.min())] = True
    return least


def _f_blocks(R: TableRing, df: int) -> list[tuple[int, int]]:
    """(degree, a0) blocks in canonical order.

    Skipped without losing the first witness: a0 = 0 (then f = x^s f' with f'
    of lower degree and the same violations), a0 a unit (forces g = 0), and a0
    not least in its two-sided unit orbit (an earlier a0 has the same status).
    """
    from .structure import unit_mask

    units = unit_mask(R)
    least = unit_orbit_minima(R)
    blocks = []
    for d in range(df + 1):
        for a0 in range(R.size):
            if a0 == R.zero or units[a0] or not least[a0]:
                continue
            blocks.append((d, a0))
    return blocks


def _iter_block(n: int, zero: int, d: int, a0: int) -> Iterator[tuple[int, ...]]:
    if d == 0:
        yield (a0,)
        return
    nonzero = [v for v in range(n) if v != zero]
    for mid in itertools.product(range(n), repeat=d - 1):
        for ad in nonzero:
            yield (a0,) + mid + (ad,)


def _run_block(search: _Search, block) -> tuple[tuple | None, int, int]:
    d, a0 = block
    examined = 0
    leaves = 0
    for f in _iter_block(search.n, search.zero, d, a0):
        if not search.orbit_least(f):
            continue
        examined += 1
        if search.additive:
            bad, lv = search.violates_additive(f)
        else:
            bad, lv = search.violates_by_enumeration(f)
        leaves += lv
        if not bad:
            continue
        hit, lv = search.search(f)
        leaves += lv
        if hit is not None:
            g, i, j, p = hit
            return (f, g, i, j, p), examined, leaves
    return None, examined, leaves


_WORKER_SEARCH: _Search | None = None


def _worker_block(block):
    return _run_block(_WORKER_SEARCH, block)


def _sweep(search: _Search, blocks, workers: int):
    """Blocks in canonical order; stops at the first hit.  Counts are those of a
    sequential run regardless of ``workers``."""
    global _WORKER_SEARCH
    examined = leaves = 0
    if workers <= 1 or len(blocks) < 2:
        for blk in blocks:
            hit, e, lv = _run_block(search, blk)
            examined += e
            leaves += lv
            if hit is not None:
                return hit, examined, leaves
        return None, examined, leaves
    _WORKER_SEARCH = search
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        try:
            for hit, e, lv in pool.map(_worker_block, blocks, chunksize=max(1, len(blocks) // (4 * workers))):
                examined += e
                leaves += lv
                if hit is not None:
                    pool.shutdown(wait=False, cancel_futures=True)
                    return hit, examined, leaves
        finally:
            _WORKER_SEARCH = None
    return None, examined, leaves


def exhaustive_estimate(R: FiniteRing, df: int) -> int:
    return R.size ** (df + 1)


def classify(
    R: FiniteRing,
    target: str = "JAC",
    df: int = 1,
    dg: int = 1,
    mode: str = "auto",
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    ring_expr: str | None = None,
) -> ClassificationReport:
    """Search for nonzero f, g with f g = 0 and a product a_i b_j outside the target.

    ``mode`` is ``exhaustive``, ``sampled`` or ``auto`` (exhaustive when
    ``size**(df+1) <= budget``, sampled otherwise).
    """
    if not isinstance(R, TableRing):
        raise NotMaterialized(f"{R.name} must be materialized before classification")
    if df < 0 or dg < 0:
        raise ValueError("degree bounds must be >= 0")
    start = time.perf_counter()
    tset = resolve_target(R, target)
    estimate = exhaustive_estimate(R, df)
    if mode == "auto":
        mode = "exhaustive" if estimate <= budget else "sampled"
    if mode == "sample":
        mode = "sampled"
    search = _Search(R, tset, df, dg)
    report = ClassificationReport(
        ring_expr=ring_expr or R.name,
        ring_size=R.size,
        target=tset.kind,
        target_size=len(tset.resolved),
        bounds=(df, dg),
        mode=mode,
        verdict=UNKNOWN,
    )
    if mode == "exhaustive":
        if estimate > budget:
            raise BudgetExceeded(
                f"exhaustive search needs ~{estimate} f-candidates (budget {budget}); "
                "use sampled mode"
            )
        hit, report.f_examined, report.g_leaves = _sweep(
            search, _f_blocks(R, df), workers
        )
        report.verdict = VERIFIED if hit is None else COUNTEREXAMPLE
    elif mode == "sampled":
        report.trials, report.seed = trials, seed
        hit = _sample(search, trials, seed, report)
        report.verdict = UNKNOWN if hit is None else COUNTEREXAMPLE
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if hit is not None:
        f, g, i, j, p = hit
        report.witness = Witness(tuple(f), tuple(g), i, j, p)
    report.elapsed = time.perf_counter() - start
    return report


def _sample(search: _Search, trials: int, seed: int, report: ClassificationReport):
    rng = random.Random(seed)
    n, zero = search.n, search.zero
    for _ in range(trials):
        coeffs = [rng.randrange(n) for _ in range(search.df + 1)]
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        while coeffs and coeffs[0] == zero:
            coeffs.pop(0)
        if not coeffs:
            continue
        report.f_examined += 1
        hit, lv = search.search(tuple(coeffs))
        report.g_leaves += lv
        if hit is not None:
            g, i, j, p = hit
            return tuple(coeffs), g, i, j, p
    return None


def annihilator_fiber(R: TableRing, a: int, c: int) -> tuple[int, ...]:
    """{b : a b = c} in element order."""
    if not isinstance(R, TableRing):
        raise NotMaterialized("fibers need a table ring")
    return tuple(int(b) for b in np.flatnonzero(R.mul_table[a] == c))


# -- certificate replay ---------------------------------------------------------

def _resolve(R: TableRing, item) -> int:
    try:
        if isinstance(item, str):
            return R.index_of_label(item)
        R.check(item)
        return int(item)
    except ElementNotInRing as exc:
        raise MalformedWitness(str(exc)) from exc


def verify_witness(R: TableRing, target: str, f_items, g_items, i: int, j: int,
                   product) -> bool:
    """Recheck a witness from scratch: f g = 0, f, g nonzero, a_i b_j = product,
    and product outside the target set."""
    f = NCPolynomial(R, [_resolve(R, a) for a in f_items])
    g = NCPolynomial(R, [_resolve(R, b) for b in g_items])
    if f.is_zero() or g.is_zero():
        raise MalformedWitness("witness polynomials must be nonzero")
    p = _resolve(R, product)
    if not poly_mul(f, g).is_zero():
        return False
    products = {(u, v): q for u, v, q in coefficient_products(f, g)}
    if products.get((i, j)) != p:
        return False
    kind = target.upper()
    if kind == "ZERO":
        return p != R.zero
    if kind == "NIL":
        return not is_nilpotent(R, p).nilpotent
    if kind == "JAC":
        # scalar scans only: p is outside J iff 1 - r p is a non-unit for some r
        one = R.one
        unit = {u for u in range(R.size) if any(R.mul(u, v) == one for v in range(R.size))}
        return any(R.sub(one, R.mul(r, p)) not in unit for r in range(R.size))
    raise MalformedWitness(f"unknown target {target!r}")


def verify_certificate(R: TableRing, report: ClassificationReport | dict) -> bool:
    if isinstance(report, ClassificationReport):
        if report.witness is None:
            raise MalformedWitness("report carries no witness")
        w = report.witness
        return verify_witness(R, report.target, w.f, w.g, w.i, w.j, w.product)
    w = report.get("witness")
    if not w:
        raise MalformedWitness("certificate carries no witness")
    try:
        return verify_witness(R, w["target"], w["f"], w["g"], int(w["i"]), int(w["j"]),
                              w["product"])
    except KeyError as exc:
        raise MalformedWitness(f"missing witness field {exc}") from exc
