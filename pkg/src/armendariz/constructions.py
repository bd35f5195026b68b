"""Ring constructions: base rings, matrix-type rings, products, extensions,
corners, quotients, truncated series, generated subrings and the two bespoke
rings built from truncated power series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DEFAULT_CAP,
    CapExceeded,
    FiniteRing,
    RingError,
    StructuredRing,
    TableRing,
    materialize,
    table_from_rows,
)


class NotIdempotent(RingError):
    pass


class UnsupportedBimodule(RingError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _base(R: FiniteRing, cap: int) -> TableRing:
    return materialize(R, cap)


# -- base rings ---------------------------------------------------------------

def zmod(n: int) -> TableRing:
    if n < 2:
        raise ValueError("zmod needs n >= 2")
    i = np.arange(n)
    return TableRing(
        (i[:, None] + i[None, :]) % n,
        (i[:, None] * i[None, :]) % n,
        [str(v) for v in range(n)],
        zero=0,
        one=1,
        name=f"zmod({n})",
    )


def trivial_ring() -> TableRing:
    z = np.zeros((1, 1), dtype=np.int64)
    return TableRing(z, z, ["0"], zero=0, one=0, name="trivial")


def _poly_mod(coeffs: list[int], modulus: list[int], p: int) -> list[int]:
    # modulus is monic, lowest degree first
    c = list(coeffs)
    k = len(modulus) - 1
    for d in range(len(c) - 1, k - 1, -1):
        lead = c[d] % p
        if lead:
            for i in range(k + 1):
                c[d - k + i] = (c[d - k + i] - lead * modulus[i]) % p
    return [v % p for v in c[:k]] + [0] * max(0, k - len(c))


def _is_irreducible(poly: list[int], p: int) -> bool:
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_mod(poly, divisor, p)):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> list[int]:
    """Least monic irreducible of degree ``k`` over F_p, coefficients low to high.

    Candidates are ordered by the integer ``sum c_i p^i`` of the non-leading part.
    """
    for code in range(p**k):
        tail = [(code // p**i) % p for i in range(k)]
        poly = tail + [1]
        if k == 1 or (tail[0] != 0 and _is_irreducible(poly, p)):
            return poly
    raise RingError(f"no irreducible of degree {k} over F_{p}")


def _gf_label(coeffs: Sequence[int]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "a" if i == 1 else f"a^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) or "0"


def gf(p: int, k: int = 1) -> TableRing:
    """Field of order ``p**k``; index ``sum c_i p^i`` encodes ``sum c_i a^i``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("gf degree must be >= 1")
    if k == 1:
        R = zmod(p)
        R.name = f"gf({p},1)"
        return R
    q = p**k
    modulus = smallest_irreducible(p, k)
    digits = np.array([[(v // p**i) % p for i in range(k)] for v in range(q)], dtype=np.int64)
    weights = p ** np.arange(k)
    # reduce x^e for e < 2k-1 once
    reduced = np.array(
        [_poly_mod([0] * e + [1], modulus, p) for e in range(2 * k - 1)], dtype=np.int64
    )
    add_t = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    mul_t = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        conv = np.zeros((q, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            if digits[a, i]:
                conv[:, i : i + k] += digits[a, i] * digits
        mul_t[a] = ((conv @ reduced) % p) @ weights
    return TableRing(add_t, mul_t, [_gf_label(d) for d in digits], zero=0, one=1,
                     name=f"gf({p},{k})")


# -- structured constructions ---------------------------------------------------

def _matrix_labeler(n: int, shape: Sequence[tuple[int, int]] | None):
    def label(S: StructuredRing, x: tuple) -> str:
        base = S.bases[0]
        entries = [[base.labels[base.zero]] * n for _ in range(n)]
        pos = shape or [(i, j) for i in range(n) for j in range(n)]
        for (i, j), v in zip(pos, x):
            entries[i][j] = base.labels[v]
        return "[" + ",".join("[" + ",".join(row) + "]" for row in entries) + "]"

    return label


def matrix_ring(n: int, R: FiniteRing, cap: int = DEFAULT_CAP) -> StructuredRing:
    """Full n x n matrices over ``R``; components are entries in row-major order."""
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    B = _base(R, cap)
    pos = {(i, j): i * n + j for i in range(n) for j in range(n)}
    terms = [[(pos[i, k], pos[k, j]) for k in range(n)] for i in range(n) for j in range(n)]
    one = tuple(B.one if i == j else B.zero for i in range(n) for j in range(n))
    return StructuredRing(f"m({n},{B.name})", [B], [0] * (n * n), terms, one,
                          _matrix_labeler(n, None), kind="matrix")


def upper_triangular(n: int, R: FiniteRing, cap: int = DEFAULT_CAP) -> StructuredRing:
    """T_n(R): components are the entries on and above the diagonal, row-major."""
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    B = _base(R, cap)
    shape = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {ij: c for c, ij in enumerate(shape)}
    terms = [[(pos[i, k], pos[k, j]) for k in range(i, j + 1)] for i, j in shape]
    one = tuple(B.one if i == j else B.zero for i, j in shape)
    return StructuredRing(f"t({n},{B.name})", [B], [0] * len(shape), terms, one,
                          _matrix_labeler(n, shape), kind="upper")


def direct_product(R: FiniteRing, S: FiniteRing, cap: int = DEFAULT_CAP) -> StructuredRing:
    A, B = _base(R, cap), _base(S, cap)

    def label(P, x):
        return f"({A.labels[x[0]]},{B.labels[x[1]]})"

    return StructuredRing(f"prod({A.name},{B.name})", [A, B], [0, 1], [[(0, 0)], [(1, 1)]],
                          (A.one, B.one), label, kind="product")


def trivial_extension(R: FiniteRing, cap: int = DEFAULT_CAP) -> StructuredRing:
    """T(R,R): pairs (r, m) with (r1, m1)(r2, m2) = (r1 r2, r1 m2 + m1 r2)."""
    B = _base(R, cap)

    def label(P, x):
        return f"({B.labels[x[0]]},{B.labels[x[1]]})"

    return StructuredRing(f"trivext({B.name})", [B], [0, 0],
                          [[(0, 0)], [(0, 1), (1, 0)]], (B.one, B.zero), label, kind="trivext")


@dataclass(frozen=True)
class BimoduleTriangularSpec:
    upper: FiniteRing
    lower: FiniteRing
    module: str = "same-ring"


def _same_tables(R: FiniteRing, S: FiniteRing) -> bool:
    if R is S:
        return True
    return (isinstance(R, TableRing) and isinstance(S, TableRing) and R.size == S.size
            and R.one == S.one and np.array_equal(R.add_table, S.add_table)
            and np.array_equal(R.mul_table, S.mul_table))


def triangular(spec: BimoduleTriangularSpec, cap: int = DEFAULT_CAP) -> StructuredRing:
    """Formal triangular ring (R M; 0 S) with M = R = S, components (r, m, s)."""
    if spec.module != "same-ring" or not _same_tables(spec.upper, spec.lower):
        raise UnsupportedBimodule("only M = R = S is supported")
    B = _base(spec.upper, cap)

    def label(P, x):
        r, m, s = (B.labels[v] for v in x)
        return f"[[{r},{m}],[0,{s}]]"

    # (r, m; 0, s)(r', m'; 0, s') = (r r', r m' + m s'; 0, s s')
    terms = [[(0, 0)], [(0, 1), (1, 2)], [(2, 2)]]
    return StructuredRing(f"tri({B.name})", [B], [0, 0, 0], terms, (B.one, B.zero, B.one),
                          label, kind="triangular")


def _series_labeler(S: StructuredRing, x: tuple) -> str:
    base = S.bases[0]
    parts = []
    for d, c in enumerate(x):
        if c == base.zero:
            continue
        lab = base.labels[c]
        if d == 0:
            parts.append(lab)
            continue
        mono = "t" if d == 1 else f"t^{d}"
        if c == base.one:
            parts.append(mono)
        elif any(ch in lab for ch in "+-") and not lab.startswith(("[", "(")):
            parts.append(f"({lab})*{mono}")
        else:
            parts.append(f"{lab}*{mono}")
    return "+".join(parts) or "0"


def truncated_series(R: FiniteRing, k: int, cap: int = DEFAULT_CAP) -> StructuredRing:
    """R[t]/(t^k) on coefficient vectors (c_0, ..., c_{k-1})."""
    if k < 1:
        raise ValueError("truncation must be >= 1")
    B = _base(R, cap)
    terms = [[(i, d - i) for i in range(d + 1)] for d in range(k)]
    one = (B.one,) + (B.zero,) * (k - 1)
    return StructuredRing(f"series({B.name},{k})", [B], [0] * k, terms, one, _series_labeler, kind="series")


# -- subrings, corners, quotients ----------------------------------------------

def subring_generated(ambient: FiniteRing, gens: Iterable, cap: int = DEFAULT_CAP,
                      name: str | None = None) -> TableRing:
    """Smallest subring containing ``gens`` (and 1), as a table ring.

    The subring is grown as an additive group H from a short spanning list.
    Products are bilinear, so H is closed under * once every product of two
    spanning elements lies in H; each element joining the list at least
    doubles H, which keeps the list logarithmic in the subring size.
    """
    width = ambient.width
    zero_row = np.asarray([ambient.to_row(ambient.zero)], dtype=np.int64)
    group = zero_row
    members = {int(k) for k in ambient.keys(group)}
    span: list[np.ndarray] = []
    queue = [ambient.to_row(ambient.one)] + [ambient.to_row(g) for g in gens]
    queue = [np.asarray(r, dtype=np.int64).reshape(1, width) for r in queue]
    while queue:
        v = queue.pop(0)
        if int(ambient.keys(v)[0]) in members:
            continue
        # H + <v> is the union of the cosets H + m v up to the first m v in H
        cosets = [group]
        mv = v
        while int(ambient.keys(mv)[0]) not in members:
            cosets.append(ambient.batch_add(group, mv))
            mv = ambient.batch_add(mv, v)
        group = np.concatenate(cosets)
        if len(group) > cap:
            raise CapExceeded(len(group), cap)
        members = {int(k) for k in ambient.keys(group)}
        span.append(v)
        for u in span:
            queue.append(ambient.batch_mul(v, u))
            queue.append(ambient.batch_mul(u, v))
    return table_from_rows(ambient, group, name=name or f"subring({ambient.name})")


def corner(R: TableRing, e: int) -> TableRing:
    """eRe with identity e; indices follow R's element order."""
    if R.mul(e, e) != e:
        raise NotIdempotent(f"{R.label(e)} is not idempotent")
    members = sorted({R.mul(R.mul(e, x), e) for x in range(R.size)})
    rows = np.asarray(members, dtype=np.int64).reshape(-1, 1)
    return table_from_rows(R, rows, name=f"corner({R.name},{R.label(e)})", one=e)


@dataclass(frozen=True)
class IdealSpec:
    generators: tuple


def ideal_closure(R: TableRing, generators: Iterable[int]) -> frozenset[int]:
    """Two-sided ideal generated by ``generators``.

    R is unital, so the ideal is the additive span of every r*g*s.  The span
    grows coset by coset, and generators already inside are skipped.
    """
    add, mul = R.add_table, R.mul_table
    group = np.asarray([R.zero], dtype=np.int64)
    inside = np.zeros(R.size, dtype=bool)
    inside[R.zero] = True
    for g in generators:
        if inside[g]:
            continue
        left = np.unique(mul[:, g])
        for v in np.unique(mul[left]).tolist():
            if inside[v]:
                continue
            cosets, mv = [group], v
            while not inside[mv]:
                cosets.append(add[group, mv].astype(np.int64))
                mv = int(add[mv, v])
            group = np.concatenate(cosets)
            inside[group] = True
    return frozenset(group.tolist())


def quotient(R: TableRing, I: IdealSpec | Iterable[int], name: str | None = None) -> TableRing:
    """R/I with the element-order-least member of each coset as representative."""
    gens = I.generators if isinstance(I, IdealSpec) else tuple(I)
    ideal = sorted(ideal_closure(R, gens))
    ideal_arr = np.asarray(ideal, dtype=np.int64)
    rep_of = np.full(R.size, -1, dtype=np.int64)
    reps = []
    for x in range(R.size):
        if rep_of[x] >= 0:
            continue
        coset = R.add_table[x, ideal_arr].astype(np.int64)
        rep = int(coset.min())
        rep_of[coset] = len(reps)
        reps.append(rep)
    reps_arr = np.asarray(reps, dtype=np.int64)
    add_t = rep_of[R.add_table[reps_arr[:, None], reps_arr[None, :]]]
    mul_t = rep_of[R.mul_table[reps_arr[:, None], reps_arr[None, :]]]
    labels = [R.labels[r] for r in reps]
    Q = TableRing(add_t, mul_t, labels, zero=int(rep_of[R.zero]), one=int(rep_of[R.one]),
                  name=name or f"quot({R.name})", values=[(r,) for r in reps], source=R)
    Q.projection = rep_of
    return Q


# -- the two rings built from truncated power series ---------------------------

def e2_generators(S: TableRing, k: int) -> list[tuple]:
    """{I} and t^d e_ij for i, j in the upper-left 2x2 block, 1 <= d < k."""
    gens = []
    one = tuple(S.one if i == j else S.zero for i in range(3) for j in range(3))
    gens.append(one)
    for d in range(1, k):
        td = S.index_of_label("t" if d == 1 else f"t^{d}")
        for i in range(2):
            for j in range(2):
                m = [S.zero] * 9
                m[3 * i + j] = td
                gens.append(tuple(m))
    return gens


def paper_ring(case: str, k: int = 3, cap: int = DEFAULT_CAP) -> TableRing:
    """E2: subring of M_3(F_2[t]/(t^k)) generated by I and the t-multiples of the
    upper-left block units.  E5: series over M_2(F_2) with scalar constant term."""
    case = case.upper()
    if k < 3:
        raise ValueError("truncation must be >= 3 so that degree-2 products survive")
    if case == "E2":
        S = materialize(truncated_series(gf(2), k), cap)
        A = matrix_ring(3, S, cap)
        return subring_generated(A, e2_generators(S, k), cap, name=f"paper(E2,{k})")
    if case == "E5":
        M = materialize(matrix_ring(2, gf(2)))
        size = 2 * M.size ** (k - 1)
        if size > cap:
            raise CapExceeded(size, cap)
        T = truncated_series(M, k)
        scalars = [M.zero, M.one]
        rows = [(a0,) + rest for a0 in scalars
                for rest in itertools.product(range(M.size), repeat=k - 1)]
        return table_from_rows(T, np.asarray(rows), name=f"paper(E5,{k})")
    raise ValueError(f"unknown paper ring {case!r}")

