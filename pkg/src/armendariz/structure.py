"""Structural invariants of finite rings: nilpotents, units, idempotents,
center, Jacobson radical, locality, abelianness and the power-series
non-nilpotency certificate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    FiniteRing,
    NotMaterialized,
    RingError,
    StructuredRing,
    TableRing,
)

ORACLE_CAP = 64


class OracleCapExceeded(RingError):
    pass


class WrongBackend(RingError):
    pass


@dataclass(frozen=True)
class ElementSet:
    ring: FiniteRing
    members: tuple
    kind: str

    def __contains__(self, x) -> bool:
        return x in self._set

    def __iter__(self) -> Iterator:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def _set(self) -> frozenset:
        cached = self.__dict__.get("_cached_set")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_cached_set", cached)
        return cached

    def mask(self) -> np.ndarray:
        m = np.zeros(self.ring.size, dtype=bool)
        m[list(self.members)] = True
        return m

    def labels(self) -> list[str]:
        return [self.ring.label(x) for x in self.members]


def _require_table(R: FiniteRing) -> TableRing:
    if not isinstance(R, TableRing):
        raise NotMaterialized(f"{R.name} must be materialized for set-level queries")
    return R


def _from_mask(R: TableRing, mask: np.ndarray, kind: str) -> ElementSet:
    return ElementSet(R, tuple(int(i) for i in np.flatnonzero(mask)), kind)


@dataclass(frozen=True)
class Nilpotency:
    nilpotent: bool
    index: int | None = None


def is_nilpotent(R: FiniteRing, x) -> Nilpotency:
    """Scan x, x^2, ... until zero (nilpotent) or a repeated power (not)."""
    seen = set()
    p = x
    k = 1
    while True:
        if p == R.zero:
            return Nilpotency(True, k)
        if p in seen:
            return Nilpotency(False)
        seen.add(p)
        p = R.mul(p, x)
        k += 1


def nilpotent_mask(R: TableRing) -> np.ndarray:
    R = _require_table(R)
    idx = np.arange(R.size)
    p = idx.copy()
    # 0 absorbs, and the nilpotency index is at most size
    for _ in range(R.size):
        p = R.mul_table[p, idx]
        if not np.any(p != R.zero):
            break
    return (p == R.zero) | (idx == R.zero)


def nilpotents(R: TableRing) -> ElementSet:
    return _from_mask(R, nilpotent_mask(R), "nilpotents")


def unit_mask(R: TableRing) -> np.ndarray:
    R = _require_table(R)
    left = np.any(R.mul_table == R.one, axis=1)
    if __debug__:
        right = np.any(R.mul_table == R.one, axis=0)
        assert np.array_equal(left, right), "one-sided inverse without two-sided"
    return left


def units(R: TableRing) -> ElementSet:
    return _from_mask(R, unit_mask(R), "units")


def idempotents(R: TableRing) -> ElementSet:
    R = _require_table(R)
    idx = np.arange(R.size)
    return _from_mask(R, R.mul_table[idx, idx] == idx, "idempotents")


def center(R: TableRing) -> ElementSet:
    R = _require_table(R)
    return _from_mask(R, np.all(R.mul_table == R.mul_table.T, axis=1), "center")


def jacobson_radical(R: TableRing) -> ElementSet:
    """{x : 1 - r x is a unit for every r}."""
    R = _require_table(R)
    umask = unit_mask(R)
    # column x of mul_table holds r*x for every r
    one_minus = R.add_table[R.one][R.neg_table[R.mul_table]]
    return _from_mask(R, np.all(umask[one_minus], axis=0), "radical")


def left_ideals(R: TableRing) -> set[frozenset]:
    """Every left ideal, as sums of principal left ideals R x."""
    R = _require_table(R)
    principal = {frozenset(R.mul_table[:, x].tolist()) for x in range(R.size)}
    add = R.add_table
    lattice = set(principal)
    frontier = list(principal)
    while frontier:
        nxt = []
        for a in frontier:
            arr_a = np.fromiter(a, dtype=np.int64)
            for b in principal:
                if b <= a:
                    continue
                s = frozenset(np.unique(add[arr_a[:, None], np.fromiter(b, dtype=np.int64)]).tolist())
                if s not in lattice:
                    lattice.add(s)
                    nxt.append(s)
        frontier = nxt
    return lattice


def jacobson_radical_oracle(R: TableRing, cap: int = ORACLE_CAP) -> ElementSet:
    """Intersection of the maximal left ideals, found by enumerating them all."""
    R = _require_table(R)
    if R.size > cap:
        raise OracleCapExceeded(f"oracle limited to {cap} elements, ring has {R.size}")
    proper = [I for I in left_ideals(R) if len(I) < R.size]
    maximal = [I for I in proper if not any(I < J for J in proper)]
    inter = frozenset(range(R.size))
    for I in maximal:
        inter &= I
    return ElementSet(R, tuple(sorted(inter)), "radical")


def local_witness(R: TableRing) -> int | None:
    """First element that is neither a unit nor in J(R); None when R is local."""
    umask = unit_mask(R)
    jmask = jacobson_radical(R).mask()
    bad = np.flatnonzero(~(umask | jmask))
    return int(bad[0]) if len(bad) else None


def is_local(R: TableRing) -> bool:
    if R.size == 1:
        return False
    return local_witness(R) is None


@dataclass(frozen=True)
class AbelianResult:
    abelian: bool
    idempotent: int | None = None
    element: int | None = None

    def __bool__(self) -> bool:
        return self.abelian


def is_abelian(R: TableRing) -> AbelianResult:
    R = _require_table(R)
    mul = R.mul_table
    for e in idempotents(R):
        bad = np.flatnonzero(mul[e] != mul[:, e])
        if len(bad):
            return AbelianResult(False, e, int(bad[0]))
    return AbelianResult(True)


def is_two_sided_ideal(R: TableRing, members) -> bool:
    mask = np.zeros(R.size, dtype=bool)
    m = np.asarray(list(members), dtype=np.int64)
    mask[m] = True
    if not mask[R.zero]:
        return False
    return bool(
        mask[R.add_table[m[:, None], m[None, :]]].all()
        and mask[R.mul_table[:, m]].all()
        and mask[R.mul_table[m, :]].all()
    )


# -- non-nilpotency certificate for power series -------------------------------

@dataclass(frozen=True)
class NonNilpotencyCertificate:
    element: str
    lowest_degree: int
    leading_coefficient: str
    witness_exponent_checked: int
    coefficient_ring: str

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "lowest_degree": self.lowest_degree,
            "leading_coefficient": self.leading_coefficient,
            "witness_exponent_checked": self.witness_exponent_checked,
            "coefficient_ring": self.coefficient_ring,
        }


def series_coefficients(R: FiniteRing, x) -> tuple[FiniteRing, list]:
    """Write ``x`` as sum t^d A_d; returns the coefficient ring and [A_0, A_1, ...].

    Handles truncated series rings, matrix rings over them, and table rings
    materialized from either.
    """
    if isinstance(R, TableRing):
        if R.source is None or R.values is None:
            raise WrongBackend(f"{R.name} carries no series structure")
        if getattr(R, "projection", None) is not None:
            # coset representatives do not multiply like the series they name
            raise WrongBackend(f"{R.name} is a quotient ring")
        v = R.values[x]
        return series_coefficients(R.source, v[0] if isinstance(R.source, TableRing) else v)
    if not isinstance(R, StructuredRing):
        raise WrongBackend(f"{R.name} is not series-structured")
    if R.kind == "series":
        return R.bases[0], list(x)
    if R.kind == "matrix":
        S = R.bases[0]
        if isinstance(S.source, StructuredRing) and S.source.kind == "series":
            from .constructions import matrix_ring

            series = S.source
            n = int(round(len(x) ** 0.5))
            coeff_ring = matrix_ring(n, series.bases[0])
            k = series.width
            coeffs = [tuple(S.values[v][d] for v in x) for d in range(k)]
            return coeff_ring, coeffs
    raise WrongBackend(f"{R.name} is not series-structured")


def series_nonnilpotency_certificate(R: FiniteRing, x) -> NonNilpotencyCertificate | None:
    """Certificate that ``x`` stays non-nilpotent in the untruncated series ring.

    If the lowest nonzero coefficient A_d is non-nilpotent in the coefficient
    ring, the lowest term of x^m is t^(dm) A_d^m, which never vanishes.
    Returns None (inconclusive) when A_d is nilpotent.
    """
    C, coeffs = series_coefficients(R, x)
    nonzero = [d for d, a in enumerate(coeffs) if a != C.zero]
    if not nonzero:
        raise ValueError("certificate needs a nonzero element")
    d = nonzero[0]
    lead = coeffs[d]
    scan = is_nilpotent(C, lead)
    if scan.nilpotent:
        return None
    return NonNilpotencyCertificate(
        element=R.label(x),
        lowest_degree=d,
        leading_coefficient=C.label(lead),
        witness_exponent_checked=_cycle_length(C, lead),
        coefficient_ring=C.name,
    )


def _cycle_length(C: FiniteRing, a) -> int:
    seen = set()
    p, k = a, 1
    while p not in seen:
        seen.add(p)
        p = C.mul(p, a)
        k += 1
    return k - 1


def revalidate_certificate(C: FiniteRing, lead, exponent: int) -> bool:
    p = lead
    for _ in range(exponent):
        if p == C.zero:
            return False
        p = C.mul(p, lead)
    return is_nilpotent(C, lead).nilpotent is False
