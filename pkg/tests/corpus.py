"""Shared ring corpus for the structural and closure checks."""

from __future__ import annotations

from functools import lru_cache

from armendariz.constructions import ideal_closure, quotient
from armendariz.dsl import build
from armendariz.structure import jacobson_radical

BASE_EXPRS = (
    [f"zmod({n})" for n in range(2, 17)]
    + ["gf(2)", "gf(3)", "gf(2,2)", "gf(5)", "gf(7)", "gf(2,3)", "gf(3,2)"]
    + ["t(2,gf(2))", "m(2,gf(2))", "trivext(zmod(4))"]
)


@lru_cache(maxsize=None)
def base_rings() -> tuple:
    return tuple(build(e) for e in BASE_EXPRS)


@lru_cache(maxsize=None)
def quotient_rings() -> tuple:
    """R/I for every distinct proper nonzero principal two-sided ideal I of a base ring."""
    out = []
    for R in base_rings():
        seen = set()
        for x in range(R.size):
            I = ideal_closure(R, [x])
            if len(I) in (1, R.size) or I in seen:
                continue
            seen.add(I)
            Q = quotient(R, [x], name=f"{R.name}/({R.label(x)})")
            out.append(Q)
        J = frozenset(jacobson_radical(R))
        if len(J) > 1 and J not in seen:
            out.append(quotient(R, tuple(J), name=f"{R.name}/J"))
    return tuple(out)


@lru_cache(maxsize=None)
def corpus(max_size: int = 64) -> tuple:
    return tuple(R for R in base_rings() + quotient_rings() if R.size <= max_size)
