"""Polynomials in a central indeterminate x over a (noncommutative) finite ring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import FiniteRing, RingError


class RingMismatch(RingError):
    pass


def _trim(R: FiniteRing, coeffs: Sequence) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == R.zero:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class NCPolynomial:
    """Coefficients lowest degree first; the zero polynomial is ``()``."""

    ring: FiniteRing
    coeffs: tuple

    def __init__(self, ring: FiniteRing, coeffs: Sequence = ()):
        ring.check(*coeffs)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", _trim(ring, coeffs))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def __add__(self, other: "NCPolynomial") -> "NCPolynomial":
        _same(self, other)
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return NCPolynomial(R, [R.add(self[i], other[i]) for i in range(n)])

    def __neg__(self) -> "NCPolynomial":
        return NCPolynomial(self.ring, [self.ring.neg(a) for a in self.coeffs])

    def __sub__(self, other: "NCPolynomial") -> "NCPolynomial":
        return self + (-other)

    def __mul__(self, other: "NCPolynomial") -> "NCPolynomial":
        return poly_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.ring), self.coeffs))

    def labels(self) -> list[str]:
        return [self.ring.label(a) for a in self.coeffs]

    def render(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"NCPolynomial({self.render()})"


def _same(f: NCPolynomial, g: NCPolynomial) -> None:
    if f.ring is not g.ring:
        raise RingMismatch(f"polynomials over {f.ring.name} and {g.ring.name}")


def poly_mul(f: NCPolynomial, g: NCPolynomial) -> NCPolynomial:
    """Convolution with the left factor always taken from ``f``."""
    _same(f, g)
    R = f.ring
    if f.is_zero() or g.is_zero():
        return NCPolynomial(R, ())
    out = [R.zero] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] = R.add(out[i + j], R.mul(a, b))
    return NCPolynomial(R, out)


def coefficient_products(f: NCPolynomial, g: NCPolynomial) -> list[tuple[int, int, object]]:
    """All (i, j, a_i * b_j) in i-major order."""
    _same(f, g)
    R = f.ring
    return [(i, j, R.mul(a, b)) for i, a in enumerate(f.coeffs) for j, b in enumerate(g.coeffs)]


def render(f: NCPolynomial) -> str:
    R = f.ring
    terms = []
    for i, a in enumerate(f.coeffs):
        if a == R.zero:
            continue
        lab = R.label(a)
        if i == 0:
            terms.append(lab)
        elif i == 1:
            terms.append(f"{lab}·x")
        else:
            terms.append(f"{lab}·x^{i}")
    return " + ".join(terms) or "0"


def from_labels(R, labels: Sequence[str]) -> NCPolynomial:
    """Build a polynomial over a table ring from coefficient labels."""
    return NCPolynomial(R, [R.index_of_label(s) for s in labels])
