"""Ring-expression language.

Grammar (whitespace ignored outside quoted labels, names case-insensitive)::

    expr   := "zmod(" int ")" | "gf(" int ["," int] ")"
            | "m(" int "," expr ")" | "t(" int "," expr ")" | "tri(" expr ")"
            | "prod(" expr "," expr ")" | "trivext(" expr ")"
            | "corner(" expr "," int ")" | "series(" expr "," int ")"
            | "quot(" expr "," ("rad" | label {"," label}) ")"
            | "paper(" ("e2" | "e5") "," int ")"
    label  := '"' any text without '"' '"'

``corner(R, i)`` takes the i-th idempotent of R in element order.  Quotient
generators are element labels of the inner ring: residues as integers, field
elements as polynomials in ``a``, matrices as row-major bracket lists, series
as ``c0+c1*t+...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .constructions import (
    BimoduleTriangularSpec,
    corner,
    direct_product,
    gf,
    is_prime,
    matrix_ring,
    paper_ring,
    quotient,
    triangular,
    trivial_extension,
    truncated_series,
    upper_triangular,
    zmod,
)
from .core import DEFAULT_CAP, RingError, TableRing, materialize, normalize_label
from .structure import idempotents, jacobson_radical


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


class BuildError(RingError):
    """The expression parsed but names no constructible ring."""


@dataclass(frozen=True)
class Label:
    text: str

    def __post_init__(self):
        object.__setattr__(self, "text", normalize_label(self.text))


Arg = Union[int, str, Label, "RingExpr"]


@dataclass(frozen=True)
class RingExpr:
    head: str
    args: tuple

    def serialize(self) -> str:
        return serialize(self)

    def __str__(self) -> str:
        return serialize(self)


# argument kinds: "i" int, "e" expression, "w" bare word, "L" rad-or-labels
SIGNATURES: dict[str, tuple[str, ...]] = {
    "zmod": ("i",),
    "gf": ("i", "i"),
    "m": ("i", "e"),
    "t": ("i", "e"),
    "tri": ("e",),
    "prod": ("e", "e"),
    "trivext": ("e",),
    "corner": ("e", "i"),
    "series": ("e", "i"),
    "quot": ("e", "L"),
    "paper": ("w", "i"),
}
PAPER_CASES = ("e2", "e5")


def serialize(e: RingExpr) -> str:
    parts = []
    for a in e.args:
        if isinstance(a, RingExpr):
            parts.append(serialize(a))
        elif isinstance(a, Label):
            parts.append(f'"{a.text}"')
        else:
            parts.append(str(a))
    return f"{e.head}({','.join(parts)})"


def _count(n: int) -> str:
    return "1 argument" if n == 1 else f"{n} arguments"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def offset(self, pos: int | None = None) -> int:
        return len(self.text[: self.pos if pos is None else pos].encode("utf-8"))

    def fail(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.offset(pos))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.fail(f"expected {ch!r}, found {found}")
        self.pos += 1

    def word(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.fail("expected a name")
        return self.text[start:self.pos].lower()

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def label(self) -> Label:
        self.expect('"')
        opening = self.pos - 1
        end = self.text.find('"', self.pos)
        if end < 0:
            self.fail("unterminated label", opening)
        text = self.text[self.pos:end]
        self.pos = end + 1
        if not normalize_label(text):
            self.fail("empty label", end)
        return Label(text)

    def expr(self) -> RingExpr:
        self.skip()
        start = self.pos
        head = self.word()
        if head not in SIGNATURES:
            self.fail(f"unknown constructor {head!r}", start)
        self.expect("(")
        args: list = []
        kinds = SIGNATURES[head]
        for n, kind in enumerate(kinds):
            if n:
                if head == "gf" and self.peek() == ")":
                    args.append(1)
                    break
                if self.peek() != ",":
                    self.fail(f"{head} takes {_count(len(kinds))}, got {n}")
                self.pos += 1
            args.extend(self.argument(head, kind))
        if self.peek() == ",":
            self.fail(f"{head} takes {_count(len(kinds))}, got more")
        self.expect(")")
        e = RingExpr(head, tuple(args))
        self.validate(e, start)
        return e

    def argument(self, head: str, kind: str) -> list:
        if kind == "i":
            return [self.integer()]
        if kind == "e":
            return [self.expr()]
        if kind == "w":
            pos = self.pos
            w = self.word()
            if w not in PAPER_CASES:
                self.fail(f"unknown paper ring {w!r}", pos)
            return [w]
        # rad, or one or more labels
        if self.peek() == '"':
            out = [self.label()]
            while self.peek() == ",":
                self.pos += 1
                out.append(self.label())
            return out
        pos = self.pos
        if self.word() != "rad":
            self.fail("expected 'rad' or a quoted label", pos)
        return ["rad"]

    def validate(self, e: RingExpr, start: int) -> None:
        a = e.args
        if e.head == "gf" and not is_prime(a[0]):
            self.fail(f"gf characteristic {a[0]} is not prime", start)
        if e.head == "gf" and a[1] < 1:
            self.fail("gf degree must be >= 1", start)
        if e.head == "zmod" and a[0] < 2:
            self.fail("zmod modulus must be >= 2", start)
        if e.head in ("m", "t") and a[0] < 1:
            self.fail(f"{e.head} size must be >= 1", start)
        if e.head == "series" and a[1] < 1:
            self.fail("series truncation must be >= 1", start)


def parse_ring_expr(text: str) -> RingExpr:
    p = _Parser(text)
    e = p.expr()
    if p.peek():
        p.fail("trailing input")
    return e


def canonical(text_or_expr: str | RingExpr) -> str:
    e = parse_ring_expr(text_or_expr) if isinstance(text_or_expr, str) else text_or_expr
    return serialize(e)


def build(expr: str | RingExpr, cap: int = DEFAULT_CAP, cache=None) -> TableRing:
    """Construct the table ring an expression names.

    ``cache`` is an optional :class:`~armendariz.cache.TableCache`; only the
    outermost ring is looked up and stored.
    """
    e = parse_ring_expr(expr) if isinstance(expr, str) else expr
    key = serialize(e)
    if cache is not None:
        hit = cache.load(key)
        if hit is not None:
            return hit
    R = _build(e, cap)
    if cache is not None:
        cache.store(key, R)
    return R


def _build(e: RingExpr, cap: int) -> TableRing:
    h, a = e.head, e.args
    name = serialize(e)
    if h == "zmod":
        R = zmod(a[0])
    elif h == "gf":
        if a[0] ** a[1] > cap:
            raise BuildError(f"gf({a[0]},{a[1]}) exceeds the cap of {cap}")
        R = gf(a[0], a[1])
    elif h == "m":
        R = materialize(matrix_ring(a[0], _build(a[1], cap), cap), cap)
    elif h == "t":
        R = materialize(upper_triangular(a[0], _build(a[1], cap), cap), cap)
    elif h == "tri":
        inner = _build(a[0], cap)
        R = materialize(triangular(BimoduleTriangularSpec(inner, inner), cap), cap)
    elif h == "prod":
        R = materialize(direct_product(_build(a[0], cap), _build(a[1], cap), cap), cap)
    elif h == "trivext":
        R = materialize(trivial_extension(_build(a[0], cap), cap), cap)
    elif h == "series":
        R = materialize(truncated_series(_build(a[0], cap), a[1], cap), cap)
    elif h == "corner":
        inner = _build(a[0], cap)
        idem = idempotents(inner)
        if not 0 <= a[1] < len(idem):
            raise BuildError(f"{serialize(a[0])} has {len(idem)} idempotents; index {a[1]} out of range")
        R = corner(inner, idem.members[a[1]])
    elif h == "quot":
        inner = _build(a[0], cap)
        if a[1] == "rad":
            gens = tuple(jacobson_radical(inner))
        else:
            gens = tuple(inner.index_of_label(lab.text) for lab in a[1:])
        R = quotient(inner, gens)
    elif h == "paper":
        if a[1] < 3:
            raise BuildError("paper rings need truncation >= 3")
        R = paper_ring(a[0].upper(), a[1], cap)
    else:  # pragma: no cover - the parser rejects unknown heads
        raise BuildError(f"unknown constructor {h!r}")
    R.name = name
    return R
