"""Finite ring abstraction shared by every other module.

Two backends exist.  :class:`TableRing` stores materialized Cayley tables and
its elements are plain ``int`` indices.  :class:`StructuredRing` evaluates
arithmetic on demand; its elements are tuples of indices into one or more
table-backed *base* rings, and multiplication is given as a bilinear rule over
those components (matrices, series, pairs, formal triangular matrices).

Both backends also expose vectorized ``batch_add``/``batch_mul`` over integer
arrays of shape ``(N, width)``; those drive materialization and closures.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Callable, Hashable, Iterator, Sequence

import numpy as np

DEFAULT_CAP = 4096
ENUM_LIMIT = 1 << 16

Element = Hashable


class RingError(Exception):
    """Base class for ring construction and arithmetic errors."""


class ElementNotInRing(RingError):
    pass


class EnumerationUnavailable(RingError):
    pass


class CapExceeded(RingError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"ring has {size} elements, above the cap of {cap}")
        self.size = size
        self.cap = cap


class NotMaterialized(RingError):
    pass


class FiniteRing:
    """Common interface.  Subclasses fill in the arithmetic."""

    name: str = "ring"
    size: int
    zero: Element
    one: Element
    width: int

    # -- scalar arithmetic (unchecked fast path) --------------------------
    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def power(self, x, n: int):
        result = self.one
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    # -- vectorized arithmetic -------------------------------------------
    def batch_add(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def batch_mul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def batch_neg(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_row(self, x) -> tuple[int, ...]:
        raise NotImplementedError

    def from_row(self, row) -> Element:
        raise NotImplementedError

    def keys(self, X: np.ndarray) -> np.ndarray:
        """Injective integer key per row, monotone in element order."""
        raise NotImplementedError

    # -- set-level ---------------------------------------------------------
    @property
    def enumerable(self) -> bool:
        return self.size <= ENUM_LIMIT

    def elements(self) -> list:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check(self, *xs) -> None:
        for x in xs:
            if not self.contains(x):
                raise ElementNotInRing(f"{x!r} is not an element of {self.name}")

    def label(self, x) -> str:
        raise NotImplementedError

    def element(self, x) -> "BoundElement":
        self.check(x)
        return BoundElement(self, x)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} size={self.size}>"


class BoundElement:
    """Element handle that remembers its ring; mixing rings raises."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: FiniteRing, value):
        self.ring = ring
        self.value = value

    def _other(self, other) -> object:
        if isinstance(other, BoundElement):
            if other.ring is not self.ring:
                raise ElementNotInRing(
                    f"cannot combine elements of {self.ring.name} and {other.ring.name}"
                )
            return other.value
        self.ring.check(other)
        return other

    def __add__(self, other):
        return BoundElement(self.ring, self.ring.add(self.value, self._other(other)))

    def __sub__(self, other):
        return BoundElement(self.ring, self.ring.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return BoundElement(self.ring, self.ring.mul(self.value, self._other(other)))

    def __neg__(self):
        return BoundElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, n: int):
        return BoundElement(self.ring, self.ring.power(self.value, n))

    def __eq__(self, other):
        if isinstance(other, BoundElement):
            return self.ring is other.ring and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), self.value))

    def __repr__(self):
        return f"{self.ring.label(self.value)}"


def ring_arithmetic(R: FiniteRing, op: str, x, y=None):
    """Checked entry point: validates membership before computing."""
    if op == "neg":
        R.check(x)
        return R.neg(x)
    if y is None:
        raise ValueError(f"{op} needs two operands")
    R.check(x, y)
    if op == "add":
        return R.add(x, y)
    if op == "mul":
        return R.mul(x, y)
    if op == "sub":
        return R.sub(x, y)
    raise ValueError(f"unknown operation {op!r}")


def _index_dtype(n: int):
    return np.uint16 if n <= 1 << 16 else np.int32


class TableRing(FiniteRing):
    """Ring given by full addition and multiplication tables on ``range(size)``.

    ``values`` optionally keeps the structured encoding each index came from
    (rows of a parent :class:`StructuredRing` named by ``source``).
    """

    width = 1

    def __init__(
        self,
        add_table,
        mul_table,
        labels: Sequence[str],
        zero: int = 0,
        one: int | None = None,
        name: str = "table",
        values: Sequence[tuple] | None = None,
        source: FiniteRing | None = None,
    ):
        add_table = np.asarray(add_table)
        mul_table = np.asarray(mul_table)
        n = add_table.shape[0]
        if add_table.shape != (n, n) or mul_table.shape != (n, n):
            raise RingError("tables must be square and of equal shape")
        if len(labels) != n:
            raise RingError("one label per element required")
        dt = _index_dtype(n)
        self.add_table = add_table.astype(dt, copy=False)
        self.mul_table = mul_table.astype(dt, copy=False)
        self.size = n
        self.zero = int(zero)
        if one is None:
            one = _find_identity(self.mul_table)
        self.one = int(one)
        self.labels = list(labels)
        self.name = name
        self.values = None if values is None else [tuple(v) for v in values]
        self.source = source
        self.neg_table = np.argmax(self.add_table == self.zero, axis=1).astype(dt)
        self._add_l: list | None = None
        self._mul_l: list | None = None
        self._neg_l = self.neg_table.tolist()
        self._label_index: dict[str, int] | None = None

    # python-list views keep scalar lookups cheap
    @property
    def add_rows(self) -> list:
        if self._add_l is None:
            self._add_l = self.add_table.tolist()
        return self._add_l

    @property
    def mul_rows(self) -> list:
        if self._mul_l is None:
            self._mul_l = self.mul_table.tolist()
        return self._mul_l

    def add(self, x, y):
        return self.add_rows[x][y]

    def neg(self, x):
        return self._neg_l[x]

    def mul(self, x, y):
        return self.mul_rows[x][y]

    def batch_add(self, X, Y):
        return self.add_table[X, Y]

    def batch_mul(self, X, Y):
        return self.mul_table[X, Y]

    def batch_neg(self, X):
        return self.neg_table[X]

    def to_row(self, x):
        return (x,)

    def from_row(self, row):
        return int(row[0])

    def keys(self, X):
        return np.asarray(X, dtype=np.int64).reshape(len(X), -1)[:, 0]

    @property
    def enumerable(self) -> bool:
        return True

    def elements(self) -> list:
        return list(range(self.size))

    def contains(self, x) -> bool:
        return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and 0 <= x < self.size

    def label(self, x) -> str:
        return self.labels[x]

    def index_of_label(self, text: str) -> int:
        if self._label_index is None:
            self._label_index = {}
            for i, lab in enumerate(self.labels):
                self._label_index.setdefault(normalize_label(lab), i)
        key = normalize_label(text)
        if key not in self._label_index:
            raise ElementNotInRing(f"no element labelled {text!r} in {self.name}")
        return self._label_index[key]


def normalize_label(text: str) -> str:
    return "".join(str(text).split()).lower()


def _find_identity(mul: np.ndarray) -> int:
    n = mul.shape[0]
    idx = np.arange(n)
    for e in range(n):
        if np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx):
            return e
    raise RingError("multiplication table has no two-sided identity")


class StructuredRing(FiniteRing):
    """Computed ring on tuples of base-ring indices with a bilinear product.

    ``comp_base[c]`` names the base ring of component ``c``; ``terms[c]`` lists
    the ``(i, j)`` pairs whose products ``x[i] * y[j]`` sum to component ``c``
    of ``x * y``.  Addition is componentwise.
    """

    def __init__(
        self,
        name: str,
        bases: Sequence[TableRing],
        comp_base: Sequence[int],
        terms: Sequence[Sequence[tuple[int, int]]],
        one: tuple[int, ...],
        labeler: Callable[["StructuredRing", tuple], str],
        kind: str = "structured",
    ):
        for b in bases:
            if not isinstance(b, TableRing):
                raise NotMaterialized("base rings of a structured ring must be table-backed")
        self.name = name
        self.kind = kind
        self.bases = list(bases)
        self.comp_base = tuple(comp_base)
        self.terms = tuple(tuple(t) for t in terms)
        self.width = len(self.comp_base)
        for c, ts in enumerate(self.terms):
            for i, j in ts:
                if self.comp_base[i] != self.comp_base[c] or self.comp_base[j] != self.comp_base[c]:
                    raise RingError("bilinear terms must stay inside one base ring")
        self.radix = tuple(self.bases[b].size for b in self.comp_base)
        self.size = math.prod(self.radix)
        self.zero = tuple(self.bases[b].zero for b in self.comp_base)
        self.one = tuple(one)
        self._labeler = labeler
        self._add = [self.bases[b].add_rows for b in self.comp_base]
        self._mul = [self.bases[b].mul_rows for b in self.comp_base]
        self._neg = [self.bases[b]._neg_l for b in self.comp_base]
        self._zeros = self.zero
        weights = []
        w = 1
        for r in reversed(self.radix):
            weights.append(w)
            w *= r
        self.weights = tuple(reversed(weights))
        self._key_dtype = np.int64 if self.size < (1 << 62) else object
        self._flat_cache: dict = {}

    def add(self, x, y):
        return tuple(a[u][v] for a, u, v in zip(self._add, x, y))

    def neg(self, x):
        return tuple(n[u] for n, u in zip(self._neg, x))

    def mul(self, x, y):
        out = []
        for c, ts in enumerate(self.terms):
            add = self._add[c]
            mul = self._mul[c]
            acc = self._zeros[c]
            for i, j in ts:
                acc = add[acc][mul[x[i]][y[j]]]
            out.append(acc)
        return tuple(out)

    def _flat(self, b: int) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
        """Flattened intp tables of base ``b``; ``np.take`` on these beats 2-D indexing."""
        cached = self._flat_cache.get(b)
        if cached is None:
            base = self.bases[b]
            cached = (base.size, base.add_table.ravel().astype(np.intp),
                      base.mul_table.ravel().astype(np.intp), base.neg_table.astype(np.intp))
            self._flat_cache[b] = cached
        return cached

    @staticmethod
    def _columns(X, Y):
        X, Y = np.broadcast_arrays(np.asarray(X), np.asarray(Y))
        return np.ascontiguousarray(X.T, dtype=np.intp), np.ascontiguousarray(Y.T, dtype=np.intp)

    def batch_add(self, X, Y):
        X, Y = self._columns(X, Y)
        out = np.empty(X.shape, dtype=np.int64)
        for c, b in enumerate(self.comp_base):
            m, add, _, _ = self._flat(b)
            out[c] = np.take(add, X[c] * m + Y[c])
        return out.T

    def batch_neg(self, X):
        X = np.asarray(X)
        out = np.empty(X.shape, dtype=np.int64)
        for c, b in enumerate(self.comp_base):
            out[:, c] = np.take(self._flat(b)[3], X[:, c])
        return out

    def batch_mul(self, X, Y):
        X, Y = self._columns(X, Y)
        out = np.empty(X.shape, dtype=np.int64)
        for c, ts in enumerate(self.terms):
            m, add, mul, _ = self._flat(self.comp_base[c])
            acc = None
            for i, j in ts:
                p = np.take(mul, X[i] * m + Y[j])
                acc = p if acc is None else np.take(add, acc * m + p)
            out[c] = acc if acc is not None else self.zero[c]
        return out.T

    def to_row(self, x):
        return tuple(x)

    def from_row(self, row):
        return tuple(int(v) for v in row)

    def keys(self, X):
        X = np.asarray(X)
        if self._key_dtype is object:
            return np.array([self.key(tuple(int(v) for v in r)) for r in X], dtype=object)
        return X.astype(np.int64) @ np.asarray(self.weights, dtype=np.int64)

    def key(self, x) -> int:
        return sum(int(v) * w for v, w in zip(x, self.weights))

    def elements(self) -> list:
        if not self.enumerable:
            raise EnumerationUnavailable(
                f"{self.name} has {self.size} elements; materialize a subring first"
            )
        return list(itertools.product(*(range(r) for r in self.radix)))

    def element_rows(self) -> np.ndarray:
        if not self.enumerable:
            raise EnumerationUnavailable(f"{self.name} has {self.size} elements")
        idx = np.unravel_index(np.arange(self.size), self.radix)
        return np.stack(idx, axis=1).astype(np.int64)

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.width
            and all(isinstance(v, (int, np.integer)) and 0 <= v < r for v, r in zip(x, self.radix))
        )

    def label(self, x) -> str:
        return self._labeler(self, x)


def all_rows(R: FiniteRing) -> np.ndarray:
    if isinstance(R, TableRing):
        return np.arange(R.size, dtype=np.int64).reshape(-1, 1)
    return R.element_rows()


def table_from_rows(
    R: FiniteRing,
    rows: np.ndarray,
    name: str,
    one=None,
    block: int = 64,
) -> TableRing:
    """Materialize the subset ``rows`` of ``R`` (closed under + and *) as a table ring.

    Rows are sorted into element order of ``R`` first.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(len(rows), R.width)
    keys = R.keys(rows)
    order = np.argsort(keys, kind="stable")
    rows = rows[order]
    keys = keys[order]
    if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
        raise RingError("duplicate elements in row set")
    n = len(rows)

    def locate(k):
        pos = np.searchsorted(keys, k)
        pos = np.minimum(pos, n - 1)
        if not np.all(keys[pos] == k):
            raise RingError(f"subset of {R.name} is not closed under the ring operations")
        return pos

    dt = _index_dtype(n)
    add_t = np.empty((n, n), dtype=dt)
    mul_t = np.empty((n, n), dtype=dt)
    for start in range(0, n, block):
        stop = min(n, start + block)
        left = np.repeat(rows[start:stop], n, axis=0)
        right = np.tile(rows, (stop - start, 1))
        add_t[start:stop] = locate(R.keys(R.batch_add(left, right))).reshape(stop - start, n)
        mul_t[start:stop] = locate(R.keys(R.batch_mul(left, right))).reshape(stop - start, n)
    zero_pos = int(locate(R.keys(np.asarray([R.to_row(R.zero)])))[0])
    if one is None:
        one = R.one
    one_pos = int(locate(R.keys(np.asarray([R.to_row(one)])))[0])
    elems = [R.from_row(r) for r in rows]
    labels = [R.label(e) for e in elems]
    values = [(e,) if isinstance(R, TableRing) else tuple(e) for e in elems]
    return TableRing(add_t, mul_t, labels, zero=zero_pos, one=one_pos, name=name,
                     values=values, source=R)


def materialize(R: FiniteRing, cap: int = DEFAULT_CAP) -> TableRing:
    """Table-backed copy of ``R`` whose indices follow ``R``'s element order."""
    if isinstance(R, TableRing):
        return R
    if R.size > cap:
        raise CapExceeded(R.size, cap)
    return table_from_rows(R, all_rows(R), name=R.name)


def ring_axioms_hold(R: FiniteRing, exhaustive_limit: int = 256, samples: int = 100_000,
                     seed: int = 0) -> bool:
    """Ring-axiom self-test: exhaustive on small rings, sampled triples otherwise."""
    if R.size <= exhaustive_limit and R.enumerable:
        rows = all_rows(R)
        n = len(rows)
        b = np.repeat(rows, n, axis=0)
        c = np.tile(rows, (n, 1))
        for i in range(n):
            a = np.broadcast_to(rows[i], b.shape)
            if not _axioms_on(R, a, b, c, rows):
                return False
        return True
    rng = random.Random(seed)
    trip = []
    for _ in range(3):
        trip.append(np.asarray([R.to_row(random_element(R, rng)) for _ in range(samples)],
                               dtype=np.int64))
    singles = trip[0][: min(samples, 4096)]
    return _axioms_on(R, *trip, singles)


def _axioms_on(R, a, b, c, singles) -> bool:
    k = R.keys
    add, mul = R.batch_add, R.batch_mul
    z = np.asarray([R.to_row(R.zero)])
    o = np.asarray([R.to_row(R.one)])
    checks = [
        (add(a, b), add(b, a)),
        (add(add(a, b), c), add(a, add(b, c))),
        (mul(mul(a, b), c), mul(a, mul(b, c))),
        (mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
        (mul(add(a, b), c), add(mul(a, c), mul(b, c))),
    ]
    s = singles
    checks += [
        (add(s, z), s),
        (add(s, R.batch_neg(s)), np.broadcast_to(z, s.shape)),
        (mul(s, o), s),
        (mul(o, s), s),
    ]
    if R.size > 1 and np.array_equal(z, o):
        return False
    return all(np.array_equal(k(np.asarray(u)), k(np.asarray(v))) for u, v in checks)


def random_element(R: FiniteRing, rng: random.Random):
    if isinstance(R, TableRing):
        return rng.randrange(R.size)
    return tuple(rng.randrange(r) for r in R.radix)


def iter_labels(R: FiniteRing, xs) -> Iterator[str]:
    for x in xs:
        yield R.label(x)
