"""On-disk Cayley-table cache keyed by canonical ring expression.

File layout, little-endian throughout::

    b"RNGF"  u16 version  u32 size  u16 zero  u16 one
    size*size u16 addition table (row-major)
    size*size u16 multiplication table (row-major)
    size * (u32 byte length, UTF-8 label)

Sizes up to 65536 fit the 2-byte index format; larger rings are not cached.
"""

from __future__ import annotations

import hashlib
import logging
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .core import TableRing

MAGIC = b"RNGF"
CACHE_VERSION = 1
HEADER = struct.Struct("<4sHIHH")
MAX_CACHED = 1 << 16

log = logging.getLogger(__name__)


class CorruptCacheFile(ValueError):
    pass


def encode(R: TableRing, version: int = CACHE_VERSION) -> bytes:
    n = R.size
    if n > MAX_CACHED:
        raise ValueError(f"{n} elements do not fit 2-byte indices")
    parts = [
        HEADER.pack(MAGIC, version, n, R.zero, R.one),
        R.add_table.astype("<u2").tobytes(order="C"),
        R.mul_table.astype("<u2").tobytes(order="C"),
    ]
    for lab in R.labels:
        raw = lab.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
    return b"".join(parts)


def read_version(data: bytes) -> int:
    if len(data) < HEADER.size or data[:4] != MAGIC:
        raise CorruptCacheFile("bad magic")
    return HEADER.unpack_from(data)[1]


def decode(data: bytes, name: str) -> TableRing:
    magic, _version, n, zero, one = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptCacheFile("bad magic")
    if n == 0 or n > MAX_CACHED or zero >= n or one >= n:
        raise CorruptCacheFile("header out of range")
    off = HEADER.size
    tbytes = 2 * n * n
    if len(data) < off + 2 * tbytes:
        raise CorruptCacheFile("truncated tables")
    add = np.frombuffer(data, dtype="<u2", count=n * n, offset=off).reshape(n, n)
    mul = np.frombuffer(data, dtype="<u2", count=n * n, offset=off + tbytes).reshape(n, n)
    if add.max() >= n or mul.max() >= n:
        raise CorruptCacheFile("table entry out of range")
    off += 2 * tbytes
    labels = []
    for _ in range(n):
        if off + 4 > len(data):
            raise CorruptCacheFile("truncated labels")
        (ln,) = struct.unpack_from("<I", data, off)
        off += 4
        if off + ln > len(data):
            raise CorruptCacheFile("truncated labels")
        try:
            labels.append(data[off:off + ln].decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CorruptCacheFile("label is not UTF-8") from exc
        off += ln
    if off != len(data):
        raise CorruptCacheFile("trailing bytes")
    try:
        return TableRing(add.astype(np.uint16), mul.astype(np.uint16), labels,
                         zero=zero, one=one, name=name)
    except Exception as exc:  # tables that no longer describe a ring
        raise CorruptCacheFile(str(exc)) from exc


class TableCache:
    """Directory of ``<sha256>.rngf`` files, one per canonical expression."""

    def __init__(self, directory: str | os.PathLike, version: int = CACHE_VERSION):
        self.directory = Path(directory)
        self.version = version

    def key(self, canonical_expr: str) -> str:
        return hashlib.sha256(f"{canonical_expr}\0v{self.version}".encode("utf-8")).hexdigest()

    def path(self, canonical_expr: str) -> Path:
        return self.directory / f"{self.key(canonical_expr)}.rngf"

    def load(self, canonical_expr: str) -> TableRing | None:
        p = self.path(canonical_expr)
        try:
            data = p.read_bytes()
        except FileNotFoundError:
            return None
        try:
            if read_version(data) != self.version:
                log.info("cache version mismatch for %s; rebuilding", canonical_expr)
                return None
            return decode(data, canonical_expr)
        except (CorruptCacheFile, struct.error) as exc:
            log.warning("ignoring corrupt cache file %s: %s", p, exc)
            return None

    def store(self, canonical_expr: str, R: TableRing) -> Path | None:
        if R.size > MAX_CACHED:
            return None
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(canonical_expr)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".rngf")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(encode(R, self.version))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target
