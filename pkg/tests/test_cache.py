from __future__ import annotations

import logging
import struct

import numpy as np
import pytest

from armendariz.cache import CACHE_VERSION, HEADER, MAGIC, TableCache, decode, encode
from armendariz.dsl import build


def same_tables(a, b) -> bool:
    return (np.array_equal(a.add_table, b.add_table) and np.array_equal(a.mul_table, b.mul_table)
            and a.labels == b.labels and (a.zero, a.one) == (b.zero, b.one))


def test_cold_cache_misses(tmp_path):
    assert TableCache(tmp_path).load("zmod(4)") is None


def test_round_trip_of_paper_ring(tmp_path):
    cache = TableCache(tmp_path)
    fresh = build("paper(e2,3)")
    stored = build("paper(e2,3)", cache=cache)
    assert same_tables(fresh, stored)
    path = cache.path("paper(e2,3)")
    raw = path.read_bytes()
    assert raw == encode(fresh)
    loaded = cache.load("paper(e2,3)")
    assert same_tables(loaded, fresh)
    assert loaded.name == "paper(e2,3)"


def test_binary_layout(tmp_path):
    R = build("zmod(3)")
    data = encode(R)
    magic, version, size, zero, one = HEADER.unpack_from(data)
    assert (magic, version, size, zero, one) == (MAGIC, CACHE_VERSION, 3, 0, 1)
    off = HEADER.size
    add = struct.unpack_from("<9H", data, off)
    mul = struct.unpack_from("<9H", data, off + 18)
    assert add == (0, 1, 2, 1, 2, 0, 2, 0, 1)
    assert mul == (0, 0, 0, 0, 1, 2, 0, 2, 1)
    off += 36
    assert struct.unpack_from("<I", data, off)[0] == 1 and data[off + 4:off + 5] == b"0"


def test_version_bump_misses(tmp_path):
    old = TableCache(tmp_path, version=CACHE_VERSION)
    old.store("gf(2,2)", build("gf(2,2)"))
    assert TableCache(tmp_path, version=CACHE_VERSION + 1).load("gf(2,2)") is None
    # a stale header under the current key is also a miss
    cache = TableCache(tmp_path)
    path = cache.path("gf(2,2)")
    data = bytearray(path.read_bytes())
    struct.pack_into("<H", data, 4, CACHE_VERSION + 7)
    path.write_bytes(bytes(data))
    assert cache.load("gf(2,2)") is None


@pytest.mark.parametrize("damage", ["truncate", "magic", "entry", "trailing"])
def test_corrupt_file_is_a_miss_with_warning(tmp_path, caplog, damage):
    cache = TableCache(tmp_path)
    cache.store("t(2,gf(2,1))", build("t(2,gf(2))"))
    path = cache.path("t(2,gf(2,1))")
    data = bytearray(path.read_bytes())
    if damage == "truncate":
        data = data[:40]
    elif damage == "magic":
        data[:4] = b"XXXX"
    elif damage == "entry":
        struct.pack_into("<H", data, HEADER.size, 999)
    else:
        data += b"junk"
    path.write_bytes(bytes(data))
    with caplog.at_level(logging.WARNING):
        assert cache.load("t(2,gf(2,1))") is None
    assert "corrupt" in caplog.text
    # a rebuild through the cache repairs the entry
    R = build("t(2,gf(2))", cache=cache)
    assert same_tables(cache.load("t(2,gf(2,1))"), R)


def test_no_temp_files_left_behind(tmp_path):
    cache = TableCache(tmp_path)
    for e in ("zmod(5)", "m(2,gf(2))", "trivext(zmod(3))"):
        build(e, cache=cache)
    names = [p.name for p in tmp_path.iterdir()]
    assert len(names) == 3 and all(n.endswith(".rngf") and not n.startswith(".tmp") for n in names)


def test_decode_rejects_header_out_of_range():
    data = bytearray(encode(build("zmod(2)")))
    struct.pack_into("<H", data, 10, 5)  # zero index beyond size
    with pytest.raises(ValueError):
        decode(bytes(data), "zmod(2)")
