from __future__ import annotations

import pytest

from armendariz.checker import VERIFIED
from armendariz.constructions import gf, matrix_ring, zmod
from armendariz.core import materialize
from armendariz.dsl import build
from armendariz.suite import SuitePrecondition, paper_suite
from armendariz.theorems import (
    THEOREM_IDS,
    corpus_instances,
    table_digest,
    validate_corpus,
    validate_theorem,
)


def test_product_of_armendariz_rings():
    v = validate_theorem("V-PROD", (zmod(4), gf(2)), (1, 1))
    assert v.status == "holds"
    assert v.detail == {"R": VERIFIED, "S": VERIFIED, "RxS": VERIFIED}


def test_local_ring_statement():
    assert validate_theorem("V-LOCAL", (zmod(4),), (2, 2)).status == "holds"
    assert validate_theorem("V-LOCAL", (zmod(6),), (2, 2)).status == "holds-vacuously"


def test_triangular_matrix_statement():
    assert validate_theorem("V-TN", (gf(2), 2), (2, 2)).status == "holds"
    assert validate_theorem("V-TN", (gf(2), 3), (1, 1)).status == "holds"


def test_corner_statement_on_m2f2():
    M = materialize(matrix_ring(2, gf(2)))
    e11 = M.index_of_label("[[1,0],[0,0]]")
    v = validate_theorem("V-CORNER", (M, e11), (1, 1))
    assert v.status == "holds-vacuously"
    assert v.detail["abelian"] == "False" and v.detail["R"] != VERIFIED


def test_quotient_statement():
    R = build("trivext(zmod(4))")
    v = validate_theorem("V-QUOT", (R, None), (2, 2))
    assert v.status == "holds" and v.detail["I_in_J"] == "True"
    # an ideal outside J makes the implication vacuous
    v = validate_theorem("V-QUOT", (zmod(6), (2,)), (1, 1))
    assert v.status == "holds-vacuously"


def test_trivial_extension_and_formal_triangular():
    assert validate_theorem("V-TRIV", (zmod(4),), (2, 2)).holds
    assert validate_theorem("V-TRI", (gf(3),), (2, 2)).holds


def test_unknown_theorem():
    with pytest.raises(ValueError):
        validate_theorem("V-NOPE", (zmod(2),))


def test_corpus_instances_cover_every_validator():
    rings = [zmod(4), gf(2), build("t(2,gf(2))")]
    ids = {tid for tid, _ in corpus_instances(rings)}
    assert ids == set(THEOREM_IDS)


def test_memo_is_content_keyed():
    a, b = build("t(2,gf(2))"), build("tri(gf(2))")
    assert table_digest(a) == table_digest(b)
    assert table_digest(a) != table_digest(build("m(2,gf(2))"))
    verdicts = validate_corpus(corpus_instances([zmod(4), gf(2)]), (1, 1))
    assert all(v.holds for v in verdicts)


def test_suite_precondition():
    with pytest.raises(SuitePrecondition):
        paper_suite(2)
    with pytest.raises(ValueError):
        paper_suite(3, cases=("E3",))


@pytest.mark.slow
def test_suite_is_robust_to_truncation():
    at3 = {r.case: r.checks for r in paper_suite(3)}
    at4 = {r.case: r.checks for r in paper_suite(4)}
    assert all(all(c.values()) for c in at4.values())
    assert {k: sorted(v) for k, v in at3.items() if k != "E2"} == \
        {k: sorted(v) for k, v in at4.items() if k != "E2"}
