from __future__ import annotations

import itertools

import numpy as np
import pytest

from armendariz.constructions import (
    BimoduleTriangularSpec,
    IdealSpec,
    NotIdempotent,
    UnsupportedBimodule,
    corner,
    direct_product,
    e2_generators,
    gf,
    ideal_closure,
    is_prime,
    matrix_ring,
    paper_ring,
    quotient,
    smallest_irreducible,
    subring_generated,
    triangular,
    trivial_extension,
    trivial_ring,
    truncated_series,
    upper_triangular,
    zmod,
)
from armendariz.core import CapExceeded, materialize, ring_axioms_hold
from armendariz.structure import is_two_sided_ideal, jacobson_radical, nilpotents, units


def tables_equal(A, B) -> bool:
    return (A.size == B.size and np.array_equal(A.add_table, B.add_table)
            and np.array_equal(A.mul_table, B.mul_table) and A.one == B.one)


def test_zmod_rejects_small_modulus():
    with pytest.raises(ValueError):
        zmod(1)


def test_zmod2_is_a_field():
    R = zmod(2)
    assert set(units(R)) == {1}


def test_zmod12_nilpotents_by_power_scan():
    R = zmod(12)
    expected = {x for x in range(12) if any(pow(x, k, 12) == 0 for k in range(1, 13))}
    assert set(nilpotents(R)) == expected == {0, 6}


def test_gf_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        gf(4)


def test_gf4_modulus_is_smallest_irreducible_quadratic():
    # brute force: monic quadratics over F2 without a root
    irreducible = [c for c in itertools.product(range(2), repeat=2)
                   if all((x * x + c[1] * x + c[0]) % 2 for x in range(2))]
    assert irreducible == [(1, 1)]  # x^2 + x + 1
    assert smallest_irreducible(2, 2) == [1, 1, 1]
    F = gf(2, 2)
    a = F.index_of_label("a")
    assert F.label(F.mul(a, a)) == "a+1"


def test_gf9_units():
    F = gf(3, 2)
    assert F.size == 9 and len(units(F)) == 8


def test_gf_fields_have_no_zero_divisors():
    for p, k in [(2, 3), (3, 2), (5, 1), (7, 1)]:
        F = gf(p, k)
        assert len(units(F)) == F.size - 1


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_matrix_ring_sizes_and_radical():
    M = materialize(matrix_ring(2, gf(2)))
    assert M.size == 16
    assert list(jacobson_radical(M)) == [M.zero]


def test_matrix_ring_of_size_one_is_the_base():
    R = zmod(6)
    assert tables_equal(materialize(matrix_ring(1, R)), R)
    assert tables_equal(materialize(upper_triangular(1, R)), R)


def test_upper_triangular_radical_is_strictly_upper():
    T = materialize(upper_triangular(2, gf(2)))
    assert T.size == 8
    assert sorted(T.label(x) for x in jacobson_radical(T)) == ["[[0,0],[0,0]]", "[[0,1],[0,0]]"]


def test_construction_sizes():
    R, S = zmod(3), gf(2, 2)
    assert direct_product(R, S).size == 12
    assert upper_triangular(3, R).size == 3**6
    assert trivial_extension(R).size == 9


def test_direct_product_crt_and_radical():
    P = materialize(direct_product(zmod(2), zmod(3)))
    assert P.size == 6
    assert len(units(P)) == 2  # Z6 has units {1, 5}
    P = materialize(direct_product(zmod(4), gf(2)))
    assert sorted(P.label(x) for x in jacobson_radical(P)) == ["(0,0)", "(2,0)"]


def test_direct_product_with_trivial_ring():
    R = zmod(5)
    assert tables_equal(materialize(direct_product(R, trivial_ring())), R)


def test_trivial_extension():
    T = materialize(trivial_extension(gf(2)))
    assert T.size == 4
    m = T.index_of_label("(0,1)")
    assert T.mul(m, m) == T.zero
    assert tables_equal(T, materialize(truncated_series(zmod(2), 2)))


def test_trivial_extension_radical_contains_j_by_r():
    R = zmod(4)
    T = materialize(trivial_extension(R))
    J = set(jacobson_radical(T))
    JR = set(jacobson_radical(R))
    for x in range(T.size):
        r, m = T.values[x]
        if r in JR:
            assert x in J


def test_triangular_matches_upper_triangular():
    F = gf(2)
    T = materialize(triangular(BimoduleTriangularSpec(F, F)))
    assert tables_equal(T, materialize(upper_triangular(2, F)))
    assert len(jacobson_radical(T)) == 2
    assert triangular(BimoduleTriangularSpec(zmod(4), zmod(4))).size == 64


def test_triangular_requires_same_ring():
    with pytest.raises(UnsupportedBimodule):
        triangular(BimoduleTriangularSpec(zmod(2), zmod(3)))


def test_corner_examples():
    M = materialize(matrix_ring(2, gf(2)))
    assert tables_equal(corner(M, M.one), M)
    assert corner(M, M.zero).size == 1
    e11 = M.index_of_label("[[1,0],[0,0]]")
    C = corner(M, e11)
    assert C.size == 2 and ring_axioms_hold(C)
    with pytest.raises(NotIdempotent):
        corner(M, M.index_of_label("[[0,1],[0,0]]"))


def test_corner_arithmetic_is_ambient_arithmetic():
    T = materialize(upper_triangular(2, zmod(2)))
    for e in range(T.size):
        if T.mul(e, e) != e:
            continue
        C = corner(T, e)
        amb = [v[0] for v in C.values]
        for x, y in itertools.product(range(C.size), repeat=2):
            assert amb[C.mul(x, y)] == T.mul(amb[x], amb[y])
            assert amb[C.add(x, y)] == T.add(amb[x], amb[y])
        assert amb[C.one] == e


def test_quotient_examples():
    Z4 = zmod(4)
    Q = quotient(Z4, IdealSpec((2,)))
    assert tables_equal(Q, zmod(2))
    R = materialize(upper_triangular(2, zmod(2)))
    assert tables_equal(quotient(R, [R.zero]), R)


def test_ideal_closure_is_two_sided():
    M = materialize(upper_triangular(2, zmod(4)))
    for g in range(0, M.size, 7):
        I = ideal_closure(M, [g])
        assert is_two_sided_ideal(M, I)


@pytest.mark.parametrize("expr", ["zmod(12)", "t(2,zmod(4))", "trivext(zmod(4))"])
def test_quotient_projection_is_a_ring_homomorphism(expr):
    from armendariz.dsl import build

    R = build(expr)
    for g in [x for x in range(R.size) if x % 5 == 1][:4]:
        Q = quotient(R, [g])
        pi = Q.projection
        pairs = itertools.product(range(R.size), repeat=2)
        for x, y in itertools.islice(pairs, 64 * 64):
            assert pi[R.add(x, y)] == Q.add(pi[x], pi[y])
            assert pi[R.mul(x, y)] == Q.mul(pi[x], pi[y])
        assert set(pi.tolist()) == set(range(Q.size))


def test_truncated_series():
    S = materialize(truncated_series(gf(2), 3))
    t = S.index_of_label("t")
    t2 = S.mul(t, t)
    assert S.label(t2) == "t^2"
    assert S.mul(t, t2) == S.zero
    assert tables_equal(materialize(truncated_series(gf(2), 1)), gf(2))
    assert len(jacobson_radical(S)) == 4


def test_subring_generated_examples():
    R = zmod(6)
    assert subring_generated(R, [3]).size == 6
    M = materialize(matrix_ring(2, zmod(4)))
    prime = subring_generated(M, [])
    assert prime.size == 4  # scalar matrices, the image of Z
    S = materialize(truncated_series(gf(2), 3))
    A = matrix_ring(3, S)
    E2 = subring_generated(A, e2_generators(S, 3))
    assert E2.size == 512
    with pytest.raises(CapExceeded):
        subring_generated(A, e2_generators(S, 3), cap=100)


def test_paper_rings():
    E2 = paper_ring("E2", 3)
    assert E2.size == 512 and len(jacobson_radical(E2)) == 256
    E5 = paper_ring("E5", 3)
    assert E5.size == 512
    J = jacobson_radical(E5)
    assert quotient(E5, tuple(J)).size == 2
    with pytest.raises(ValueError):
        paper_ring("E2", 2)
    with pytest.raises(CapExceeded):
        paper_ring("E5", 5)


def test_e2_quotient_by_t_part_is_f2():
    E2 = paper_ring("E2", 3)
    gens = [x for x in range(E2.size) if E2.values[x][8] == E2.source.bases[0].zero]
    Q = quotient(E2, gens)
    assert Q.size == 2 and len(units(Q)) == 1
