from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from cdcw.gf import make_field
from cdcw.subspace import (
    FerrersDiagram,
    RankDeficientError,
    all_pivot_vectors,
    count_subspaces_with_pivot,
    enumerate_subspaces,
    ferrers_from_pivot,
    gaussian_binomial,
    intersection_dim,
    orthogonal_complement,
    pivot_from_ferrers,
    pivot_int_decode,
    pivot_int_encode,
    rank_of,
    rref,
    subspace_distance,
    subspace_pack,
    subspace_unpack,
)

F2 = make_field(2)
F3 = make_field(3)


def bits(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


def test_worked_canonical_form():
    rows = [bits("101110101"), bits("100111111"), bits("000100010"), bits("000001101")]
    S = rref(rows, F2)
    assert S.rows == (
        bits("100010000"),
        bits("001000111"),
        bits("000100010"),
        bits("000001101"),
    )
    assert S.pivot_vector() == bits("101101000")
    assert S.tableau() == ((0, 1, 0, 0, 0), (0, 1, 1, 1), (0, 0, 1, 0), (1, 0, 1))
    F = ferrers_from_pivot(S.pivot_vector())
    assert F.row_lengths == (5, 4, 4, 3)
    assert tuple(len(r) for r in S.tableau()) == F.row_lengths


def test_rref_idempotent_and_rank_deficiency():
    rows = [bits("1100"), bits("0110"), bits("1010")]
    with pytest.raises(RankDeficientError) as ei:
        rref(rows, F2)
    assert ei.value.rank == 2
    S = rref([bits("1100"), bits("0110")], F2)
    assert rref(S.rows, F2).rows == S.rows


def test_rref_general_field():
    rows = [(2, 1, 0), (1, 2, 1)]
    S = rref(rows, F3)
    # leading entries normalised to 1, entries above pivots cleared
    assert S.rows[0][0] == 1 and S.rows[1][S.pivots[1]] == 1
    for r in S.rows:
        for i, p in enumerate(S.pivots):
            pass
    assert S.contains((2, 1, 0))
    assert S.contains((1, 2, 1))
    assert S.contains(tuple(F3.add(a, b) for a, b in zip((2, 1, 0), (1, 2, 1))))


def test_pivot_int_codec():
    v = bits("110000001100000")
    assert pivot_int_encode(v) == 24672
    assert pivot_int_decode(24672, 15) == v
    assert pivot_int_encode(bits("11000")) == 24
    with pytest.raises(ValueError):
        pivot_int_decode(1 << 5, 5)
    with pytest.raises(ValueError):
        pivot_int_encode((0, 2, 0))


def test_all_pivot_vectors_order():
    vs = all_pivot_vectors(5, 2)
    ints = [pivot_int_encode(v) for v in vs]
    assert ints == sorted(ints, reverse=True)
    assert len(vs) == 10
    assert vs[0] == bits("11000")
    assert vs[-1] == bits("00011")


def test_ferrers_round_trip():
    for n, k in [(5, 2), (9, 4), (6, 3), (15, 4)]:
        for v in all_pivot_vectors(n, k):
            F = ferrers_from_pivot(v)
            assert pivot_from_ferrers(F) == v
            assert F.size <= k * (n - k)


def test_ferrers_conjugate():
    F = ferrers_from_pivot(bits("101101000"))
    C = F.conjugate()
    assert C.size == F.size
    assert C.conjugate().row_lengths[: F.k] == F.row_lengths
    cells = set(F.cells())
    assert len(cells) == F.size
    with pytest.raises(ValueError):
        FerrersDiagram(n=5, k=2, row_lengths=(1, 2))
    with pytest.raises(ValueError):
        FerrersDiagram(n=5, k=2, row_lengths=(4, 0))


def test_enumerate_counts_per_pivot():
    per = [count_subspaces_with_pivot(v, 2) for v in all_pivot_vectors(5, 2)]
    assert per == [64, 32, 16, 8, 16, 8, 4, 4, 2, 1]
    assert sum(per) == 155 == gaussian_binomial(5, 2, 2)


def test_enumerate_subspaces_canonical():
    seen = list(enumerate_subspaces(5, 2, F2))
    assert len(seen) == 155
    # all distinct, all canonical, ordering matches the contract
    packs = [subspace_pack(S) for S in seen]
    assert len(set(packs)) == 155
    last_pivot = None
    pivot_ints = [S.pivot_int() for S in seen]
    assert pivot_ints == sorted(pivot_ints, reverse=True)
    for S in seen:
        assert rref(S.rows, F2).rows == S.rows
    # within a fixed pivot the tableau strings ascend lexicographically
    tabs = [sum(S.tableau(), ()) for S in seen if S.pivot_int() == 24]
    assert tabs == sorted(tabs)
    assert len(tabs) == 64


def test_enumerate_pivot_filter_and_ceiling():
    only = list(enumerate_subspaces(6, 3, F2, pivot=bits("111000")))
    assert len(only) == 2**9
    with pytest.raises(ValueError):
        list(enumerate_subspaces(8, 4, F2, ceiling=100))
    assert gaussian_binomial(6, 3, 2) == 1395
    assert len(list(enumerate_subspaces(4, 2, F3))) == gaussian_binomial(4, 2, 3)


def test_distance_and_intersection():
    A = rref([bits("1000"), bits("0100")], F2)
    B = rref([bits("0010"), bits("0001")], F2)
    C = rref([bits("1000"), bits("0010")], F2)
    assert subspace_distance(A, B) == 4
    assert subspace_distance(A, C) == 2
    assert subspace_distance(A, A) == 0
    assert intersection_dim(A, C) == 1
    line = rref([bits("1000")], F2)
    assert subspace_distance(A, line) == 1


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from([2, 3]),
    st.integers(3, 6),
    st.integers(1, 5),
    st.integers(0, 2**32),
)
def test_distance_axioms_random(q, n, k, seed):
    import random

    k = min(k, n - 1)
    F = make_field(q)
    rng = random.Random(seed)

    def rand_subspace():
        while True:
            rows = [[rng.randrange(q) for _ in range(n)] for _ in range(k)]
            if rank_of(rows, F) == k:
                return rref(rows, F)

    U, W, X = rand_subspace(), rand_subspace(), rand_subspace()
    dUW = subspace_distance(U, W)
    assert dUW == subspace_distance(W, U)
    assert dUW >= 0
    assert (dUW == 0) == (U.rows == W.rows)
    assert subspace_distance(U, X) <= dUW + subspace_distance(W, X)
    # duality is an isometry
    assert subspace_distance(orthogonal_complement(U), orthogonal_complement(W)) == dUW


def test_orthogonal_complement_basics():
    S = rref([bits("101110101"), bits("100111111"), bits("000100010"), bits("000001101")], F2)
    D = orthogonal_complement(S)
    assert D.k == S.n - S.k
    for u in S.rows:
        for w in D.rows:
            assert sum(a * b for a, b in zip(u, w)) % 2 == 0
    DD = orthogonal_complement(D)
    assert DD.rows == S.rows


def test_orthogonal_complement_general_field():
    S = rref([(1, 2, 0, 1), (0, 0, 1, 2)], F3)
    D = orthogonal_complement(S)
    assert D.k == 2
    for u in S.rows:
        for w in D.rows:
            assert sum(a * b for a, b in zip(u, w)) % 3 == 0


def test_pack_round_trip():
    for S in enumerate_subspaces(5, 2, F3, pivot=bits("10100")):
        x = subspace_pack(S)
        T = subspace_unpack(x, 5, 2, F3)
        assert T.rows == S.rows
    for S in enumerate_subspaces(6, 3, F2, pivot=bits("010101")):
        assert subspace_unpack(subspace_pack(S), 6, 3, F2).rows == S.rows
