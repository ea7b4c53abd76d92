"""Rank metric codes: distributions, evaluation codes, diagram supports."""
from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cdcw.config import LIMITS
from cdcw.gf import field_of_order
from cdcw.rankmetric import (
    CosetFamily,
    LinearMatrixCode,
    coset_partition,
    fdrm_construct,
    fdrm_upper_bound,
    gabidulin_code,
    kernel_basis,
    low_rank_words,
    matrix_rank,
    mrd_rank_distribution,
    mrd_rank_distribution_poly,
    mrd_size,
    rank_distance,
    rank_histogram,
    restricted_size_poly,
    span_iter,
    zero_matrix,
)
from cdcw.subspace import FerrersDiagram, ferrers_from_pivot


def test_matrix_rank_known():
    F2 = field_of_order(2)
    assert matrix_rank(((1, 0), (0, 1)), F2) == 2
    assert matrix_rank(((1, 1), (1, 1)), F2) == 1
    assert matrix_rank(((0, 0), (0, 0)), F2) == 0
    F3 = field_of_order(3)
    assert matrix_rank(((1, 2), (2, 2)), F3) == 2
    assert matrix_rank(((1, 2), (2, 1)), F3) == 1  # second row = 2 * first
    F4 = field_of_order(4)
    # rows (a, a^2) and (a^2, a^3=a*a^2): second = a * first
    a = 2
    sq = F4.mul(a, a)
    assert matrix_rank(((a, sq), (sq, F4.mul(a, sq))), F4) == 1


def test_mrd_size_values():
    assert mrd_size(2, 4, 4, 2) == 2**12
    assert mrd_size(2, 3, 4, 3) == 2**4
    assert mrd_size(3, 2, 5, 2) == 3**5
    with pytest.raises(ValueError):
        mrd_size(2, 3, 3, 4)


def test_distribution_anchor_4x4():
    d = mrd_rank_distribution(2, 4, 4, 2)
    assert d == {2: 525, 3: 2250, 4: 1320}
    assert sum(d.values()) + 1 == mrd_size(2, 4, 4, 2)


def test_distribution_anchor_3x4():
    assert mrd_rank_distribution(2, 3, 4, 3) == {3: 15}


def test_distribution_sums_to_size():
    for q, m, n, dr in [(2, 3, 3, 2), (3, 2, 4, 2), (2, 5, 5, 2), (4, 2, 2, 1)]:
        d = mrd_rank_distribution(q, m, n, dr)
        assert sum(d.values()) + 1 == mrd_size(q, m, n, dr)


@pytest.mark.parametrize("q,m,n,dr", [
    (2, 2, 2, 1), (2, 3, 3, 2), (2, 3, 4, 2), (2, 4, 3, 3),
    (3, 2, 3, 2), (3, 3, 3, 3), (4, 2, 2, 2),
])
def test_distribution_matches_exhaustive(q, m, n, dr):
    code = gabidulin_code(q, m, n, dr)
    assert code.size <= 2**16
    hist = rank_histogram(code)
    expect = dict(mrd_rank_distribution(q, m, n, dr))
    expect[0] = 1
    assert hist == expect


def test_gabidulin_shapes_and_prefix():
    g2 = gabidulin_code(2, 4, 4, 2)
    g3 = gabidulin_code(2, 4, 4, 3)
    g4 = gabidulin_code(2, 4, 4, 4)
    assert (g2.dim, g3.dim, g4.dim) == (12, 8, 4)
    assert g3.basis == g2.basis[: g3.dim]
    assert g4.basis == g3.basis[: g4.dim]


def test_gabidulin_transposed():
    g = gabidulin_code(2, 3, 5, 2)
    assert g.rows == 3 and g.cols == 5
    assert g.dim == 5 * (3 - 2 + 1)
    F2 = field_of_order(2)
    ranks = [matrix_rank(w, F2) for i, w in enumerate(g.codewords()) if i]
    assert min(ranks) == 2


def test_low_rank_words_small():
    g = gabidulin_code(2, 4, 4, 2)
    F2 = field_of_order(2)
    words = low_rank_words(g, 2)
    assert len(words) == restricted_size_poly(4, 4, 2, 2).evaluate(2)
    assert all(matrix_rank(w, F2) <= 2 for w in words)
    # cross check against a full sweep
    direct = {w for w in g.codewords() if matrix_rank(w, F2) <= 2}
    assert words == direct


def test_low_rank_words_5x5_anchor():
    g = gabidulin_code(2, 5, 5, 2)
    words = low_rank_words(g, 3)
    assert len(words) == restricted_size_poly(5, 5, 2, 3).evaluate(2) == 129736


def test_fdrm_bound_anchor():
    F = ferrers_from_pivot((1, 0, 1, 1, 0, 1, 0, 0, 0))
    assert F.row_lengths == (5, 4, 4, 3)
    assert fdrm_upper_bound(F, 6) == 7
    assert fdrm_upper_bound(F, 4) == 11


def test_fdrm_bound_rectangle_matches_mrd():
    for big, wide, delta in [(3, 5, 2), (4, 4, 3), (2, 6, 2)]:
        F = FerrersDiagram(n=big + wide, k=big, row_lengths=(wide,) * big)
        want = max(big, wide) * (min(big, wide) - delta + 1)
        assert fdrm_upper_bound(F, 2 * delta) == want


def test_fdrm_delta1_fills_diagram():
    F = ferrers_from_pivot((1, 0, 1, 0, 1, 0))
    code = fdrm_construct(F, 1, 2)
    assert code.dim == F.size
    assert code.min_rank_distance == 1


def test_fdrm_delta2_wide_meets_bound():
    F = ferrers_from_pivot((1, 0, 1, 1, 0, 1, 0, 0, 0))
    code = fdrm_construct(F, 2, 2)
    assert code.dim == fdrm_upper_bound(F, 4) == 11
    F2 = field_of_order(2)
    mind = min(matrix_rank(w, F2) for i, w in enumerate(code.codewords()) if i)
    assert mind == 2


def test_fdrm_delta2_tall_meets_bound():
    F = FerrersDiagram(n=6, k=4, row_lengths=(2, 2, 2, 1))
    code = fdrm_construct(F, 2, 2)
    assert code.dim == fdrm_upper_bound(F, 4) == 3
    F2 = field_of_order(2)
    mind = min(matrix_rank(w, F2) for i, w in enumerate(code.codewords()) if i)
    assert mind == 2


@given(st.integers(2, 3), st.data())
@settings(max_examples=40, deadline=None)
def test_fdrm_delta2_meets_bound_random(q, data):
    k = data.draw(st.integers(2, 4))
    width = data.draw(st.integers(2, 4))
    lens = []
    prev = width
    for _ in range(k):
        r = data.draw(st.integers(0, prev))
        lens.append(r)
        prev = r
    F = FerrersDiagram(n=k + width, k=k, row_lengths=tuple(lens))
    code = fdrm_construct(F, 2, q)
    assert code.dim == fdrm_upper_bound(F, 4)
    if 0 < code.dim and code.size <= 2**12:
        fld = code.field
        mind = min(matrix_rank(w, fld) for i, w in enumerate(code.codewords()) if i)
        assert mind >= 2


def test_fdrm_rectangle_delta3():
    F = FerrersDiagram(n=6, k=3, row_lengths=(3, 3, 3))
    code = fdrm_construct(F, 3, 2)
    assert code.dim == 3
    F2 = field_of_order(2)
    mind = min(matrix_rank(w, F2) for i, w in enumerate(code.codewords()) if i)
    assert mind == 3


def test_fdrm_greedy_nonrectangle_best_effort():
    F = ferrers_from_pivot((1, 0, 1, 1, 0, 1, 0, 0, 0))
    code = fdrm_construct(F, 3, 2)
    assert code.dim >= 4  # embedded rectangle floor
    assert code.dim <= fdrm_upper_bound(F, 6)
    F2 = field_of_order(2)
    mind = min(matrix_rank(w, F2) for i, w in enumerate(code.codewords()) if i)
    assert mind >= 3
    if code.dim < fdrm_upper_bound(F, 6):
        assert "gap" in code.certificate


def test_basis_validation():
    F2 = field_of_order(2)
    with pytest.raises(ValueError):
        LinearMatrixCode(2, 2, F2, (((1, 0), (0, 1)), ((1, 0), (0, 1))), 1, "dup")
    with pytest.raises(ValueError):
        LinearMatrixCode(2, 2, F2, (((1, 0),),), 1, "shape")


def test_span_iter_counts():
    F3 = field_of_order(3)
    basis = (((1, 0), (0, 0)), ((0, 1), (0, 0)))
    words = list(span_iter(basis, 2, 2, F3))
    assert len(words) == 9
    assert len(set(words)) == 9
    assert words[0] == zero_matrix(2, 2)


def test_span_iter_nonprime_field():
    # repeated addition only reaches prime-subfield multiples; the walk must
    # still visit every scalar multiple over GF(4)
    F4 = field_of_order(4)
    basis = (((1, 2), (3, 0)),)
    words = set(span_iter(basis, 2, 2, F4))
    assert len(words) == 4
    from cdcw.rankmetric import scale_matrix
    assert words == {scale_matrix(c, basis[0], F4) for c in range(4)}


def test_kernel_basis_solves():
    F3 = field_of_order(3)
    rng = random.Random(7)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 4), rng.randint(1, 5)
        rows = [[rng.randrange(3) for _ in range(ncols)] for _ in range(nrows)]
        ker = kernel_basis([list(r) for r in rows], ncols, F3)
        for vec in ker:
            for row in rows:
                s = 0
                for a, b in zip(row, vec):
                    s = F3.add(s, F3.mul(a, b))
                assert s == 0


def test_coset_partition_full_support():
    F = ferrers_from_pivot((1, 1, 0, 0, 0))
    assert F.row_lengths == (3, 3)
    fam = coset_partition(F, 2, 1, 2)
    assert fam.coset_count * fam.sub.size == 2**F.size
    seen = set()
    for j in range(fam.coset_count):
        for w in fam.coset(j):
            assert w not in seen
            seen.add(w)
    assert len(seen) == 2**F.size


def test_coset_partition_full_support_q3():
    F = FerrersDiagram(n=4, k=2, row_lengths=(2, 2))
    fam = coset_partition(F, 2, 1, 3)
    assert fam.coset_count * fam.sub.size == 3**4
    words = set()
    for j in range(fam.coset_count):
        words.update(fam.coset(j))
    assert len(words) == 3**4


def test_coset_partition_nested():
    F = FerrersDiagram(n=6, k=3, row_lengths=(3, 3, 3))
    fam = coset_partition(F, 3, 2, 2)
    assert fam.coset_count == 8 and fam.sub.size == 8
    F2 = field_of_order(2)
    cosets = [fam.coset(j) for j in range(8)]
    for j1, j2 in itertools.combinations(range(8), 2):
        for w1 in cosets[j1]:
            for w2 in cosets[j2]:
                assert rank_distance(w1, w2, F2) >= 2
    for j in range(8):
        for w1, w2 in itertools.combinations(cosets[j], 2):
            assert rank_distance(w1, w2, F2) >= 3


def test_coset_partition_rejects_bad_args():
    F = FerrersDiagram(n=6, k=3, row_lengths=(3, 3, 3))
    with pytest.raises(ValueError):
        coset_partition(F, 2, 2, 2)
    Fnr = ferrers_from_pivot((1, 0, 1, 1, 0, 1, 0, 0, 0))
    with pytest.raises(ValueError):
        coset_partition(Fnr, 3, 2, 2)
