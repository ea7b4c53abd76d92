"""Anticode and chain bounds, the exact rational ILP, split packing bounds."""
from __future__ import annotations

from fractions import Fraction

import pytest

from cdcw.bounds import (
    UnboundedError,
    anticode_bound,
    anticode_bound_ratio,
    best_known_upper,
    certify_lp_optimum,
    count_split_subspaces,
    eq_upper_abar,
    eq_upper_def3,
    ilp_export,
    ilp_pivot_bound,
    johnson_bound,
    pivot_subspace_count,
    restriction_rows,
    simplex_max,
)
from cdcw.gf import field_of_order
from cdcw.subspace import all_pivot_vectors, enumerate_subspaces, gaussian_binomial


def test_anticode_anchor():
    assert anticode_bound(6, 4, 3, 2) == 93
    assert anticode_bound_ratio(6, 4, 3).floor_evaluate(2) == 93
    # k = d/2 reduces to the point count ratio
    assert anticode_bound(7, 4, 2, 2) == (2**7 - 1) // (2**2 - 1)
    # duality: parameters above the middle fold down
    assert anticode_bound(9, 4, 6, 2) == anticode_bound(9, 4, 3, 2)
    assert anticode_bound(6, 4, 3, 2) >= 77  # recorded exact value fits under it


def test_johnson_anchor():
    assert johnson_bound(6, 4, 3, 2) == 81
    assert johnson_bound(9, 4, 6, 2) == johnson_bound(9, 4, 3, 2)
    # the chain never beats the trivial floor of one for tiny dimensions
    assert johnson_bound(4, 4, 2, 2) == 5


def test_pivot_subspace_count_worked_list():
    v = (1, 1, 0, 1, 1, 0, 0)
    assert pivot_subspace_count(v, (1, 1, 0, 0, 0, 0, 0), 2) == 2**4
    assert pivot_subspace_count(v, (0, 0, 0, 1, 1, 0, 0), 2) == 1
    assert pivot_subspace_count(v, (0, 0, 1, 0, 0, 0, 0), 2) == 0  # support fails


@pytest.mark.parametrize("k,t", [(3, 2), (4, 2), (5, 3)])
def test_pivot_subspace_count_partition(k, t):
    # the t-subspaces of one k-space split over the possible pivot vectors
    n = k + 2
    v = tuple([1] * k + [0] * (n - k))
    total = sum(pivot_subspace_count(v, vp, 2) for vp in all_pivot_vectors(n, t))
    assert total == gaussian_binomial(k, t, 2)


def test_simplex_small():
    value, x, y = simplex_max(
        [Fraction(3), Fraction(2)],
        [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(0)]],
        [Fraction(4), Fraction(2)],
    )
    assert value == 10 and x == [Fraction(2), Fraction(2)]
    assert certify_lp_optimum(
        [Fraction(3), Fraction(2)],
        [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(0)]],
        [Fraction(4), Fraction(2)], value, y)
    with pytest.raises(UnboundedError):
        simplex_max([Fraction(1)], [[Fraction(-1)]], [Fraction(1)])


@pytest.fixture(scope="module")
def ilp_6432():
    return ilp_pivot_bound(6, 4, 3, 2)


def test_ilp_sandwich(ilp_6432):
    r = ilp_6432
    assert 77 <= r.value <= 93
    assert r.value == 92
    assert r.value <= anticode_bound(6, 4, 3, 2)
    assert r.lp_value == 93 and r.lp_certified and r.complete
    assert sum(r.solution.values()) == r.value


def test_ilp_relax_dominates(ilp_6432):
    lp = ilp_pivot_bound(6, 4, 3, 2, relax=True)
    assert lp.value == 93 and lp.nodes == 1
    assert lp.value >= ilp_6432.value
    lp7 = ilp_pivot_bound(7, 4, 3, 2, relax=True)
    assert lp7.value <= anticode_bound(7, 4, 3, 2)


def test_ilp_cuts_never_increase():
    with_cuts = ilp_pivot_bound(5, 4, 2, 2)
    without = ilp_pivot_bound(5, 4, 2, 2, cuts=False)
    assert with_cuts.value <= without.value
    # the counting relaxation stops at the perfect-packing value here,
    # one above the recorded exact 9
    assert with_cuts.value == 10


def test_ilp_extra_rows_tighten(ilp_6432):
    rows = restriction_rows(6, 4, 3, 2)
    assert all(bound >= 1 for _, bound in rows)
    r = ilp_pivot_bound(6, 4, 3, 2, extra_rows=rows)
    assert r.value <= ilp_6432.value
    assert r.value == 91


def test_ilp_single_pivot_closed_form():
    from cdcw.subspace import count_subspaces_with_pivot

    v = (1, 1, 1, 0, 0, 0)
    r = ilp_pivot_bound(6, 4, 3, 2, pivots=[v])
    best = min(
        count_subspaces_with_pivot(vp, 2) // pivot_subspace_count(v, vp, 2)
        for vp in all_pivot_vectors(6, 2)
        if pivot_subspace_count(v, vp, 2)
    )
    assert r.value == best == 64
    assert r.value >= 1


def test_ilp_budget_falls_back_to_root():
    r = ilp_pivot_bound(6, 4, 3, 2, node_budget=3)
    assert not r.complete
    assert r.value == 93  # floored root relaxation stays a valid upper bound


def test_ilp_export_format():
    text = ilp_export(6, 4, 3, 2)
    assert text.startswith("Maximize")
    assert "Subject To" in text and text.rstrip().endswith("End")
    assert "General" in text


def test_best_known_upper():
    assert best_known_upper(5, 4, 2, 2) == 9
    assert best_known_upper(4, 4, 1, 2) == 1
    assert best_known_upper(6, 4, 3, 2) <= 81


def test_count_split_oracle():
    # exhaustive: classify every t-subspace by its block intersections
    from cdcw.subspace import rank_of

    f2 = field_of_order(2)
    n1, n2, t = 2, 3, 2
    seen: dict[tuple[int, int], int] = {}
    for sub in enumerate_subspaces(n1 + n2, t, f2):
        # the block intersection is the kernel of the other projection
        d1 = t - rank_of([row[n1:] for row in sub.rows], f2)
        d2 = t - rank_of([row[:n1] for row in sub.rows], f2)
        seen[(d1, d2)] = seen.get((d1, d2), 0) + 1
    for (c1, c2), count in seen.items():
        assert count_split_subspaces(n1, n2, t, c1, c2, 2) == count
    total = sum(
        count_split_subspaces(n1, n2, t, c1, c2, 2)
        for c1 in range(t + 1) for c2 in range(t + 1)
    )
    assert total == gaussian_binomial(n1 + n2, t, 2)


def test_eq_upper_anchors():
    val, cs = eq_upper_abar((6, 6), (2, 4), 4, 2, cbar=(1, 4))
    assert val == 13671 and cs == (1, 4)
    free_val, free_cs = eq_upper_abar((6, 6), (2, 4), 4, 2)
    assert free_val == 13671
    v33, _ = eq_upper_abar((6, 6), (3, 3), 4, 2, cbar=(2, 3))
    assert v33 == 129735
    v42, _ = eq_upper_abar((6, 6), (4, 2), 4, 2)
    assert v42 == 13671
    assert 13671 + 13671 + 129735 == 157077
    with pytest.raises(ValueError):
        eq_upper_abar((6, 6), (2, 4), 4, 2, cbar=(3, 2))  # c1 > a1
    with pytest.raises(ValueError):
        eq_upper_abar((6, 6), (2, 4), 4, 2, cbar=(1, 3))  # wrong total


def test_eq_upper_def3():
    assert eq_upper_def3((6, 6), 4, 6, 2) == 45744005
    assert eq_upper_def3((6, 6), 4, 6, 2) >= 2154496  # recorded packing fits
