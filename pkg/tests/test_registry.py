"""Recorded bound table: lookup semantics, duality, report shape."""
from __future__ import annotations

import pytest

from cdcw.qpoly import PolyQ
from cdcw.registry import (
    BoundValue,
    MRD_3X4_CONTEXT,
    MRD_3X4_DISTRIBUTION_ROWS,
    registry_entries,
    registry_lookup,
    registry_lookup_e_abar,
    registry_lookup_e_dim,
)


def test_lookup_numeric_exact():
    bv = registry_lookup(6, 4, 3, 2, "lower")
    assert bv.value == 77
    assert registry_lookup(6, 4, 3, 2, "upper").value == 77
    assert registry_lookup(6, 4, 3, 2, "exact").value == 77


def test_lookup_symbolic():
    bv = registry_lookup(6, 4, 3, None, "lower")
    assert isinstance(bv.value, PolyQ)
    assert bv.evaluate(2) == 77
    assert bv.evaluate(3) == 3**6 + 2 * 9 + 2 * 3 + 1


def test_symbolic_consistent_with_numeric():
    # the recorded symbolic family evaluates no higher than recorded numerics
    for (n, d, k) in [(7, 4, 3), (8, 4, 4), (10, 4, 5), (12, 6, 6)]:
        sym = registry_lookup(n, d, k, None, "lower")
        num = registry_lookup(n, d, k, 2, "lower")
        assert sym.evaluate(2) <= num.value


def test_duality_normalization():
    a = registry_lookup(7, 4, 4, 2, "lower")
    b = registry_lookup(7, 4, 3, 2, "lower")
    assert a.value == b.value == 333
    assert registry_entries(9, 4, 6, 2) == registry_entries(9, 4, 3, 2)


def test_upper_entry():
    assert registry_lookup(6, 6, 3, 2, "upper").value == 9
    assert registry_lookup(6, 6, 3, 2, "lower") is None


def test_constructive_recipes():
    bv = registry_lookup(10, 4, 5, 2, "lower")
    assert bv.constructive and bv.recipe == "assemble:a10_4_5"
    assert bv.value == 1179625
    bv = registry_lookup(12, 6, 6, 2, "lower")
    assert bv.value == 16865631 and bv.recipe == "assemble:a12_6_6"


def test_q3_entries():
    assert registry_lookup(7, 4, 3, 3, "lower").value == 6978
    assert registry_lookup(11, 4, 4, 3, "lower").value == 10639658703


def test_evaluate_rejects_mismatched_q():
    bv = registry_lookup(8, 4, 3, 2, "lower")
    with pytest.raises(ValueError):
        bv.evaluate(3)


def test_report_shape():
    rep = registry_lookup(5, 4, 2, None, "exact").report("A_q(5,4;2)")
    assert rep["name"] == "A_q(5,4;2)"
    assert rep["q"] == "symbolic"
    assert rep["kind"] == "exact"
    assert set(rep) == {"name", "q", "kind", "value", "provenance", "constructive"}


def test_lookup_rejects_bad_dims():
    with pytest.raises(ValueError):
        registry_lookup(6, 4, 0, 2)
    with pytest.raises(ValueError):
        registry_lookup(6, 4, 6, 2)


def test_partial_spread_family():
    bv = registry_lookup_e_abar((5, 5), (2, 2), 4, 2, "lower")
    assert bv.value == 1313
    sym = registry_lookup_e_abar((5, 5), (2, 2), 4, None, "lower")
    assert isinstance(sym.value, PolyQ)
    assert sym.evaluate(2) >= 1043


def test_e_dim_entry():
    assert registry_lookup_e_dim((6, 6), 4, 6, 2, "lower").value == 2154496


def test_mrd_rows_shape():
    assert len(MRD_3X4_DISTRIBUTION_ROWS) == 3
    for name, counts in MRD_3X4_DISTRIBUTION_ROWS:
        assert len(counts) == 4
        assert sum(counts) == MRD_3X4_CONTEXT["size"] == 16
    assert MRD_3X4_CONTEXT["linear_classes"] == 7
    assert MRD_3X4_CONTEXT["nonlinear_classes"] == 30
