"""Pivot patterns, set distances, skeleton validation, clique search."""
from __future__ import annotations

import pytest

from cdcw.skeleton import (
    CliqueResult,
    PivotPattern,
    SkeletonCode,
    SkeletonVertex,
    _blockwise_distance,
    clique_search,
    ef_weight,
    hamming_distance_sets,
    pattern_expand,
    skeleton_from_json,
    skeleton_to_json,
    validate_skeleton,
    vertex_distance,
    vertex_from_int,
    vertex_from_pattern,
    vertex_from_vec,
)
from cdcw.subspace import all_pivot_vectors


def test_pattern_counts():
    assert PivotPattern(((5, 2), (5, 0))).count == 10
    assert PivotPattern(((4, 0), (7, 4))).count == 35
    # inexact blocks with a fixed total weight
    bset = PivotPattern(((4, "<=", 1), (3, ">=", 2)), weight=3)
    members = bset.members()
    assert bset.count == len(members) == 13
    assert all(sum(m) == 3 for m in members)
    assert all(sum(m[:4]) <= 1 and sum(m[4:]) >= 2 for m in members)


def test_pattern_errors():
    with pytest.raises(ValueError):
        PivotPattern(((4, "<=", 1), (3, ">=", 2)))  # no total weight
    with pytest.raises(ValueError):
        PivotPattern(((4, "=", 1), (3, "=", 1)), weight=5)  # infeasible
    with pytest.raises(ValueError):
        PivotPattern(((4, "!", 1),), weight=1)
    with pytest.raises(ValueError):
        pattern_expand(PivotPattern(((30, 15),)))  # over the ceiling


def test_vertex_construction():
    v = vertex_from_int(24672, 15)
    assert "".join(map(str, v.members[0])) == "110000001100000"
    assert v.k == 4 and v.is_single
    w = vertex_from_vec("110000001100000")
    assert w.members == v.members
    with pytest.raises(ValueError):
        SkeletonVertex(n=4, members=((1, 1, 0, 0), (1, 0, 0, 0)))


def test_distance_singletons_and_sets():
    a = vertex_from_vec((1, 1, 0, 0))
    b = vertex_from_vec((0, 0, 1, 1))
    assert vertex_distance(a, b) == 4
    assert vertex_distance(a, a) == 0
    assert hamming_distance_sets([(1, 1, 0, 0)], [(1, 0, 1, 0), (0, 0, 1, 1)]) == 2


def test_distance_complementary_patterns():
    # weight moved across two blocks costs twice the pivot count
    a = vertex_from_pattern(PivotPattern(((6, 3), (4, 0))))
    b = vertex_from_pattern(PivotPattern(((6, 0), (4, 3))))
    assert vertex_distance(a, b) == 6


@pytest.mark.parametrize("pa,pb", [
    (PivotPattern(((3, "<=", 2), (4, ">=", 1)), weight=3),
     PivotPattern(((3, ">=", 1), (4, "<=", 2)), weight=3)),
    (PivotPattern(((3, 0), (4, 3))), PivotPattern(((3, 2), (4, 1)))),
    (PivotPattern(((2, 1), (5, 2))), PivotPattern(((2, "<=", 2), (5, "<=", 3)), weight=3)),
])
def test_blockwise_matches_expansion(pa, pb):
    exact = hamming_distance_sets(pa.members(), pb.members())
    assert _blockwise_distance(pa, pb) == exact


def test_blockwise_requires_alignment():
    pa = PivotPattern(((3, 1), (4, 1)))
    pb = PivotPattern(((4, 1), (3, 1)))
    assert _blockwise_distance(pa, pb) is None
    # expansion path still answers
    assert vertex_distance(vertex_from_pattern(pa), vertex_from_pattern(pb)) == 0


def test_validate_and_mutation():
    vecs = ["111000", "100110", "010101", "001011"]
    sk = SkeletonCode(n=6, k=3, d=4,
                      vertices=tuple(vertex_from_vec(v) for v in vecs))
    rep = validate_skeleton(sk)
    assert rep["valid"] and rep["min_distance"] == 4
    # single-bit flips change the weight and are rejected outright
    with pytest.raises(ValueError):
        SkeletonCode(n=6, k=3, d=4, vertices=(
            vertex_from_vec("111000"), vertex_from_vec("110110")))
    # weight-preserving double flip drops a pairwise distance below d
    bad = SkeletonCode(n=6, k=3, d=4, vertices=(
        vertex_from_vec("111000"),
        vertex_from_vec("101010"),  # distance 2 from 001011
        vertex_from_vec("010101"),
        vertex_from_vec("001011"),
    ))
    rep = validate_skeleton(bad)
    assert not rep["valid"]
    assert any(dist < 4 for _, _, dist in rep["violations"])


def test_validate_single_vertex_infinite():
    sk = SkeletonCode(n=6, k=3, d=4, vertices=(vertex_from_vec("111000"),))
    assert validate_skeleton(sk)["min_distance"] == float("inf")


def test_ef_weight_anchors():
    up = ef_weight((1, 0, 1, 1, 0, 1, 0, 0, 0), 2, 6)
    assert up.value == 2**7 and up.kind == "upper"
    sym = ef_weight((1, 0, 1, 1, 0, 1, 0, 0, 0), None, 6)
    assert sym.evaluate(2) == 2**7
    # leading rectangle reaches the full matrix-code exponent
    rect = ef_weight((1, 1, 1, 0, 0, 0), 2, 4)
    assert rect.value == 2**6
    cons = ef_weight((1, 1, 1, 0, 0, 0), 2, 4, mode="constructive")
    assert cons.value == 2**6 and cons.constructive
    single_dot = ef_weight((1, 0, 1), 2, 4)
    assert single_dot.value == 1


def test_clique_search_anchor():
    verts = [vertex_from_vec(v) for v in all_pivot_vectors(6, 3)]
    wts = [ef_weight(v.members[0], 2, 4, mode="constructive") for v in verts]
    res = clique_search(verts, wts, 4)
    assert isinstance(res, CliqueResult)
    assert res.weight == 71 and res.complete and res.kind == "lower"
    picked = {"".join(map(str, v.members[0])) for v in res.skeleton.vertices}
    assert picked == {"111000", "100110", "010101", "001011"}
    assert validate_skeleton(res.skeleton)["valid"]
    # upper weights agree here (every diagram code meets its bound at d=4)
    ups = [ef_weight(v.members[0], 2, 4) for v in verts]
    res_up = clique_search(verts, ups, 4)
    assert res_up.weight == 71 and res_up.kind == "upper"


def test_clique_search_one_vertex_and_budget():
    verts = [vertex_from_vec(v) for v in all_pivot_vectors(6, 3)]
    solo = clique_search(verts[:1], [7], 4)
    assert solo.indices == (0,) and solo.weight == 7
    tiny = clique_search(verts, [1] * len(verts), 4, budget=2)
    assert not tiny.complete


def test_complementary_patterns_compatible_at_2k():
    # moving all pivots across blocks always reaches the largest distance
    a = vertex_from_pattern(PivotPattern(((5, 3), (4, 0))))
    b = vertex_from_pattern(PivotPattern(((5, 0), (4, 3))))
    res = clique_search([a, b], [1, 1], 6)
    assert res.weight == 2


def test_json_roundtrip():
    sk = SkeletonCode(n=11, k=4, d=4, vertices=(
        vertex_from_pattern(PivotPattern(((4, 0), (7, 4))), label="tail"),
        vertex_from_int(1920, 11),
        SkeletonVertex(n=11, members=((1,) * 4 + (0,) * 7,
                                      (0,) * 7 + (1,) * 4)),
    ))
    text = skeleton_to_json(sk)
    assert skeleton_from_json(text) == sk
    # spec-shaped entries parse: binary-string vec and relation triples
    doc = """{"n": 7, "k": 3, "d": 4, "vertices": [
        {"vec": "1110000"},
        {"blocks": [[3, "<=", 1], [4, ">=", 2]], "k": 3}
    ]}"""
    back = skeleton_from_json(doc)
    assert back.member_count == 1 + PivotPattern(
        ((3, "<=", 1), (4, ">=", 2)), weight=3).count


def test_skeleton_code_guards():
    with pytest.raises(ValueError):
        SkeletonCode(n=6, k=3, d=3, vertices=())
    with pytest.raises(ValueError):
        SkeletonCode(n=6, k=3, d=4,
                     vertices=(vertex_from_vec("1100"),))
    sk = SkeletonCode(n=6, k=3, d=4, vertices=(
        vertex_from_vec("111000"), vertex_from_vec("000111")))
    assert sk.pivot_ints() == [56, 7]
