"""Skeletons: constant weight binary codes holding pivot vectors.

A skeleton vertex is either a single pivot vector or a block pattern (a
family of pivot vectors with per-block weight constraints).  The subspace
distance of two spaces is at least the Hamming distance of their pivot
vectors, so a skeleton with pairwise vertex distance >= d carries a union
of per-vertex codes at subspace distance >= d.  Pattern vertices are
atomic: they stand for one recorded code whose words share the pattern's
pivot support, so no intra-vertex distance check applies.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from math import comb, inf
from typing import Iterable, Sequence

from .config import LIMITS
from .qpoly import PolyQ
from .registry import BoundValue
from .rankmetric import fdrm_construct, fdrm_upper_bound
from .subspace import ferrers_from_pivot, pivot_int_decode, pivot_int_encode

_RELATIONS = ("=", "<=", ">=")


@dataclass(frozen=True)
class PivotPattern:
    """Pivot vectors grouped by per-block weight constraints.

    Each block is (length, relation, bound) with relation one of =, <=,
    >=; a plain (length, weight) pair means exact weight.  ``weight``
    fixes the total pivot count and may be omitted when every block is
    exact.
    """

    blocks: tuple[tuple[int, str, int], ...]
    weight: int | None = None

    def __post_init__(self):
        norm = []
        for b in self.blocks:
            if len(b) == 2:
                length, bound = b
                rel = "="
            else:
                length, rel, bound = b
            if rel not in _RELATIONS:
                raise ValueError(f"unknown block relation {rel!r}")
            if length < 1 or not 0 <= bound <= length:
                raise ValueError(f"bad block {b}")
            norm.append((int(length), rel, int(bound)))
        object.__setattr__(self, "blocks", tuple(norm))
        if self.weight is None:
            if any(rel != "=" for _, rel, _ in self.blocks):
                raise ValueError("inexact blocks need an explicit total weight")
            object.__setattr__(self, "weight", sum(b[2] for b in self.blocks))
        if not 0 <= self.weight <= self.n:
            raise ValueError("total weight out of range")
        if not self.weight_tuples():
            raise ValueError("pattern describes no pivot vector")

    @property
    def n(self) -> int:
        return sum(b[0] for b in self.blocks)

    @property
    def k(self) -> int:
        return self.weight

    def weight_tuples(self) -> list[tuple[int, ...]]:
        """Per-block weight assignments consistent with the constraints."""
        outs: list[tuple[int, ...]] = [()]
        for length, rel, bound in self.blocks:
            lo, hi = {"=": (bound, bound),
                      "<=": (0, bound),
                      ">=": (bound, length)}[rel]
            outs = [t + (w,) for t in outs
                    for w in range(lo, min(hi, length) + 1)
                    if sum(t) + w <= self.weight]
        return [t for t in outs if sum(t) == self.weight]

    @property
    def count(self) -> int:
        total = 0
        for tup in self.weight_tuples():
            prod = 1
            for (length, _, _), w in zip(self.blocks, tup):
                prod *= comb(length, w)
            total += prod
        return total

    def members(self) -> list[tuple[int, ...]]:
        out = []
        for tup in self.weight_tuples():
            per_block = []
            for (length, _, _), w in zip(self.blocks, tup):
                opts = []
                for pos in combinations(range(length), w):
                    v = [0] * length
                    for p in pos:
                        v[p] = 1
                    opts.append(tuple(v))
                per_block.append(opts)
            out.extend(sum(parts, ()) for parts in product(*per_block))
        return out


def pattern_expand(pattern: PivotPattern) -> list[tuple[int, ...]]:
    if pattern.count > LIMITS.expand_ceiling:
        raise ValueError(f"pattern expands to {pattern.count} vectors")
    return pattern.members()


@dataclass(frozen=True)
class SkeletonVertex:
    """One atomic unit of a skeleton: its possible pivot vectors."""

    n: int
    members: tuple[tuple[int, ...], ...]
    pattern: PivotPattern | None = None
    label: str = ""

    def __post_init__(self):
        if not self.members:
            raise ValueError("vertex needs at least one pivot vector")
        k = sum(self.members[0])
        for v in self.members:
            if len(v) != self.n or any(b not in (0, 1) for b in v):
                raise ValueError("member is not a length-n binary vector")
            if sum(v) != k:
                raise ValueError("members must share one pivot count")

    @property
    def k(self) -> int:
        return sum(self.members[0])

    @property
    def is_single(self) -> bool:
        return len(self.members) == 1


def vertex_from_vec(v: Sequence[int] | str, label: str = "") -> SkeletonVertex:
    t = tuple(int(b) for b in v)
    return SkeletonVertex(n=len(t), members=(t,), label=label)


def vertex_from_int(x: int, n: int, label: str = "") -> SkeletonVertex:
    return vertex_from_vec(pivot_int_decode(x, n), label=label)


def vertex_from_pattern(pattern: PivotPattern, label: str = "") -> SkeletonVertex:
    return SkeletonVertex(
        n=pattern.n,
        members=tuple(pattern_expand(pattern)),
        pattern=pattern,
        label=label,
    )


def hamming_distance_sets(a: Iterable[Sequence[int]],
                          b: Iterable[Sequence[int]]) -> int:
    """Exact minimum Hamming distance between two sets of binary vectors."""
    best = None
    blist = [tuple(v) for v in b]
    for u in a:
        ut = tuple(u)
        for v in blist:
            dist = sum(x != y for x, y in zip(ut, v))
            if best is None or dist < best:
                best = dist
                if best == 0:
                    return 0
    if best is None:
        raise ValueError("empty vector set")
    return best


def _blockwise_distance(p1: PivotPattern, p2: PivotPattern) -> int | None:
    """Exact pattern distance when the block partitions agree, else None.

    Within one block of length m, the least distance between a weight-a
    and a weight-b vector is |a-b|, attained by nesting the supports, and
    the blocks minimize independently.
    """
    if tuple(b[0] for b in p1.blocks) != tuple(b[0] for b in p2.blocks):
        return None
    return min(
        sum(abs(a - b) for a, b in zip(t1, t2))
        for t1 in p1.weight_tuples()
        for t2 in p2.weight_tuples()
    )


def vertex_distance(a: SkeletonVertex, b: SkeletonVertex) -> int:
    """Minimum Hamming distance between the member sets of two vertices."""
    if a.pattern is not None and b.pattern is not None:
        bw = _blockwise_distance(a.pattern, b.pattern)
        if bw is not None:
            return bw
    return hamming_distance_sets(a.members, b.members)


@dataclass(frozen=True)
class SkeletonCode:
    """Vertices of a common length and pivot count, intended distance d."""

    n: int
    k: int
    d: int
    vertices: tuple[SkeletonVertex, ...]

    def __post_init__(self):
        if self.d < 2 or self.d % 2:
            raise ValueError("distance must be even and at least 2")
        for v in self.vertices:
            if v.n != self.n:
                raise ValueError("vertex length mismatch")
            if v.k != self.k:
                raise ValueError("vertex pivot count mismatch")

    @property
    def member_count(self) -> int:
        return sum(len(v.members) for v in self.vertices)

    def pivot_ints(self) -> list[int]:
        """Pivot integers of the single-vector vertices, descending."""
        out = [pivot_int_encode(v.members[0]) for v in self.vertices if v.is_single]
        return sorted(out, reverse=True)


def validate_skeleton(skeleton: SkeletonCode) -> dict:
    """Pairwise vertex distance check; vertices themselves are atomic.

    Returns the minimum distance achieved (infinite for fewer than two
    vertices) and every violating pair.  Duplicate members across
    vertices show up as distance-0 violations.
    """
    violations = []
    min_dist: float = inf
    verts = skeleton.vertices
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            dist = vertex_distance(verts[i], verts[j])
            min_dist = min(min_dist, dist)
            if dist < skeleton.d:
                violations.append((i, j, dist))
    return {
        "n": skeleton.n,
        "k": skeleton.k,
        "d": skeleton.d,
        "vertex_count": len(verts),
        "member_count": skeleton.member_count,
        "min_distance": min_dist,
        "valid": not violations,
        "violations": violations,
    }


def ef_weight(v: Sequence[int], q: int | None, d: int,
              mode: str = "upper") -> BoundValue:
    """Capacity of one explicit pivot vector at subspace distance d.

    "upper" is q to the diagram dimension bound (symbolic when q is None);
    "constructive" builds the diagram code and reports its actual size.
    """
    diagram = ferrers_from_pivot(v)
    nu = fdrm_upper_bound(diagram, d)
    if mode == "upper":
        value: int | PolyQ
        value = PolyQ.monomial(1, nu) if q is None else q**nu
        return BoundValue(kind="upper", value=value, q=q,
                          provenance="diagram dimension bound")
    if mode != "constructive":
        raise ValueError(f"unknown weight mode {mode!r}")
    if q is None:
        raise ValueError("constructive weights need a numeric field order")
    code = fdrm_construct(diagram, d // 2, q)
    return BoundValue(kind="lower", value=q**code.dim, q=q,
                      provenance="diagram code construction",
                      constructive=True)


@dataclass(frozen=True)
class CliqueResult:
    """Best compatible vertex set found by the skeleton search.

    kind records what the total means: summing upper weights caps what
    any code assembled over this vertex pool can reach; summing lower
    (constructive) weights is an achievable size.
    """

    indices: tuple[int, ...]
    skeleton: SkeletonCode
    weight: int
    kind: str
    complete: bool


def clique_search(vertices: Sequence[SkeletonVertex],
                  weights: Sequence[int | BoundValue],
                  d: int, budget: int = 1_000_000) -> CliqueResult:
    """Maximum weight set of pairwise distance >= d vertices.

    Branch and bound with a greedy coloring bound (vertices sharing a
    color class are pairwise incompatible, so a feasible set takes at
    most the heaviest one per class).  Stops after expanding `budget`
    nodes; `complete` says whether the search ran to completion.
    """
    m = len(vertices)
    if m != len(weights):
        raise ValueError("one weight per vertex")
    if m == 0:
        raise ValueError("need at least one vertex")
    if m > LIMITS.clique_vertex_cap:
        raise ValueError(f"{m} vertices exceed cap {LIMITS.clique_vertex_cap}")
    nums = []
    kinds = set()
    for w in weights:
        if isinstance(w, BoundValue):
            kinds.add(w.kind)
            if isinstance(w.value, PolyQ):
                if w.q is None:
                    raise ValueError("clique weights must be numeric")
                nums.append(w.value.evaluate(w.q))
            else:
                nums.append(int(w.value))
        else:
            nums.append(int(w))
    if "upper" in kinds:
        kind = "upper"
    elif kinds <= {"lower", "exact"} and kinds:
        kind = "lower"
    else:
        kind = "value"
    # heaviest first, so greedy descent and the coloring bound bite early;
    # ties break toward the smaller pivot integer of the first member
    order = sorted(range(m),
                   key=lambda i: (-nums[i], pivot_int_encode(vertices[i].members[0])))
    verts = [vertices[i] for i in order]
    wts = [nums[i] for i in order]
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if vertex_distance(verts[i], verts[j]) >= d:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best_set: list[int] = []
    best_weight = 0
    nodes = 0
    complete = True

    def color_bound(cand: int) -> int:
        # vertices in one class are pairwise incompatible, so any feasible
        # set takes at most the heaviest vertex per class
        classes: list[tuple[int, int]] = []
        x = cand
        while x:
            b = x & -x
            i = b.bit_length() - 1
            x ^= b
            for idx, (mask, top) in enumerate(classes):
                if not (mask & adj[i]):
                    classes[idx] = (mask | b, max(top, wts[i]))
                    break
            else:
                classes.append((b, wts[i]))
        return sum(top for _, top in classes)

    def expand(chosen: list[int], weight: int, cand: int):
        nonlocal best_set, best_weight, nodes, complete
        nodes += 1
        if nodes > budget:
            complete = False
            return
        if weight > best_weight:
            best_weight = weight
            best_set = list(chosen)
        while cand:
            if weight + color_bound(cand) <= best_weight:
                return
            b = cand & -cand
            i = b.bit_length() - 1
            cand ^= b
            chosen.append(i)
            expand(chosen, weight + wts[i], cand & adj[i])
            chosen.pop()
            if not complete:
                return

    expand([], 0, (1 << m) - 1)
    indices = tuple(sorted(order[i] for i in best_set))
    chosen_vertices = tuple(vertices[i] for i in indices)
    skeleton = SkeletonCode(
        n=vertices[0].n,
        k=vertices[0].k,
        d=d,
        vertices=chosen_vertices,
    )
    return CliqueResult(indices=indices, skeleton=skeleton,
                        weight=best_weight, kind=kind, complete=complete)


# -- serialization -----------------------------------------------------------


def _vec_str(v: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in v)


def skeleton_to_json(skeleton: SkeletonCode) -> str:
    verts = []
    for v in skeleton.vertices:
        if v.pattern is not None:
            entry: dict = {
                "blocks": [list(b) for b in v.pattern.blocks],
                "k": v.pattern.weight,
            }
        elif v.is_single:
            entry = {"int": pivot_int_encode(v.members[0]), "n": skeleton.n}
        else:
            entry = {"vecs": [_vec_str(m) for m in v.members]}
        if v.label:
            entry["label"] = v.label
        verts.append(entry)
    doc = {"n": skeleton.n, "k": skeleton.k, "d": skeleton.d, "vertices": verts}
    return json.dumps(doc, indent=1)


def skeleton_from_json(text: str) -> SkeletonCode:
    doc = json.loads(text)
    n = doc["n"]
    vertices = []
    for entry in doc["vertices"]:
        label = entry.get("label", "")
        if "blocks" in entry:
            pattern = PivotPattern(tuple(tuple(b) for b in entry["blocks"]),
                                   weight=entry.get("k"))
            vertices.append(vertex_from_pattern(pattern, label=label))
        elif "int" in entry:
            vertices.append(vertex_from_int(entry["int"], entry.get("n", n),
                                            label=label))
        elif "vec" in entry:
            vertices.append(vertex_from_vec(entry["vec"], label=label))
        elif "vecs" in entry:
            members = tuple(tuple(int(b) for b in v) for v in entry["vecs"])
            vertices.append(SkeletonVertex(n=n, members=members, label=label))
        else:
            raise ValueError(f"unreadable vertex entry {entry}")
    return SkeletonCode(n=n, k=doc["k"], d=doc["d"], vertices=tuple(vertices))
