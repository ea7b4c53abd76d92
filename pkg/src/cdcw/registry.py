"""Recorded sizes and packing values for small constant dimension codes.

Every entry is a one-sided (or exact) statement about A_q(n, d; k), the
maximum size of a code of k-subspaces of F_q^n with pairwise subspace
distance at least d, or about the block-restricted packing numbers E_q.
Symbolic entries (q is None) hold for every prime power q >= 2; numeric
entries are sharper values known for a single field size.

Lookups normalize k via orthogonal-complement duality,
A_q(n, d; k) = A_q(n, d; n - k).
"""
from __future__ import annotations

from dataclasses import dataclass

from .qpoly import PolyQ, gauss_poly, poly_parse, poly_print


@dataclass(frozen=True)
class BoundValue:
    """A single recorded bound.

    kind is "lower", "upper", or "exact" (exact serves as both sides).
    value is an int or a PolyQ in the field size q.  q is None when the
    statement holds for every prime power.  constructive entries can be
    rebuilt by the named recipe in the construct module.
    """

    kind: str
    value: int | PolyQ
    q: int | None = None
    provenance: str = ""
    constructive: bool = False
    recipe: str | None = None

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "exact"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    def evaluate(self, q: int) -> int:
        if self.q is not None and q != self.q:
            raise ValueError(f"entry is specific to q={self.q}, not q={q}")
        if isinstance(self.value, PolyQ):
            return self.value.evaluate(q)
        return self.value

    def report(self, name: str) -> dict:
        value = poly_print(self.value) if isinstance(self.value, PolyQ) else self.value
        return {
            "name": name,
            "q": "symbolic" if self.q is None else self.q,
            "kind": self.kind,
            "value": value,
            "provenance": self.provenance,
            "constructive": self.constructive,
        }


def _p(text: str) -> PolyQ:
    return poly_parse(text)


_ONE = PolyQ(1)
_Q20 = PolyQ.monomial(1, 20)
_Q24 = PolyQ.monomial(1, 24)

# Packing value of the ten-row coset scheme on G_1(5,2), see construct.py.
PACKED_5_2_POLY = _p("q^9+q^7+q^6+7q^5+5q^4+3q^3+2q^2+q+1")
# Same quantity when every part keeps a single pivot vector.
PER_PIVOT_5_2_POLY = _p("q^9+q^7+q^6+q^5+q^4+q^3+2q^2+q+1")
# Nested-coset packing value for two 3x3 blocks at distance 6.
EQ_6_6_3_POLY = _p("q^9+2q^3+1")

# Second-layer count of a two-block lifting: words of the (5x5, 2) additive
# code with rank at most 3, written in closed form.
SECOND_LAYER_5_5_POLY = gauss_poly(5, 2) * _p("q^10-q^7-q^6+q^2+q-1") + _ONE

TWO_BLOCK_10_4_5_POLY = _Q20 + SECOND_LAYER_5_5_POLY + PACKED_5_2_POLY

TWO_BLOCK_12_6_6_POLY = (
    _Q24 + _ONE + gauss_poly(6, 3) * _p("q^6-1") + EQ_6_6_3_POLY
)

A_7_4_3_POLY = _p("q^8+q^5+q^4+q^2-q")
A_8_4_4_POLY = (
    _p("q^12") + _p("q^2-1") * _p("q^2+1") * _p("q^2+1") * _p("q^2+q+1") + _ONE
)

A_11_4_4_POLY = (
    _p("q^21+q^17+2q^15+3q^14+4q^13+q^12+q^11+q^9+2q^7+2q^6+q^5") + A_7_4_3_POLY
)
A_15_4_4_POLY = (
    A_8_4_4_POLY * PolyQ.monomial(1, 21)
    + _p("q^21+2q^19+3q^18+5q^17+q^16+4q^15+6q^14+11q^13+10q^12+13q^11"
         "+11q^10+8q^9+3q^8+3q^7+2q^6+q^5")
    + A_7_4_3_POLY
)

_SEARCH = "recorded computer search result"
_CLASSIFIED = "recorded exhaustive classification"

_A: dict[tuple[int, int, int], tuple[BoundValue, ...]] = {
    (5, 4, 2): (
        BoundValue("exact", 9, 2, "maximal partial line spread in F_2^5"),
        BoundValue("exact", _p("q^3+1"), None, "maximal partial line spread"),
    ),
    (6, 4, 3): (
        BoundValue("exact", 77, 2, _CLASSIFIED),
        BoundValue("lower", _p("q^6+2q^2+2q+1"), None,
                   "multilevel construction", True, "multilevel:6,4,3"),
    ),
    (6, 6, 3): (
        BoundValue("upper", 9, 2, "recorded upper bound"),
    ),
    (7, 4, 3): (
        BoundValue("lower", 333, 2, _SEARCH),
        BoundValue("lower", 6978, 3, _SEARCH),
        BoundValue("lower", A_7_4_3_POLY, None, "recorded parametric construction"),
    ),
    (8, 4, 3): (BoundValue("lower", 1326, 2, _SEARCH),),
    (8, 4, 4): (
        BoundValue("lower", 4801, 2, _SEARCH),
        BoundValue("lower", A_8_4_4_POLY, None,
                   "two-block lifting with restricted second layer", True,
                   "construction1:4,4"),
    ),
    (9, 4, 3): (
        BoundValue("lower", 5986, 2, _SEARCH),
        BoundValue("lower", _p("q^12+2q^8+2q^7+q^6+2q^5+2q^4-2q^2-2q+1"), None,
                   "recorded parametric construction"),
    ),
    (10, 4, 3): (BoundValue("lower", 23870, 2, _SEARCH),),
    (10, 4, 5): (
        BoundValue("lower", 1179625, 2,
                   "two-block assembly with spread-partition products", True,
                   "assemble:a10_4_5"),
        BoundValue("lower", TWO_BLOCK_10_4_5_POLY, None,
                   "two-block assembly with coset packing", True),
    ),
    (11, 4, 3): (BoundValue("lower", 97526, 2, _SEARCH),),
    (11, 4, 4): (
        BoundValue("lower", 2383085, 2, "skeleton assembly", True,
                   "assemble:a11_4_4"),
        BoundValue("lower", 10639658703, 3, "skeleton assembly", True,
                   "assemble:a11_4_4"),
        BoundValue("lower", A_11_4_4_POLY, None, "skeleton assembly", True),
    ),
    (12, 6, 6): (
        BoundValue("lower", 16865631, 2,
                   "two-block assembly with nested-coset packing", True,
                   "assemble:a12_6_6"),
        BoundValue("lower", TWO_BLOCK_12_6_6_POLY, None,
                   "two-block assembly with nested-coset packing", True),
    ),
    (15, 4, 4): (
        BoundValue("lower", 10073483885, 2, "skeleton assembly", True,
                   "assemble:a15_4_4"),
        BoundValue("lower", A_15_4_4_POLY, None, "skeleton assembly", True),
    ),
}

# Packing numbers E_q(nbar, abar, d): codes in F_q^(n1+n2) whose codewords
# meet the i-th coordinate block in dimension exactly a_i.
_E_ABAR: dict[tuple[tuple[int, ...], tuple[int, ...], int], tuple[BoundValue, ...]] = {
    ((5, 5), (2, 2), 4): (
        BoundValue("lower", PACKED_5_2_POLY, None, "coset packing scheme", True,
                   "coset_packing:5,2"),
        BoundValue("lower", PER_PIVOT_5_2_POLY, None,
                   "per-pivot coset products", True),
        BoundValue("lower", 1313, 2, "spread-partition products", True,
                   "greedy_partition:5,2"),
    ),
    ((5, 5), (2, 3), 4): (
        BoundValue("lower", PACKED_5_2_POLY, None,
                   "coset packing scheme, dual second block", True,
                   "coset_packing:5,2"),
        BoundValue("lower", 1313, 2, "spread-partition products, dual second block",
                   True, "greedy_partition:5,2"),
    ),
    ((6, 6), (3, 3), 6): (
        BoundValue("lower", EQ_6_6_3_POLY, None, "nested-coset packing", True,
                   "eq663_packing"),
    ),
}

# Packing numbers E_q(nbar, d; k): k-dim codewords meeting the complement of
# each block in dimension at least d/2.
_E_DIM: dict[tuple[tuple[int, ...], int, int], tuple[BoundValue, ...]] = {
    ((6, 6), 4, 6): (
        BoundValue("lower", 2154496, 2, "recorded parallel-type construction"),
    ),
}

# The sixteen-word 3x4 matrix codes with minimum rank distance 3 over F_2
# fall into 7 linear and 30 nonlinear classes; over all their cosets exactly
# three rank distributions occur (written as rank^count factors).
MRD_3X4_DISTRIBUTION_ROWS: tuple[tuple[str, tuple[int, int, int, int]], ...] = (
    ("0^1 3^15", (1, 0, 0, 15)),
    ("2^7 3^9", (0, 0, 7, 9)),
    ("1^1 2^4 3^11", (0, 1, 4, 11)),
)
MRD_3X4_CONTEXT = {"rows": 3, "cols": 4, "min_rank_distance": 3, "q": 2,
                   "size": 16, "linear_classes": 7, "nonlinear_classes": 30}


def _match_q(entries, q):
    if q is None:
        return [e for e in entries if e.q is None]
    return [e for e in entries if e.q is None or e.q == q]


def _rank_value(entry: BoundValue, q: int | None) -> int:
    # symbolic entries are ranked by their value at the smallest field size
    return entry.evaluate(q if q is not None else 2)


def _pick(entries, q, kind):
    if kind == "exact":
        pool = [e for e in entries if e.kind == "exact"]
        return pool[0] if pool else None
    if kind == "lower":
        pool = [e for e in entries if e.kind in ("lower", "exact")]
        return max(pool, key=lambda e: _rank_value(e, q), default=None)
    if kind == "upper":
        pool = [e for e in entries if e.kind in ("upper", "exact")]
        return min(pool, key=lambda e: _rank_value(e, q), default=None)
    raise ValueError(f"unknown lookup kind {kind!r}")


def registry_entries(n: int, d: int, k: int, q: int | None = None) -> tuple[BoundValue, ...]:
    """All stored entries applicable to A_q(n, d; k), after duality."""
    if not (0 < k < n):
        raise ValueError("need 0 < k < n")
    key = (n, d, min(k, n - k))
    return tuple(_match_q(_A.get(key, ()), q))


def registry_lookup(n: int, d: int, k: int, q: int | None = None,
                    kind: str = "lower") -> BoundValue | None:
    """Best stored bound of the requested kind, or None.

    q=None restricts to symbolic entries.  "lower" returns the largest
    applicable lower/exact value, "upper" the smallest upper/exact one.
    """
    return _pick(registry_entries(n, d, k, q), q, kind)


def registry_lookup_e_abar(nbar, abar, d, q=None, kind="lower"):
    """Stored bound for the exact-block-dimension packing number."""
    entries = _match_q(_E_ABAR.get((tuple(nbar), tuple(abar), d), ()), q)
    return _pick(entries, q, kind)


def registry_lookup_e_dim(nbar, d, k, q=None, kind="lower"):
    """Stored bound for the minimum-block-intersection packing number."""
    entries = _match_q(_E_DIM.get((tuple(nbar), d, k), ()), q)
    return _pick(entries, q, kind)
