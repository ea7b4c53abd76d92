"""Subspaces of F_q^n in reduced row echelon form.

A k-dimensional subspace is identified with the unique k x n matrix in
reduced row echelon form (RREF) whose row space it is.  The pivot columns
of that matrix give a binary vector of weight k; the free entries to the
right of the pivots, with pivot columns deleted, form a tableau whose row
lengths are a Ferrers diagram inside a k x (n-k) box.

The subspace distance is ds(U, W) = dim U + dim W - 2 dim(U and W),
computed exactly from the rank of the stacked matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .config import LIMITS
from .gf import Field
from .qpoly import gauss_poly

__all__ = [
    "RankDeficientError",
    "Subspace",
    "FerrersDiagram",
    "rref",
    "reduce_rows",
    "rank_of",
    "subspace_distance",
    "intersection_dim",
    "pivot_int_encode",
    "pivot_int_decode",
    "all_pivot_vectors",
    "ferrers_from_pivot",
    "pivot_from_ferrers",
    "enumerate_subspaces",
    "count_subspaces_with_pivot",
    "gaussian_binomial",
    "orthogonal_complement",
    "subspace_pack",
    "subspace_unpack",
]

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


class RankDeficientError(ValueError):
    """Input rows were linearly dependent; carries the actual rank."""

    def __init__(self, rank: int, expected: int):
        super().__init__(f"rows have rank {rank}, expected {expected}")
        self.rank = rank
        self.expected = expected


def reduce_rows(rows: Sequence[Sequence[int]], field: Field) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form of arbitrary rows.

    Returns (nonzero RREF rows, pivot columns).  Never raises on rank
    deficiency; zero rows are dropped.
    """
    work = [list(r) for r in rows]
    if not work:
        return (), ()
    n = len(work[0])
    if any(len(r) != n for r in work):
        raise ValueError("ragged rows")
    for r in work:
        for x in r:
            field.check(x)
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        sel = None
        for i in range(rank, len(work)):
            if work[i][col]:
                sel = i
                break
        if sel is None:
            continue
        work[rank], work[sel] = work[sel], work[rank]
        inv = field.inv(work[rank][col])
        if inv != 1:
            work[rank] = [field.mul(inv, x) for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                c = work[i][col]
                row_r = work[rank]
                work[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(work[i], row_r)]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return tuple(tuple(r) for r in work[:rank]), tuple(pivots)


def rank_of(rows: Sequence[Sequence[int]], field: Field) -> int:
    return len(reduce_rows(rows, field)[0])


@dataclass(frozen=True)
class Subspace:
    """A subspace given by its canonical RREF generator matrix."""

    n: int
    k: int
    field: Field
    rows: Matrix
    pivots: tuple[int, ...]

    def pivot_vector(self) -> tuple[int, ...]:
        v = [0] * self.n
        for p in self.pivots:
            v[p] = 1
        return tuple(v)

    def pivot_int(self) -> int:
        return pivot_int_encode(self.pivot_vector())

    def tableau(self) -> tuple[tuple[int, ...], ...]:
        """Free entries right of each pivot, pivot columns removed."""
        pset = set(self.pivots)
        out = []
        for i, p in enumerate(self.pivots):
            out.append(tuple(self.rows[i][j] for j in range(p + 1, self.n) if j not in pset))
        return tuple(out)

    def contains(self, vec: Sequence[int]) -> bool:
        """Membership test by elimination against the RREF rows."""
        v = list(vec)
        F = self.field
        for i, p in enumerate(self.pivots):
            if v[p]:
                c = v[p]
                row = self.rows[i]
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return not any(v)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)


def rref(rows: Sequence[Sequence[int]], field: Field) -> Subspace:
    """Canonical form of a full-rank generator matrix.

    Raises RankDeficientError when the rows are dependent, reporting the
    reduced dimension instead of silently returning a smaller subspace.
    """
    k = len(rows)
    red, pivots = reduce_rows(rows, field)
    if len(red) != k:
        raise RankDeficientError(len(red), k)
    n = len(rows[0])
    return Subspace(n=n, k=k, field=field, rows=red, pivots=pivots)


def subspace_from_tableau(
    n: int, pivots: Sequence[int], tableau: Sequence[Sequence[int]], field: Field
) -> Subspace:
    pset = set(pivots)
    rows = []
    for i, p in enumerate(pivots):
        row = [0] * n
        row[p] = 1
        free = [j for j in range(p + 1, n) if j not in pset]
        if len(free) != len(tableau[i]):
            raise ValueError("tableau row length mismatch")
        for j, x in zip(free, tableau[i]):
            row[j] = field.check(x)
        rows.append(tuple(row))
    return Subspace(n=n, k=len(pivots), field=field, rows=tuple(rows), pivots=tuple(pivots))


def subspace_distance(U: Subspace, W: Subspace) -> int:
    """dim U + dim W - 2 dim(U and W), via the rank of the stacked rows."""
    if U.n != W.n or U.field is not W.field:
        raise ValueError("subspaces live in different ambient spaces")
    r = rank_of(U.rows + W.rows, U.field)
    return 2 * r - U.k - W.k


def intersection_dim(U: Subspace, W: Subspace) -> int:
    r = rank_of(U.rows + W.rows, U.field)
    return U.k + W.k - r


# -- pivot vectors ----------------------------------------------------------


def pivot_int_encode(v: Sequence[int]) -> int:
    """Binary vector to integer, first coordinate most significant."""
    x = 0
    for b in v:
        if b not in (0, 1):
            raise ValueError("pivot vectors are binary")
        x = (x << 1) | b
    return x


def pivot_int_decode(x: int, n: int) -> tuple[int, ...]:
    if x < 0 or x >= 1 << n:
        raise ValueError(f"integer {x} does not fit in {n} bits")
    return tuple((x >> (n - 1 - i)) & 1 for i in range(n))


def all_pivot_vectors(n: int, k: int) -> list[tuple[int, ...]]:
    """All weight-k binary vectors of length n, descending as integers.

    Ascending lexicographic order of the pivot position tuples is the same
    ordering, which is what itertools.combinations yields.
    """
    out = []
    for pos in combinations(range(n), k):
        v = [0] * n
        for p in pos:
            v[p] = 1
        out.append(tuple(v))
    return out


# -- Ferrers diagrams -------------------------------------------------------


@dataclass(frozen=True)
class FerrersDiagram:
    """Top-justified, right-aligned dot diagram inside a k x (n-k) box.

    Row i (0-indexed) has row_lengths[i] dots occupying the rightmost
    columns of the box.  Row lengths are non-increasing.
    """

    n: int
    k: int
    row_lengths: tuple[int, ...]

    def __post_init__(self):
        w = self.width
        rl = self.row_lengths
        if len(rl) != self.k:
            raise ValueError("need one row length per row")
        if any(r < 0 or r > w for r in rl):
            raise ValueError(f"row lengths must lie in [0, {w}]")
        if any(rl[i] < rl[i + 1] for i in range(len(rl) - 1)):
            raise ValueError("row lengths must be non-increasing")

    @property
    def width(self) -> int:
        return self.n - self.k

    @property
    def size(self) -> int:
        return sum(self.row_lengths)

    def cells(self) -> Iterator[tuple[int, int]]:
        """(row, col) positions of the dots, 0-indexed in the box."""
        w = self.width
        for i, r in enumerate(self.row_lengths):
            for j in range(w - r, w):
                yield (i, j)

    def conjugate(self) -> "FerrersDiagram":
        """Transpose diagram, living in a (n-k) x k box of the same size."""
        w = self.width
        rl = tuple(sum(1 for r in self.row_lengths if r > j) for j in range(w))
        return FerrersDiagram(n=self.n, k=w, row_lengths=rl)


def ferrers_from_pivot(v: Sequence[int]) -> FerrersDiagram:
    """Diagram of the free tableau entries for a pivot vector.

    With pivots at 1-indexed positions p_1 < ... < p_k the i-th row length
    is (n - p_i) - (k - i).
    """
    n = len(v)
    pos = [i + 1 for i, b in enumerate(v) if b]
    k = len(pos)
    rl = tuple((n - p) - (k - i) for i, p in enumerate(pos, start=1))
    return FerrersDiagram(n=n, k=k, row_lengths=rl)


def pivot_from_ferrers(F: FerrersDiagram) -> tuple[int, ...]:
    """Inverse of ferrers_from_pivot on diagrams in their pivot box."""
    n, k = F.n, F.k
    v = [0] * n
    for i, r in enumerate(F.row_lengths, start=1):
        p = n - k + i - r
        if not 1 <= p <= n or v[p - 1]:
            raise ValueError("diagram does not come from a pivot vector")
        v[p - 1] = 1
    return tuple(v)


# -- enumeration ------------------------------------------------------------


def count_subspaces_with_pivot(v: Sequence[int], q: int) -> int:
    return q ** ferrers_from_pivot(v).size


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    return gauss_poly(n, k).evaluate(q)


def enumerate_subspaces(
    n: int,
    k: int,
    field: Field,
    pivot: Sequence[int] | None = None,
    ceiling: int | None = None,
) -> Iterator[Subspace]:
    """All k-subspaces of F_q^n in canonical order.

    Pivot vectors run in descending integer order; within one pivot vector
    the tableau entries run in ascending lexicographic order, read row by
    row.  An optional pivot filter restricts to one pivot vector.  The
    total count is checked against a ceiling before any work happens.
    """
    q = field.order
    if ceiling is None:
        ceiling = LIMITS.enum_ceiling
    if pivot is not None:
        pivots_list = [tuple(pivot)]
        if len(pivot) != n or sum(pivot) != k:
            raise ValueError("pivot filter must be a length-n weight-k binary vector")
    else:
        pivots_list = all_pivot_vectors(n, k)
    total = sum(count_subspaces_with_pivot(v, q) for v in pivots_list)
    if total > ceiling:
        raise ValueError(f"enumeration of {total} subspaces exceeds ceiling {ceiling}")
    for v in pivots_list:
        pos = tuple(i for i, b in enumerate(v) if b)
        F = ferrers_from_pivot(v)
        sizes = F.row_lengths
        T = F.size
        for idx in range(q**T):
            digits = []
            x = idx
            for _ in range(T):
                digits.append(x % q)
                x //= q
            digits.reverse()  # first tableau entry is most significant
            tab = []
            off = 0
            for r in sizes:
                tab.append(tuple(digits[off : off + r]))
                off += r
            yield subspace_from_tableau(n, pos, tab, field)


# -- duality ------------------------------------------------------------------


def orthogonal_complement(U: Subspace) -> Subspace:
    """Dual subspace under the standard bilinear form."""
    n, k, F = U.n, U.k, U.field
    pset = set(U.pivots)
    free = [j for j in range(n) if j not in pset]
    rows = []
    for f in free:
        vec = [0] * n
        vec[f] = 1
        for i, p in enumerate(U.pivots):
            vec[p] = F.neg(U.rows[i][f])
        rows.append(vec)
    return rref(rows, F)


# -- packed integer codec -----------------------------------------------------


def subspace_pack(S: Subspace) -> int:
    """Row-major base-q packing of the RREF matrix, first entry least
    significant.  Bijective on (n, k, q)-canonical matrices."""
    q = S.field.order
    x = 0
    for row in reversed(S.rows):
        for c in reversed(row):
            x = x * q + c
    return x


def subspace_unpack(x: int, n: int, k: int, field: Field) -> Subspace:
    q = field.order
    rows = []
    for _ in range(k):
        row = []
        for _ in range(n):
            row.append(x % q)
            x //= q
        rows.append(tuple(row))
    if x:
        raise ValueError("packed value has leftover digits")
    return rref(rows, field)
