"""Upper bounds for constant dimension codes.

Counting bounds (anticode, Johnson chain, split packings) and an exact
rational pivot ILP.  Everything numeric here is exact: gaussian binomials
are integers, the simplex runs on Fraction arithmetic with Bland's rule,
and LP optima come with a verified dual certificate.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import LIMITS
from .qpoly import PolyQ, PolyRatio, gauss_poly
from .registry import registry_lookup
from .rankmetric import fdrm_upper_bound
from .subspace import (
    all_pivot_vectors,
    count_subspaces_with_pivot,
    ferrers_from_pivot,
    gaussian_binomial,
    pivot_int_encode,
)


def _check_params(n: int, d: int, k: int) -> None:
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    if d < 2 or d % 2:
        raise ValueError("subspace distance must be even and at least 2")


def anticode_bound(n: int, d: int, k: int, q: int) -> int:
    """No two codewords share a (k-d/2+1)-subspace; divide the supply."""
    _check_params(n, d, k)
    kk = min(k, n - k)
    t = kk - d // 2 + 1
    if t < 1:
        return 1
    return gaussian_binomial(n, t, q) // gaussian_binomial(kk, t, q)


def anticode_bound_ratio(n: int, d: int, k: int) -> PolyRatio:
    """Symbolic form of the anticode bound; floor at evaluation time."""
    _check_params(n, d, k)
    kk = min(k, n - k)
    t = kk - d // 2 + 1
    if t < 1:
        return PolyRatio(PolyQ(1), PolyQ(1))
    return PolyRatio(gauss_poly(n, t), gauss_poly(kk, t))


def johnson_bound(n: int, d: int, k: int, q: int) -> int:
    """One step of the dimension-reducing chain bound.

    The factor for the smaller code is the best available upper bound:
    recorded exact values and upper bounds, the anticode bound, or another
    chain step, whichever is least.
    """
    _check_params(n, d, k)
    kk = min(k, n - k)
    if 2 * kk < d:
        return 1
    memo: dict[tuple[int, int], int] = {}

    def inner(n2: int, k2: int) -> int:
        k2 = min(k2, n2 - k2)
        if k2 <= 0:
            return 1
        if 2 * k2 < d:
            return 1
        key = (n2, k2)
        if key in memo:
            return memo[key]
        cands = [anticode_bound(n2, d, k2, q)]
        stored = registry_lookup(n2, d, k2, q, "upper")
        if stored is not None:
            cands.append(int(stored.value))
        cands.append((q**n2 - 1) * inner(n2 - 1, k2 - 1) // (q**k2 - 1))
        memo[key] = min(cands)
        return memo[key]

    return (q**n - 1) * inner(n - 1, kk - 1) // (q**kk - 1)


# -- pivot refinements --------------------------------------------------------


def pivot_subspace_count_exponent(v: Sequence[int], vp: Sequence[int]) -> int | None:
    """Exponent e with q^e subspaces of pivot vector vp inside one fixed
    subspace of pivot vector v; None when the support does not fit."""
    if any(b and not a for a, b in zip(v, vp)):
        return None
    supp = [i for i, b in enumerate(v) if b]
    tilde = tuple(int(vp[i]) for i in supp)
    return ferrers_from_pivot(tilde).size


def pivot_subspace_count(v: Sequence[int], vp: Sequence[int], q: int) -> int:
    """Subspaces with pivot vector vp inside one fixed subspace with pivot
    vector v.  The count only depends on the two pivot vectors."""
    e = pivot_subspace_count_exponent(v, vp)
    return 0 if e is None else q**e


# -- exact rational simplex ---------------------------------------------------


class UnboundedError(ValueError):
    pass


def simplex_max(c: Sequence[Fraction], rows: Sequence[Sequence[Fraction]],
                rhs: Sequence[Fraction]):
    """max c.x subject to rows.x <= rhs, x >= 0, with rhs >= 0.

    Dense tableau, Bland's pivot rule (no cycling).  Returns (value, x, y)
    where y holds the dual multipliers, one per constraint.
    """
    m, nv = len(rows), len(c)
    if any(b < 0 for b in rhs):
        raise ValueError("slack start needs nonnegative right hand sides")
    width = nv + m
    tab = []
    for i in range(m):
        row = [Fraction(x) for x in rows[i]] + [Fraction(0)] * m
        row[nv + i] = Fraction(1)
        row.append(Fraction(rhs[i]))
        tab.append(row)
    z = [Fraction(-x) for x in c] + [Fraction(0)] * (m + 1)
    basis = list(range(nv, nv + m))
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best = ratio
                    leave = i
        if leave is None:
            raise UnboundedError("objective is unbounded")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        prow = tab[leave]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
        if z[enter]:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, prow)]
        basis[leave] = enter
    x = [Fraction(0)] * nv
    for i, bi in enumerate(basis):
        if bi < nv:
            x[bi] = tab[i][-1]
    y = [z[nv + i] for i in range(m)]
    return z[-1], x, y


def certify_lp_optimum(c, rows, rhs, value, y) -> bool:
    """Weak duality check: y >= 0, y.A >= c componentwise, y.b == value."""
    m, nv = len(rows), len(c)
    if any(yi < 0 for yi in y):
        return False
    for j in range(nv):
        if sum(y[i] * rows[i][j] for i in range(m)) < c[j]:
            return False
    return sum(y[i] * rhs[i] for i in range(m)) == value


# -- pivot ILP ---------------------------------------------------------------


@dataclass
class IlpReport:
    """Outcome of the pivot counting integer program."""

    value: int
    lp_value: Fraction
    lp_certified: bool
    solution: dict[int, int]
    nodes: int
    complete: bool
    constraint_count: int
    variable_count: int

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "lp_value": [self.lp_value.numerator, self.lp_value.denominator],
            "lp_certified": self.lp_certified,
            "solution": {str(p): c for p, c in sorted(self.solution.items(),
                                                      reverse=True)},
            "nodes": self.nodes,
            "complete": self.complete,
            "constraints": self.constraint_count,
            "variables": self.variable_count,
        }


def _ilp_system(n, d, k, q, pivots, cuts):
    t = k - d // 2 + 1
    vs = [tuple(v) for v in (pivots if pivots is not None
                             else all_pivot_vectors(n, k))]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for vp in all_pivot_vectors(n, t):
        coeffs = [Fraction(pivot_subspace_count(v, vp, q)) for v in vs]
        if any(coeffs):
            rows.append(coeffs)
            rhs.append(Fraction(count_subspaces_with_pivot(vp, q)))
    boxes = []
    for j, v in enumerate(vs):
        cap = q ** fdrm_upper_bound(ferrers_from_pivot(v), d)
        boxes.append(cap)
        if cuts:
            row = [Fraction(0)] * len(vs)
            row[j] = Fraction(1)
            rows.append(row)
            rhs.append(Fraction(cap))
    return vs, rows, rhs, boxes


def _decode_pivot_member(member, n: int) -> tuple[int, ...]:
    if isinstance(member, int):
        return tuple((member >> (n - 1 - i)) & 1 for i in range(n))
    return tuple(int(x) for x in member)


def best_known_upper(n: int, d: int, k: int, q: int) -> int:
    """Smallest available upper bound for the (n, d, k) family at q:
    anticode, chain bound, and any recorded value."""
    if k < 0 or k > n:
        return 0
    kk = min(k, n - k)
    if kk <= 0 or 2 * kk < d:
        return 1
    best = min(anticode_bound(n, d, k, q), johnson_bound(n, d, k, q))
    stored = registry_lookup(n, d, k, q, "upper")
    if stored is not None:
        best = min(best, int(stored.value))
    return best


def restriction_rows(n: int, d: int, k: int, q: int
                     ) -> list[tuple[tuple[tuple[int, ...], ...], int]]:
    """Valid extra inequality rows from coordinate restrictions.

    A pivot vector starting with j zeros belongs to a codeword living
    inside the span of the last n-j coordinates; one ending with l ones
    belongs to a codeword containing the span of the last l unit vectors.
    Restricting, respectively quotienting, embeds each subfamily
    isometrically into a smaller parameter set, so its total count is
    capped by the best known upper bound there.
    """
    _check_params(n, d, k)
    vs = [tuple(v) for v in all_pivot_vectors(n, k)]
    out: list[tuple[tuple[tuple[int, ...], ...], int]] = []
    for j in range(n + 1):
        for l in range(k + 1):
            if j + l == 0 or j + l > n:
                continue
            subset = tuple(
                v for v in vs
                if all(v[i] == 0 for i in range(j))
                and all(v[n - 1 - i] == 1 for i in range(l))
            )
            if not subset or len(subset) == len(vs):
                continue
            out.append((subset, best_known_upper(n - j - l, d, k - l, q)))
    return out


def ilp_pivot_bound(n: int, d: int, k: int, q: int,
                    pivots: Sequence[Sequence[int]] | None = None,
                    relax: bool = False,
                    cuts: bool = True,
                    extra_rows: Sequence[tuple[Sequence, int]] | None = None,
                    node_budget: int = 100_000) -> IlpReport:
    """Exact maximum of sum(a_v) subject to the per-pivot counting
    constraints: codewords with pivot vector v contain a known number of
    t-subspaces of each pivot vector v', and no t-subspace repeats.

    With ``relax`` the LP optimum is reported instead (value floored).
    ``cuts`` adds the per-pivot diagram capacity rows.  ``extra_rows``
    takes (subset, bound) pairs, each stating that the pivot vectors in
    the subset carry at most ``bound`` codewords in total; members may be
    0/1 vectors or pivot integers.

    Best-first branch and bound on the exact LP relaxation; branching
    variable is the most fractional one, ties broken toward the larger
    pivot integer.  If the node budget runs out, the returned value is
    the floored root relaxation, flagged incomplete.
    """
    _check_params(n, d, k)
    if k - d // 2 + 1 < 1:
        raise ValueError("distance too large for this dimension")
    vs, rows, rhs, boxes = _ilp_system(n, d, k, q, pivots, cuts)
    nv = len(vs)
    if nv > LIMITS.ilp_variable_cap:
        raise ValueError(f"{nv} pivot classes exceed the variable cap")
    if extra_rows:
        index = {v: j for j, v in enumerate(vs)}
        for subset, bound in extra_rows:
            row = [Fraction(0)] * nv
            hit = False
            for member in subset:
                jdx = index.get(_decode_pivot_member(member, n))
                if jdx is not None:
                    row[jdx] = Fraction(1)
                    hit = True
            if hit:
                rows.append(row)
                rhs.append(Fraction(bound))
    ones = [Fraction(1)] * nv
    root_value, root_x, root_y = simplex_max(ones, rows, rhs)
    certified = certify_lp_optimum(ones, rows, rhs, root_value, root_y)
    if relax:
        solution = {}
        if all(xi.denominator == 1 for xi in root_x):
            solution = {pivot_int_encode(v): int(c)
                        for v, c in zip(vs, root_x) if c}
        return IlpReport(
            value=int(root_value),
            lp_value=root_value,
            lp_certified=certified,
            solution=solution,
            nodes=1,
            complete=True,
            constraint_count=len(rows),
            variable_count=nv,
        )

    def node_lp(lo, hi):
        # LP over the window [lo, hi]; None when the fixed floor lo
        # already violates a constraint (all coefficients nonnegative).
        sub_rhs = []
        for row, b in zip(rows, rhs):
            nb = b - sum(r * l for r, l in zip(row, lo) if l)
            if nb < 0:
                return None
            sub_rhs.append(nb)
        win_rows = list(rows)
        win_rhs = sub_rhs
        for j in range(nv):
            row = [Fraction(0)] * nv
            row[j] = Fraction(1)
            win_rows.append(row)
            win_rhs.append(Fraction(hi[j] - lo[j]))
        value, x, _ = simplex_max(ones, win_rows, win_rhs)
        return value + sum(lo), [xi + l for xi, l in zip(x, lo)]

    def most_fractional(x):
        best_j = None
        best_score = Fraction(0)
        for j in range(nv):
            f = x[j] - int(x[j])
            score = min(f, 1 - f)
            if score > best_score:
                best_score = score
                best_j = j
        return best_j

    best_val = -1
    best_x: list[int] = [0] * nv
    nodes = 1
    complete = True
    heap: list = []
    tick = 0

    def consider(total, x, lo, hi):
        nonlocal best_val, best_x, tick
        fj = most_fractional(x)
        if fj is None:
            ival = int(total)
            if ival > best_val:
                best_val = ival
                best_x = [int(v) for v in x]
        else:
            heapq.heappush(heap, (-total, tick, x, lo, hi, fj))
            tick += 1

    consider(root_value, root_x, [0] * nv, list(boxes))
    while heap:
        negb, _, x, lo, hi, fj = heapq.heappop(heap)
        if int(-negb) <= best_val:
            break  # best-first: no open node can beat the incumbent
        if nodes + 2 > node_budget:
            complete = False
            break
        split = int(x[fj])
        lo_up = list(lo)
        lo_up[fj] = split + 1
        hi_dn = list(hi)
        hi_dn[fj] = split
        for nlo, nhi in ((lo, hi_dn), (lo_up, hi)):
            if any(l > h for l, h in zip(nlo, nhi)):
                continue
            res = node_lp(nlo, nhi)
            nodes += 1
            if res is not None:
                consider(res[0], res[1], nlo, nhi)
    value = best_val if complete else int(root_value)
    solution = {
        pivot_int_encode(v): cnt for v, cnt in zip(vs, best_x) if cnt
    }
    return IlpReport(
        value=value,
        lp_value=root_value,
        lp_certified=certified,
        solution=solution,
        nodes=nodes,
        complete=complete,
        constraint_count=len(rows),
        variable_count=nv,
    )


def ilp_export(n: int, d: int, k: int, q: int,
               cuts: bool = True) -> str:
    """The pivot counting program in LP text format."""
    vs, rows, rhs, _ = _ilp_system(n, d, k, q, None, cuts)
    names = [f"a{pivot_int_encode(v)}" for v in vs]
    out = ["Maximize", " obj: " + " + ".join(names), "Subject To"]
    for i, (row, b) in enumerate(zip(rows, rhs)):
        terms = " + ".join(
            f"{int(cf)} {names[j]}" for j, cf in enumerate(row) if cf
        )
        out.append(f" c{i}: {terms} <= {int(b)}")
    out.append("General")
    out.append(" " + " ".join(names))
    out.append("End")
    return "\n".join(out)


# -- split packings -----------------------------------------------------------


def count_split_subspaces(n1: int, n2: int, t: int, c1: int, c2: int,
                          q: int) -> int:
    """t-subspaces of F_q^(n1+n2) whose intersections with the two
    coordinate blocks have dimensions exactly c1 and c2."""
    s = t - c1 - c2
    if min(c1, c2, s) < 0 or c1 > n1 or c2 > n2:
        return 0
    if s > n1 - c1 or s > n2 - c2:
        return 0
    out = gaussian_binomial(n1, c1, q) * gaussian_binomial(n2, c2, q)
    out *= gaussian_binomial(n1 - c1, s, q)
    for i in range(s):
        out *= q ** (n2 - c2) - q**i
    return out


def eq_upper_abar(nbar: Sequence[int], abar: Sequence[int], d: int,
                  q: int, cbar: Sequence[int] | None = None
                  ) -> tuple[int, tuple[int, ...]]:
    """Upper bound for packings whose words meet block i in dimension
    exactly abar[i]: pick per-block subspace dimensions cbar summing to
    k - d/2 + 1; no two words share such a subspace tuple.

    With cbar omitted every admissible choice is tried and the smallest
    bound is returned along with the choice attaining it.
    """
    if len(nbar) != len(abar):
        raise ValueError("need one block dimension per block length")
    k = sum(abar)
    target = k - d // 2 + 1
    if any(a > n for a, n in zip(abar, nbar)):
        raise ValueError("block dimension exceeds block length")

    def value(cs: Sequence[int]) -> int:
        num = 1
        den = 1
        for n_i, a_i, c_i in zip(nbar, abar, cs):
            num *= gaussian_binomial(n_i, c_i, q)
            den *= gaussian_binomial(a_i, c_i, q)
        return num // den

    if cbar is not None:
        cs = tuple(cbar)
        if len(cs) != len(abar) or any(c < 0 or c > a for c, a in zip(cs, abar)):
            raise ValueError("cbar must satisfy 0 <= c_i <= a_i")
        if sum(cs) != target:
            raise ValueError(f"cbar must sum to {target}")
        return value(cs), cs

    best: tuple[int, tuple[int, ...]] | None = None

    def rec(i: int, left: int, acc: list[int]):
        nonlocal best
        if i == len(abar):
            if left == 0:
                v = value(acc)
                if best is None or v < best[0]:
                    best = (v, tuple(acc))
            return
        for c in range(0, min(abar[i], left) + 1):
            acc.append(c)
            rec(i + 1, left - c, acc)
            acc.pop()

    rec(0, target, [])
    if best is None:
        raise ValueError("no admissible cbar")
    return best


def eq_upper_def3(nbar: Sequence[int], d: int, k: int, q: int) -> int:
    """Upper bound for two-block packings whose words meet each block in
    dimension at least d/2: every (k-d/2+1)-subspace of a word has split
    intersection dimensions summing to at least d/2+1, and no two words
    share one."""
    if len(nbar) != 2:
        raise ValueError("two blocks")
    n1, n2 = nbar
    t = k - d // 2 + 1
    total = 0
    for c1 in range(0, min(n1, t) + 1):
        for c2 in range(0, min(n2, t - c1) + 1):
            if c1 + c2 >= d // 2 + 1:
                total += count_split_subspaces(n1, n2, t, c1, c2, q)
    return total // gaussian_binomial(k, t, q)
