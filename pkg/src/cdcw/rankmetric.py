"""Linear rank metric codes on full and Ferrers-restricted matrix supports.

Matrices are tuples of row tuples holding field-element encodings.  Codes
are F_q-linear: a basis of matrices together with a verified minimum rank
distance and a short text certificate of how that distance was established.

The evaluation construction (linearized polynomials of bounded q-degree
evaluated on a polynomial basis) realizes maximum rank distance codes for
every rectangular shape and, restricted by support constraints, yields
optimal codes for distance 2 on every diagram.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .config import LIMITS
from .gf import Field, field_of_order
from .qpoly import PolyQ, gauss_poly
from .subspace import FerrersDiagram, enumerate_subspaces, reduce_rows

Matrix = tuple[tuple[int, ...], ...]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def add_matrices(a: Matrix, b: Matrix, field: Field) -> Matrix:
    return tuple(
        tuple(field.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def sub_matrices(a: Matrix, b: Matrix, field: Field) -> Matrix:
    return tuple(
        tuple(field.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def scale_matrix(c: int, a: Matrix, field: Field) -> Matrix:
    if c == 0:
        return zero_matrix(len(a), len(a[0]) if a else 0)
    if c == 1:
        return a
    return tuple(tuple(field.mul(c, x) for x in row) for row in a)


def _rank_bits(rows: list[int]) -> int:
    piv: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            b = r.bit_length()
            p = piv.get(b)
            if p is None:
                piv[b] = r
                rank += 1
                break
            r ^= p
    return rank


def pack_rows_gf2(m: Matrix) -> list[int]:
    out = []
    for row in m:
        bits = 0
        for e in row:
            bits = (bits << 1) | e
        out.append(bits)
    return out


def _rank_prime(rows: list[list[int]], p: int) -> int:
    # in-place elimination mod p; rows is consumed
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    r = 0
    while r < len(rows) and col < ncols:
        pr = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                pr = i
                break
        if pr is None:
            col += 1
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        col += 1
        rank += 1
    return rank


_FIELD_TABLES: dict[int, tuple[list[int], list[int], list[int], list[int]]] = {}


def _field_tables(field: Field) -> tuple[list[int], list[int], list[int], list[int]]:
    """Flat add/mul tables plus inverse and negation lists.

    Element arithmetic through method calls dominates exhaustive scans;
    one table build per field order amortizes to nothing against the
    millions of lookups that follow.
    """
    tabs = _FIELD_TABLES.get(field.order)
    if tabs is None:
        q = field.order
        add = [field.add(a, b) for a in range(q) for b in range(q)]
        mul = [field.mul(a, b) for a in range(q) for b in range(q)]
        inv = [0] + [field.inv(a) for a in range(1, q)]
        neg = [field.neg(a) for a in range(q)]
        tabs = (add, mul, inv, neg)
        _FIELD_TABLES[field.order] = tabs
    return tabs


def _rank_table(rows: list[list[int]], field: Field) -> int:
    # forward elimination with table lookups; rows is consumed
    add, mul, inv, neg = _field_tables(field)
    q = field.order
    nr = len(rows)
    nc = len(rows[0])
    rank = 0
    r = 0
    col = 0
    while r < nr and col < nc:
        pr = None
        for i in range(r, nr):
            if rows[i][col]:
                pr = i
                break
        if pr is None:
            col += 1
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        f = prow[col]
        if f != 1:
            fq = inv[f] * q
            rows[r] = prow = [mul[fq + x] for x in prow]
        for i in range(r + 1, nr):
            g = rows[i][col]
            if g:
                gq = neg[g] * q
                rows[i] = [add[x * q + mul[gq + y]]
                           for x, y in zip(rows[i], prow)]
        r += 1
        col += 1
        rank += 1
    return rank


def matrix_rank(m: Matrix, field: Field) -> int:
    if not m or not m[0]:
        return 0
    if field.order == 2:
        return _rank_bits(pack_rows_gf2(m))
    if field.order <= 128:
        return _rank_table([list(r) for r in m], field)
    if field.degree == 1:
        return _rank_prime([list(r) for r in m], field.char)
    _, pivots = reduce_rows([list(r) for r in m], field)
    return len(pivots)


def rank_distance(a: Matrix, b: Matrix, field: Field) -> int:
    return matrix_rank(sub_matrices(a, b, field), field)


@dataclass(frozen=True)
class LinearMatrixCode:
    """F_q-linear code of rows x cols matrices with verified distance."""

    rows: int
    cols: int
    field: Field
    basis: tuple[Matrix, ...]
    min_rank_distance: int
    certificate: str
    diagram: FerrersDiagram | None = None
    eval_data: tuple | None = None

    def __post_init__(self):
        for m in self.basis:
            if len(m) != self.rows or any(len(r) != self.cols for r in m):
                raise ValueError("basis matrix shape mismatch")
            if any(not 0 <= e < self.field.order for row in m for e in row):
                raise ValueError("matrix entry outside field")
        if self.diagram is not None:
            if self.diagram.k != self.rows or self.diagram.width != self.cols:
                raise ValueError("diagram box does not match matrix shape")
            for m in self.basis:
                for i in range(self.rows):
                    lead = self.cols - self.diagram.row_lengths[i]
                    if any(m[i][j] for j in range(lead)):
                        raise ValueError("basis matrix not supported on diagram")
        flat = [[e for row in m for e in row] for m in self.basis]
        if flat:
            _, piv = reduce_rows(flat, self.field)
            if len(piv) != len(self.basis):
                raise ValueError("basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.order ** len(self.basis)

    def word(self, message: Sequence[int]) -> Matrix:
        if len(message) != len(self.basis):
            raise ValueError("message length must equal code dimension")
        out = zero_matrix(self.rows, self.cols)
        for c, m in zip(message, self.basis):
            if c:
                out = add_matrices(out, scale_matrix(c, m, self.field), self.field)
        return out

    def codewords(self) -> Iterator[Matrix]:
        """All q^dim codewords, starting with zero, in odometer order."""
        return span_iter(self.basis, self.rows, self.cols, self.field)


def span_iter(basis: Sequence[Matrix], rows: int, cols: int,
              field: Field) -> Iterator[Matrix]:
    """All field-linear combinations of the basis matrices, zero first.

    Odometer over scalar digits; moving digit i from c to c+1 adds the
    precomputed difference (c+1 - c) * basis[i], so non-prime fields are
    handled correctly (repeated addition of a matrix would only walk the
    prime subfield multiples)."""
    q = field.order
    t = len(basis)
    cur = [list(r) for r in zero_matrix(rows, cols)]
    yield tuple(tuple(r) for r in cur)
    if t == 0:
        return
    steps = []
    for b in basis:
        col = []
        for c in range(q):
            diff = field.sub((c + 1) % q, c)
            col.append(scale_matrix(diff, b, field))
        steps.append(col)
    digits = [0] * t
    for _ in range(q**t - 1):
        i = 0
        while True:
            c = digits[i]
            b = steps[i][c]
            for r in range(rows):
                row = cur[r]
                br = b[r]
                for cc in range(cols):
                    if br[cc]:
                        row[cc] = field.add(row[cc], br[cc])
            digits[i] = (c + 1) % q
            if digits[i]:
                break
            i += 1
        yield tuple(tuple(r) for r in cur)


def _rank_flat(flat: Sequence[int], nr: int, nc: int, field: Field) -> int:
    return _rank_table([list(flat[r * nc:(r + 1) * nc]) for r in range(nr)],
                       field)


def _span_rank_histogram(basis: Sequence[Matrix], rows: int, cols: int,
                         field: Field) -> dict[int, int]:
    """Exact rank counts over the whole span, zero word included."""
    hist: dict[int, int] = {0: 1}
    t = len(basis)
    if t == 0:
        return hist
    if field.order == 2:
        # Gray code walk: step i flips basis element ctz(i)
        packed = [tuple(pack_rows_gf2(m)) for m in basis]
        cur = [0] * rows
        for step in range(1, 2 ** t):
            flip = (step & -step).bit_length() - 1
            for r, bits in enumerate(packed[flip]):
                cur[r] ^= bits
            rk = _rank_bits(list(cur))
            hist[rk] = hist.get(rk, 0) + 1
        return hist
    # flat odometer: moving digit i from c to c+1 adds a precomputed
    # difference on basis i's support, so non-prime fields walk correctly
    q = field.order
    add, mul, inv, neg = _field_tables(field)
    supports = []
    steps = []
    for b in basis:
        flatb = [e for row in b for e in row]
        supp = [j for j, e in enumerate(flatb) if e]
        col = []
        for c in range(q):
            diff = field.sub((c + 1) % q, c)
            col.append([mul[diff * q + flatb[j]] for j in supp])
        supports.append(supp)
        steps.append(col)
    cur = [0] * (rows * cols)
    digits = [0] * t
    for _ in range(q ** t - 1):
        i = 0
        while True:
            c = digits[i]
            for j, v in zip(supports[i], steps[i][c]):
                cur[j] = add[cur[j] * q + v]
            digits[i] = (c + 1) % q
            if digits[i]:
                break
            i += 1
        rk = _rank_flat(cur, rows, cols, field)
        hist[rk] = hist.get(rk, 0) + 1
    return hist


def rank_histogram(code: LinearMatrixCode) -> dict[int, int]:
    """Exact rank counts over all codewords."""
    if code.size > LIMITS.enum_ceiling:
        raise ValueError(
            f"code size {code.size} exceeds enumeration ceiling {LIMITS.enum_ceiling}"
        )
    return _span_rank_histogram(code.basis, code.rows, code.cols, code.field)


def small_mrd_tuples(size_cap: int = 1 << 20) -> list[tuple[int, int, int, int]]:
    """Every (q, m, n, dr) whose maximum rank distance code both fits the
    configured field ceilings and has at most size_cap words."""
    from .gf import is_prime_power

    out = []
    for q in range(2, LIMITS.field_order_ceiling + 1):
        if not is_prime_power(q):
            continue
        mx = 1
        while q ** mx <= LIMITS.ext_order_ceiling:
            for mn in range(1, mx + 1):
                shapes = [(mx, mn)] if mx == mn else [(mx, mn), (mn, mx)]
                for dr in range(1, mn + 1):
                    if q ** (mx * (mn - dr + 1)) > size_cap:
                        continue
                    for m, n in shapes:
                        out.append((q, m, n, dr))
            mx += 1
    out.sort()
    return out


def mrd_size(q: int, m: int, n: int, dr: int) -> int:
    """Maximum size of an (m x n, dr)_q rank metric code."""
    if not 1 <= dr <= min(m, n):
        raise ValueError("need 1 <= dr <= min(m, n)")
    return q ** (max(m, n) * (min(m, n) - dr + 1))


def mrd_rank_distribution_poly(m: int, n: int, dr: int) -> dict[int, PolyQ]:
    """Rank counts of an additive maximum rank distance code, as polynomials
    in q: rank r occurs a_r times for dr <= r <= min(m, n)."""
    if not 1 <= dr <= min(m, n):
        raise ValueError("need 1 <= dr <= min(m, n)")
    mn, mx = min(m, n), max(m, n)
    one = PolyQ(1)
    out: dict[int, PolyQ] = {}
    for r in range(dr, mn + 1):
        tot = PolyQ(0)
        for s in range(0, r - dr + 1):
            sign = PolyQ({s * (s - 1) // 2: (-1) ** s})
            tot = tot + sign * gauss_poly(r, s) * (
                PolyQ.monomial(1, mx * (r - dr - s + 1)) - one
            )
        out[r] = gauss_poly(mn, r) * tot
    return out


def mrd_rank_distribution(q: int, m: int, n: int, dr: int) -> dict[int, int]:
    return {r: p.evaluate(q) for r, p in mrd_rank_distribution_poly(m, n, dr).items()}


def restricted_size_poly(m: int, n: int, dr: int, t: int) -> PolyQ:
    """Number of words of rank at most t in an additive MRD code, including
    the zero word, as a polynomial in q."""
    dist = mrd_rank_distribution_poly(m, n, dr)
    total = PolyQ(1)
    for r in range(dr, min(t, min(m, n)) + 1):
        total = total + dist[r]
    return total


def _verify_min_rank(basis, rows, cols, field, dr, seed, sample_budget):
    """Exhaustive distance check when the span is small, seeded sampling
    otherwise.  Returns a one-word tag for the certificate."""
    q = field.order
    size = q ** len(basis)
    if size <= LIMITS.expand_ceiling:
        hist = _span_rank_histogram(basis, rows, cols, field)
        if any(r < dr for r in hist if r and hist[r]):
            raise AssertionError("minimum rank distance violated")
        return "exhaustive"
    rng = random.Random(seed)
    for _ in range(sample_budget):
        msg = [rng.randrange(q) for _ in basis]
        if not any(msg):
            msg[rng.randrange(len(basis))] = 1 + rng.randrange(q - 1)
        out = zero_matrix(rows, cols)
        for c, m in zip(msg, basis):
            if c:
                out = add_matrices(out, scale_matrix(c, m, field), field)
        if matrix_rank(out, field) < dr:
            raise AssertionError("minimum rank distance violated")
    return f"sampled({sample_budget})"


def gabidulin_code(q: int, m: int, n: int, dr: int, seed: int = 0,
                   sample_budget: int = 2000) -> LinearMatrixCode:
    """Additive maximum rank distance code of m x n matrices over F_q.

    Words are the coordinate expansions of f(g_0), ..., f(g_{s-1}) for
    linearized polynomials f of q-degree below s - dr + 1, evaluated on the
    polynomial basis points g_j of the degree-max(m, n) extension field.
    Dimension max(m, n) * (min(m, n) - dr + 1).  Codes for larger dr on the
    same shape are prefixes of the returned basis.
    """
    if m < 1 or n < 1:
        raise ValueError("matrix shape must be positive")
    if not 1 <= dr <= min(m, n):
        raise ValueError("need 1 <= dr <= min(m, n)")
    mn, mx = min(m, n), max(m, n)
    base = field_of_order(q)
    t = mn - dr + 1
    if mx == 1:
        basis = (((1,),),)
        code = LinearMatrixCode(
            1, 1, base, basis, 1,
            "single-cell code, every nonzero word has rank 1",
            eval_data=(base, (1,), 1, False),
        )
        return code
    ext = base.extension(mx)
    points = tuple(q**j for j in range(mn))
    frob = []
    for i in range(t):
        e = q**i
        frob.append([ext.pow(g, e) for g in points])
    basis = []
    for i in range(t):
        for b in range(mx):
            lam = q**b
            cols = [ext.digits(ext.mul(lam, frob[i][j])) for j in range(mn)]
            mat = tuple(
                tuple(cols[j][r] for j in range(mn)) for r in range(mx)
            )
            if m < n:
                mat = tuple(zip(*mat))
            basis.append(mat)
    tag = _verify_min_rank(basis, m, n, base, dr, seed, sample_budget)
    cert = (
        "evaluation code: a nonzero word comes from a nonzero linearized "
        f"polynomial of q-degree at most {t - 1}, whose root space meets the "
        f"{mn}-dimensional span of the evaluation points in dimension at most "
        f"{t - 1}, so every nonzero word has rank at least {dr}; "
        f"checked: {tag}"
    )
    return LinearMatrixCode(m, n, base, tuple(basis), dr, cert,
                            eval_data=(ext, points, t, m < n))


def low_rank_words(code: LinearMatrixCode, tmax: int) -> set[Matrix]:
    """All codewords of rank at most tmax of an evaluation-built code.

    A word has rank <= tmax exactly when its linearized polynomial vanishes
    on some (s - tmax)-dimensional subspace of the span of the evaluation
    points; enumerating those subspaces and solving the linear vanishing
    constraints on the message yields every such word.
    """
    if code.eval_data is None:
        raise ValueError("code does not carry evaluation data")
    ext, points, t, transposed = code.eval_data
    base = code.field
    q = base.order
    s = len(points)
    if tmax < 0:
        return set()
    if tmax == 0:
        return {zero_matrix(code.rows, code.cols)}
    if tmax >= min(code.rows, code.cols):
        if code.size > LIMITS.expand_ceiling:
            raise ValueError("full enumeration exceeds expansion ceiling")
        return set(code.codewords())
    mx = max(code.rows, code.cols)
    words: set[Matrix] = set()
    qpows = [q**i for i in range(t)]
    lam = [q**b for b in range(mx)]
    pad = (0,) * (mx - s)
    for v in enumerate_subspaces(s, s - tmax, base):
        rows = []
        for u in v.rows:
            phi = ext.from_digits(tuple(u) + pad)
            row = []
            for i in range(t):
                z = ext.pow(phi, qpows[i])
                prods = [ext.digits(ext.mul(lb, z)) for lb in lam]
                row.append(prods)
            for r in range(mx):
                rows.append([row[i][b][r] for i in range(t) for b in range(mx)])
        kernel = kernel_basis(rows, t * mx, base)
        if q ** len(kernel) > LIMITS.expand_ceiling:
            raise ValueError("kernel span exceeds expansion ceiling")
        kb_mats = []
        for vec in kernel:
            out = zero_matrix(code.rows, code.cols)
            for c, m in zip(vec, code.basis):
                if c:
                    out = add_matrices(out, scale_matrix(c, m, base), base)
            kb_mats.append(out)
        words.update(span_iter(kb_mats, code.rows, code.cols, base))
    return words


def kernel_basis(rows: list[list[int]], ncols: int, field: Field) -> list[tuple[int, ...]]:
    """Basis of the right kernel of the given coefficient rows over field."""
    if not rows:
        return [tuple(1 if j == i else 0 for j in range(ncols)) for i in range(ncols)]
    rr, piv = reduce_rows(rows, field)
    pivset = set(piv)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [0] * ncols
        vec[f] = 1
        for r, p in zip(rr, piv):
            vec[p] = field.neg(r[f])
        out.append(tuple(vec))
    return out


def fdrm_upper_bound(diagram: FerrersDiagram, d: int) -> int:
    """Exponent nu of the dimension bound q^nu for codes supported on the
    diagram with minimum rank distance d/2: the minimum over i of the number
    of dots remaining after deleting the top i rows and the leftmost
    d/2 - 1 - i columns of the right-aligned diagram."""
    if d < 2 or d % 2:
        raise ValueError("subspace distance must be even and at least 2")
    delta = d // 2
    lens = diagram.row_lengths
    best = None
    for i in range(delta):
        cut = delta - 1 - i
        tot = sum(max(0, r - cut) for r in lens[i:])
        if best is None or tot < best:
            best = tot
    return best if best is not None else 0


def _embed(basis_trim, k, width, voffset, hoffset):
    out = []
    for m in basis_trim:
        rows = []
        for i in range(k):
            if voffset <= i < voffset + len(m):
                src = m[i - voffset]
                rows.append((0,) * hoffset + tuple(src) + (0,) * (width - hoffset - len(src)))
            else:
                rows.append((0,) * width)
        out.append(tuple(rows))
    return out


def _conjugate_lengths(lens: Sequence[int]) -> list[int]:
    if not lens:
        return []
    return [sum(1 for r in lens if r > j) for j in range(lens[0])]


def _delta2_wide(lens: Sequence[int], q: int) -> list[Matrix]:
    """Distance-2 basis on a trimmed diagram whose width is at least its row
    count: the sub-span of the rectangle's distance-2 evaluation code that
    vanishes on the off-diagram cells."""
    big = len(lens)
    wide = lens[0]
    gab = gabidulin_code(q, big, wide, 2)
    off = [(i, j) for i in range(big) for j in range(wide - lens[i])]
    if not off:
        return list(gab.basis)
    rows = [[b[i][j] for b in gab.basis] for (i, j) in off]
    field = gab.field
    kernel = kernel_basis(rows, len(gab.basis), field)
    out = []
    for vec in kernel:
        m = zero_matrix(big, wide)
        for c, b in zip(vec, gab.basis):
            if c:
                m = add_matrices(m, scale_matrix(c, b, field), field)
        out.append(m)
    return out


def _delta2_basis(lens: Sequence[int], q: int) -> list[Matrix]:
    big = len(lens)
    wide = lens[0]
    if wide >= big:
        return _delta2_wide(lens, q)
    conj = _conjugate_lengths(lens)
    nb = _delta2_wide(conj, q)
    out = []
    for nmat in nb:
        m = tuple(
            tuple(nmat[wide - 1 - j][big - 1 - i] for j in range(wide))
            for i in range(big)
        )
        out.append(m)
    return out


def _best_rectangle(lens: Sequence[int], delta: int) -> tuple[int, int, int]:
    """Largest evaluation code on an embedded top-right rectangle: returns
    (rows, cols, dim), dim 0 when no rectangle admits distance delta."""
    best = (0, 0, 0)
    for a in range(1, len(lens) + 1):
        bmax = lens[a - 1]
        for b in range(delta, bmax + 1):
            if min(a, b) < delta:
                continue
            dim = max(a, b) * (min(a, b) - delta + 1)
            if dim > best[2]:
                best = (a, b, dim)
    return best


def fdrm_construct(diagram: FerrersDiagram, delta: int, q: int,
                   seed: int = 0) -> LinearMatrixCode:
    """Linear code supported on the diagram with minimum rank distance delta.

    delta = 1 fills the diagram, delta = 2 attains the dimension bound on
    every diagram, rectangles attain it for every delta.  Remaining shapes
    fall back to an embedded rectangle plus seeded greedy extension and may
    leave a constructive gap, reported in the certificate.
    """
    if delta < 1:
        raise ValueError("rank distance must be at least 1")
    field = field_of_order(q)
    k, width = diagram.k, diagram.width
    total = diagram.size
    bound = fdrm_upper_bound(diagram, 2 * delta)
    if total == 0 or bound == 0:
        return LinearMatrixCode(
            k, width, field, (), delta,
            "zero code: the dimension bound vanishes" if total else "empty diagram",
            diagram=diagram,
        )
    if delta == 1:
        basis = []
        for i, r in enumerate(diagram.row_lengths):
            for j in range(width - r, width):
                m = [[0] * width for _ in range(k)]
                m[i][j] = 1
                basis.append(tuple(tuple(row) for row in m))
        return LinearMatrixCode(
            k, width, field, tuple(basis), 1,
            "full diagram: every nonzero matrix has rank at least 1",
            diagram=diagram,
        )
    lens = [r for r in diagram.row_lengths if r > 0]
    big, wide = len(lens), lens[0]
    rectangle = all(r == wide for r in lens)
    if rectangle and delta <= min(big, wide):
        gab = gabidulin_code(q, big, wide, delta, seed)
        basis = _embed(gab.basis, k, width, 0, width - wide)
        if len(basis) != bound:
            raise AssertionError("rectangle dimension must meet the bound")
        return LinearMatrixCode(
            k, width, field, tuple(basis), delta,
            "embedded rectangle " + gab.certificate, diagram=diagram)
    if delta == 2:
        trim = _delta2_basis(lens, q)
        basis = _embed(trim, k, width, 0, width - wide)
        if len(basis) != bound:
            raise AssertionError("distance-2 construction must meet the bound")
        tag = _verify_min_rank(basis, k, width, field, delta, seed, 2000)
        cert = (
            "support-constrained subcode of a distance-2 evaluation code on "
            f"the bounding rectangle; dimension {len(basis)} meets the bound; "
            f"checked: {tag}"
        )
        return LinearMatrixCode(k, width, field, tuple(basis), 2, cert,
                                diagram=diagram)
    # best effort for distance >= 3 on a non-rectangular diagram
    a, b, dim = _best_rectangle(lens, delta)
    basis = []
    if dim:
        gab = gabidulin_code(q, a, b, delta, seed)
        basis = _embed(gab.basis, k, width, 0, width - b)
    rng = random.Random(seed)
    span: set[Matrix] | None = None
    if q ** len(basis) <= LIMITS.expand_ceiling:
        tmp = LinearMatrixCode(k, width, field, tuple(basis), delta,
                               "candidate", diagram=diagram)
        span = set(tmp.codewords())
    cells = list(diagram.cells())
    tries = 200
    while span is not None and tries > 0:
        tries -= 1
        cand = [[0] * width for _ in range(k)]
        for (i, j) in cells:
            cand[i][j] = rng.randrange(q)
        cand = tuple(tuple(r) for r in cand)
        if cand in span:
            continue
        if q ** (len(basis) + 1) > LIMITS.expand_ceiling:
            break
        ok = True
        shifts = []
        for c in range(1, q):
            shifted = scale_matrix(c, cand, field)
            for w in span:
                nw = add_matrices(w, shifted, field)
                if matrix_rank(nw, field) < delta:
                    ok = False
                    break
                shifts.append(nw)
            if not ok:
                break
        if ok:
            basis.append(cand)
            span.update(shifts)
    achieved = len(basis)
    gap = bound - achieved
    tag = _verify_min_rank(basis, k, width, field, delta, seed, 2000)
    cert = (
        f"embedded {a}x{b} rectangle plus greedy extension; dimension "
        f"{achieved} against bound {bound}"
        + (f" (constructive gap {gap})" if gap else "")
        + f"; checked: {tag}"
    )
    return LinearMatrixCode(k, width, field, tuple(basis), delta, cert,
                            diagram=diagram)


@dataclass(frozen=True)
class CosetFamily:
    """Partition of a parent code into cosets of a higher-distance subcode.

    Words within one coset keep rank distance delta; words from different
    cosets keep rank distance delta_prime, inherited from the parent code.
    """

    diagram: FerrersDiagram
    sub: LinearMatrixCode
    parent_basis: tuple[Matrix, ...]
    representatives: tuple[Matrix, ...]
    delta: int
    delta_prime: int

    @property
    def coset_count(self) -> int:
        return len(self.representatives)

    def coset(self, j: int) -> list[Matrix]:
        rep = self.representatives[j]
        field = self.sub.field
        return [add_matrices(rep, w, field) for w in self.sub.codewords()]


def _complement_representatives(sub: LinearMatrixCode, parent_basis, field):
    """Unit-cell extension of the subcode basis to the parent span, then the
    span of the extension as coset representatives."""
    ncols = sub.rows * sub.cols
    flat = [[e for row in m for e in row] for m in sub.basis]
    chosen: list[Matrix] = []
    for m in parent_basis:
        vec = [e for row in m for e in row]
        _, piv_before = reduce_rows(flat, field) if flat else ((), ())
        _, piv_after = reduce_rows(flat + [vec], field)
        if len(piv_after) > len(piv_before):
            flat.append(vec)
            chosen.append(m)
    q = field.order
    count = q ** len(chosen)
    if count > 100_000:
        raise ValueError(f"coset count {count} too large to materialize")
    reps = [zero_matrix(sub.rows, sub.cols)]
    for m in chosen:
        new = []
        for c in range(1, q):
            sm = scale_matrix(c, m, field)
            for r in reps:
                new.append(add_matrices(r, sm, field))
        reps.extend(new)
    return tuple(chosen), tuple(reps)


def coset_partition(diagram: FerrersDiagram, delta: int, delta_prime: int,
                    q: int, seed: int = 0) -> CosetFamily:
    """Split a distance-delta_prime code on the diagram into cosets of a
    distance-delta subcode.

    delta_prime = 1 uses the full diagram span as parent.  delta_prime >= 2
    requires a rectangular diagram, where the evaluation construction makes
    the distance-delta code a literal subspace of the distance-delta_prime
    one (shared basis prefix).
    """
    if not 1 <= delta_prime < delta:
        raise ValueError("need 1 <= delta_prime < delta")
    field = field_of_order(q)
    sub = fdrm_construct(diagram, delta, q, seed)
    if delta_prime == 1:
        parent = fdrm_construct(diagram, 1, q, seed)
        _, reps = _complement_representatives(sub, parent.basis, field)
        return CosetFamily(diagram, sub, parent.basis, reps, delta, 1)
    lens = [r for r in diagram.row_lengths if r > 0]
    if not lens or any(r != lens[0] for r in lens):
        raise ValueError("nested cosets need a rectangular diagram")
    big, wide = len(lens), lens[0]
    if delta > min(big, wide):
        raise ValueError("rank distance exceeds the rectangle's short side")
    parent = gabidulin_code(q, big, wide, delta_prime, seed)
    parent_basis = tuple(
        _embed(parent.basis, diagram.k, diagram.width, 0, diagram.width - wide)
    )
    if parent_basis[: sub.dim] != sub.basis:
        raise AssertionError("distance-delta code must be a prefix subcode")
    _, reps = _complement_representatives(sub, parent_basis, field)
    return CosetFamily(diagram, sub, parent_basis, reps, delta, delta_prime)
