"""Minimum-distance certification.

Three verification modes with increasing reach: exhaustive pair checking for
small codes, hierarchical certification that covers million-word artifacts
by replaying the structural arguments of their construction pipelines, and
seeded pair sampling as a smoke test that is never a certificate.

All reports are JSON-ready dictionaries.  A hierarchical report records one
argument per pair class, with the exhaustively checked premises, so an
auditor can replay any sub-check; a pair class with no valid argument falls
back to raw pair checks when the budget allows and is refused otherwise.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .config import LIMITS
from .construct import CodeArtifact, CodeComponent, EqContext
from .gf import Field
from .rankmetric import LinearMatrixCode, rank_histogram
from .subspace import Subspace, rank_of, subspace_distance, subspace_unpack

INFINITE = "infinity"


# -- packed-word linear algebra --------------------------------------------------


def _rank_gf2(vals: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    r = 0
    for v in vals:
        while v:
            h = v.bit_length()
            w = basis.get(h)
            if w is None:
                basis[h] = v
                r += 1
                break
            v ^= w
    return r


def _rows_gf2(x: int, n: int, k: int) -> list[int]:
    mask = (1 << n) - 1
    return [(x >> (r * n)) & mask for r in range(k)]


def _pair_distance_gf2(x: int, y: int, n: int, k: int) -> int:
    rows = _rows_gf2(x, n, k) + _rows_gf2(y, n, k)
    return 2 * _rank_gf2(rows) - 2 * k


def _invert_gf2(brows: Sequence[int], k: int) -> list[int] | None:
    aug = [brows[r] | (1 << (k + r)) for r in range(k)]
    for col in range(k):
        piv = None
        for r in range(col, k):
            if (aug[r] >> col) & 1:
                piv = r
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(k):
            if r != col and ((aug[r] >> col) & 1):
                aug[r] ^= aug[col]
    return [a >> k for a in aug]


def _invert_field(mat: Sequence[Sequence[int]], field: Field) -> list[list[int]] | None:
    k = len(mat)
    aug = [list(mat[r]) + [1 if c == r else 0 for c in range(k)] for r in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        c = field.inv(aug[col][col])
        aug[col] = [field.mul(c, a) for a in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [field.sub(a, field.mul(f, b))
                          for a, b in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


class _Gf2Reducer:
    """Membership test for the row space of flattened GF(2) matrices."""

    def __init__(self) -> None:
        self.basis: dict[int, int] = {}

    def insert(self, v: int) -> None:
        basis = self.basis
        while v:
            h = v.bit_length()
            w = basis.get(h)
            if w is None:
                basis[h] = v
                return
            v ^= w

    def member(self, v: int) -> bool:
        basis = self.basis
        while v:
            h = v.bit_length()
            w = basis.get(h)
            if w is None:
                return False
            v ^= w
        return True


class _FieldReducer:
    """Echelon membership test for vectors over a general field."""

    def __init__(self, field: Field) -> None:
        self.field = field
        self.rows: dict[int, list[int]] = {}

    def _reduce(self, v: list[int]) -> tuple[list[int], int | None]:
        f = self.field
        for i in range(len(v)):
            if not v[i]:
                continue
            w = self.rows.get(i)
            if w is None:
                return v, i
            c = v[i]
            v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, w)]
        return v, None

    def insert(self, v: Sequence[int]) -> None:
        v2, lead = self._reduce(list(v))
        if lead is not None:
            c = self.field.inv(v2[lead])
            self.rows[lead] = [self.field.mul(c, a) for a in v2]

    def member(self, v: Sequence[int]) -> bool:
        _, lead = self._reduce(list(v))
        return lead is None


def _flatten_gf2(m: Sequence[Sequence[int]], cols: int) -> int:
    v = 0
    for a, row in enumerate(m):
        bits = 0
        for c, e in enumerate(row):
            if e:
                bits |= 1 << c
        v |= bits << (a * cols)
    return v


def _distance_fn(art: CodeArtifact):
    n, k = art.n, art.k
    if art.q == 2:
        return lambda x, y: _pair_distance_gf2(x, y, n, k)
    field = art.field
    cache: dict[int, Subspace] = {}

    def dist(x: int, y: int) -> int:
        U = cache.get(x)
        if U is None:
            U = cache[x] = subspace_unpack(x, n, k, field)
        W = cache.get(y)
        if W is None:
            W = cache[y] = subspace_unpack(y, n, k, field)
        return subspace_distance(U, W)

    return dist


def _dim_meet_cols_gf2(x: int, n: int, k: int, span_mask: int) -> int:
    """dim of the intersection with the span of the masked coordinates."""
    drop = ((1 << n) - 1) ^ span_mask
    return k - _rank_gf2(r & drop for r in _rows_gf2(x, n, k))


def _dim_meet_cols(U: Subspace, span_cols: Sequence[int]) -> int:
    inside = set(span_cols)
    cols = [j for j in range(U.n) if j not in inside]
    rows = [[r[j] for j in cols] for r in U.rows]
    return U.k - rank_of(rows, U.field)


def _block_mask(ctx: EqContext, i: int) -> int:
    rng = ctx.block_range(i)
    return ((1 << len(rng)) - 1) << rng.start


# -- shared report plumbing -------------------------------------------------------


def _base_report(art: CodeArtifact, mode: str, d: int) -> dict:
    return {
        "mode": mode,
        "n": art.n,
        "k": art.k,
        "q": art.q,
        "distance_claimed": d,
        "size": art.size,
    }


def _refusal(report: dict, reason: str) -> dict:
    report.update(certificate=False, refused=True, reason=reason)
    report["pass"] = False
    return report


# -- exhaustive -------------------------------------------------------------------


def verify_exhaustive(art: CodeArtifact, d: int | None = None) -> dict:
    """Exact minimum distance by checking every pair of codewords.

    Artifacts with size-only components are refused, and word counts above
    the pair ceiling raise with a pointer to hierarchical mode.
    """
    d = art.d if d is None else d
    report = _base_report(art, "exhaustive", d)
    if art.size_only:
        return _refusal(report, "size-only component")
    if art.size > LIMITS.pair_word_ceiling:
        raise ValueError(
            f"{art.size} codewords exceed the pair ceiling "
            f"{LIMITS.pair_word_ceiling}; use hierarchical verification")
    report.update(certificate=True, refused=False)
    words = list(art.iter_packed())
    if len(words) <= 1:
        report.update(minimum_distance=INFINITE, pairs_checked=0,
                      first_violation=None)
        report["pass"] = True
        return report
    dist = _distance_fn(art)
    best: int | None = None
    first_violation = None
    pairs = 0
    m = len(words)
    for i in range(m):
        xi = words[i]
        for j in range(i + 1, m):
            ds = dist(xi, words[j])
            pairs += 1
            if best is None or ds < best:
                best = ds
                if ds < d and first_violation is None:
                    first_violation = {"indices": [i, j], "distance": ds,
                                       "words": [words[i], words[j]]}
    report.update(minimum_distance=best, pairs_checked=pairs,
                  first_violation=first_violation)
    report["pass"] = best >= d
    return report


# -- sampled ----------------------------------------------------------------------


def verify_sampled(art: CodeArtifact, d: int | None = None,
                   pairs: int = 10 ** 6, seed: int = 0) -> dict:
    """Seeded random pair checks.  A smoke test, never a certificate."""
    d = art.d if d is None else d
    report = _base_report(art, "sampled", d)
    report["certificate"] = False
    report["seed"] = seed
    if art.size_only:
        return _refusal(report, "size-only component")
    if art.size > LIMITS.enum_ceiling:
        return _refusal(report, "artifact too large to materialize for sampling")
    report["refused"] = False
    words = list(art.iter_packed())
    if len(words) <= 1 or pairs == 0:
        report.update(minimum_observed=None, pairs_checked=0, violations=0,
                      first_violation=None)
        report["pass"] = True
        return report
    dist = _distance_fn(art)
    rng = random.Random(seed)
    m = len(words)
    best: int | None = None
    violations = 0
    first_violation = None
    for _ in range(pairs):
        i = rng.randrange(m)
        j = rng.randrange(m - 1)
        if j >= i:
            j += 1
        ds = dist(words[i], words[j])
        if best is None or ds < best:
            best = ds
        if ds < d:
            violations += 1
            if first_violation is None:
                first_violation = {"indices": [i, j], "distance": ds}
    report.update(minimum_observed=best, pairs_checked=pairs,
                  violations=violations, first_violation=first_violation)
    report["pass"] = violations == 0
    return report


# -- block membership -------------------------------------------------------------


def _meet_dims(art: CodeArtifact, ctx: EqContext, x: int, i: int,
               inside: bool) -> int:
    """dim(U meet F_i) when inside, dim(U meet E_i) otherwise."""
    if art.q == 2:
        mask = _block_mask(ctx, i)
        if not inside:
            mask = ((1 << ctx.n) - 1) ^ mask
        return _dim_meet_cols_gf2(x, art.n, art.k, mask)
    U = subspace_unpack(x, art.n, art.k, art.field)
    cols = list(ctx.block_range(i))
    if not inside:
        inside_set = set(cols)
        cols = [j for j in range(ctx.n) if j not in inside_set]
    return _dim_meet_cols(U, cols)


def verify_membership(art: CodeArtifact, ctx: EqContext | None = None,
                      mode: str = "def_E_a") -> dict:
    """Exhaustive per-codeword block-intersection checks.

    def_E_a: dim(U meet F_i) equals a_i for every block.
    def_E:   dim(U meet E_i) is at least d/2 for every block.
    lemma8:  every word of concatenation piece i meets E_i trivially.
    """
    if ctx is None:
        ctx = art.meta.get("ctx")
        if ctx is None and "nbar" in art.meta:
            ctx = EqContext(tuple(art.meta["nbar"]), art.d, art.k)
    if not isinstance(ctx, EqContext):
        raise ValueError("no block context available")
    if ctx.n != art.n:
        raise ValueError("context does not match the artifact's length")
    if art.size_only:
        return _refusal(_base_report(art, f"membership:{mode}", art.d),
                        "size-only component")
    d = art.d
    report = _base_report(art, f"membership:{mode}", d)
    violations: list[dict] = []
    checked = 0

    if mode == "def_E_a":
        if ctx.abar is None:
            raise ValueError("def_E_a needs abar in the context")
        for idx, x in enumerate(art.iter_packed()):
            checked += 1
            for i in range(ctx.l):
                got = _meet_dims(art, ctx, x, i, inside=True)
                if got != ctx.abar[i]:
                    violations.append({"word": idx, "block": i, "dim": got,
                                       "required": ctx.abar[i]})
    elif mode == "def_E":
        need = d // 2
        if any(ctx.n - ni < need for ni in ctx.nbar):
            raise ValueError("infeasible context: some E_i is smaller than d/2")
        for idx, x in enumerate(art.iter_packed()):
            checked += 1
            for i in range(ctx.l):
                got = _meet_dims(art, ctx, x, i, inside=False)
                if got < need:
                    violations.append({"word": idx, "block": i, "dim": got,
                                       "required": need})
    elif mode == "lemma8":
        pieces = [c for c in art.components
                  if c.kind == "block_concatenation" and "piece" in c.meta]
        if not pieces:
            raise ValueError("no block-concatenation component carries a piece index")
        for c in pieces:
            i = c.meta["piece"]
            for idx, x in enumerate(c.iter_packed()):
                checked += 1
                got = _meet_dims(art, ctx, x, i, inside=False)
                if got != 0:
                    violations.append({"component": c.label, "word": idx,
                                       "block": i, "dim": got, "required": 0})
    else:
        raise ValueError(f"unknown membership mode {mode!r}")
    report.update(certificate=True, refused=False, checked=checked,
                  violations=violations[:20], violation_count=len(violations))
    report["pass"] = not violations
    return report


# -- hierarchical: per-component arguments -----------------------------------------


def _distinct_count(c: CodeComponent) -> int:
    if c.words is not None:
        return len(set(c.words))
    return sum(1 for _ in c.iter_packed())


def _min_nonzero_rank(code: LinearMatrixCode, cache: dict) -> int | None:
    key = code.basis
    if key not in cache:
        hist = rank_histogram(code)
        nz = [r for r in hist if r > 0]
        cache[key] = min(nz) if nz else None
    return cache[key]


def _lifted_argument(c: CodeComponent, art: CodeArtifact, d: int,
                     cache: dict) -> dict:
    """One pivot, all lifts of an additive matrix code.

    Distinct lifts differ by a nonzero code matrix, so their distance is
    twice its rank; the minimum nonzero rank is read off an exhaustive
    histogram, and the stored words are compared against a fresh emission.
    """
    from .construct import lift
    from .subspace import subspace_pack

    code = c.meta["matrix_code"]
    pivot = c.meta["pivot"]
    checks: dict = {}
    violations: list[dict] = []
    if c.words is not None:
        stored = set(c.words)
        emitted = 0
        for m in code.codewords():
            emitted += 1
            x = subspace_pack(lift(pivot, m, art.field))
            if x not in stored:
                violations.append({"reason": "word is not a lift of the code",
                                   "word": x})
        rederived = emitted == len(stored) == c.size and not violations
        checks.update(emitted=emitted, stored_distinct=len(stored),
                      rederived=rederived)
    else:
        count = _distinct_count(c)
        checks.update(emitted=count, rederived=count == c.size)
    minrank = _min_nonzero_rank(code, cache)
    checks["min_nonzero_rank"] = minrank
    if minrank is not None and 2 * minrank < d:
        violations.append({"reason": "rank distance below d/2",
                           "min_nonzero_rank": minrank})
    ok = checks["rederived"] and not violations
    return {
        "scope": c.label,
        "argument": "lifted additive matrix code: subspace distance is "
                    "twice the rank distance",
        "covers": [[c.label, c.label]],
        "checks": checks,
        "violations": violations[:10],
        "pass": bool(ok),
    }


def _explicit_argument(c: CodeComponent, art: CodeArtifact) -> dict:
    """Check every explicit word keeps its pivots inside the vertex members."""
    members = set(c.meta["members"])
    n, k = art.n, art.k
    field = art.field
    bad = []
    count = 0
    for x in c.iter_packed():
        count += 1
        U = subspace_unpack(x, n, k, field)
        pv = tuple(1 if j in U.pivots else 0 for j in range(n))
        if pv not in members:
            bad.append({"word": x, "pivot": pv})
    return {
        "scope": c.label,
        "argument": "explicit words stay on the vertex's pivot vectors",
        "covers": [],
        "checks": {"words_scanned": count, "member_pivots": len(members)},
        "violations": bad[:10],
        "pass": not bad,
    }


def _scan_concat_gf2(c: CodeComponent, art: CodeArtifact,
                     offs: Sequence[int]) -> tuple[dict, list[dict]]:
    meta = c.meta
    piece, nbar, cap = meta["piece"], meta["nbar"], meta["rank_cap"]
    mcodes = meta["matrix_codes"]
    k, n = art.k, art.n
    po, pmask = offs[piece], (1 << nbar[piece]) - 1
    ident = [1 << a for a in range(k)]
    reducers: dict[int, _Gf2Reducer] = {}
    for j, code in enumerate(mcodes):
        if j == piece:
            continue
        red = _Gf2Reducer()
        for bm in code.basis:
            red.insert(_flatten_gf2(bm, nbar[j]))
        reducers[j] = red
    violations: list[dict] = []
    count = 0
    for idx, x in enumerate(c.iter_packed()):
        count += 1
        rows = _rows_gf2(x, n, k)
        brows = [(r >> po) & pmask for r in rows]
        if brows == ident:
            nrows = rows
        else:
            inv = _invert_gf2(brows, k)
            if inv is None:
                violations.append({"word": idx,
                                   "reason": "home block not full rank"})
                continue
            nrows = []
            for a in range(k):
                acc = 0
                m = inv[a]
                while m:
                    b = (m & -m).bit_length() - 1
                    acc ^= rows[b]
                    m &= m - 1
                nrows.append(acc)
        for j in range(len(nbar)):
            if j == piece:
                continue
            nj, jo = nbar[j], offs[j]
            jmask = (1 << nj) - 1
            v = 0
            arows = []
            for a in range(k):
                ar = (nrows[a] >> jo) & jmask
                arows.append(ar)
                v |= ar << (a * nj)
            if not reducers[j].member(v):
                violations.append({"word": idx, "block": j,
                                   "reason": "matrix outside the block code"})
                break
            if j < piece and _rank_gf2(arows) > cap:
                violations.append({"word": idx, "block": j,
                                   "reason": f"rank above the cap {cap}"})
                break
    return {"words_scanned": count}, violations


def _scan_concat_field(c: CodeComponent, art: CodeArtifact,
                       offs: Sequence[int]) -> tuple[dict, list[dict]]:
    meta = c.meta
    piece, nbar, cap = meta["piece"], meta["nbar"], meta["rank_cap"]
    mcodes = meta["matrix_codes"]
    k, n = art.k, art.n
    field = art.field
    reducers: dict[int, _FieldReducer] = {}
    for j, code in enumerate(mcodes):
        if j == piece:
            continue
        red = _FieldReducer(field)
        for bm in code.basis:
            red.insert([e for row in bm for e in row])
        reducers[j] = red
    violations: list[dict] = []
    count = 0
    rng_p = range(offs[piece], offs[piece] + nbar[piece])
    for idx, x in enumerate(c.iter_packed()):
        count += 1
        U = subspace_unpack(x, n, k, field)
        bmat = [[r[j] for j in rng_p] for r in U.rows]
        inv = _invert_field(bmat, field)
        if inv is None:
            violations.append({"word": idx,
                               "reason": "home block not full rank"})
            continue
        nrows = []
        for a in range(k):
            acc = [0] * n
            for b in range(k):
                cf = inv[a][b]
                if cf:
                    acc = [field.add(e, field.mul(cf, f))
                           for e, f in zip(acc, U.rows[b])]
            nrows.append(acc)
        for j in range(len(nbar)):
            if j == piece:
                continue
            amat = [r[offs[j]:offs[j] + nbar[j]] for r in nrows]
            if not reducers[j].member([e for row in amat for e in row]):
                violations.append({"word": idx, "block": j,
                                   "reason": "matrix outside the block code"})
                break
            if j < piece and rank_of(amat, field) > cap:
                violations.append({"word": idx, "block": j,
                                   "reason": f"rank above the cap {cap}"})
                break
    return {"words_scanned": count}, violations


def _concat_argument(c: CodeComponent, art: CodeArtifact, d: int,
                     cache: dict) -> tuple[dict, dict] | None:
    """Certificate for one block-concatenation piece.

    Every word is normalized to a basis with the identity on its home block;
    the other blocks must then lie in their additive matrix codes, with the
    rank cap enforced on blocks left of home.  Together with the exhaustive
    minimum-rank histograms this pins the intra-piece distance at d and
    yields the block facts used for cross-piece coverage.
    """
    meta = c.meta
    piece, nbar, cap = meta["piece"], meta["nbar"], meta["rank_cap"]
    mcodes = meta["matrix_codes"]
    k = art.k
    if nbar[piece] != k:
        return None
    if c.size > LIMITS.enum_ceiling:
        return None
    offs = []
    o = 0
    for ni in nbar:
        offs.append(o)
        o += ni
    checks: dict = {"rank_cap": cap}
    minranks = []
    ranks_ok = True
    for j, code in enumerate(mcodes):
        if j == piece:
            continue
        mr = _min_nonzero_rank(code, cache)
        minranks.append({"block": j, "min_nonzero_rank": mr})
        if mr is not None and 2 * mr < d:
            ranks_ok = False
    checks["block_codes"] = minranks
    if art.q == 2:
        counts, violations = _scan_concat_gf2(c, art, offs)
    else:
        counts, violations = _scan_concat_field(c, art, offs)
    checks.update(counts)
    distinct = _distinct_count(c)
    checks["distinct_words"] = distinct
    if distinct != c.size:
        violations.append({"reason": "duplicate or missing words",
                           "distinct": distinct, "declared": c.size})
    ok = ranks_ok and not violations
    arg = {
        "scope": c.label,
        "argument": "identity home block pins the message; the other blocks "
                    "live in additive codes of rank distance d/2",
        "covers": [[c.label, c.label]],
        "checks": checks,
        "violations": violations[:10],
        "pass": bool(ok),
    }
    facts = {"trivial": {piece}, "heavy": {j: k - cap for j in range(piece)}}
    return arg, facts


def _product_argument(c: CodeComponent, art: CodeArtifact, d: int,
                      ctx: EqContext) -> tuple[dict, dict] | None:
    """Certificate for same-index block products.

    Exhaustive premises: words re-derive from the stored block families;
    every word meets block i in exactly a_i dimensions; inside a family each
    block code keeps distance d; across families block i keeps distance
    2(a_i - b_i), and those gaps sum to at least d.
    """
    if ctx.abar is None:
        return None
    fams = c.meta.get("families")
    if fams is None or len(fams) != ctx.l:
        return None
    from .construct import embed_blocks
    from .subspace import subspace_pack

    field = art.field
    abar, bbar = ctx.abar, ctx.bbar
    r = min(len(f) for f in fams)
    multi_family = r > 1
    if multi_family and bbar is None:
        return None
    checks: dict = {}
    violations: list[dict] = []

    blocks: list[list[list[Subspace]]] = []
    for b in range(ctx.l):
        blocks.append([[subspace_unpack(x, ctx.nbar[b], abar[b], field)
                        for x in fam] for fam in fams[b]])

    stored = set(c.words) if c.words is not None else set(c.iter_packed())
    emitted = 0
    for j in range(r):
        for choice in itertools.product(*(blocks[b][j] for b in range(ctx.l))):
            emitted += 1
            x = subspace_pack(embed_blocks(choice, field))
            if x not in stored:
                violations.append({"reason": "word is not a family product",
                                   "word": x})
    if emitted != len(stored) or len(stored) != c.size:
        violations.append({"reason": "family products disagree with the words",
                           "emitted": emitted, "stored": len(stored)})
    checks.update(emitted=emitted, rederived=not violations)

    member = 0
    for x in stored:
        member += 1
        for i in range(ctx.l):
            got = _meet_dims(art, ctx, x, i, inside=True)
            if got != abar[i]:
                violations.append({"reason": "block dimension off", "word": x,
                                   "block": i, "dim": got,
                                   "required": abar[i]})
    checks["def_E_a_checked"] = member

    intra_min: int | None = None
    cross_min: list[int | None] = [None] * ctx.l
    for b in range(ctx.l):
        for words in blocks[b]:
            for s in range(len(words)):
                for t in range(s + 1, len(words)):
                    ds = subspace_distance(words[s], words[t])
                    if intra_min is None or ds < intra_min:
                        intra_min = ds
        for j1 in range(len(blocks[b])):
            for j2 in range(j1 + 1, len(blocks[b])):
                for U in blocks[b][j1]:
                    for W in blocks[b][j2]:
                        ds = subspace_distance(U, W)
                        if cross_min[b] is None or ds < cross_min[b]:
                            cross_min[b] = ds
    checks["intra_family_block_min"] = intra_min
    checks["cross_family_block_min"] = cross_min
    if intra_min is not None and intra_min < d:
        violations.append({"reason": "intra-family block distance below d",
                           "minimum": intra_min})
    if multi_family:
        gaps = [2 * (abar[b] - bbar[b]) for b in range(ctx.l)]
        checks["cross_family_required"] = gaps
        for b in range(ctx.l):
            if cross_min[b] is not None and cross_min[b] < gaps[b]:
                violations.append({"reason": "cross-family block distance "
                                             "below 2(a_i - b_i)",
                                   "block": b, "minimum": cross_min[b]})
        if sum(gaps) < d:
            violations.append({"reason": "cross-family gaps sum below d",
                               "gaps": gaps})
    ok = not violations
    arg = {
        "scope": c.label,
        "argument": "same-index block products: distances add across blocks",
        "covers": [[c.label, c.label]],
        "checks": checks,
        "violations": violations[:10],
        "pass": bool(ok),
    }
    facts = {"trivial": set(),
             "heavy": {i: art.k - abar[i] for i in range(ctx.l)}}
    return arg, facts


def _pivot_sets_distance(pa: Iterable[tuple[int, ...]],
                         pb: Iterable[tuple[int, ...]]) -> int:
    return min(sum(x != y for x, y in zip(a, b))
               for a in pa for b in pb)


# -- hierarchical -----------------------------------------------------------------


def verify_hierarchical(art: CodeArtifact, d: int | None = None) -> dict:
    """Certify the minimum distance from the artifact's pipeline structure.

    Intra-component classes are covered by lifted-code, concatenation, or
    product arguments; cross classes by pivot Hamming distances or by block
    facts (one side misses E_i, the other meets it in at least d/2
    dimensions).  Uncovered classes fall back to raw pair checks inside the
    pair budget; artifacts with size-only components, or classes that are
    neither argued nor affordable, are refused.
    """
    d = art.d if d is None else d
    report = _base_report(art, "hierarchical", d)
    for c in art.components:
        if c.size_only:
            return _refusal(report, f"size-only component: {c.label}")
    ctx = art.meta.get("ctx")
    if not isinstance(ctx, EqContext):
        ctx = None
    cache: dict = {}
    arguments: list[dict] = []
    covered: set[frozenset[str]] = set()
    facts: dict[str, dict] = {}
    pivots: dict[str, set[tuple[int, ...]]] = {}
    ok = True

    for c in art.components:
        arg = None
        fact = None
        try:
            if c.kind == "lifted_fdrm":
                arg = _lifted_argument(c, art, d, cache)
                if arg["pass"]:
                    pivots[c.label] = {tuple(c.meta["pivot"])}
            elif c.kind == "block_concatenation":
                got = _concat_argument(c, art, d, cache)
                if got is not None:
                    arg, fact = got
            elif c.kind == "block_products" and ctx is not None:
                got = _product_argument(c, art, d, ctx)
                if got is not None:
                    arg, fact = got
            elif c.kind == "explicit" and "members" in c.meta:
                scan = _explicit_argument(c, art)
                arguments.append(scan)
                ok &= scan["pass"]
                if scan["pass"]:
                    pivots[c.label] = set(c.meta["members"])
                continue
        except ValueError as exc:
            arguments.append({"scope": c.label, "argument": "skipped",
                              "covers": [], "checks": {"error": str(exc)},
                              "pass": True})
            continue
        if arg is not None:
            arguments.append(arg)
            covered.add(frozenset((c.label,)))
            ok &= arg["pass"]
            if fact is not None and arg["pass"]:
                facts[c.label] = fact

    fallback: list[tuple[CodeComponent, CodeComponent]] = []
    for a in range(len(art.components)):
        for b in range(a + 1, len(art.components)):
            ca, cb = art.components[a], art.components[b]
            key = frozenset((ca.label, cb.label))
            arg = None
            if ca.label in pivots and cb.label in pivots:
                ham = _pivot_sets_distance(pivots[ca.label], pivots[cb.label])
                if ham >= d:
                    arg = {
                        "scope": f"{ca.label} x {cb.label}",
                        "argument": "subspace distance dominates the pivot "
                                    "Hamming distance",
                        "covers": [[ca.label, cb.label]],
                        "checks": {"pivot_hamming": ham},
                        "pass": True,
                    }
            if arg is None and ca.label in facts and cb.label in facts:
                fa, fb = facts[ca.label], facts[cb.label]
                for first, second, nf, ns in ((fa, fb, ca.label, cb.label),
                                              (fb, fa, cb.label, ca.label)):
                    hit = next((i for i in first["trivial"]
                                if second["heavy"].get(i, 0) >= d // 2), None)
                    if hit is not None:
                        arg = {
                            "scope": f"{ca.label} x {cb.label}",
                            "argument": "block fact: one side misses E_i, the "
                                        "other meets it in at least d/2 "
                                        "dimensions",
                            "covers": [[ca.label, cb.label]],
                            "checks": {"block": hit, "trivial_side": nf,
                                       "meet_at_least": second["heavy"][hit],
                                       "heavy_side": ns},
                            "pass": True,
                        }
                        break
            if arg is not None:
                arguments.append(arg)
                covered.add(key)
            else:
                fallback.append((ca, cb))

    for c in art.components:
        if frozenset((c.label,)) not in covered:
            fallback.append((c, c))

    raw_pairs = 0
    budget = LIMITS.pair_word_ceiling ** 2 // 2
    dist = _distance_fn(art)
    for ca, cb in fallback:
        npairs = (ca.size * (ca.size - 1) // 2 if ca is cb
                  else ca.size * cb.size)
        if npairs > budget:
            if ok:
                report["arguments"] = arguments
                return _refusal(
                    report,
                    f"pair class {ca.label} x {cb.label} has no structural "
                    f"argument and {npairs} pairs exceed the budget {budget}")
            # violations were already found; report them instead of refusing
            arguments.append({"scope": f"{ca.label} x {cb.label}",
                              "argument": "not covered",
                              "covers": [[ca.label, cb.label]],
                              "checks": {"pairs": npairs,
                                         "note": "skipped after violations"},
                              "pass": False})
            continue
        wa = list(ca.iter_packed())
        minds: int | None = None
        if ca is cb:
            for i in range(len(wa)):
                for j in range(i + 1, len(wa)):
                    ds = dist(wa[i], wa[j])
                    raw_pairs += 1
                    if minds is None or ds < minds:
                        minds = ds
        else:
            wb = list(cb.iter_packed())
            for x in wa:
                for y in wb:
                    ds = dist(x, y)
                    raw_pairs += 1
                    if minds is None or ds < minds:
                        minds = ds
        passed = minds is None or minds >= d
        ok &= passed
        arguments.append({"scope": f"{ca.label} x {cb.label}",
                          "argument": "raw pair checks",
                          "covers": [[ca.label, cb.label]],
                          "checks": {"pairs": npairs, "minimum": minds},
                          "pass": passed})

    report.update(refused=False, arguments=arguments,
                  raw_pair_checks=raw_pairs)
    report["pass"] = bool(ok)
    report["certificate"] = bool(ok)
    return report
