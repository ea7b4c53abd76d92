"""Plain-text storage for constant dimension codes.

A code file starts with the header line ``q n k d count`` and carries one
line per codeword: the k*n generator-matrix digits row-major, compact for
q <= 9 and space-separated above that.  Reading enforces RREF canonicity
word by word and re-counts against the header, so a tampered file fails
loudly; writing streams and the round trip is bit-exact.

A sidecar JSON file (``<path>.meta.json``) preserves the artifact's pipeline
structure: component kinds, word ranges, matrix-code bases, block families,
and the block context.  Verification re-checks everything it uses from the
sidecar against the words themselves, so the sidecar cannot smuggle in an
unearned certificate; without it a file still loads as a single explicit
component for exhaustive or sampled checking.
"""
from __future__ import annotations

import json
import os
from datetime import datetime, timezone
from typing import Iterator, Sequence

from .construct import CodeArtifact, CodeComponent, EqContext
from .gf import Field, field_of_order
from .rankmetric import LinearMatrixCode

SCHEMA_VERSION = 1


# -- word lines -------------------------------------------------------------------


def _word_to_line(x: int, n: int, k: int, q: int) -> str:
    if q == 2:
        return format(x, "b").zfill(k * n)[::-1]
    digits = []
    for _ in range(k * n):
        x, e = divmod(x, q)
        digits.append(e)
    if q <= 9:
        return "".join(str(e) for e in digits)
    return " ".join(str(e) for e in digits)


def _line_to_rows(line: str, n: int, k: int, q: int) -> list[list[int]]:
    if q <= 9:
        if len(line) != k * n:
            raise ValueError(f"expected {k * n} digits, found {len(line)}")
        digits = [int(ch) for ch in line]
    else:
        digits = [int(tok) for tok in line.split()]
        if len(digits) != k * n:
            raise ValueError(f"expected {k * n} digits, found {len(digits)}")
    if any(not 0 <= e < q for e in digits):
        raise ValueError("digit outside the field")
    return [digits[r * n:(r + 1) * n] for r in range(k)]


def _check_canonical(rows: Sequence[Sequence[int]]) -> None:
    """Require reduced row echelon form with full rank."""
    n = len(rows[0])
    pivots = []
    for r, row in enumerate(rows):
        p = next((c for c in range(n) if row[c]), None)
        if p is None:
            raise ValueError(f"row {r} is zero")
        if row[p] != 1:
            raise ValueError(f"row {r} leading entry is not 1")
        if pivots and p <= pivots[-1]:
            raise ValueError("pivot columns do not increase")
        pivots.append(p)
    for r, p in enumerate(pivots):
        for s in range(len(rows)):
            if s != r and rows[s][p]:
                raise ValueError(f"pivot column {p} is not cleared")


def _scan_line_gf2(line: str, n: int, k: int) -> int:
    """Parse and canonicity-check one GF(2) line; returns the packed word."""
    if len(line) != k * n:
        raise ValueError(f"expected {k * n} digits, found {len(line)}")
    try:
        x = int(line[::-1], 2)
    except ValueError:
        raise ValueError("digit outside the field") from None
    mask = (1 << n) - 1
    rows = [(x >> (r * n)) & mask for r in range(k)]
    pivots = []
    for r, v in enumerate(rows):
        if v == 0:
            raise ValueError(f"row {r} is zero")
        p = (v & -v).bit_length() - 1
        if pivots and p <= pivots[-1]:
            raise ValueError("pivot columns do not increase")
        pivots.append(p)
    for r, p in enumerate(pivots):
        bit = 1 << p
        for s, v in enumerate(rows):
            if s != r and v & bit:
                raise ValueError(f"pivot column {p} is not cleared")
    return x


def _rows_to_packed(rows: Sequence[Sequence[int]], n: int, q: int) -> int:
    x = 0
    scale = 1
    for row in rows:
        for e in row:
            if e:
                x += e * scale
            scale *= q
    return x


# -- sidecar serialization ---------------------------------------------------------


def sidecar_path(path: str) -> str:
    return path + ".meta.json"


def _code_to_json(code: LinearMatrixCode) -> dict:
    return {
        "rows": code.rows,
        "cols": code.cols,
        "min_rank_distance": code.min_rank_distance,
        "certificate": code.certificate,
        "basis": ["".join(str(e) for row in m for e in row)
                  if code.field.order <= 9 else
                  " ".join(str(e) for row in m for e in row)
                  for m in code.basis],
    }


def _code_from_json(d: dict, field: Field) -> LinearMatrixCode:
    rows, cols = d["rows"], d["cols"]
    basis = []
    for text in d["basis"]:
        if field.order <= 9:
            digits = [int(ch) for ch in text]
        else:
            digits = [int(tok) for tok in text.split()]
        basis.append(tuple(tuple(digits[r * cols:(r + 1) * cols])
                           for r in range(rows)))
    return LinearMatrixCode(rows, cols, field, tuple(basis),
                            d["min_rank_distance"], d["certificate"])


def _ctx_to_json(ctx: EqContext) -> dict:
    return {"nbar": list(ctx.nbar), "d": ctx.d, "k": ctx.k,
            "abar": list(ctx.abar) if ctx.abar else None,
            "bbar": list(ctx.bbar) if ctx.bbar else None,
            "cbar": list(ctx.cbar) if ctx.cbar else None}


def _ctx_from_json(d: dict) -> EqContext:
    return EqContext(tuple(d["nbar"]), d["d"], d["k"],
                     abar=tuple(d["abar"]) if d.get("abar") else None,
                     bbar=tuple(d["bbar"]) if d.get("bbar") else None,
                     cbar=tuple(d["cbar"]) if d.get("cbar") else None)


def _component_meta_to_json(c: CodeComponent) -> dict:
    meta = c.meta
    out: dict = {}
    if c.kind == "lifted_fdrm":
        out["pivot"] = list(meta["pivot"])
        out["rank_distance"] = meta["rank_distance"]
        out["matrix_code"] = _code_to_json(meta["matrix_code"])
    elif c.kind == "block_concatenation":
        out["piece"] = meta["piece"]
        out["nbar"] = list(meta["nbar"])
        out["rank_cap"] = meta["rank_cap"]
        out["rank_distance"] = meta["rank_distance"]
        out["matrix_codes"] = [_code_to_json(mc) for mc in meta["matrix_codes"]]
    elif c.kind == "block_products":
        out["family_sizes"] = list(meta["family_sizes"])
        out["families"] = [[list(fam) for fam in per_block]
                           for per_block in meta["families"]]
        if "block_dims" in meta:
            out["block_dims"] = list(meta["block_dims"])
    elif c.kind == "explicit":
        if "members" in meta:
            out["members"] = [list(v) for v in meta["members"]]
    return out


def _component_meta_from_json(kind: str, data: dict, field: Field) -> dict:
    meta: dict = {}
    if kind == "lifted_fdrm":
        code = _code_from_json(data["matrix_code"], field)
        meta = {"pivot": tuple(data["pivot"]),
                "rank_distance": data["rank_distance"],
                "dimension": code.dim,
                "matrix_code": code}
    elif kind == "block_concatenation":
        meta = {"construction": "two_block",
                "piece": data["piece"],
                "nbar": tuple(data["nbar"]),
                "rank_cap": data["rank_cap"],
                "rank_distance": data["rank_distance"],
                "matrix_codes": tuple(_code_from_json(mc, field)
                                      for mc in data["matrix_codes"])}
    elif kind == "block_products":
        meta = {"family_sizes": list(data["family_sizes"]),
                "families": [[list(fam) for fam in per_block]
                             for per_block in data["families"]]}
        if "block_dims" in data:
            meta["block_dims"] = tuple(data["block_dims"])
    elif kind == "explicit":
        if "members" in data:
            meta = {"members": tuple(tuple(v) for v in data["members"])}
    return meta


# -- write ------------------------------------------------------------------------


def write_code_file(art: CodeArtifact, path: str, sidecar: bool = True) -> dict:
    """Stream the artifact's words to ``path``; returns a small report.

    Word order follows the component order, so the sidecar's ranges slice
    the file exactly.  Artifacts with size-only components have no words to
    write and are rejected.
    """
    if art.size_only:
        raise ValueError("artifact has size-only components; nothing to write")
    count = 0
    with open(path, "w") as fh:
        fh.write(f"{art.q} {art.n} {art.k} {art.d} {art.size}\n")
        for x in art.iter_packed():
            fh.write(_word_to_line(x, art.n, art.k, art.q))
            fh.write("\n")
            count += 1
    if count != art.size:
        raise ValueError(f"emitted {count} words, declared {art.size}")
    report = {"path": path, "count": count, "n": art.n, "k": art.k,
              "d": art.d, "q": art.q}
    if sidecar:
        doc: dict = {
            "schema": SCHEMA_VERSION,
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "pipeline": art.meta.get("pipeline"),
            "ctx": (_ctx_to_json(art.meta["ctx"])
                    if isinstance(art.meta.get("ctx"), EqContext) else None),
            "components": [],
        }
        start = 0
        for c in art.components:
            doc["components"].append({
                "label": c.label,
                "kind": c.kind,
                "size": c.size,
                "range": [start, start + c.size],
                "meta": _component_meta_to_json(c),
            })
            start += c.size
        with open(sidecar_path(path), "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        report["sidecar"] = sidecar_path(path)
    return report


# -- read -------------------------------------------------------------------------


def _read_words(path: str) -> tuple[int, int, int, int, int, Iterator[int]]:
    fh = open(path)
    header = fh.readline().split()
    if len(header) != 5:
        fh.close()
        raise ValueError("header must be 'q n k d count'")
    q, n, k, d, count = (int(t) for t in header)

    def words() -> Iterator[int]:
        with fh:
            got = 0
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                try:
                    if q == 2:
                        x = _scan_line_gf2(line, n, k)
                    else:
                        rows = _line_to_rows(line, n, k, q)
                        _check_canonical(rows)
                        x = _rows_to_packed(rows, n, q)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
                got += 1
                yield x
            if got != count:
                raise ValueError(
                    f"{path}: header declares {count} words, file has {got}")

    return q, n, k, d, count, words()


def read_code_file(path: str, meta_path: str | None = None) -> CodeArtifact:
    """Load a code file back into an artifact.

    Every line is checked for RREF canonicity and the count against the
    header.  When the sidecar is present the component structure is
    restored, which is what hierarchical verification dispatches on.
    """
    q, n, k, d, count, words = _read_words(path)
    field = field_of_order(q)
    packed = list(words)
    if meta_path is None:
        cand = sidecar_path(path)
        meta_path = cand if os.path.exists(cand) else ""
    doc = None
    if meta_path:
        with open(meta_path) as fh:
            doc = json.load(fh)
        if doc.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported sidecar schema {doc.get('schema')!r}")
    if doc is None:
        comp = CodeComponent("words", "explicit", len(packed), tuple(packed),
                             None, {})
        return CodeArtifact(n, k, d, q, [comp], meta={"source": path})
    components = []
    for cd in doc["components"]:
        a, b = cd["range"]
        if not (0 <= a <= b <= len(packed)) or b - a != cd["size"]:
            raise ValueError(f"component {cd['label']!r} range does not fit")
        meta = _component_meta_from_json(cd["kind"], cd.get("meta", {}), field)
        components.append(CodeComponent(cd["label"], cd["kind"], cd["size"],
                                        tuple(packed[a:b]), None, meta))
    if sum(c.size for c in components) != len(packed):
        raise ValueError("sidecar components do not cover the file")
    meta: dict = {"source": path}
    if doc.get("pipeline"):
        meta["pipeline"] = doc["pipeline"]
    if doc.get("ctx"):
        meta["ctx"] = _ctx_from_json(doc["ctx"])
    return CodeArtifact(n, k, d, q, components, meta=meta)
