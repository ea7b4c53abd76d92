"""Global limits and the single RNG seed policy.

Every randomized routine takes an explicit ``seed`` argument; nothing reads
global random state.  Limits guard exhaustive loops so that a typo in the
parameters fails fast instead of running for hours.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return int(raw)


@dataclass(frozen=True)
class Limits:
    """Ceilings for exhaustive computations.

    Each field can be overridden by an environment variable named
    ``CDCW_<FIELD>`` (upper-cased), e.g. ``CDCW_ENUM_CEILING=20000000``.
    """

    # largest base field order for which full add/mul tables are built
    field_order_ceiling: int = 81
    # largest extension field order handled via exp/log tables
    ext_order_ceiling: int = 65536
    # max number of subspaces enumerated in one Grassmannian sweep
    enum_ceiling: int = 10_000_000
    # max number of vectors when expanding the span of a generator matrix
    span_ceiling: int = 1 << 20
    # largest word count admitted to all-pairs distance verification
    pair_word_ceiling: int = 10_000
    # max codewords materialized when expanding a rank-metric code
    expand_ceiling: int = 100_000
    # max vertices fed to the exact clique search
    clique_vertex_cap: int = 2000
    # max pivot classes (variables) in the counting integer program
    ilp_variable_cap: int = 2000

    @classmethod
    def from_env(cls) -> "Limits":
        kwargs = {}
        for f in fields(cls):
            kwargs[f.name] = _env_int("CDCW_" + f.name.upper(), f.default)
        return cls(**kwargs)


DEFAULT_SEED = 0

LIMITS = Limits.from_env()
