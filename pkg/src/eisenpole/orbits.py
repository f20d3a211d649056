"""Weighted Dynkin diagrams of distinguished nilpotent orbits.

The table is keyed by node weights in this package's labelling and lives on
the dual side: a diagram h is read against the coroots, so it is compared
with 2 * (dominant character) in the fundamental-weight basis.

Provenance: distinguished orbits correspond to {0,2}-diagrams whose degree-0
and degree-2 pieces have equal dimension (Bala-Carter).  ``derive`` rebuilds
the table from that criterion; the test suite checks the two agree.  Names
follow the usual a_k / b_k convention, k being the number of zero nodes; when
two orbits share k, the larger one is a_k.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .rootdata import RootDatum

DISTINGUISHED: dict[str, dict[tuple[int, ...], str]] = {
    "G2": {
        (2, 2): "G_2",
        (2, 0): "G_2(a_1)",
    },
    "F4": {
        (2, 2, 2, 2): "F_4",
        (2, 0, 2, 2): "F_4(a_1)",
        (2, 0, 2, 0): "F_4(a_2)",
        (0, 0, 2, 0): "F_4(a_3)",
    },
    "E6": {
        (2, 2, 2, 2, 2, 2): "E_6",
        (2, 2, 2, 0, 2, 2): "E_6(a_1)",
        (2, 0, 0, 2, 0, 2): "E_6(a_3)",
    },
    "E7": {
        (2, 2, 2, 2, 2, 2, 2): "E_7",
        (2, 2, 2, 0, 2, 2, 2): "E_7(a_1)",
        (2, 2, 2, 0, 2, 0, 2): "E_7(a_2)",
        (2, 0, 0, 2, 0, 2, 2): "E_7(a_3)",
        (2, 0, 0, 2, 0, 0, 2): "E_7(a_4)",
        (0, 0, 0, 2, 0, 0, 2): "E_7(a_5)",
    },
    "E8": {
        (2, 2, 2, 2, 2, 2, 2, 2): "E_8",
        (2, 2, 2, 0, 2, 2, 2, 2): "E_8(a_1)",
        (2, 2, 2, 0, 2, 0, 2, 2): "E_8(a_2)",
        (2, 0, 0, 2, 0, 2, 2, 2): "E_8(a_3)",
        (2, 0, 0, 2, 0, 2, 0, 2): "E_8(a_4)",
        (2, 0, 0, 2, 0, 0, 2, 2): "E_8(b_4)",
        (2, 0, 0, 2, 0, 0, 2, 0): "E_8(a_5)",
        (0, 0, 0, 2, 0, 0, 2, 2): "E_8(b_5)",
        (0, 0, 0, 2, 0, 0, 2, 0): "E_8(a_6)",
        (0, 0, 0, 2, 0, 0, 0, 2): "E_8(b_6)",
        (0, 0, 0, 0, 2, 0, 0, 0): "E_8(a_7)",
    },
}


def _grades(datum: RootDatum, h: Sequence[int]) -> list[int]:
    return [sum(c * x for c, x in zip(co, h)) for co in datum.positive_coroots]


def orbit_dimension(datum: RootDatum, h: Sequence[int]) -> int:
    """dim g - dim g_0 for an even diagram."""
    g0 = datum.rank + 2 * _grades(datum, h).count(0)
    return 2 * len(datum.positive_roots) + datum.rank - g0


def is_distinguished(datum: RootDatum, h: Sequence[int]) -> bool:
    grades = _grades(datum, h)
    return datum.rank + 2 * grades.count(0) == grades.count(2)


def derive(datum: RootDatum) -> dict[tuple[int, ...], str]:
    """Rebuild the distinguished diagrams and their names from scratch."""
    n = datum.rank
    letter, rank = datum.type_label[0], datum.type_label[1:]
    by_zeros: dict[int, list] = {}
    for k in range(n + 1):
        for zeros in combinations(range(n), k):
            h = tuple(0 if i in zeros else 2 for i in range(n))
            if is_distinguished(datum, h):
                by_zeros.setdefault(k, []).append(h)
    out = {}
    for k, diagrams in by_zeros.items():
        diagrams.sort(key=lambda h: -orbit_dimension(datum, h))
        for h, tag in zip(diagrams, "abcd"):
            out[h] = f"{letter}_{rank}" if k == 0 else f"{letter}_{rank}({tag}_{k})"
    return out


def lookup(datum: RootDatum, diagram: Sequence) -> str | None:
    """Name of the distinguished orbit with this diagram, or None."""
    table = DISTINGUISHED.get(datum.type_label)
    if table is None:
        table = derive(datum)
    try:
        key = tuple(int(x) for x in diagram)
    except (TypeError, ValueError):
        return None
    if any(int(x) != x for x in diagram):
        return None
    return table.get(key)
