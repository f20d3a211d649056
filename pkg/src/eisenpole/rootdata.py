"""Root data, Weyl group actions and coset representatives.

Node labels are 1-based everywhere in the public API.  The E-series uses
the branch node 2 attached to node 4 with the chain 1-3-4-5-6(-7-8); F4 has
long roots 1, 2 and short roots 3, 4; G2 has the short root 1 and the long
root 2.

Weights live in the fundamental-weight basis, roots in the simple-root basis
and coroots in the simple-coroot basis, so that the pairing of a weight with
a coroot is a plain dot product.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ConfigError, PreconditionError

SCHEMA_VERSION = "1"

_MAX_RANK = 8


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element stored as a reduced word.

    ``word = (k1, ..., km)`` stands for ``s_k1 s_k2 ... s_km`` (so ``s_km``
    acts first).  Elements produced by a :class:`RootDatum` carry the
    lexicographically least reduced word, which makes equality of elements
    the same as equality of words.
    """

    word: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"w{k}" for k in self.word)

    def latex(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"w_{{{k}}}" for k in self.word)


def parse_word(text: str) -> tuple[int, ...]:
    """Parse ``"w3w4w3w1"``, ``"3 4 3 1"`` or ``"e"`` into a tuple of letters."""
    text = text.strip()
    if text in ("", "e", "1"):
        return ()
    if "w" in text:
        return tuple(int(x) for x in re.findall(r"w_?\{?(\d+)\}?", text))
    return tuple(int(x) for x in re.split(r"[\s,]+", text) if x)


def _parse_label(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", str(label))
    if not m:
        raise ConfigError(f"cannot parse group label {label!r}")
    letter, rank = m.group(1).upper(), int(m.group(2))
    ok = {
        "A": 1 <= rank <= _MAX_RANK,
        "B": 2 <= rank <= _MAX_RANK,
        "C": 2 <= rank <= _MAX_RANK,
        "D": 4 <= rank <= _MAX_RANK,
        "E": 6 <= rank <= 8,
        "F": rank == 4,
        "G": rank == 2,
    }.get(letter, False)
    if not ok:
        raise ConfigError(f"unsupported group {letter}{rank}")
    return letter, rank


def _cartan(letter: str, n: int) -> tuple[tuple[int, ...], ...]:
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def simple(i, j):
        a[i][j] = a[j][i] = -1

    def multiple(long_, short, m):
        # <short, long^vee> = -1 and <long, short^vee> = -m
        a[long_][short] = -1
        a[short][long_] = -m

    if letter == "A":
        for k in range(n - 1):
            simple(k, k + 1)
    elif letter == "B":
        for k in range(n - 2):
            simple(k, k + 1)
        multiple(n - 2, n - 1, 2)
    elif letter == "C":
        for k in range(n - 2):
            simple(k, k + 1)
        multiple(n - 1, n - 2, 2)
    elif letter == "D":
        for k in range(n - 2):
            simple(k, k + 1)
        simple(n - 3, n - 1)
    elif letter == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]:
            if j < n:
                simple(i, j)
    elif letter == "F":
        simple(0, 1)
        multiple(1, 2, 2)
        simple(2, 3)
    elif letter == "G":
        multiple(1, 0, 3)
    return tuple(tuple(row) for row in a)


def _close_roots(cartan) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Positive roots and their coroots, generated from the simple ones."""
    n = len(cartan)
    unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = {u: u for u in unit}
    frontier = list(unit)
    while frontier:
        nxt = []
        for root in frontier:
            co = found[root]
            for i in range(n):
                # <root, alpha_i^vee> and <alpha_i, coroot>
                p = sum(root[j] * cartan[i][j] for j in range(n))
                q = sum(co[k] * cartan[k][i] for k in range(n))
                if root == unit[i]:
                    continue
                new = tuple(root[j] - (p if j == i else 0) for j in range(n))
                newco = tuple(co[k] - (q if k == i else 0) for k in range(n))
                if min(new) < 0:
                    raise AssertionError("reflection left the positive cone")
                if new not in found:
                    found[new] = newco
                    nxt.append(new)
        frontier = nxt
    roots = sorted(found, key=lambda r: (sum(r), tuple(-x for x in r)))
    return roots, [found[r] for r in roots]


@dataclass(frozen=True)
class RootDatum:
    type_label: str
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    positive_coroots: tuple[tuple[int, ...], ...]
    simple_root_in_weight_basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    @cached_property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    @cached_property
    def _inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        n = self.rank
        m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.cartan)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return tuple(tuple(row[n:]) for row in m)

    @cached_property
    def root_index(self) -> dict[tuple[int, ...], int]:
        return {r: k for k, r in enumerate(self.positive_roots)}

    @cached_property
    def coroot_heights(self) -> tuple[int, ...]:
        return tuple(sum(c) for c in self.positive_coroots)

    @cached_property
    def minus_one_in_weyl(self) -> bool:
        w0 = self.longest_element()
        probe = tuple(range(1, self.rank + 1))
        return self.apply(w0, probe) == tuple(-x for x in probe)

    # ---- weights -------------------------------------------------------

    def _check_node(self, i: int) -> int:
        if not isinstance(i, int) or not 1 <= i <= self.rank:
            raise ConfigError(f"node {i!r} is not a simple root index of {self.type_label}")
        return i

    def pairing(self, weight: Sequence, coroot: Sequence[int]):
        return sum(c * x for c, x in zip(coroot, weight))

    def reflect(self, weight: Sequence, i: int) -> tuple:
        """s_i(weight) for the 1-based node ``i``."""
        c = weight[i - 1]
        if c == 0:
            return tuple(weight)
        col = i - 1
        return tuple(x - c * self.cartan[k][col] for k, x in enumerate(weight))

    def apply_word(self, word: Iterable[int], weight: Sequence) -> tuple:
        out = tuple(weight)
        for k in reversed(tuple(word)):
            out = self.reflect(out, k)
        return out

    def apply(self, w: WeylElement, weight: Sequence) -> tuple:
        return self.apply_word(w.word, weight)

    def root_to_weight(self, root: Sequence) -> tuple:
        n = self.rank
        return tuple(sum(self.cartan[i][j] * root[j] for j in range(n)) for i in range(n))

    def to_root_basis(self, weight: Sequence) -> tuple[Fraction, ...]:
        inv = self._inverse_cartan
        n = self.rank
        return tuple(sum((inv[i][j] * weight[j] for j in range(n)), Fraction(0)) for i in range(n))

    def fundamental_weight(self, i: int) -> tuple[int, ...]:
        self._check_node(i)
        return tuple(int(k == i - 1) for k in range(self.rank))

    def is_dominant(self, weight: Sequence) -> bool:
        return all(x >= 0 for x in weight)

    # ---- elements ------------------------------------------------------

    def from_rho_image(self, image: Sequence) -> WeylElement:
        """Recover the element w from w(rho), reading off its least reduced word."""
        lam = tuple(image)
        word = []
        while True:
            k = next((j for j, x in enumerate(lam) if x < 0), None)
            if k is None:
                return WeylElement(tuple(word))
            word.append(k + 1)
            lam = self.reflect(lam, k + 1)

    def element(self, word: Iterable[int] | str = ()) -> WeylElement:
        if isinstance(word, str):
            word = parse_word(word)
        word = tuple(word)
        for k in word:
            self._check_node(k)
        return self.from_rho_image(self.apply_word(word, self.rho))

    def rho_image(self, w: WeylElement) -> tuple:
        return self.apply(w, self.rho)

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.from_rho_image(self.apply_word(a.word + b.word, self.rho))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(reversed(w.word))

    def length(self, w: WeylElement) -> int:
        return len(w.word)

    def inversion_set(self, w: WeylElement) -> list[int]:
        """Indices of positive roots alpha with w(alpha) < 0."""
        # alpha is inverted by w exactly when <w^{-1} rho, alpha^vee> < 0
        lam = self.apply_word(tuple(reversed(w.word)), self.rho)
        return [k for k, co in enumerate(self.positive_coroots) if self.pairing(lam, co) < 0]

    def apply_to_root(self, w: WeylElement, root: Sequence[int]) -> tuple[int, ...]:
        out = tuple(root)
        n = self.rank
        for k in reversed(w.word):
            p = sum(out[j] * self.cartan[k - 1][j] for j in range(n))
            out = tuple(x - (p if j == k - 1 else 0) for j, x in enumerate(out))
        return out

    def dominant_representative(self, weight: Sequence) -> tuple[tuple, WeylElement]:
        """The dominant weight in the orbit and the shortest element reaching it."""
        lam = tuple(weight)
        applied = []
        while True:
            k = next((j for j, x in enumerate(lam) if x < 0), None)
            if k is None:
                break
            applied.append(k + 1)
            lam = self.reflect(lam, k + 1)
        # the first reflection applied is the rightmost letter
        return lam, self.element(reversed(applied))

    # ---- parabolic data -----------------------------------------------

    def levi_nodes(self, omitted: int | Iterable[int]) -> frozenset[int]:
        omitted = {omitted} if isinstance(omitted, int) else set(omitted)
        for i in omitted:
            self._check_node(i)
        return frozenset(self.nodes) - omitted

    def levi_root_indices(self, levi: Iterable[int]) -> list[int]:
        levi = set(levi)
        return [k for k, r in enumerate(self.positive_roots)
                if all(c == 0 or (j + 1) in levi for j, c in enumerate(r))]

    def longest_element(self, subset: Iterable[int] | None = None) -> WeylElement:
        """Longest element of the parabolic subgroup generated by ``subset``."""
        subset = set(self.nodes) if subset is None else set(subset)
        for i in subset:
            self._check_node(i)
        lam = self.rho
        while True:
            k = next((j for j in sorted(subset) if lam[j - 1] > 0), None)
            if k is None:
                return self.from_rho_image(lam)
            lam = self.reflect(lam, k)

    def shortest_rep_of_longest(self, big: Iterable[int] | None, small: Iterable[int]) -> WeylElement:
        """Minimal representative of w_0(big) in W(big)/W(small)."""
        big = set(self.nodes) if big is None else set(big)
        small = set(small)
        if not small <= big:
            raise PreconditionError("the small subset must lie in the big one")
        return self.multiply(self.longest_element(big), self.longest_element(small))

    def coset_walk(self, omitted: int | Iterable[int]):
        """Breadth-first walk over the minimal representatives of W/W_P.

        Yields ``(raw_word, image)`` where ``image`` is w applied to the sum of
        the omitted fundamental weights.  ``raw_word`` is reduced but not
        necessarily the least one.
        """
        levi = self.levi_nodes(omitted)
        start = tuple(int((k + 1) not in levi) for k in range(self.rank))
        level = {start: ()}
        while level:
            nxt: dict[tuple, tuple] = {}
            for image, word in level.items():
                yield word, image
                for k in self.nodes:
                    if image[k - 1] > 0:
                        new = self.reflect(image, k)
                        if new not in nxt:
                            nxt[new] = (k,) + word
            level = nxt

    def coset_representatives(self, omitted: int | Iterable[int]) -> list[WeylElement]:
        return [self.element(word) for word, _ in self.coset_walk(omitted)]

    # ---- serialisation ------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "type": self.type_label,
            "cartan": [list(r) for r in self.cartan],
            "positive_roots": [list(r) for r in self.positive_roots],
            "positive_coroots": [list(r) for r in self.positive_coroots],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


@lru_cache(maxsize=None)
def _build(letter: str, rank: int) -> RootDatum:
    cartan = _cartan(letter, rank)
    roots, coroots = _close_roots(cartan)
    simple = tuple(tuple(cartan[i][j] for i in range(rank)) for j in range(rank))
    return RootDatum(
        type_label=f"{letter}{rank}",
        cartan=cartan,
        positive_roots=tuple(roots),
        positive_coroots=tuple(coroots),
        simple_root_in_weight_basis=simple,
    )


def build_root_datum(type_label: str) -> RootDatum:
    letter, rank = _parse_label(type_label)
    return _build(letter, rank)


def apply(datum: RootDatum, w: WeylElement, weight: Sequence) -> tuple:
    return datum.apply(w, weight)


def coset_representatives(datum: RootDatum, omitted) -> list[WeylElement]:
    return datum.coset_representatives(omitted)


def longest_element(datum: RootDatum, subset=None) -> WeylElement:
    return datum.longest_element(subset)


def shortest_rep_of_longest(datum: RootDatum, big, small) -> WeylElement:
    return datum.shortest_rep_of_longest(big, small)


def dominant_representative(datum: RootDatum, weight) -> tuple[tuple, WeylElement]:
    return datum.dominant_representative(weight)
