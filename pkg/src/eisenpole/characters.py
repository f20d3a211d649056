"""One-parameter character families, modular characters and N_eps counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import ConfigError
from .rootdata import RootDatum, WeylElement

MINUS_HALF = "minus_half"
PLUS_HALF = "plus_half"
CONVENTIONS = (MINUS_HALF, PLUS_HALF)

HALF = Fraction(1, 2)


class AffLin(NamedTuple):
    """The affine-linear function s -> a*s + b with rational coefficients."""

    a: Fraction
    b: Fraction

    @classmethod
    def make(cls, a, b) -> "AffLin":
        return cls(Fraction(a), Fraction(b))

    def __call__(self, s) -> Fraction:
        return self.a * s + self.b

    def shift(self, c) -> "AffLin":
        return AffLin(self.a, self.b + c)

    def reflect(self) -> "AffLin":
        """1 - (a*s + b), the functional-equation partner."""
        return AffLin(-self.a, 1 - self.b)

    def __str__(self) -> str:
        return format_affine(self.a, self.b)


def _coef(c: Fraction) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c}"


def format_affine(a: Fraction, b: Fraction, var: str = "s") -> str:
    """``16s-3``, ``-8s+3``, ``2`` or ``1/2``."""
    if a == 0:
        return str(b)
    head = f"{_coef(a)}{var}" if a.denominator == 1 else f"({a}){var}"
    if b == 0:
        return head
    sign = "+" if b > 0 else "-"
    return f"{head}{sign}{abs(b)}"


@dataclass(frozen=True)
class AffineWeight:
    """chi(s) = s*direction + offset in the fundamental-weight basis."""

    direction: tuple[Fraction, ...]
    offset: tuple[Fraction, ...]
    convention: str | None = None

    def at(self, s) -> tuple[Fraction, ...]:
        s = Fraction(s)
        return tuple(s * v + u for v, u in zip(self.direction, self.offset))

    def pairing(self, coroot: Sequence[int]) -> AffLin:
        a = sum((c * v for c, v in zip(coroot, self.direction)), Fraction(0))
        b = sum((c * u for c, u in zip(coroot, self.offset)), Fraction(0))
        return AffLin(a, b)

    def transform(self, datum: RootDatum, w: WeylElement) -> "AffineWeight":
        return AffineWeight(
            tuple(Fraction(x) for x in datum.apply(w, self.direction)),
            tuple(Fraction(x) for x in datum.apply(w, self.offset)),
            self.convention,
        )


def check_parabolic(datum: RootDatum, i: int) -> int:
    if not isinstance(i, int) or i not in datum.nodes:
        raise ConfigError(f"P{i} is not a maximal parabolic of {datum.type_label}")
    return i


def delta_B(datum: RootDatum) -> tuple[int, ...]:
    total = [0] * datum.rank
    for root in datum.positive_roots:
        for k, x in enumerate(datum.root_to_weight(root)):
            total[k] += x
    return tuple(total)


@lru_cache(maxsize=None)
def _delta_levi(datum: RootDatum, levi: frozenset) -> tuple[int, ...]:
    inside = set(datum.levi_root_indices(levi))
    total = [0] * datum.rank
    for k, root in enumerate(datum.positive_roots):
        if k in inside:
            continue
        for j, x in enumerate(datum.root_to_weight(root)):
            total[j] += x
    return tuple(total)


def delta_P(datum: RootDatum, levi: Iterable[int]) -> tuple[int, ...]:
    """Sum of the positive roots outside the Levi spanned by ``levi``."""
    levi = frozenset(levi)
    for i in levi:
        datum._check_node(i)
    return _delta_levi(datum, levi)


def delta_maximal(datum: RootDatum, i: int) -> tuple[int, ...]:
    check_parabolic(datum, i)
    return delta_P(datum, datum.levi_nodes(i))


@lru_cache(maxsize=None)
def b_matrix(datum: RootDatum) -> tuple[tuple[int, ...], ...]:
    """b_ii = <delta_{P_i}, alpha_i^vee>; (b_ij, b_ji) are the coordinates of delta_{P_i cap P_j}."""
    n = datum.rank
    rows = [[0] * n for _ in range(n)]
    for i in datum.nodes:
        rows[i - 1][i - 1] = delta_maximal(datum, i)[i - 1]
        for j in datum.nodes:
            if i < j:
                d = delta_P(datum, datum.levi_nodes({i, j}))
                rows[i - 1][j - 1] = d[i - 1]
                rows[j - 1][i - 1] = d[j - 1]
    return tuple(tuple(r) for r in rows)


def b_matrix_latex(datum: RootDatum) -> str:
    b = b_matrix(datum)
    cols = "r" * datum.rank
    body = " \\\\\n".join(" & ".join(str(x) for x in row) for row in b)
    return f"$$B= \\left(\\begin{{array}}{{{cols}}}\n{body}\n\\end{{array}}\\right) $$"


def chi_family(datum: RootDatum, i: int, convention: str = MINUS_HALF) -> AffineWeight:
    """chi_{P_i,s} in either convention.

    minus_half: delta_P^(s-1/2) (x) delta_B^(1/2), i.e. direction delta_P and
    offset rho - delta_P/2.  plus_half: delta_P^(s+1/2) (x) delta_B^(-1/2).
    """
    if convention not in CONVENTIONS:
        raise ConfigError(f"unknown convention {convention!r}")
    dp = tuple(Fraction(x) for x in delta_maximal(datum, i))
    rho = tuple(Fraction(x) for x in datum.rho)
    if convention == MINUS_HALF:
        off = tuple(r - HALF * d for r, d in zip(rho, dp))
    else:
        off = tuple(HALF * d - r for r, d in zip(rho, dp))
    return AffineWeight(dp, off, convention)


def chi_at(datum: RootDatum, i: int, s, convention: str = MINUS_HALF) -> tuple[Fraction, ...]:
    return chi_family(datum, i, convention).at(s)


def pairings(datum: RootDatum, weight: Sequence) -> list:
    return [datum.pairing(weight, co) for co in datum.positive_coroots]


def n_epsilon(datum: RootDatum, weight: Sequence, eps) -> list[int]:
    """Indices of positive roots alpha with <weight, alpha^vee> = eps."""
    eps = Fraction(eps)
    return [k for k, co in enumerate(datum.positive_coroots) if datum.pairing(weight, co) == eps]


def n_counts(datum: RootDatum, weight: Sequence) -> dict[Fraction, int]:
    out: dict[Fraction, int] = {}
    for v in pairings(datum, weight):
        out[v] = out.get(v, 0) + 1
    return out


def d_P(datum: RootDatum, i: int, s0) -> int:
    """|N_1| - |N_0| - (n-1) for the minus_half family at s0."""
    chi = chi_at(datum, i, s0, MINUS_HALF)
    counts = n_counts(datum, chi)
    return counts.get(Fraction(1), 0) - counts.get(Fraction(0), 0) - (datum.rank - 1)
