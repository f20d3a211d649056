"""Gindikin-Karpelevich factors as exact products of zeta quotients.

Everything here is symbolic: an argument of zeta is an :class:`AffLin` in s
(or a plain rational for constants) and nothing is evaluated numerically.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .characters import (
    PLUS_HALF,
    MINUS_HALF,
    AffineWeight,
    AffLin,
    chi_family,
    check_parabolic,
    format_affine,
)
from .errors import PreconditionError
from .rootdata import RootDatum, WeylElement


def _arg_key(p: AffLin):
    return (-p.a, p.b)


def _zeta_latex(p: AffLin) -> str:
    return f"\\zeta({format_affine(p.a, p.b)})"


def reduce_multisets(num: Iterable, den: Iterable) -> tuple[Counter, Counter]:
    n, d = Counter(num), Counter(den)
    common = n & d
    return n - common, d - common


@dataclass(frozen=True)
class ZetaProduct:
    """prod zeta(p_i(s)) / prod zeta(q_j(s)) with affine-linear arguments."""

    numerator: tuple[AffLin, ...] = ()
    denominator: tuple[AffLin, ...] = ()
    reduced: bool = False

    @classmethod
    def from_args(cls, args: Iterable[AffLin]) -> "ZetaProduct":
        """The unreduced quotient prod zeta(p)/zeta(p+1)."""
        args = tuple(args)
        return cls(args, tuple(p.shift(1) for p in args), False)

    def reduce(self) -> "ZetaProduct":
        n, d = reduce_multisets(self.numerator, self.denominator)
        return ZetaProduct(
            tuple(sorted(n.elements(), key=_arg_key)),
            tuple(sorted(d.elements(), key=_arg_key)),
            True,
        )

    def same_as(self, other: "ZetaProduct") -> bool:
        a, b = self.reduce(), other.reduce()
        return Counter(a.numerator) == Counter(b.numerator) and Counter(a.denominator) == Counter(b.denominator)

    def latex(self) -> str:
        r = self if self.reduced else self.reduce()
        if not r.numerator and not r.denominator:
            return "1"
        top = " ".join(_zeta_latex(p) for p in sorted(r.numerator, key=_arg_key)) or "1"
        if not r.denominator:
            return top
        bottom = " ".join(_zeta_latex(p) for p in sorted(r.denominator, key=_arg_key))
        return f"\\frac{{{top}}}{{{bottom}}}"

    def __str__(self) -> str:
        r = self if self.reduced else self.reduce()
        top = "*".join(f"zeta({p})" for p in r.numerator) or "1"
        if not r.denominator:
            return top
        return f"{top}/({'*'.join(f'zeta({p})' for p in r.denominator)})"

    def to_dict(self) -> dict:
        return {
            "numerator": [[str(p.a), str(p.b)] for p in self.numerator],
            "denominator": [[str(p.a), str(p.b)] for p in self.denominator],
            "reduced": self.reduced,
            "latex": self.latex(),
        }


def c_factor(datum: RootDatum, w: WeylElement, chi: AffineWeight) -> ZetaProduct:
    """C_w(chi) before reduction; call ``.reduce()`` to cancel."""
    args = [chi.pairing(datum.positive_coroots[k]) for k in datum.inversion_set(w)]
    return ZetaProduct.from_args(args)


def cocycle_check(datum: RootDatum, w1: WeylElement, w2: WeylElement, chi: AffineWeight) -> bool:
    """C_{w1 w2}(chi) == C_{w1}(w2 chi) C_{w2}(chi) as unreduced multisets."""
    w = datum.multiply(w1, w2)
    if datum.length(w) != datum.length(w1) + datum.length(w2):
        raise PreconditionError(f"{w1} * {w2} is not a reduced decomposition")
    lhs = c_factor(datum, w, chi)
    right = c_factor(datum, w2, chi)
    left = c_factor(datum, w1, chi.transform(datum, w2))
    return (Counter(lhs.numerator) == Counter(left.numerator) + Counter(right.numerator)
            and Counter(lhs.denominator) == Counter(left.denominator) + Counter(right.denominator))


@dataclass(frozen=True)
class CosetFactor:
    """A coset representative with its transported family and C-factor arguments."""

    word: tuple[int, ...]
    image: AffineWeight
    args: tuple[AffLin, ...]

    def element(self, datum: RootDatum) -> WeylElement:
        return datum.element(self.word)

    @property
    def factor(self) -> ZetaProduct:
        return ZetaProduct.from_args(self.args)


def coset_factors(datum: RootDatum, i: int, convention: str = PLUS_HALF) -> Iterator[CosetFactor]:
    """Walk W(G,P_i) and build every C_w(chi) incrementally.

    Going from w to s_k w adds the single inverted root w^{-1} alpha_k, whose
    pairing with chi is the k-th coordinate of w chi.
    """
    check_parabolic(datum, i)
    chi = chi_family(datum, i, convention)
    level = {chi.direction: CosetFactor((), chi, ())}
    while level:
        nxt: dict[tuple, CosetFactor] = {}
        for direction, cf in level.items():
            yield cf
            for k in datum.nodes:
                if direction[k - 1] > 0:
                    new_dir = datum.reflect(direction, k)
                    if new_dir in nxt:
                        continue
                    arg = AffLin(direction[k - 1], cf.image.offset[k - 1])
                    image = AffineWeight(new_dir, datum.reflect(cf.image.offset, k), convention)
                    nxt[new_dir] = CosetFactor((k,) + cf.word, image, cf.args + (arg,))
        level = nxt


@dataclass
class DenominatorReport:
    group: str
    parabolic: int
    s0: Fraction
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "parabolic": self.parabolic,
            "s0": str(self.s0),
            "checked": self.checked,
            "violations": [{"word": str(WeylElement(w)), "argument": str(p), "value": str(v)}
                           for w, p, v in self.violations],
        }


def verify_denominator_assumption(datum: RootDatum, i: int, s0, convention: str = PLUS_HALF) -> DenominatorReport:
    """Check that every reduced denominator argument exceeds 1 at s0."""
    s0 = Fraction(s0)
    if s0 <= 0:
        raise PreconditionError("s0 must be positive")
    report = DenominatorReport(datum.type_label, i, s0)
    for cf in coset_factors(datum, i, convention):
        report.checked += 1
        _, den = reduce_multisets(cf.args, (p.shift(1) for p in cf.args))
        for p in den:
            v = p(s0)
            if v <= 1:
                report.violations.append((cf.word, p, v))
    return report


# ---- constants -------------------------------------------------------------


def canonical_zeta_arg(a) -> Fraction:
    a = Fraction(a)
    if a <= Fraction(1, 2):
        a = 1 - a
    if a == 1:
        raise PreconditionError("zeta(1) and zeta(0) are poles, not constants")
    return a


def _frac_tex(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"\\frac{{{x.numerator}}}{{{x.denominator}}}"


def _zeta_power_tex(a: Fraction, e: int) -> str:
    base = f"\\zeta ( {_frac_tex(a)} )"
    return base if e == 1 else f"{base}^{{{e}}}"


@dataclass(frozen=True)
class ZetaConstant:
    """coeff * R^r_power * prod zeta(a)^e over rational arguments a > 1/2, a != 1."""

    coeff: Fraction = Fraction(1)
    r_power: int = 0
    zetas: tuple[tuple[Fraction, int], ...] = ()

    @classmethod
    def make(cls, coeff=1, r_power: int = 0, num: Iterable = (), den: Iterable = (),
             zetas: Mapping | None = None) -> "ZetaConstant":
        ex: Counter = Counter()
        for a in num:
            ex[canonical_zeta_arg(a)] += 1
        for a in den:
            ex[canonical_zeta_arg(a)] -= 1
        for a, e in (zetas or {}).items():
            ex[canonical_zeta_arg(a)] += e
        items = tuple(sorted((a, e) for a, e in ex.items() if e))
        return cls(Fraction(coeff), r_power, items)

    @property
    def exponents(self) -> dict[Fraction, int]:
        return dict(self.zetas)

    def __mul__(self, other: "ZetaConstant") -> "ZetaConstant":
        ex = Counter(self.exponents)
        ex.update(other.exponents)
        return ZetaConstant.make(self.coeff * other.coeff, self.r_power + other.r_power, zetas=ex)

    def inverse(self) -> "ZetaConstant":
        return ZetaConstant.make(1 / self.coeff, -self.r_power,
                                 zetas={a: -e for a, e in self.zetas})

    def __truediv__(self, other: "ZetaConstant") -> "ZetaConstant":
        return self * other.inverse()

    def __pow__(self, k: int) -> "ZetaConstant":
        return ZetaConstant.make(self.coeff ** k, self.r_power * k,
                                 zetas={a: e * k for a, e in self.zetas})

    def non_integer_args(self) -> list[Fraction]:
        return [a for a, _ in self.zetas if a.denominator != 1]

    def numerator_args(self) -> list[Fraction]:
        return [a for a, e in self.zetas for _ in range(max(e, 0))]

    def denominator_args(self) -> list[Fraction]:
        return [a for a, e in self.zetas for _ in range(max(-e, 0))]

    def __str__(self) -> str:
        def side(args, r):
            parts = (["R" if r == 1 else f"R^{r}"] if r > 0 else [])
            for a, e in args:
                parts.append(f"zeta({a})" + (f"^{e}" if e > 1 else ""))
            return "*".join(parts)
        top = side([(a, e) for a, e in self.zetas if e > 0], self.r_power)
        bottom = side([(a, -e) for a, e in self.zetas if e < 0], -self.r_power)
        body = top or "1"
        if bottom:
            body = f"{body}/({bottom})"
        if self.coeff == 1:
            return body
        return f"{self.coeff}*{body}" if body != "1" else str(self.coeff)

    def latex(self) -> str:
        def side(args, r):
            parts = ([("R" if r == 1 else f"R^{{{r}}}")] if r > 0 else [])
            parts += [_zeta_power_tex(a, e) for a, e in args]
            return " ".join(parts)
        top = side([(a, e) for a, e in self.zetas if e > 0], self.r_power)
        bottom = side([(a, -e) for a, e in self.zetas if e < 0], -self.r_power)
        quotient = ""
        if top or bottom:
            quotient = f"\\frac{{ {top or '1'} }} {{ {bottom} }}" if bottom else top
        if not quotient:
            return _frac_tex(self.coeff)
        if self.coeff == 1:
            return quotient
        return f"{_frac_tex(self.coeff)} \\times {quotient}"

    def to_dict(self) -> dict:
        return {
            "coeff": str(self.coeff),
            "r_power": self.r_power,
            "zeta": {str(a): e for a, e in self.zetas},
            "text": str(self),
        }


ResidueFactor = ZetaConstant


def residue_factor(datum: RootDatum, i: int) -> ResidueFactor:
    """Iterated residue of C_{w_P} along the Levi: each simple root gives R."""
    check_parabolic(datum, i)
    levi = datum.levi_root_indices(datum.levi_nodes(i))
    chi = chi_family(datum, i, MINUS_HALF)
    r = 0
    ex: Counter = Counter()
    for k in levi:
        h = chi.pairing(datum.positive_coroots[k])
        assert h.a == 0 and h.b.denominator == 1 and h.b >= 1
        h = h.b
        if h == 1:
            r += 1
        else:
            ex[h] += 1
        ex[h + 1] -= 1
    return ZetaConstant.make(1, r, zetas=ex)


def constant_from_args(num: Iterable, den: Iterable) -> ZetaConstant:
    """prod zeta(num) / prod zeta(den) for rational arguments away from the poles."""
    return ZetaConstant.make(1, 0, num=num, den=den)
