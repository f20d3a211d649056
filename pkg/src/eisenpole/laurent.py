"""Truncated Laurent series of zeta products over a free symbol ring.

Symbols:
    c_j   (j >= -1)  coefficients of zeta at 1, with c_{-1} = R the residue
    Z(a)_j (j >= 0)  Taylor coefficients of zeta at a rational a > 1/2, a != 1

zeta is the completed zeta, zeta(s) = zeta(1 - s).  Atoms are plain tuples
``(kind, p, q, j)`` so that monomials sort and hash cheaply: kind 0 is c_j
(p = q = 1), kind 1 is Z(p/q)_j.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath

from .characters import AffLin
from .errors import InconclusiveError, PreconditionError

INF = math.inf
HALF = Fraction(1, 2)

Atom = tuple  # (kind, p, q, j)
Monomial = tuple  # sorted tuple of atoms, repeated for powers


def c_atom(j: int) -> Atom:
    if j < -1:
        raise ValueError("c_j needs j >= -1")
    return (0, 1, 1, j)


def z_atom(a, j: int) -> Atom:
    a = Fraction(a)
    if a <= HALF and a != HALF or a == 1 or a == 0:
        raise ValueError(f"Z({a}) is not a canonical expansion point")
    if j < 0:
        raise ValueError("Z(a)_j needs j >= 0")
    return (1, a.numerator, a.denominator, j)


R_ATOM = c_atom(-1)


def atom_point(atom: Atom) -> Fraction:
    return Fraction(atom[1], atom[2])


def _frac_tex(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"\\frac{{{x.numerator}}}{{{x.denominator}}}"


def atom_text(atom: Atom) -> str:
    kind, p, q, j = atom
    if kind == 0:
        return "c_{-1}" if j == -1 else f"c_{j}"
    a = Fraction(p, q)
    return f"zeta({a})_{j}"


def atom_latex(atom: Atom) -> str:
    kind, p, q, j = atom
    if kind == 0:
        return "c_{-1}" if j == -1 else f"c_{{ {j} }}"
    return f"\\zeta( {_frac_tex(Fraction(p, q))} )_{{ {j} }}"


def _group(mono: Monomial):
    out: list[list] = []
    for atom in mono:
        if out and out[-1][0] == atom:
            out[-1][1] += 1
        else:
            out.append([atom, 1])
    return out


class SymPoly:
    """Polynomial in atoms with rational coefficients; canonical by construction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "SymPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def atom(cls, atom: Atom, coeff=1) -> "SymPoly":
        return cls({(atom,): Fraction(coeff)})

    @classmethod
    def monomial(cls, atoms: Iterable[Atom], coeff=1) -> "SymPoly":
        return cls({tuple(sorted(atoms)): Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymPoly.const(other)
        return isinstance(other, SymPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "SymPoly") -> "SymPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SymPoly(out)

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = Fraction(c)
        return SymPoly({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                out[m] = out.get(m, 0) + c1 * c2
        return SymPoly(out)

    __rmul__ = __mul__

    def atoms(self) -> set[Atom]:
        return {a for m in self.terms for a in m}

    def _sorted_terms(self):
        # higher degree first, matching the way products are usually written
        return sorted(self.terms.items(), key=lambda t: (-len(t[0]), t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_terms():
            factors = " ".join(atom_text(a) + (f"^{k}" if k > 1 else "") for a, k in _group(m))
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(factors)
            elif c == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{c} {factors}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__

    def latex(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, (m, c) in enumerate(self._sorted_terms()):
            factors = " ".join(atom_latex(a) + (f"^{{{k}}}" if k > 1 else "") for a, k in _group(m))
            mag = abs(c)
            body = _frac_tex(mag) if not factors else (factors if mag == 1 else f"{_frac_tex(mag)} {factors}")
            if idx == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def to_dict(self) -> dict:
        return {"text": str(self), "latex": self.latex()}


ZERO = SymPoly()
ONE = SymPoly.const(1)


@dataclass
class LaurentPoly:
    """sum_k coeffs[k] (s - s0)^k, exact for k <= order."""

    s0: Fraction
    coeffs: dict[int, SymPoly] = field(default_factory=dict)
    order: float = INF

    def __post_init__(self):
        self.s0 = Fraction(self.s0)
        self.coeffs = {k: v for k, v in self.coeffs.items() if not v.is_zero() and k <= self.order}

    @classmethod
    def one(cls, s0) -> "LaurentPoly":
        return cls(s0, {0: ONE}, INF)

    @property
    def low(self) -> float:
        return min(self.coeffs) if self.coeffs else INF

    def coefficient(self, k: int) -> SymPoly:
        if k > self.order:
            raise PreconditionError(f"exponent {k} is beyond the truncation order {self.order}")
        return self.coeffs.get(k, ZERO)

    def _check(self, other: "LaurentPoly"):
        if self.s0 != other.s0:
            raise PreconditionError(f"expansion points differ: {self.s0} vs {other.s0}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return LaurentPoly(self.s0, out, order)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        if not self.coeffs or not other.coeffs:
            order = min(self.order + other.low, other.order + self.low)
            return LaurentPoly(self.s0, {}, order)
        order = min(self.order + other.low, other.order + self.low)
        out: dict[int, SymPoly] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k > order:
                    continue
                p = a * b
                out[k] = out[k] + p if k in out else p
        return LaurentPoly(self.s0, out, order)

    def truncate(self, order) -> "LaurentPoly":
        return LaurentPoly(self.s0, dict(self.coeffs), min(order, self.order))

    def scale(self, c: SymPoly) -> "LaurentPoly":
        return LaurentPoly(self.s0, {k: v * c for k, v in self.coeffs.items()}, self.order)

    def __str__(self) -> str:
        parts = [f"({v})*(s-{self.s0})^{k}" for k, v in sorted(self.coeffs.items())]
        tail = f"O((s-{self.s0})^{self.order + 1})" if self.order != INF else ""
        return " + ".join(parts + ([tail] if tail else [])) or "0"

    def latex(self, upto: int | None = None) -> str:
        """Pole terms as fractions first, then the Taylor part, then O(...)."""
        point = _frac_tex(self.s0)
        lin = f"(s- {point} )"
        last = self.order if upto is None else min(upto, self.order)
        pieces = []
        for k in sorted(self.coeffs):
            if k > last:
                break
            v = self.coeffs[k]
            if k < 0:
                den = lin if k == -1 else f"{lin}^{{{-k}}}"
                pieces.append(f"\\frac{{{v.latex()}}}{{{den}}}")
            elif k == 0:
                pieces.append(v.latex() if v.is_monomial() else f"\\left({v.latex()}\\right)")
            else:
                pw = lin if k == 1 else f"{lin}^{{{k}}}"
                body = v.latex() if v.is_monomial() else f"\\left({v.latex()}\\right)"
                pieces.append(f"{body}{pw}")
        text = " + ".join(pieces).replace("+ -", "- ") or "0"
        if last != INF:
            text += " + O(1)" if last == -1 else " + \\dots"
        return text


def zeta_expand(arg: AffLin, s0, order: int) -> LaurentPoly:
    """Laurent expansion of zeta(arg(s)) at s0 up to (s - s0)^order."""
    if order < 0:
        raise PreconditionError("order must be non-negative")
    s0 = Fraction(s0)
    a, b = Fraction(arg.a), Fraction(arg.b)
    v = a * s0 + b
    if v <= HALF:
        a, b, v = -a, 1 - b, 1 - v
    coeffs: dict[int, SymPoly] = {}
    if v == 1:
        if a == 0:
            raise PreconditionError("zeta of the constant 1 is a pole everywhere")
        for j in range(-1, order + 1):
            coeffs[j] = SymPoly.atom(c_atom(j), a ** j)
    elif a == 0:
        coeffs[0] = SymPoly.atom(z_atom(v, 0))
    else:
        for j in range(order + 1):
            if v == HALF and j % 2:
                continue
            coeffs[j] = SymPoly.atom(z_atom(v, j), a ** j)
    return LaurentPoly(s0, coeffs, order)


def product_expansion(args: Iterable[AffLin], s0, target: int) -> LaurentPoly:
    """prod zeta(arg) expanded so that every exponent <= target is exact."""
    s0 = Fraction(s0)
    args = list(args)
    poles = sum(1 for p in args if canonical_value(p, s0) == 1)
    out = LaurentPoly.one(s0)
    for p in args:
        pole = canonical_value(p, s0) == 1
        need = target + poles - (1 if pole else 0)
        out = out * zeta_expand(p, s0, max(need, 0))
    return out


def canonical_value(arg: AffLin, s0) -> Fraction:
    v = arg(Fraction(s0))
    return 1 - v if v <= HALF else v


def canonical_arg(arg: AffLin, s0) -> AffLin:
    """Rewrite zeta(arg) as zeta(1 - arg) whenever arg(s0) <= 1/2."""
    return arg.reflect() if arg(Fraction(s0)) <= HALF else arg


def leading_atom(arg: AffLin, s0) -> SymPoly:
    """Leading coefficient of zeta(arg) at s0."""
    s0 = Fraction(s0)
    arg = canonical_arg(arg, s0)
    v = arg(s0)
    if v == 1:
        return SymPoly.atom(R_ATOM, 1 / arg.a)
    return SymPoly.atom(z_atom(v, 0))


# ---- numeric backend ----------------------------------------------------------


class NumericBackend:
    """High-precision values of the atoms.  R = 1 for the completed zeta."""

    def __init__(self, dps: int = 60, method: str = "step"):
        if dps < 30:
            raise PreconditionError("numeric precision must be at least 30 digits")
        self.dps = dps
        self.method = method
        self._lock = threading.Lock()
        self._cache: dict[tuple, list] = {}

    def _ctx(self):
        ctx = mpmath.mp.clone()
        ctx.dps = self.dps + 15
        return ctx

    @staticmethod
    def xi(ctx, s):
        return ctx.pi ** (-s / 2) * ctx.gamma(s / 2) * ctx.zeta(s)

    def _series(self, key: tuple, n: int) -> list:
        with self._lock:
            have = self._cache.get(key)
            if have is not None and len(have) > n:
                return have
            ctx = self._ctx()
            kind, p, q = key
            size = max(n, 1)
            opts = {"method": "quad", "radius": ctx.mpf(1) / 4} if self.method == "quad" else {}
            if kind == 0:
                f = lambda s: (s - 1) * self.xi(ctx, s)
                series = ctx.taylor(f, ctx.mpf(1), size + 1, singular=True, **opts)
            else:
                series = ctx.taylor(lambda s: self.xi(ctx, s), ctx.mpf(p) / q, size, **opts)
            self._cache[key] = series
            return series

    def atom(self, atom: Atom):
        kind, p, q, j = atom
        if kind == 0:
            return self._series((0, 1, 1), j + 1)[j + 1]
        return self._series((1, p, q), j)[j]

    def evaluate(self, poly: SymPoly):
        ctx = self._ctx()
        total = ctx.mpf(0)
        for m, c in poly.terms.items():
            term = ctx.mpf(c.numerator) / c.denominator
            for a in m:
                term *= self.atom(a)
            total += term
        return total

    def evaluate_series(self, series: LaurentPoly, h):
        """sum_k coeff_k h^k over the retained exponents."""
        ctx = self._ctx()
        h = ctx.mpf(h)
        return ctx.fsum(self.evaluate(v) * h ** k for k, v in series.coeffs.items())

    def zeta_product(self, num: Iterable[AffLin], den: Iterable[AffLin], s):
        ctx = self._ctx()
        out = ctx.mpf(1)
        for p in num:
            out *= self.xi(ctx, p.a * s + p.b)
        for p in den:
            out /= self.xi(ctx, p.a * s + p.b)
        return out


_default_backend: NumericBackend | None = None
_backend_lock = threading.Lock()


def default_backend(dps: int = 60) -> NumericBackend:
    global _default_backend
    with _backend_lock:
        if _default_backend is None or _default_backend.dps != dps:
            _default_backend = NumericBackend(dps)
        return _default_backend


# ---- pole order and certificates -------------------------------------------------


def nonvanishing_assumptions(poly: SymPoly) -> list[str]:
    """zeta(a) != 0 for every non-integer point whose value enters ``poly``."""
    pts = sorted({atom_point(a) for a in poly.atoms() if a[0] == 1 and a[3] == 0})
    return [f"zeta({a}) != 0" for a in pts if a.denominator != 1]


@dataclass
class Certificate:
    kind: str  # "monomial" or "sum"
    numeric_value: str | None = None
    numerically_nonzero: bool | None = None
    digits: int | None = None
    assumptions: list[str] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.kind == "monomial" or bool(self.numerically_nonzero)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "numeric_value": self.numeric_value,
            "numerically_nonzero": self.numerically_nonzero,
            "digits": self.digits,
            "assumptions": list(self.assumptions),
            "certified": self.certified,
        }


def certify(leading: SymPoly, backend: NumericBackend | None = None, numeric: bool = True) -> Certificate:
    cert = Certificate("monomial" if leading.is_monomial() else "sum",
                       assumptions=nonvanishing_assumptions(leading))
    if numeric:
        backend = backend or default_backend()
        val = backend.evaluate(leading)
        cert.numeric_value = mpmath.nstr(val, 30)
        cert.digits = backend.dps
        cert.numerically_nonzero = abs(val) > mpmath.mpf(10) ** (-(backend.dps // 2))
    return cert


@dataclass
class PoleOrder:
    order: int
    leading: SymPoly
    certificate: Certificate


def pole_order(p: LaurentPoly, backend: NumericBackend | None = None, numeric: bool = True) -> PoleOrder:
    for k in sorted(p.coeffs):
        if k > p.order:
            break
        v = p.coeffs[k]
        if not v.is_zero():
            return PoleOrder(-k, v, certify(v, backend, numeric))
    raise InconclusiveError(f"all coefficients up to (s-{p.s0})^{p.order} vanish")
