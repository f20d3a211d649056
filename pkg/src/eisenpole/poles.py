"""Pole orders of spherical degenerate Eisenstein series at real points.

For a maximal parabolic P and a candidate point s0 the cosets W(G,P) are
grouped by their image of chi_{s0}; each group's C-factors are summed over a
common denominator and the numerator is expanded at s0.  The largest surviving
order is the pole order of the constant term.

Only the spherical section is treated.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .characters import MINUS_HALF, PLUS_HALF, chi_at, chi_family, check_parabolic, d_P
from .errors import InconclusiveError
from .gkfactors import CosetFactor, ZetaProduct, coset_factors, reduce_multisets
from .laurent import (
    ONE,
    Certificate,
    LaurentPoly,
    NumericBackend,
    SymPoly,
    canonical_arg,
    canonical_value,
    certify,
    leading_atom,
    nonvanishing_assumptions,
    product_expansion,
    zeta_expand,
)
from .orbits import lookup
from .rootdata import SCHEMA_VERSION, RootDatum, WeylElement

SPHERICAL_NOTE = "spherical section only; arbitrary sections may have larger poles"
UNVERIFIED_NOTE = "unverified: no reference table exists for this group"
MAX_RETRIES = 4


@dataclass(frozen=True)
class Member:
    """A coset representative with its reduced C-factor."""

    word: tuple[int, ...]
    image: object  # AffineWeight
    numerator: tuple
    denominator: tuple

    @classmethod
    def from_factor(cls, cf: CosetFactor) -> "Member":
        num, den = reduce_multisets(cf.args, (p.shift(1) for p in cf.args))
        return cls(cf.word, cf.image, tuple(num.elements()), tuple(den.elements()))

    def individual_order(self, s0: Fraction) -> int:
        return sum(1 for p in self.numerator if canonical_value(p, s0) == 1)

    def factor(self) -> ZetaProduct:
        return ZetaProduct(self.numerator, self.denominator, True)


@dataclass
class EquivalenceClass:
    s0: Fraction
    members: list[Member]
    image: tuple[Fraction, ...]
    exponent: tuple[Fraction, ...]

    @property
    def representative(self) -> Member:
        return self.members[0]

    def max_individual(self) -> int:
        return max(m.individual_order(self.s0) for m in self.members)


@dataclass
class ClassOrder:
    order: int
    leading: SymPoly | None
    certificate: Certificate | None
    common: tuple = ()
    sums: list = field(default_factory=list)


def potential_poles(datum: RootDatum, i: int) -> list[Fraction]:
    """Positive s where a nilradical coroot pairs with chi_s to 0 or 1."""
    check_parabolic(datum, i)
    chi = chi_family(datum, i, PLUS_HALF)
    levi = set(datum.levi_root_indices(datum.levi_nodes(i)))
    out = set()
    for k, co in enumerate(datum.positive_coroots):
        if k in levi:
            continue
        p = chi.pairing(co)
        if p.a == 0:
            continue
        for eps in (0, 1):
            s = (eps - p.b) / p.a
            if s > 0:
                out.add(s)
    return sorted(out)


_MEMBER_CACHE: dict = {}


def members(datum: RootDatum, i: int) -> list[Member]:
    key = (datum.type_label, i)
    if key not in _MEMBER_CACHE:
        _MEMBER_CACHE[key] = [Member.from_factor(cf) for cf in coset_factors(datum, i, PLUS_HALF)]
    return _MEMBER_CACHE[key]


def equivalence_classes(datum: RootDatum, i: int, s0, pool: Sequence[Member] | None = None) -> list[EquivalenceClass]:
    s0 = Fraction(s0)
    pool = members(datum, i) if pool is None else pool
    groups: dict[tuple, list[Member]] = {}
    for m in pool:
        groups.setdefault(m.image.at(s0), []).append(m)
    out = [EquivalenceClass(s0, ms, img, datum.to_root_basis(img)) for img, ms in groups.items()]
    out.sort(key=lambda c: c.exponent)
    return out


def _lead(args: Iterable, s0: Fraction) -> SymPoly:
    out = ONE
    for p in args:
        out = out * leading_atom(p, s0)
    return out


def class_order(datum: RootDatum, cls: EquivalenceClass, depth: int | None = None,
                backend: NumericBackend | None = None, numeric: bool = True) -> ClassOrder:
    """Order and leading coefficient of the class numerator N^# at s0."""
    s0 = cls.s0
    active = [m for m in cls.members if m.individual_order(s0) >= 1]
    if not active:
        return ClassOrder(0, None, None)
    m_max = max(m.individual_order(s0) for m in active)
    if len(active) == 1:
        m = active[0]
        lead = _lead(m.numerator, s0)
        cert = certify(lead, backend, numeric)
        return ClassOrder(m.individual_order(s0), lead, cert, tuple(canonical_arg(p, s0) for p in m.numerator))

    common_den: Counter = Counter()
    for m in active:
        common_den |= Counter(m.denominator)
    nums = []
    for m in active:
        n = Counter(canonical_arg(p, s0) for p in m.numerator)
        n.update(canonical_arg(p, s0) for p in (common_den - Counter(m.denominator)).elements())
        nums.append(n)
    common = nums[0]
    for n in nums[1:]:
        common = common & n
    rests = [n - common for n in nums]
    e_common = sum(k for p, k in common.items() if p(s0) == 1)
    need = e_common - 1  # exponents of the rest-sum that decide order >= 1

    depth = depth or (m_max + 1)
    for _ in range(MAX_RETRIES + 1):
        target = min(need, e_common - m_max + depth - 1)
        total = None
        for r in rests:
            series = product_expansion(r.elements(), s0, target)
            total = series if total is None else total + series
        total = total.truncate(target)
        nonzero = [k for k in sorted(total.coeffs) if k <= target]
        if nonzero:
            k = nonzero[0]
            lead = _lead(common.elements(), s0) * total.coeffs[k]
            cert = certify(lead, backend, numeric)
            return ClassOrder(e_common - k, lead, cert, tuple(common.elements()),
                              [tuple(r.elements()) for r in rests])
        if target >= need:
            # every exponent that could give a pole cancelled
            return ClassOrder(0, None, None, tuple(common.elements()), [tuple(r.elements()) for r in rests])
        depth *= 2
    raise InconclusiveError(f"class at s0={s0} still cancels at depth {depth}")


def square_integrable(cls: EquivalenceClass) -> bool:
    return all(x < 0 for x in cls.exponent)


def orbit_label(datum: RootDatum, i: int, s0) -> str | None:
    dom, _ = datum.dominant_representative(chi_at(datum, i, s0, MINUS_HALF))
    return lookup(datum, [2 * x for x in dom])


@dataclass
class ClassDetail:
    exponent: tuple
    words: list[str]
    max_individual: int
    order: int
    leading: SymPoly | None
    certificate: Certificate | None
    square_integrable: bool

    def to_dict(self) -> dict:
        return {
            "exponent": [str(x) for x in self.exponent],
            "members": self.words,
            "max_individual_order": self.max_individual,
            "order": self.order,
            "leading": str(self.leading) if self.leading is not None else None,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "square_integrable": self.square_integrable,
        }


@dataclass
class PoleEntry:
    s0: Fraction
    order: int
    square_integrable: bool
    d_P: int
    orbit: str | None
    certified: bool
    attaining: list[tuple] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    denominator_violations: int = 0
    classes: list[ClassDetail] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.order == 0:
            return "holomorphic"
        return "certified" if self.certified else "upper bound"

    def to_dict(self) -> dict:
        return {
            "s0": str(self.s0),
            "order": self.order,
            "status": self.status,
            "square_integrable": self.square_integrable,
            "d_P": self.d_P,
            "orbit": self.orbit,
            "attaining_exponents": [[str(x) for x in e] for e in self.attaining],
            "assumptions": self.assumptions,
            "denominator_violations": self.denominator_violations,
            "classes": [c.to_dict() for c in self.classes],
        }


@dataclass
class PoleReport:
    group: str
    parabolic: int
    entries: list[PoleEntry]
    notes: list[str] = field(default_factory=list)

    def entry(self, s0) -> PoleEntry:
        s0 = Fraction(s0)
        return next(e for e in self.entries if e.s0 == s0)

    @property
    def poles(self) -> dict[Fraction, int]:
        return {e.s0: e.order for e in self.entries if e.order > 0}

    @property
    def inconclusive(self) -> bool:
        return any(e.order > 0 and not e.certified for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "group": self.group,
            "parabolic": self.parabolic,
            "notes": self.notes,
            "entries": [e.to_dict() for e in self.entries],
        }

    def latex(self) -> str:
        return pole_table_latex(self)

    def table(self) -> str:
        head = [f"P{self.parabolic}"] + [str(e.s0) for e in self.entries]
        rows = [
            head,
            ["Pole order"] + [str(e.order) for e in self.entries],
            ["L2"] + ["yes" if e.square_integrable else "no" for e in self.entries],
            ["d_P"] + [str(e.d_P) for e in self.entries],
            ["Orbit"] + [e.orbit or "" for e in self.entries],
        ]
        widths = [max(len(r[c]) for r in rows) for c in range(len(head))]
        lines = [f"# {self.group} {n}" for n in self.notes]
        lines += ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows]
        return "\n".join(lines)


def _entry(datum: RootDatum, i: int, s0: Fraction, pool, depth, backend, numeric) -> PoleEntry:
    classes = equivalence_classes(datum, i, s0, pool)
    details = []
    viol = 0
    for m in pool:
        viol += sum(1 for p in m.denominator if p(s0) <= 1)
    for cls in classes:
        mi = cls.max_individual()
        if mi == 0:
            continue
        co = class_order(datum, cls, depth, backend, numeric)
        words = [str(datum.element(m.word)) for m in cls.members if m.individual_order(s0) >= 1]
        details.append(ClassDetail(cls.exponent, words, mi, co.order, co.leading, co.certificate,
                                   square_integrable(cls)))
    order = max([c.order for c in details] + [0])
    attaining = [c for c in details if c.order == order] if order > 0 else []
    l2 = bool(attaining) and all(c.square_integrable for c in attaining)
    assumptions = sorted({a for c in attaining for a in nonvanishing_assumptions(c.leading)})
    certified = all(c.certificate.certified for c in attaining)
    return PoleEntry(
        s0=s0,
        order=order,
        square_integrable=l2,
        d_P=d_P(datum, i, s0),
        orbit=orbit_label(datum, i, s0) if l2 else None,
        certified=certified,
        attaining=[c.exponent for c in attaining],
        assumptions=assumptions,
        denominator_violations=viol,
        classes=details,
    )


def pole_report(datum: RootDatum, i: int, depth: int | None = None, threads: int = 1,
                backend: NumericBackend | None = None, numeric: bool = True) -> PoleReport:
    check_parabolic(datum, i)
    pool = members(datum, i)
    points = potential_poles(datum, i)
    run = lambda s0: _entry(datum, i, s0, pool, depth, backend, numeric)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            entries = list(ex.map(run, points))
    else:
        entries = [run(s0) for s0 in points]
    notes = [SPHERICAL_NOTE]
    if datum.type_label == "E8":
        notes.insert(0, UNVERIFIED_NOTE)
    return PoleReport(datum.type_label, i, entries, notes)


# ---- rendering -----------------------------------------------------------------


def _tex_frac(x: Fraction) -> str:
    if x.denominator == 1:
        return f"${x.numerator}$"
    sign = "-" if x < 0 else ""
    return f"${sign}\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}$"


def pole_table_latex(report: PoleReport) -> str:
    n = len(report.entries)
    cols = "|c|" + "c|" * n
    tick = lambda ok: "\\ding{51}" if ok else "\\ding{55}"
    lines = [f"\\begin{{tabular}}{{{cols}}} \\hline"]
    lines.append(f"$\\para{{P}}_{{ {report.parabolic} }}$ & "
                 + " & ".join(_tex_frac(e.s0) for e in report.entries) + " \\\\ \\hline")
    lines.append("Pole order & " + " & ".join(f"${e.order}$" for e in report.entries) + " \\\\ \\hline")
    lines.append("$L_2$ & " + " & ".join(tick(e.square_integrable) for e in report.entries) + " \\\\ \\hline")
    lines.append("Orbit & " + " & ".join(f"${e.orbit}$" if e.orbit else "" for e in report.entries)
                 + " \\\\ \\hline")
    lines.append("\\end{tabular}")
    out = "\n".join(lines)
    if report.notes:
        out = "\n".join(f"% {n}" for n in report.notes) + "\n" + out
    return out


def _exp_tex(v) -> str:
    return "\\left[" + ", ".join(str(x) for x in v) + "\\right]"


def appendix_proof(datum: RootDatum, i: int, s0, depth: int | None = None,
                   backend: NumericBackend | None = None, numeric: bool = True) -> str:
    """A per-point write-up: factor table, class analysis, expansions, conclusion."""
    s0 = Fraction(s0)
    pool = members(datum, i)
    classes = equivalence_classes(datum, i, s0, pool)
    pt = _tex_frac(s0)
    orders = {}
    for cls in classes:
        if cls.max_individual():
            orders[cls.exponent] = class_order(datum, cls, depth, backend, numeric)
    total = max([c.order for c in orders.values()] + [0])
    if total == 0:
        return (f"Every class at $s={pt[1:-1]}$ is holomorphic, so $E_{{\\para{{P}}_{{{i}}}}}$ "
                f"has no pole there.")
    attaining = [c for c in classes if c.exponent in orders and orders[c.exponent].order == total]
    l2 = all(square_integrable(c) for c in attaining)
    out = [
        "\\begin{thm}",
        f"Let $G={datum.type_label[0]}_{{{datum.type_label[1:]}}}$, and let $\\para{{P}}=\\para{{P}}_{{{i}}}$. "
        f"Then $E_{{\\para{{P}}}}(f^{{0}},g,s)$ admits a pole of order $ {total} $ at $s= {pt[1:-1]} $.",
    ]
    if l2:
        out.append(f"Moreover, the leading term $\\leadingterm{{-{total} }}(f^{{0}},g, {pt[1:-1]} )$ is in $L^{{2}}$.")
    out += ["\\end{thm}", "\\begin{proof}"]
    for cls in classes:
        if cls.exponent not in orders:
            continue
        co = orders[cls.exponent]
        mi = cls.max_individual()
        if mi == co.order:
            out.append(f"The exponent $ {_exp_tex(cls.exponent)} $ contributes a pole of order ${co.order}$.")
            continue
        active = [m for m in cls.members if m.individual_order(s0) >= 1]
        out.append(f"For the exp. $ {_exp_tex(cls.exponent)} $ the individual order is ${mi}$. "
                   f"We keep the {len(active)} operators of order at least $1$.")
        args: list = []
        for m in active:
            for p in list(m.numerator) + list(m.denominator):
                if p not in args:
                    args.append(p)
        names = {p: f"y{k + 1}" for k, p in enumerate(args)}
        out.append("\\begin{align*}")
        out.append(" \\\\\n".join(f"{names[p]}&=\\zeta( {p} )" for p in args))
        out.append("\\end{align*}")
        summands = [" ".join(f"y_{{{names[p][1:]}}}" for p in m.numerator) for m in active]
        out.append("Over a common denominator the numerator is $ " + " + ".join(summands) + " $, "
                   "and the denominator is holomorphic and non zero.")
        out.append(f"For every $y_i$ we write its Laurent expansion around ${pt[1:-1]}$:")
        out.append("\\begin{align*}")
        out.append(" \\\\\n".join(f"{names[p]}&= {zeta_expand(p, s0, 3).latex()}" for p in args))
        out.append("\\end{align*}")
        for m, summand in zip(active, summands):
            series = product_expansion(m.numerator, s0, -1)
            out.append(f"For the summand: $ {summand} $ we get : $${series.latex(upto=-1)}$$")
        if co.leading is not None:
            final = LaurentPoly(s0, {-co.order: co.leading}, -co.order)
            out.append(f"In conclusion the final sum is: $${final.latex()}$$")
        else:
            out.append("In conclusion the poles cancel and this exponent is holomorphic.")
        out.append(f"Hence, this exponent contributes a pole of at most order $ {co.order} $.")
    if l2:
        out.append("The leading term is in $L^{2}$ by Langlands' criterion.")
    out.append("\\end{proof}")
    out.append(factor_table_latex(datum, i, s0, classes, orders))
    return "\n".join(out)


def factor_table_latex(datum: RootDatum, i: int, s0: Fraction, classes, orders) -> str:
    rows = []
    for cls in sorted(classes, key=lambda c: -(orders[c.exponent].order if c.exponent in orders else 0)):
        for m in cls.members:
            w = datum.element(m.word)
            rows.append(f" {_tex_frac(s0)} & ${m.individual_order(s0)}$ & $ {w.latex() if w.word else '1'} $ & "
                        f"${m.factor().latex()}$ & $ {_exp_tex(cls.exponent)} $ \\\\")
    return ("\\begin{longtable}{|c|c|c|c|c|}\n\\hline pole & order & operator & factor & exp \\\\ \\hline\n"
            + "\n".join(rows) + "\n\\hline\n\\end{longtable}")
