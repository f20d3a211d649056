"""Admissible data and the constants relating leading terms of Eisenstein series.

An admissible datum (P_i, s0, P_j, t0, w) satisfies w chi_{P_i,s0} = chi_{P_j,t0}
in the minus_half convention.  Two sources are implemented: the explicit
construction from the B matrix, and an exhaustive search that intersects the
piecewise-linear dominant profiles of the two families.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .characters import MINUS_HALF, b_matrix, chi_at, chi_family, check_parabolic, d_P, n_counts
from .errors import ConfigError
from .gkfactors import ZetaConstant, constant_from_args, residue_factor
from .rootdata import SCHEMA_VERSION, RootDatum, WeylElement

HALF = Fraction(1, 2)
R_OVER_ZETA2 = ZetaConstant.make(1, 1, den=[2])


@dataclass(frozen=True)
class AdmissibleData:
    i: int
    s: Fraction
    j: int
    t: Fraction
    w: WeylElement
    special: bool = False
    construction: WeylElement | None = None

    @property
    def positive(self) -> bool:
        return self.s >= 0 and self.t >= 0

    @property
    def key(self) -> tuple:
        return (self.i, self.s, self.j, self.t)

    @property
    def trivial(self) -> bool:
        return self.s == HALF and self.t == HALF

    def reversed(self, datum: RootDatum) -> "AdmissibleData":
        inv = datum.inverse(self.construction) if self.construction is not None else None
        return AdmissibleData(self.j, self.t, self.i, self.s, datum.inverse(self.w), self.special, inv)

    def __str__(self) -> str:
        return f"(P{self.i}, {self.s}, P{self.j}, {self.t}, {self.w})"


def is_admissible(datum: RootDatum, i: int, s, j: int, t, w: WeylElement) -> bool:
    return datum.apply(w, chi_at(datum, i, s)) == chi_at(datum, j, t)


def dom_witness(datum: RootDatum, i: int, s, j: int, t) -> WeylElement | None:
    """W_Q(t)^{-1} W_P(s) when the two characters share a dominant representative."""
    dom_p, wp = datum.dominant_representative(chi_at(datum, i, s))
    dom_q, wq = datum.dominant_representative(chi_at(datum, j, t))
    if dom_p != dom_q:
        return None
    return datum.multiply(datum.inverse(wq), wp)


# ---- the explicit construction ------------------------------------------------


def c_value(datum: RootDatum, i: int, j: int) -> Fraction:
    b = b_matrix(datum)
    return Fraction(b[i - 1][j - 1], b[i - 1][i - 1]) - HALF


def _construction_candidates(datum: RootDatum, i: int, j: int):
    """Products of parabolic longest elements tried as explicit witnesses."""
    lr = datum.longest_element(datum.levi_nodes({i, j}))
    li = datum.longest_element(datum.levi_nodes(i))
    lj = datum.longest_element(datum.levi_nodes(j))
    w0 = datum.longest_element()
    mul = datum.multiply
    yield mul(lr, li)
    yield mul(lj, mul(lr, li))
    yield mul(lj, lr)
    if datum.minus_one_in_weyl:
        r = mul(w0, li)
        for left in (lr, mul(lj, lr), datum.element()):
            yield mul(left, r)
            yield mul(left, datum.inverse(r))


def _special(datum: RootDatum, i: int, s: Fraction, j: int, t: Fraction) -> AdmissibleData | None:
    w = dom_witness(datum, i, s, j, t)
    if w is None:
        return None
    construction = next((c for c in _construction_candidates(datum, i, j)
                         if is_admissible(datum, i, s, j, t, c)), None)
    return AdmissibleData(i, s, j, t, w, True, construction)


def special_admissible(datum: RootDatum, i: int, j: int) -> list[AdmissibleData]:
    """Base datum (c_ij, -c_ji) and, when -1 is in W, the (|c_ij|, |c_ji|) variant."""
    check_parabolic(datum, i)
    check_parabolic(datum, j)
    if i == j:
        raise ConfigError("special data need two different parabolics")
    cij, cji = c_value(datum, i, j), c_value(datum, j, i)
    pairs = [(cij, -cji)]
    if datum.minus_one_in_weyl and (abs(cij), abs(cji)) not in pairs:
        pairs.append((abs(cij), abs(cji)))
    out = []
    for s, t in pairs:
        d = _special(datum, i, s, j, t)
        if d is not None:
            out.append(d)
    return out


def special_table(datum: RootDatum) -> list[AdmissibleData]:
    """One positive special datum per unordered pair, oriented as tabulated.

    Prefer the orientation whose base datum is positive; failing that use the
    (|c_ij|, |c_ji|) variant with i < j, which needs -1 in W.
    """
    rows = []
    for i, j in combinations(datum.nodes, 2):
        chosen = None
        for a, b in ((i, j), (j, i)):
            base = special_admissible(datum, a, b)[0]
            if base.positive:
                chosen = base
                break
        if chosen is None and datum.minus_one_in_weyl:
            chosen = next((d for d in special_admissible(datum, i, j)[1:] if d.positive), None)
        if chosen is not None:
            rows.append(chosen)
    return rows


@lru_cache(maxsize=None)
def _special_keys(datum: RootDatum) -> frozenset:
    keys = set()
    for i, j in combinations(datum.nodes, 2):
        for d in special_admissible(datum, i, j) + special_admissible(datum, j, i):
            keys.add(d.key)
            keys.add((d.j, d.t, d.i, d.s))
    return frozenset(keys)


def is_special(datum: RootDatum, d: AdmissibleData) -> bool:
    return d.key in _special_keys(datum)


# ---- dominant profiles ---------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    element: WeylElement
    direction: tuple[Fraction, ...]
    offset: tuple[Fraction, ...]

    def at(self, s) -> tuple[Fraction, ...]:
        return tuple(s * v + u for v, u in zip(self.direction, self.offset))


def breakpoints(datum: RootDatum, i: int, lo, hi) -> list[Fraction]:
    """All s in [lo, hi] where some coroot pairing of chi_s vanishes, plus the ends."""
    chi = chi_family(datum, i, MINUS_HALF)
    lo, hi = Fraction(lo), Fraction(hi)
    pts = {lo, hi}
    for co in datum.positive_coroots:
        p = chi.pairing(co)
        if p.a != 0:
            s = -p.b / p.a
            if lo < s < hi:
                pts.add(s)
    return sorted(pts)


@lru_cache(maxsize=None)
def _profile(datum: RootDatum, i: int, lo: Fraction, hi: Fraction) -> tuple[Piece, ...]:
    chi = chi_family(datum, i, MINUS_HALF)
    pts = breakpoints(datum, i, lo, hi)
    pieces = []
    if len(pts) == 1:
        pts = pts * 2
    for a, b in zip(pts, pts[1:]):
        _, w = datum.dominant_representative(chi.at((a + b) / 2))
        pieces.append(Piece(a, b, w, tuple(datum.apply(w, chi.direction)), tuple(datum.apply(w, chi.offset))))
    return tuple(pieces)


def dom_profile(datum: RootDatum, i: int, lo=0, hi=HALF) -> list[Piece]:
    """The dominant image of chi_s is affine in s on each piece.

    Breakpoints are computed exactly: the chamber can only change where a
    coroot pairing of chi_s changes sign, so no sampling is involved.
    """
    check_parabolic(datum, i)
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ConfigError(f"empty range [{lo}, {hi}]")
    return list(_profile(datum, i, lo, hi))


def _solve(p: Piece, q: Piece):
    """Solve p.dir s + p.off = q.dir t + q.off.  Returns ('point', s, t), ('line', ...) or None."""
    rows = [(a, -c, d - b) for a, b, c, d in zip(p.direction, p.offset, q.direction, q.offset)]
    pivot = None
    for r1, r2 in combinations(rows, 2):
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det:
            pivot = (r1, r2, det)
            break
    if pivot is None:
        return ("line", rows)
    r1, r2, det = pivot
    s = (r1[2] * r2[1] - r1[1] * r2[2]) / det
    t = (r1[0] * r2[2] - r1[2] * r2[0]) / det
    if all(a * s + b * t == c for a, b, c in rows):
        return ("point", s, t)
    return None


def _line_segment(p: Piece, q: Piece, rows):
    """Intersect a rank-one solution set a s + b t = c with the two closed intervals."""
    row = next((r for r in rows if r[0] or r[1]), None)
    if row is None:
        return None
    a, b, c = row
    for x, y, z in rows:
        if x * b - y * a or x * c - z * a or y * c - z * b:
            return None
    if b == 0:
        s = c / a
        return ((s, q.lo), (s, q.hi)) if p.lo <= s <= p.hi else None
    if a == 0:
        t = c / b
        return ((p.lo, t), (p.hi, t)) if q.lo <= t <= q.hi else None
    s1, s2 = (c - b * q.lo) / a, (c - b * q.hi) / a
    lo, hi = max(p.lo, min(s1, s2)), min(p.hi, max(s1, s2))
    if lo > hi:
        return None
    return ((lo, (c - a * lo) / b), (hi, (c - a * hi) / b))


@dataclass
class SearchResult:
    data: list[AdmissibleData] = field(default_factory=list)
    degenerate: list[tuple] = field(default_factory=list)


def search_pair(datum: RootDatum, i: int, j: int, lo=0, hi=HALF, positive_only: bool = True) -> SearchResult:
    lo, hi = Fraction(lo), Fraction(hi)
    found: dict[tuple, AdmissibleData] = {}
    result = SearchResult()
    pp, qq = dom_profile(datum, i, lo, hi), dom_profile(datum, j, lo, hi)
    for p in pp:
        for q in qq:
            sol = _solve(p, q)
            if sol is None:
                continue
            if sol[0] == "line":
                seg = _line_segment(p, q, sol[1])
                if seg is not None:
                    result.degenerate.append((i, j, seg))
                continue
            _, s, t = sol
            if not (p.lo <= s <= p.hi and q.lo <= t <= q.hi):
                continue
            if positive_only and (s < 0 or t < 0):
                continue
            if (s, t) in found:
                continue
            w = dom_witness(datum, i, s, j, t)
            assert w is not None and is_admissible(datum, i, s, j, t, w)
            d = AdmissibleData(i, s, j, t, w)
            found[(s, t)] = AdmissibleData(i, s, j, t, w, is_special(datum, d))
    result.data = sorted(found.values(), key=lambda d: (d.s, d.t))
    return result


def find_admissible(datum: RootDatum, i: int, j: int, positive_only: bool = True, lo=0, hi=HALF) -> list[AdmissibleData]:
    check_parabolic(datum, i)
    check_parabolic(datum, j)
    return search_pair(datum, i, j, lo, hi, positive_only).data


def full_search(datum: RootDatum, lo=0, hi=HALF, positive_only: bool = True, threads: int = 1) -> SearchResult:
    """Every ordered pair i != j, merged in (i, j, s, t) order."""
    pairs = [(i, j) for i in datum.nodes for j in datum.nodes if i < j]
    run = lambda ij: search_pair(datum, ij[0], ij[1], lo, hi, positive_only)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, pairs))
    else:
        parts = [run(ij) for ij in pairs]
    out = SearchResult()
    for part in parts:
        for d in part.data:
            out.data.append(d)
            out.data.append(d.reversed(datum))
        out.degenerate.extend(part.degenerate)
    out.data.sort(key=lambda d: (d.i, d.j, d.s, d.t))
    return out


def nonspecial_table(datum: RootDatum, lo=0, hi=HALF, threads: int = 1) -> list[AdmissibleData]:
    """Positive data from the search that are neither special nor trivial, one per unordered pair."""
    seen = set()
    out = []
    for d in full_search(datum, lo, hi, True, threads).data:
        if d.special or d.trivial:
            continue
        key = frozenset([(d.i, d.s), (d.j, d.t)])
        if key in seen:
            continue
        seen.add(key)
        out.append(d)
    return out


# ---- the constant ----------------------------------------------------------------


def epsilon_factor(datum: RootDatum, i: int, s0) -> Fraction:
    check_parabolic(datum, i)
    chi = chi_at(datum, i, s0)
    bii = b_matrix(datum)[i - 1][i - 1]
    levi_simple = {tuple(int(k == m - 1) for k in range(datum.rank)) for m in datum.levi_nodes(i)}
    n0 = n1 = 0
    out = Fraction(1)
    for co in datum.positive_coroots:
        v = datum.pairing(chi, co)
        if v == 0:
            n0 += 1
            out /= co[i - 1]
        elif v == 1:
            n1 += 1
            if co not in levi_simple:
                out *= co[i - 1]
    return out * Fraction(bii) ** (n1 - n0 - (datum.rank - 1))


def h3_quotient(datum: RootDatum, d: AdmissibleData) -> ZetaConstant:
    chi = chi_at(datum, d.i, d.s)
    num, den = [], []
    for k in datum.inversion_set(d.w):
        v = datum.pairing(chi, datum.positive_coroots[k])
        if v in (-1, 0, 1):
            continue
        num.append(v)
        den.append(v + 1)
    return constant_from_args(num, den)


def minus_one_count(datum: RootDatum, weight) -> int:
    return n_counts(datum, weight).get(Fraction(-1), 0)


@dataclass
class IdentityConstant:
    datum: AdmissibleData
    epsilon_s: Fraction
    epsilon_t: Fraction
    d: int
    d_Pi: int
    d_Pj: int
    h3: ZetaConstant
    a_ratio: ZetaConstant
    assembled: ZetaConstant

    @property
    def assumptions(self) -> list[str]:
        notes = ["F = Q"]
        notes += [f"zeta({a}) != 0" for a in self.assembled.non_integer_args()]
        return notes

    def row(self) -> list[str]:
        d = self.datum
        return [f"P{d.i}", str(d.s), f"P{d.j}", str(d.t), str(d.w), str(self.h3),
                str(self.d_Pi), str(self.d_Pj), str(self.d),
                str(self.epsilon_s), str(self.epsilon_t), str(self.assembled)]

    def to_dict(self) -> dict:
        d = self.datum
        return {
            "Pi": d.i, "s": str(d.s), "Pj": d.j, "t": str(d.t), "w": str(d.w),
            "construction": str(d.construction) if d.construction is not None else None,
            "special": d.special, "positive": d.positive,
            "h3": self.h3.to_dict(), "d_Pi": self.d_Pi, "d_Pj": self.d_Pj, "d": self.d,
            "epsilon_s": str(self.epsilon_s), "epsilon_t": str(self.epsilon_t),
            "a_ratio": self.a_ratio.to_dict(), "constant": self.assembled.to_dict(),
            "assumptions": self.assumptions,
        }


def identity_constant(datum: RootDatum, d: AdmissibleData) -> IdentityConstant:
    if not is_admissible(datum, d.i, d.s, d.j, d.t, d.w):
        raise ConfigError(f"{d} is not admissible")
    eps_s = epsilon_factor(datum, d.i, d.s)
    eps_t = epsilon_factor(datum, d.j, d.t)
    dd = minus_one_count(datum, chi_at(datum, d.j, d.t)) - minus_one_count(datum, chi_at(datum, d.i, d.s))
    h3 = h3_quotient(datum, d)
    a_ratio = residue_factor(datum, d.j) / residue_factor(datum, d.i)
    assembled = ZetaConstant.make(eps_t / eps_s) * h3 * (R_OVER_ZETA2 ** dd) * a_ratio
    return IdentityConstant(d, eps_s, eps_t, dd, d_P(datum, d.i, d.s), d_P(datum, d.j, d.t), h3, a_ratio, assembled)


# ---- rendering ---------------------------------------------------------------------


def _tex_frac(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    return f"{sign}\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def render_identity(datum: RootDatum, c: IdentityConstant, fmt: str = "text") -> str:
    d = c.datum
    if fmt == "latex":
        lhs = f"\\leadingterm{{ -{c.d_Pi} }}^{{\\para{{P}}_{{{d.i}}}}} (f^0,{_tex_frac(d.s)},g)"
        rhs = f"\\leadingterm{{ -{c.d_Pj} }}^{{\\para{{P}}_{{{d.j}}}}} (f^0,{_tex_frac(d.t)},g)"
        return f"{lhs}={c.assembled.latex()} \\times {rhs}"
    if fmt == "json":
        import json
        return json.dumps(c.to_dict(), indent=2, sort_keys=True)
    return (f"Lambda_{{-{c.d_Pi}}}^{{P{d.i}}}(f0, {d.s}, g) = {c.assembled} "
            f"* Lambda_{{-{c.d_Pj}}}^{{P{d.j}}}(f0, {d.t}, g)")


COLUMNS = ["Pi", "s", "Pj", "t", "w", "h3", "d_Pi", "d_Pj", "d", "eps_p", "eps_q", "constant"]


def identity_table(rows: list[IdentityConstant]) -> str:
    table = [COLUMNS] + [c.row() for c in rows]
    widths = [max(len(r[k]) for r in table) for k in range(len(COLUMNS))]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in table)


def identity_table_latex(rows: list[IdentityConstant]) -> str:
    head = ("\\begin{tabular}{|c|c|c|c|c|c|c|c|c|c|c|} \\hline\n"
            "$P_i$ & $s$ & $P_j$ & $t$ & $w$ & $h_3$ & $d_{P_i}(\\chi_s)$ & $d_{P_j}(\\chi_t)$ & $d$ "
            "& $\\epsilon_p$ & $\\epsilon_q$ \\\\ \\hline")
    lines = [head]
    for c in rows:
        d = c.datum
        lines.append(f"$\\para{{P}}_{{{d.i}}}$ & ${_tex_frac(d.s)}$ & $\\para{{P}}_{{{d.j}}}$ & "
                     f"${_tex_frac(d.t)}$ & ${d.w.latex()}$ & ${c.h3.latex()}$ & ${c.d_Pi}$ & ${c.d_Pj}$ & "
                     f"${c.d}$ & ${c.epsilon_s}$ & ${c.epsilon_t}$ \\\\ \\hline")
    lines.append("\\end{tabular}")
    return "\n".join(lines)


def chains(data: list[AdmissibleData]) -> list[list[tuple[int, Fraction]]]:
    """Connected components of the graph on (P, s) linked by the data."""
    adj: dict[tuple, set] = {}
    for d in data:
        a, b = (d.i, d.s), (d.j, d.t)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen, out = set(), []
    for start in sorted(adj):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        out.append(sorted(comp))
    return out


def chains_dot(data: list[AdmissibleData], name: str = "identities") -> str:
    lines = [f"graph {name} {{"]
    nodes = sorted({(d.i, d.s) for d in data} | {(d.j, d.t) for d in data})
    for p, s in nodes:
        lines.append(f'  "P{p}_{s}" [label="P{p}, {s}"];')
    for d in data:
        lines.append(f'  "P{d.i}_{d.s}" -- "P{d.j}_{d.t}" [label="{d.w}"];')
    lines.append("}")
    return "\n".join(lines)


def table_dict(group: str, rows: list[IdentityConstant], degenerate=()) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "group": group,
        "rows": [c.to_dict() for c in rows],
        "degenerate_segments": [
            {"Pi": i, "Pj": j, "from": [str(x) for x in seg[0]], "to": [str(x) for x in seg[1]]}
            for i, j, seg in degenerate
        ],
    }
