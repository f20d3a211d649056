"""Command-line front end.

Every subcommand takes ``--group`` and most take ``--parabolic`` (an index,
a comma list, or ``all``).  Settings may also come from a key-value file
passed with ``--config``::

    [eisenpole]
    group = F4
    parabolic = 1,2
    format = latex
    precision = 60

Flags given on the command line win over the file.  Exit status is 0 on
success, 1 when some result is inconclusive, 2 on configuration errors.
"""

from __future__ import annotations

import configparser
import json
import os
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction

import click

from .characters import CONVENTIONS, PLUS_HALF, b_matrix, b_matrix_latex
from .errors import ConfigError, EisenpoleError, InconclusiveError, PreconditionError
from .gkfactors import residue_factor, verify_denominator_assumption
from .identities import (full_search, identity_constant, identity_table, identity_table_latex,
                         special_table, table_dict)
from .laurent import NumericBackend
from .poles import appendix_proof, pole_report, potential_poles
from .rootdata import SCHEMA_VERSION, build_root_datum

FORMATS = ("table", "latex", "json")
MAX_RANK = 8


@dataclass
class RunConfig:
    command: str = ""
    group: str | None = None
    parabolic: str = "all"
    format: str = "table"
    depth: int | None = None
    precision: int = 60
    threads: int = 1
    out: str | None = None
    range: str = "0:1/2"
    convention: str = PLUS_HALF
    at: str | None = None
    numeric: bool = True

    def validate(self) -> None:
        if not self.group:
            raise ConfigError("--group is required")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if self.precision < 30:
            raise ConfigError("precision must be at least 30 digits")
        if self.depth is not None and self.depth < 1:
            raise ConfigError("depth must be at least 1")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {', '.join(CONVENTIONS)}")

    def datum(self):
        d = build_root_datum(self.group)
        if d.rank > MAX_RANK:
            raise ConfigError("rank must be at most 8")
        return d

    def parabolics(self, datum) -> list[int]:
        spec = str(self.parabolic).strip().lower()
        if spec == "all":
            return list(datum.nodes)
        try:
            out = [int(x) for x in spec.split(",") if x.strip()]
        except ValueError:
            raise ConfigError(f"bad parabolic selection {self.parabolic!r}") from None
        bad = [i for i in out if i not in datum.nodes]
        if bad or not out:
            raise ConfigError(f"{datum.type_label} has no parabolic {bad or self.parabolic}")
        return out

    def bounds(self) -> tuple[Fraction, Fraction]:
        try:
            lo, hi = (Fraction(x.strip()) for x in self.range.split(":"))
        except ValueError:
            raise ConfigError(f"range must look like LO:HI, got {self.range!r}") from None
        if lo > hi:
            raise ConfigError("range is empty")
        return lo, hi


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value):
    kind = _TYPES[key]
    if "int" in kind:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} must be an integer") from None
    if "bool" in kind:
        return str(value).lower() in ("1", "true", "yes", "on")
    return str(value)


def read_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not parser.has_section("eisenpole"):
        raise ConfigError(f"{path} has no [eisenpole] section")
    out = {}
    for key, value in parser.items("eisenpole"):
        key = key.replace("-", "_")
        if key not in _TYPES or key == "command":
            raise ConfigError(f"unknown config key {key!r}")
        out[key] = _coerce(key, value)
    return out


def make_config(command: str, config_path: str | None, **flags) -> RunConfig:
    values: dict = {}
    env = os.environ.get("EISENPOLE_THREADS")
    if env:
        values["threads"] = _coerce("threads", env)
    if config_path:
        values.update(read_config(config_path))
    values.update({k: v for k, v in flags.items() if v is not None})
    cfg = RunConfig(command=command, **values)
    cfg.validate()
    return cfg


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out is None or cfg.out == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.out}: {exc}") from None


# ---- subcommand bodies -------------------------------------------------------------


def run_rootdata(cfg: RunConfig) -> int:
    datum = cfg.datum()
    if cfg.format == "json":
        emit(cfg, dump_json(datum.to_dict()))
        return 0
    lines = [f"{datum.type_label}: rank {datum.rank}, {len(datum.positive_roots)} positive roots",
             "Cartan matrix:"]
    lines += ["  " + " ".join(f"{x:2d}" for x in row) for row in datum.cartan]
    lines.append("Positive roots (simple-root basis) and coroots (simple-coroot basis):")
    lines += [f"  {list(a)}  {list(c)}" for a, c in zip(datum.positive_roots, datum.positive_coroots)]
    emit(cfg, "\n".join(lines))
    return 0


def run_poles(cfg: RunConfig) -> int:
    datum = cfg.datum()
    backend = NumericBackend(cfg.precision) if cfg.numeric else None
    reports = [pole_report(datum, i, cfg.depth, cfg.threads, backend, cfg.numeric)
               for i in cfg.parabolics(datum)]
    if cfg.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "group": datum.type_label,
               "reports": [r.to_dict() for r in reports]}
        emit(cfg, dump_json(doc))
    elif cfg.format == "latex":
        emit(cfg, "\n\n".join(r.latex() for r in reports))
    else:
        blocks = []
        for r in reports:
            block = r.table()
            flagged = [e for e in r.entries if e.order and (e.assumptions or not e.certified)]
            for e in flagged:
                block += f"\n  s={e.s0}: {e.status}"
                if e.assumptions:
                    block += "; assuming " + ", ".join(e.assumptions)
            blocks.append(block)
        emit(cfg, "\n\n".join(blocks))
    return 1 if any(r.inconclusive for r in reports) else 0


def identity_rows(datum, lo: Fraction, hi: Fraction, threads: int = 1):
    """Special data, then the remaining search results, one orientation per unordered pair."""
    rows = list(special_table(datum))
    seen = {frozenset([(d.i, d.s), (d.j, d.t)]) for d in rows}
    result = full_search(datum, lo, hi, True, threads)
    for d in result.data:
        if d.i > d.j:
            continue
        key = frozenset([(d.i, d.s), (d.j, d.t)])
        if key not in seen:
            seen.add(key)
            rows.append(d)
    return rows, result.degenerate


def run_identities(cfg: RunConfig) -> int:
    datum = cfg.datum()
    lo, hi = cfg.bounds()
    data, degenerate = identity_rows(datum, lo, hi, cfg.threads)
    rows = [identity_constant(datum, d) for d in data]
    if cfg.format == "json":
        emit(cfg, dump_json(table_dict(datum.type_label, rows, degenerate)))
    elif cfg.format == "latex":
        emit(cfg, identity_table_latex(rows))
    else:
        text = identity_table(rows)
        for i, j, seg in degenerate:
            text += f"\ndegenerate segment P{i}-P{j}: {seg}"
        emit(cfg, text)
    return 1 if degenerate else 0


def run_constants(cfg: RunConfig) -> int:
    datum = cfg.datum()
    nodes = cfg.parabolics(datum)
    factors = {i: residue_factor(datum, i) for i in nodes}
    if cfg.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "group": datum.type_label,
               "b_matrix": [list(r) for r in b_matrix(datum)],
               "residue_factors": {str(i): f.to_dict() for i, f in factors.items()}}
        emit(cfg, dump_json(doc))
    elif cfg.format == "latex":
        lines = [b_matrix_latex(datum), "\\begin{align*}"]
        lines.append(" \\\\\n".join(f"A_{{w_{{\\para{{P}}_{{{i}}} }}}} = &{f.latex()}"
                                     for i, f in factors.items()))
        lines.append("\\end{align*}")
        emit(cfg, "\n".join(lines))
    else:
        lines = ["B matrix:"] + ["  " + " ".join(f"{x:3d}" for x in r) for r in b_matrix(datum)]
        lines += [f"A_w(P{i}) = {f}" for i, f in factors.items()]
        emit(cfg, "\n".join(lines))
    return 0


def run_verify(cfg: RunConfig) -> int:
    datum = cfg.datum()
    reports = []
    for i in cfg.parabolics(datum):
        for s0 in potential_poles(datum, i):
            reports.append(verify_denominator_assumption(datum, i, s0, cfg.convention))
    if cfg.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "group": datum.type_label,
               "convention": cfg.convention, "reports": [r.to_dict() for r in reports]}
        emit(cfg, dump_json(doc))
    else:
        lines = [f"P{r.parabolic} s={r.s0}: {r.checked} cosets, {len(r.violations)} violations"
                 for r in reports]
        emit(cfg, "\n".join(lines))
    return 0


def run_appendix(cfg: RunConfig) -> int:
    datum = cfg.datum()
    nodes = cfg.parabolics(datum)
    if len(nodes) != 1 or cfg.at is None:
        raise ConfigError("appendix needs exactly one --parabolic and a point --at")
    i = nodes[0]
    try:
        s0 = Fraction(cfg.at)
    except ValueError:
        raise ConfigError(f"bad point {cfg.at!r}") from None
    if s0 not in potential_poles(datum, i):
        raise ConfigError(f"{s0} is not a potential pole of P{i}")
    backend = NumericBackend(cfg.precision) if cfg.numeric else None
    emit(cfg, appendix_proof(datum, i, s0, cfg.depth, backend, cfg.numeric))
    return 0


RUNNERS = {
    "rootdata": run_rootdata,
    "poles": run_poles,
    "identities": run_identities,
    "constants": run_constants,
    "verify": run_verify,
    "appendix": run_appendix,
}


def run(cfg: RunConfig) -> int:
    try:
        return RUNNERS[cfg.command](cfg)
    except InconclusiveError as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        return 1
    except (ConfigError, PreconditionError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


# ---- click wiring ----------------------------------------------------------------


def _options(*names):
    table = {
        "group": click.option("--group", "-g", help="Group type, e.g. G2, F4, E7, A3."),
        "parabolic": click.option("--parabolic", "-p", help="Node index, comma list, or 'all'."),
        "format": click.option("--format", "format", type=click.Choice(FORMATS)),
        "depth": click.option("--depth", type=int, help="Initial truncation depth for cancelling classes."),
        "precision": click.option("--precision", type=int, help="Decimal digits for numeric certificates."),
        "threads": click.option("--threads", type=int, help="Worker threads (default $EISENPOLE_THREADS or 1)."),
        "out": click.option("--out", "-o", help="Write output here instead of stdout."),
        "range": click.option("--range", "range", help="Search interval LO:HI for s and t."),
        "convention": click.option("--convention", type=click.Choice(CONVENTIONS)),
        "at": click.option("--at", help="The point s0."),
        "numeric": click.option("--numeric/--no-numeric", default=None,
                                help="Evaluate leading coefficients numerically."),
        "config": click.option("--config", "config_path", type=click.Path(),
                               help="Key-value file with an [eisenpole] section."),
    }
    def deco(f):
        for n in reversed(names + ("config",)):
            f = table[n](f)
        return f
    return deco


def _command(name: str, *opts):
    def deco(f):
        @main.command(name, help=f.__doc__)
        @_options("group", *opts)
        def cmd(config_path, **flags):
            try:
                cfg = make_config(name, config_path, **flags)
            except ConfigError as exc:
                click.echo(f"error: {exc}", err=True)
                sys.exit(2)
            sys.exit(run(cfg))
        return cmd
    return deco


@click.group()
def main() -> None:
    """Poles and identities of degenerate Eisenstein series."""


@_command("rootdata", "format", "out")
def _rootdata():
    """Cartan matrix, roots and coroots."""


@_command("poles", "parabolic", "format", "depth", "precision", "threads", "out", "numeric")
def _poles():
    """Pole orders, L2 flags and orbits at every potential pole."""


@_command("identities", "format", "range", "threads", "out")
def _identities():
    """Admissible data and the constants relating leading terms."""


@_command("constants", "parabolic", "format", "out")
def _constants():
    """B matrix and residue factors A_w."""


@_command("verify", "parabolic", "format", "convention", "out")
def _verify():
    """Check that reduced denominators stay holomorphic and non-zero."""


@_command("appendix", "parabolic", "at", "depth", "precision", "out", "numeric")
def _appendix():
    """LaTeX write-up of the pole computation at one point."""


if __name__ == "__main__":
    main()
