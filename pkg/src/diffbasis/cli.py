"""Command line interface: ``diffbasis COMMAND PROBLEM.yaml [flags]``.

Every command prints a deterministic report.  The default ``kv`` format is
line oriented: ``key: value`` for scalars and ``key[i]: item`` for list
entries (1-based, in a fixed order).  ``json`` carries the same data and
``text`` is meant for reading.

Exit status: 0 success, 1 other errors, 2 usage or option errors, 3 parse
errors, 4 invalid problem files, 5 inconsistent systems, 6 exhausted budget.
Set ``DIFFBASIS_TRACE`` to 1 (info) or 2 (debug) for a completion trace on
stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from typing import List, Optional, Sequence, Tuple

from .applications import (RelationStore, add_relation, comp_cond, hilbert_series, inv_reduce,
                           list_relations, parse_relation, residue_class_basis)
from .coeffs import FunctionField
from .division import DIVISIONS
from .engine import Options, extract_reduced_gb, janet_like_basis
from .errors import (DiffBasisError, InconsistentSystemError, OptionError, ParseError,
                     ProblemFileError)
from .linear import LinearPoly
from .nonlinear import DEFAULT_BUDGET, COMPLETE, DiffPoly, standard_basis
from .parsing import (BACKWARD, FORWARD, format_diffpoly, format_poly, format_term, narrow_field,
                      parse_diffpoly, pol2shift, shift2pol)
from .problem import ProblemFile, locate, parse_switch
from .ring import DEGREVLEX, LEX, POT, TOP

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PROBLEM = 4
EXIT_INCONSISTENT = 5
EXIT_BUDGET = 6

COMMANDS = ("basis", "reduce", "compcond", "hilbert", "residue-basis", "standard-basis",
            "relations", "convert")
DEFAULT_SERIES_ORDER = 10

log = logging.getLogger("diffbasis")


class Report:
    """Ordered key/value report; values are strings or lists of strings."""

    def __init__(self):
        self.items: List[Tuple[str, object]] = []
        self.exit_code = EXIT_OK

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def render(self, fmt: str = "kv") -> str:
        if fmt == "json":
            return json.dumps(dict(self.items), indent=2) + "\n"
        lines = []
        for key, value in self.items:
            if isinstance(value, list):
                if fmt == "text":
                    lines.append(f"{key}:")
                    lines.extend(f"  {v}" for v in value)
                else:
                    lines.append(f"{key}: {len(value)}")
                    lines.extend(f"{key}[{i}]: {v}" for i, v in enumerate(value, 1))
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"


class Session:
    """A problem file with command line overrides applied."""

    def __init__(self, problem: ProblemFile, args: argparse.Namespace):
        self.problem = problem
        self.args = args
        self.sig = problem.signature()
        self.ranking = problem.make_ranking(args.order, args.priority, self.sig)
        self.division = args.division or problem.division
        self.criteria = problem.criteria if args.criteria is None else parse_switch(args.criteria, "--criteria")
        self.direction = args.direction or problem.direction
        self.normalize = args.normalize_shifts or problem.normalize_shifts
        self.K = FunctionField(self.sig.index_names, self.sig.parameter_names)

    def parse_list(self, sources: Sequence[str], what: str, linear: bool = True):
        out = []
        for i, src in enumerate(sources):
            try:
                p = parse_diffpoly(src, self.sig, self.K, self.direction, self.normalize)
            except ParseError as err:
                raise locate(err, what, i)
            if linear:
                if not p.is_linear():
                    raise DiffBasisError(f"{what}[{i + 1}] is nonlinear; use standard-basis")
                p = p.to_linear()
            out.append(p)
        return out

    def equations(self, linear: bool = True):
        if not self.problem.equations:
            raise ProblemFileError("no equations")
        return self.parse_list(self.problem.equations, "equations", linear)

    def options(self) -> Options:
        return Options(division=self.division, criteria=self.criteria)

    def fmt(self, p, sig=None, r=None) -> str:
        return format_poly(p, sig or self.sig, r or self.ranking, self.direction)

    def relations(self) -> RelationStore:
        store = RelationStore()
        sources = list(self.problem.relations) + _read_relations_file(self.args.relations_file)
        sources += list(self.args.relation or [])
        for src in sources:
            add_relation(store, parse_relation(src, self.sig))
        return store

    def header(self, report: Report, command: str) -> None:
        report.add("command", command)
        report.add("indices", ", ".join(self.sig.index_names))
        report.add("functions", ", ".join(self.sig.function_names))
        if self.sig.parameter_names:
            report.add("parameters", ", ".join(self.sig.parameter_names))
        report.add("ranking", f"{self.ranking.order} {self.ranking.priority}")
        report.add("direction", self.direction)


def _read_relations_file(path: Optional[str]) -> List[str]:
    if not path or not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]


def _basis(s: Session, polys: List[LinearPoly]):
    polys, _ = narrow_field(polys, s.K)
    return janet_like_basis(polys, s.ranking, s.options())


def cmd_basis(s: Session, rep: Report) -> None:
    B = _basis(s, s.equations())
    rep.add("division", s.division)
    rep.add("criteria", "on" if s.criteria else "off")
    if s.args.reduced:
        rep.add("reduced", "yes")
        rep.add("basis", [s.fmt(p) for p in extract_reduced_gb(B, s.ranking)])
    else:
        rep.add("basis", [s.fmt(p) for p in B])


def cmd_reduce(s: Session, rep: Report) -> None:
    targets = list(s.problem.targets) + list(s.args.target or [])
    if not targets:
        raise OptionError("reduce needs targets (problem file 'targets' or --target)")
    eqs = s.equations()
    tgts = s.parse_list(targets, "targets")
    polys, K = narrow_field(eqs + tgts, s.K)
    B = janet_like_basis(polys[:len(eqs)], s.ranking, s.options())
    store = s.relations()
    rep.add("division", s.division)
    rep.add("relations", list_relations(store))
    rep.add("target", targets)
    rep.add("normal-form", [s.fmt(inv_reduce(t, B, store)) for t in polys[len(eqs):]])


_TAG = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*|0)\s*$")


def cmd_compcond(s: Session, rep: Report) -> None:
    system = []
    for i, src in enumerate(s.problem.equations):
        lhs, tag = src, None
        if "=" in src:
            lhs, rhs = src.rsplit("=", 1)
            m = _TAG.match(rhs)
            if not m:
                raise ParseError("right-hand side must be a single tag name or 0", src, len(lhs) + 1)
            tag = m.group(1)
        system.append((lhs, tag))
    if not system:
        raise ProblemFileError("no equations")
    lhs = s.parse_list([l for l, _ in system], "equations")
    lhs, _ = narrow_field(lhs, s.K)
    res = comp_cond([(p, t) for p, (_, t) in zip(lhs, system)], s.sig, s.ranking, s.options())
    rep.add("tags", ", ".join(res.signature.function_names[s.sig.m:]))
    rep.add("conditions", [format_poly(c, res.signature, res.ranking, s.direction)
                           for c in res.conditions])


def _cone_text(s: Session, cone) -> str:
    w, S = cone
    free = ", ".join(s.sig.index_names[i] for i in S)
    return f"{format_term(w, s.sig, s.direction)} {{{free}}}"


def cmd_residue_basis(s: Session, rep: Report) -> None:
    B = _basis(s, s.equations())
    cd = residue_class_basis(B, s.relations())
    rep.add("relations", list_relations(s.relations()))
    rep.add("finite", "yes" if cd.is_finite else "no")
    rep.add("cones", [_cone_text(s, c) for c in cd])
    if cd.is_finite or s.args.max_degree is not None:
        terms = cd.terms(s.args.max_degree)
        rep.add("terms", [format_term(t, s.sig, s.direction) for t in terms])


def cmd_hilbert(s: Session, rep: Report) -> None:
    B = _basis(s, s.equations())
    h = hilbert_series(B, s.relations())
    order = s.args.series_order
    if order is None:
        order = int(s.problem.option("series_order", DEFAULT_SERIES_ORDER))
    rep.add("series", str(h))
    rep.add("expansion", h.series_text(order))


def cmd_standard_basis(s: Session, rep: Report) -> None:
    budget = s.args.budget
    if budget is None:
        budget = int(s.problem.option("budget", DEFAULT_BUDGET))
    if budget <= 0:
        raise OptionError("--budget must be positive")
    polys = [p if isinstance(p, DiffPoly) else DiffPoly.from_linear(p)
             for p in s.parse_list(s.problem.equations, "equations", linear=False)]
    if not polys:
        raise ProblemFileError("no equations")
    polys, _ = narrow_field(polys, s.K)
    res = standard_basis(polys, s.ranking, budget)
    rep.add("status", res.status)
    rep.add("rounds", str(res.rounds))
    rep.add("basis", [format_diffpoly(p, s.sig, s.ranking, s.direction) for p in res.basis])
    if res.status != COMPLETE:
        rep.exit_code = EXIT_BUDGET


def cmd_relations(s: Session, rep: Report) -> None:
    if s.args.add:
        if not s.args.relations_file:
            raise OptionError("--add needs --relations-file")
        for src in s.args.add:
            parse_relation(src, s.sig)
        with open(s.args.relations_file, "a", encoding="utf-8") as fh:
            for src in s.args.add:
                fh.write(src.strip() + "\n")
    rep.add("relations", list_relations(s.relations()))


def cmd_convert(s: Session, rep: Report) -> None:
    if s.args.shift:
        if not s.args.function:
            raise OptionError("--shift needs --function")
        out = []
        for src in s.args.shift:
            p = shift2pol(src, s.sig, s.args.function, s.K, s.direction)
            out.append(s.fmt(p))
        rep.add("equation", out)
        return
    eqs = s.equations()
    rep.add("operator", [pol2shift(p, s.sig, s.ranking, s.args.per_summand, s.direction) for p in eqs])


HANDLERS = {
    "basis": cmd_basis,
    "reduce": cmd_reduce,
    "compcond": cmd_compcond,
    "hilbert": cmd_hilbert,
    "residue-basis": cmd_residue_basis,
    "standard-basis": cmd_standard_basis,
    "relations": cmd_relations,
    "convert": cmd_convert,
}

# flags that only make sense for some commands
_FLAG_COMMANDS = {
    "reduced": ("basis",),
    "budget": ("standard-basis",),
    "series_order": ("hilbert",),
    "max_degree": ("residue-basis",),
    "add": ("relations",),
    "shift": ("convert",),
    "function": ("convert",),
    "per_summand": ("convert",),
    "target": ("reduce",),
}


def _check_flags(args: argparse.Namespace) -> None:
    for flag, cmds in _FLAG_COMMANDS.items():
        value = getattr(args, flag)
        if value not in (None, False, []) and args.command not in cmds:
            name = "--" + flag.replace("_", "-")
            raise OptionError(f"{name} is not valid for {args.command}")
    if args.series_order is not None and args.series_order < 0:
        raise OptionError("--series-order must be nonnegative")
    if args.max_degree is not None and args.max_degree < 0:
        raise OptionError("--max-degree must be nonnegative")


def run_command(command: str, problem: ProblemFile, args: argparse.Namespace) -> Report:
    args.command = command
    _check_flags(args)
    session = Session(problem, args)
    report = Report()
    session.header(report, command)
    HANDLERS[command](session, report)
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffbasis", description="Janet-like Groebner bases of difference systems")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", help="YAML problem file")
    ap.add_argument("--division", choices=DIVISIONS)
    ap.add_argument("--order", choices=(DEGREVLEX, LEX))
    ap.add_argument("--priority", choices=(TOP, POT))
    ap.add_argument("--reduced", action="store_true", help="print the reduced Groebner basis")
    ap.add_argument("--criteria", choices=("on", "off"))
    ap.add_argument("--budget", type=int, help="round budget for standard-basis")
    ap.add_argument("--normalize-shifts", action="store_true",
                    help="pre-shift equations with negative shifts")
    ap.add_argument("--direction", choices=(FORWARD, BACKWARD))
    ap.add_argument("--series-order", type=int)
    ap.add_argument("--max-degree", type=int, help="enumerate residue terms up to this degree")
    ap.add_argument("--target", action="append", help="extra target for reduce")
    ap.add_argument("--relation", action="append", help="extra quotient relation pattern")
    ap.add_argument("--relations-file", help="file with one relation pattern per line")
    ap.add_argument("--add", action="append", help="append a pattern to the relations file")
    ap.add_argument("--shift", action="append", help="operator expression for convert")
    ap.add_argument("--function", help="function the --shift operators act on")
    ap.add_argument("--per-summand", action="store_true", help="name the function in every summand")
    ap.add_argument("--format", choices=("kv", "json", "text"), default="kv")
    return ap


def _setup_logging() -> None:
    level = os.environ.get("DIFFBASIS_TRACE", "").strip().lower()
    levels = {"": logging.WARNING, "0": logging.WARNING, "1": logging.INFO, "info": logging.INFO,
              "2": logging.DEBUG, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.DEBUG), stream=sys.stderr,
                        format="%(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        problem = ProblemFile.load(args.problem)
        report = run_command(args.command, problem, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ProblemFileError as exc:
        print(f"problem file error: {exc}", file=sys.stderr)
        return EXIT_PROBLEM
    except OptionError as exc:
        print(f"option error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistentSystemError as exc:
        print(f"inconsistent system: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except DiffBasisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(report.render(args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
