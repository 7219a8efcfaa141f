"""YAML problem files.

A problem file names the ring and lists the equations::

    indices: [x, y]
    functions: [u]
    parameters: []
    ranking: {order: degrevlex, priority: top, function_order: [u], index_order: [x, y]}
    equations:
      - u[x+1,y] - u[x,y]
      - u[x,y+1] - u[x,y]
    options: {division: janet-like, criteria: on, direction: forward}
    targets: ["u[x+2,y+3]"]
    relations: ["u[x>=5, y]"]

``targets`` and ``relations`` are only read by the commands that use them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml

from .division import DIVISIONS, JANET_LIKE
from .errors import DiffBasisError, OptionError, ParseError, ProblemFileError
from .parsing import BACKWARD, FORWARD
from .ring import DEGREVLEX, LEX, POT, TOP, Ranking, RingSignature

_KNOWN = {"indices", "functions", "parameters", "ranking", "equations", "options", "targets",
          "relations"}
_RANKING_KEYS = {"order", "priority", "function_order", "index_order"}
_OPTION_KEYS = {"division", "criteria", "direction", "normalize_shifts", "budget", "series_order"}


def _names(value, what: str) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ProblemFileError(f"{what} must be a list of names")
    return list(value)


def parse_switch(value, what: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("on", "true", "yes"):
        return True
    if isinstance(value, str) and value.lower() in ("off", "false", "no"):
        return False
    raise OptionError(f"{what} must be on or off, not {value!r}")


@dataclass
class ProblemFile:
    indices: List[str]
    functions: List[str]
    parameters: List[str] = field(default_factory=list)
    ranking: Dict[str, Any] = field(default_factory=dict)
    equations: List[str] = field(default_factory=list)
    options: Dict[str, Any] = field(default_factory=dict)
    targets: List[str] = field(default_factory=list)
    relations: List[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProblemFile":
        if not isinstance(data, dict):
            raise ProblemFileError("problem file must be a mapping")
        unknown = set(data) - _KNOWN
        if unknown:
            raise ProblemFileError(f"unknown field(s): {', '.join(sorted(unknown))}")
        for req in ("indices", "functions"):
            if req not in data:
                raise ProblemFileError(f"missing field {req!r}")
        ranking = data.get("ranking") or {}
        options = data.get("options") or {}
        if not isinstance(ranking, dict) or set(ranking) - _RANKING_KEYS:
            raise ProblemFileError(f"ranking accepts only {sorted(_RANKING_KEYS)}")
        if not isinstance(options, dict) or set(options) - _OPTION_KEYS:
            raise ProblemFileError(f"options accepts only {sorted(_OPTION_KEYS)}")
        lists = {}
        for key in ("equations", "targets", "relations"):
            v = data.get(key) or []
            if not isinstance(v, list):
                raise ProblemFileError(f"{key} must be a list")
            lists[key] = [str(e) for e in v]
        pf = cls(_names(data["indices"], "indices"), _names(data["functions"], "functions"),
                 _names(data.get("parameters"), "parameters"), dict(ranking), lists["equations"],
                 dict(options), lists["targets"], lists["relations"])
        pf.signature()
        return pf

    @classmethod
    def from_text(cls, text: str) -> "ProblemFile":
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ProblemFileError(f"invalid YAML: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "ProblemFile":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def signature(self) -> RingSignature:
        try:
            return RingSignature(tuple(self.indices), tuple(self.functions), tuple(self.parameters))
        except (ValueError, DiffBasisError) as exc:
            raise ProblemFileError(str(exc)) from None

    def make_ranking(self, order: Optional[str] = None, priority: Optional[str] = None,
                     sig: Optional[RingSignature] = None) -> Ranking:
        sig = sig or self.signature()
        order = order or self.ranking.get("order", DEGREVLEX)
        priority = priority or self.ranking.get("priority", TOP)
        if order not in (DEGREVLEX, LEX):
            raise OptionError(f"order must be degrevlex or lex, not {order!r}")
        if priority not in (TOP, POT):
            raise OptionError(f"priority must be top or pot, not {priority!r}")
        fo = self.ranking.get("function_order")
        io = self.ranking.get("index_order")
        try:
            fo = None if fo is None else tuple(self.functions.index(f) for f in _names(fo, "function_order"))
            io = None if io is None else tuple(self.indices.index(i) for i in _names(io, "index_order"))
            return Ranking.for_signature(sig, order, priority, fo, io)
        except ValueError as exc:
            raise ProblemFileError(f"bad ranking: {exc}") from None

    def option(self, key: str, default=None):
        return self.options.get(key, default)

    @property
    def division(self) -> str:
        d = self.option("division", JANET_LIKE)
        if d not in DIVISIONS:
            raise OptionError(f"division must be one of {', '.join(DIVISIONS)}")
        return d

    @property
    def criteria(self) -> bool:
        return parse_switch(self.option("criteria", True), "criteria")

    @property
    def direction(self) -> str:
        d = self.option("direction", FORWARD)
        if d not in (FORWARD, BACKWARD):
            raise OptionError(f"direction must be forward or backward, not {d!r}")
        return d

    @property
    def normalize_shifts(self) -> bool:
        return parse_switch(self.option("normalize_shifts", False), "normalize_shifts")


def locate(err: ParseError, what: str, index: int) -> ParseError:
    """Prefix a parse error with the list entry it came from."""
    err.args = (f"{what}[{index + 1}]: {err.args[0]}",) + err.args[1:]
    return err
