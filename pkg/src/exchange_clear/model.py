"""Solver-independent MIP model: named bounded variables, linear rows, maximize objective.

Variable tags are plain tuples whose first element names the family, e.g.
``("x", i, j, k, l)`` for a position-indexed cycle arc in graph copy ``l``,
``("y", i, j, k)`` for a chain arc, ``("z", "cycle", vertices)`` for a cycle column.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Hashable, Mapping

LE, EQ, GE = "<=", "=", ">="


@dataclass(frozen=True)
class Variable:
    tag: Hashable
    obj: float = 0.0
    lower: float = 0.0
    upper: float = 1.0
    integral: bool = True


@dataclass(frozen=True)
class Constraint:
    tag: Hashable
    terms: tuple[tuple[Hashable, float], ...]
    sense: str
    rhs: float


@dataclass(frozen=True)
class MipModel:
    """A maximisation problem.  ``kind`` and ``meta`` tell the decoder how to read it."""

    kind: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    meta: Mapping = field(default_factory=dict)

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {v.tag: t for t, v in enumerate(self.variables)}

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def objective_value(self, assignment: Mapping[Hashable, float]) -> float:
        return sum(v.obj * assignment.get(v.tag, 0.0) for v in self.variables)

    def violations(self, assignment: Mapping[Hashable, float], tol: float = 1e-6) -> list[Hashable]:
        """Tags of rows (and bound-violating variables) not satisfied by ``assignment``."""
        bad = []
        for v in self.variables:
            x = assignment.get(v.tag, 0.0)
            if x < v.lower - tol or x > v.upper + tol:
                bad.append(v.tag)
        for c in self.constraints:
            lhs = sum(coef * assignment.get(tag, 0.0) for tag, coef in c.terms)
            if ((c.sense == LE and lhs > c.rhs + tol) or (c.sense == GE and lhs < c.rhs - tol)
                    or (c.sense == EQ and abs(lhs - c.rhs) > tol)):
                bad.append(c.tag)
        return bad

    def with_objective(self, coeffs: Mapping[Hashable, float], **meta) -> "MipModel":
        variables = tuple(replace(v, obj=coeffs.get(v.tag, v.obj)) for v in self.variables)
        return MipModel(self.kind, variables, self.constraints, {**self.meta, **meta})

    def relaxed(self) -> "MipModel":
        variables = tuple(replace(v, integral=False) for v in self.variables)
        return MipModel(self.kind, variables, self.constraints, dict(self.meta))


class ModelBuilder:
    """Accumulates variables and rows; rows with no terms are dropped on add."""

    def __init__(self, kind: str, **meta):
        self.kind = kind
        self.meta = meta
        self._vars: dict[Hashable, Variable] = {}
        self._rows: list[Constraint] = []

    def add_var(self, tag, obj=0.0, lower=0.0, upper=1.0, integral=True):
        if tag in self._vars:
            raise ValueError(f"duplicate variable tag {tag!r}")
        self._vars[tag] = Variable(tag, float(obj), lower, upper, integral)
        return tag

    def __contains__(self, tag) -> bool:
        return tag in self._vars

    def add_row(self, tag, terms, sense, rhs):
        merged: dict = {}
        for t, coef in terms:
            if t not in self._vars:
                raise KeyError(f"row {tag!r} references unknown variable {t!r}")
            merged[t] = merged.get(t, 0.0) + coef
        items = tuple((t, c) for t, c in merged.items() if c != 0.0)
        if items:
            self._rows.append(Constraint(tag, items, sense, float(rhs)))

    def build(self) -> MipModel:
        return MipModel(self.kind, tuple(self._vars.values()), tuple(self._rows), dict(self.meta))


def format_tag(tag) -> str:
    """Render a tag as an LP-file-safe identifier, e.g. ``x_3_4_2_c1``."""
    if not isinstance(tag, tuple):
        return str(tag)
    head, *rest = tag
    if head == "x":
        i, j, k, l = rest
        return f"x_{i}_{j}_{k}_c{l}"
    parts = []
    for r in rest:
        if isinstance(r, tuple):
            parts.append("_".join(map(str, r)))
        else:
            parts.append(str(r))
    return "_".join([str(head)] + parts)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def dump_lp(model: MipModel) -> str:
    """Text dump in LP-file style with a stable ordering, intended for diffs."""
    lines = [f"\\ {model.kind} {dict(sorted((str(k), v) for k, v in model.meta.items()))}", "Maximize"]
    obj = [f"{_fmt(v.obj)} {format_tag(v.tag)}" for v in model.variables if v.obj != 0]
    lines.append(" obj: " + (" + ".join(obj) if obj else "0"))
    lines.append("Subject To")
    for c in model.constraints:
        body = " + ".join(f"{_fmt(coef)} {format_tag(t)}" for t, coef in c.terms)
        lines.append(f" {format_tag(c.tag)}: {body} {c.sense} {_fmt(c.rhs)}")
    lines.append("Bounds")
    for v in model.variables:
        lines.append(f" {_fmt(v.lower)} <= {format_tag(v.tag)} <= {_fmt(v.upper)}")
    ints = [format_tag(v.tag) for v in model.variables if v.integral]
    if ints:
        lines.append("Binaries")
        lines.append(" " + " ".join(ints))
    lines.append("End")
    return "\n".join(lines) + "\n"
