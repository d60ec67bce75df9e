"""Component model and the two system structure algebras.

A repairable component is a pair of exponential rates (failure, repair).
Systems are described either as availability block diagrams (series /
parallel nesting of units) or as unavailability fault trees (gates over
basic failure events).  All types here are immutable after construction
and safe to share between threads.

Rates are kept as exact rationals.  Numeric literals are interpreted with
decimal semantics: a rate written 0.1 means exactly 1/10, never the
nearest binary float.  This is what makes purely steady-state results
exact (see the analytic module).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterator, Mapping, Union

__all__ = [
    "RatePair",
    "ComponentDef",
    "Unit",
    "Series",
    "Parallel",
    "BlockExpr",
    "Basic",
    "And",
    "Or",
    "Nor",
    "Nand",
    "Xor",
    "Not",
    "GateExpr",
    "SystemModel",
    "Diagnostic",
    "validate",
    "basic_events",
    "iter_leaves",
]

IDENT_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Exact rational in the normal case; a bare float survives conversion only
# for non-finite junk so validate() can report it instead of crashing.
Rate = Union[Fraction, float]


def _as_rate(value: object) -> Rate:
    """Interpret a numeric input as an exact rational rate.

    Floats go through their shortest decimal repr, so 0.1 becomes 1/10.
    Non-finite floats are kept as-is for validate() to flag.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rate")


@dataclass(frozen=True)
class RatePair:
    """Failure and repair rates of one repairable component, per unit time.

    Both rates must be strictly positive and finite for the analysis
    operations to be meaningful; violations are reported by validate()
    rather than rejected at construction time.
    """

    failure_rate: Rate
    repair_rate: Rate

    def __post_init__(self) -> None:
        object.__setattr__(self, "failure_rate", _as_rate(self.failure_rate))
        object.__setattr__(self, "repair_rate", _as_rate(self.repair_rate))

    @property
    def mttf(self) -> Fraction:
        """Mean time to failure, 1/failure_rate."""
        return 1 / self.failure_rate

    @property
    def mttr(self) -> Fraction:
        """Mean time to repair, 1/repair_rate."""
        return 1 / self.repair_rate

    def problems(self) -> list[str]:
        out = []
        for label, value in (("failure", self.failure_rate), ("repair", self.repair_rate)):
            if not isinstance(value, Fraction):
                out.append(f"non-finite {label} rate")
            elif value <= 0:
                out.append(f"nonpositive {label} rate")
        return out


@dataclass(frozen=True)
class ComponentDef:
    """A named component: an identifier bound to its rate pair."""

    id: str
    rates: RatePair


# --- availability block diagrams -------------------------------------------


@dataclass(frozen=True)
class Unit:
    """Leaf block: one component's availability."""

    component: str


@dataclass(frozen=True)
class Series:
    """Available iff every child is available."""

    children: tuple["BlockExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Parallel:
    """Available iff at least one child is available."""

    children: tuple["BlockExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


BlockExpr = Union[Unit, Series, Parallel]


# --- unavailability fault trees ---------------------------------------------


@dataclass(frozen=True)
class Basic:
    """Leaf gate: one component's unavailability event."""

    event: str


@dataclass(frozen=True)
class And:
    children: tuple["GateExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Or:
    children: tuple["GateExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Nor:
    children: tuple["GateExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Nand:
    """Occurs when none of the negated inputs occur and all plain inputs do."""

    negated: tuple["GateExpr", ...]
    plain: tuple["GateExpr", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "negated", tuple(self.negated))
        object.__setattr__(self, "plain", tuple(self.plain))


@dataclass(frozen=True)
class Xor:
    """Occurs when exactly one of its two inputs occurs."""

    left: "GateExpr"
    right: "GateExpr"


@dataclass(frozen=True)
class Not:
    child: "GateExpr"


GateExpr = Union[Basic, And, Or, Nor, Nand, Xor, Not]

Expr = Union[BlockExpr, GateExpr]

_BLOCK_NODES = (Unit, Series, Parallel)
_GATE_NODES = (Basic, And, Or, Nor, Nand, Xor, Not)


def _node_children(expr: Expr) -> list[tuple[str, Expr]]:
    """Children of a node with the path segment that reaches each one."""
    if isinstance(expr, (Series, Parallel, And, Or, Nor)):
        return [(f".children[{i}]", c) for i, c in enumerate(expr.children)]
    if isinstance(expr, Nand):
        pairs = [(f".negated[{i}]", c) for i, c in enumerate(expr.negated)]
        pairs += [(f".plain[{i}]", c) for i, c in enumerate(expr.plain)]
        return pairs
    if isinstance(expr, Xor):
        return [(".left", expr.left), (".right", expr.right)]
    if isinstance(expr, Not):
        return [(".child", expr.child)]
    return []


def iter_leaves(expr: Expr) -> Iterator[str]:
    """Component ids at the leaves, in document order (with repeats)."""
    if isinstance(expr, Unit):
        yield expr.component
    elif isinstance(expr, Basic):
        yield expr.event
    else:
        for _, child in _node_children(expr):
            yield from iter_leaves(child)


@dataclass(frozen=True)
class SystemModel:
    """A named set of components plus one structure over them.

    The body is either a block diagram (instantaneous/steady availability
    semantics) or a fault tree (unavailability semantics).  The component
    map preserves declaration order, which fixes the order of basic_events.
    """

    name: str
    components: Mapping[str, ComponentDef]
    body: Expr

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", dict(self.components))

    @property
    def is_fault_tree(self) -> bool:
        return isinstance(self.body, _GATE_NODES)

    @property
    def leaves_distinct(self) -> bool:
        """True iff no component id appears at more than one leaf.

        Two leaves naming the same component denote the same physical
        unit, hence the same (dependent) event.  Independent twins of one
        design must be declared as separate components sharing a RatePair.
        """
        leaves = list(iter_leaves(self.body))
        return len(leaves) == len(set(leaves))


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, locating the offending node by path."""

    message: str
    path: str = ""

    def __str__(self) -> str:
        return f"{self.path}: {self.message}" if self.path else self.message


def validate(model: SystemModel) -> list[Diagnostic]:
    """Check every structural invariant; empty result means the model is valid.

    One diagnostic is produced per violation: bad identifiers, nonpositive
    or non-finite rates, empty gate/block argument lists, dangling leaf
    references, and gate nodes mixed into block bodies (or vice versa).
    """
    diags: list[Diagnostic] = []

    for cid, comp in model.components.items():
        path = f"components[{cid}]"
        if not IDENT_PATTERN.match(cid or ""):
            diags.append(Diagnostic(f"invalid component identifier {cid!r}", path))
        if comp.id != cid:
            diags.append(Diagnostic(f"component keyed {cid!r} declares id {comp.id!r}", path))
        for problem in comp.rates.problems():
            diags.append(Diagnostic(f"{problem} at {cid}", path))

    want_gate = model.is_fault_tree
    _walk(model, model.body, "body", want_gate, diags)
    return diags


def _walk(model: SystemModel, expr: Expr, path: str, want_gate: bool, diags: list[Diagnostic]) -> None:
    is_gate = isinstance(expr, _GATE_NODES)
    is_block = isinstance(expr, _BLOCK_NODES)
    if not (is_gate or is_block):
        diags.append(Diagnostic(f"unexpected node {type(expr).__name__}", path))
        return
    if is_gate != want_gate:
        kind = "gate" if is_gate else "block"
        diags.append(Diagnostic(f"{kind} node {type(expr).__name__} in the wrong structure kind", path))
        return

    if isinstance(expr, (Unit, Basic)):
        leaf = expr.component if isinstance(expr, Unit) else expr.event
        if leaf not in model.components:
            diags.append(Diagnostic(f"unknown component reference {leaf!r}", path))
        return

    if isinstance(expr, (Series, Parallel, And, Or, Nor)) and not expr.children:
        diags.append(Diagnostic(f"{type(expr).__name__} node has no children", path))
    if isinstance(expr, Nand):
        if not expr.negated:
            diags.append(Diagnostic("Nand node has an empty negated group", path))
        if not expr.plain:
            diags.append(Diagnostic("Nand node has an empty plain group", path))

    for segment, child in _node_children(expr):
        _walk(model, child, path + segment, want_gate, diags)


def basic_events(model: SystemModel) -> list[str]:
    """Distinct leaf component ids in document order.

    Deterministic and stable across serialize/parse round trips, so it is
    also the component indexing used by the simulation oracle.
    """
    seen: dict[str, None] = {}
    for leaf in iter_leaves(model.body):
        seen.setdefault(leaf)
    return list(seen)
