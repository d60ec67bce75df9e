"""Closed-form (un)availability evaluation.

Component level, for exponential failure/repair rates (lam, mu):

    steady availability      A    = mu / (mu + lam)
    point availability       A(t) = A + (1 - A) * exp(-(lam + mu) t)
    steady unavailability    Q    = lam / (lam + mu)
    point unavailability     Q(t) = Q - Q * exp(-(lam + mu) t)
    reliability (no repair)  R(t) = exp(-lam t)

System level, assuming mutually independent component events: series and
AND multiply, parallel and OR complement-multiply, and the remaining gates
(NAND, NOR, XOR, NOT) follow their set definitions.  When the same
component feeds several leaves the events are dependent and the
compositional recursion is unsound; coherent structures then go through
minimal cut sets and the probabilistic inclusion-exclusion expansion,
everything else is referred to the oracle module.

Steady-state quantities involve no exponential, so with rational rates
they are computed in exact rational arithmetic.  Point quantities are
floating point.  pie_probability always accumulates exactly (floats are
lifted to their exact binary rationals) because the alternating sum is
otherwise prone to cancellation; the result is rounded once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cutsets import CutSetCollection, expand_to_cutsets, is_coherent, minimize
from .model import (
    And,
    Basic,
    BlockExpr,
    GateExpr,
    Nand,
    Nor,
    Or,
    Parallel,
    RatePair,
    Series,
    SystemModel,
    Unit,
    Xor,
    validate,
)

__all__ = [
    "Probability",
    "AnalysisResult",
    "RequiresOracleError",
    "CutSetLimitError",
    "METHOD_CLOSED_FORM",
    "METHOD_COMPOSITIONAL",
    "METHOD_INCLUSION_EXCLUSION",
    "steady_availability",
    "steady_unavailability",
    "inst_availability",
    "inst_unavailability",
    "reliability_exp",
    "series_steady",
    "parallel_steady",
    "series_parallel_steady",
    "parallel_series_steady",
    "and_gate_unavail",
    "or_gate_unavail",
    "nor_gate_unavail",
    "nand_gate_unavail",
    "xor_gate_unavail",
    "not_gate_unavail",
    "pie_probability",
    "evaluate_steady",
    "evaluate_point",
]

Number = Union[Fraction, float]

METHOD_CLOSED_FORM = "closed-form"
METHOD_COMPOSITIONAL = "compositional"
METHOD_INCLUSION_EXCLUSION = "inclusion-exclusion"


class RequiresOracleError(Exception):
    """The requested closed-form analysis is unsound for this model."""


class CutSetLimitError(Exception):
    """Inclusion-exclusion refused: too many cut sets for the term budget."""


@dataclass(frozen=True)
class Probability:
    """A probability in [0, 1]; exact when the value is a Fraction.

    Out-of-range values are internal errors, never clamped.
    """

    value: Number

    def __post_init__(self) -> None:
        if not 0 <= self.value <= 1:
            raise ValueError(f"probability out of range: {self.value!r}")

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def as_float(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class AnalysisResult:
    """A probability plus how it was obtained; time is None for steady state."""

    probability: Probability
    method: str
    time: Optional[float] = None


# --- component level ---------------------------------------------------------


def steady_availability(rates: RatePair) -> Probability:
    """Long-run availability mu / (mu + lam)."""
    lam, mu = rates.failure_rate, rates.repair_rate
    return Probability(mu / (mu + lam))


def steady_unavailability(rates: RatePair) -> Probability:
    """Long-run unavailability lam / (lam + mu)."""
    lam, mu = rates.failure_rate, rates.repair_rate
    return Probability(lam / (lam + mu))


def _check_time(t: float) -> float:
    t = float(t)
    if t < 0 or math.isnan(t):
        raise ValueError(f"time must be >= 0, got {t}")
    return t


def inst_availability(rates: RatePair, t: float) -> Probability:
    """Availability at time t, starting from the working state at t=0."""
    t = _check_time(t)
    lam, mu = float(rates.failure_rate), float(rates.repair_rate)
    steady = mu / (mu + lam)
    return Probability(steady + (1.0 - steady) * math.exp(-(lam + mu) * t))


def inst_unavailability(rates: RatePair, t: float) -> Probability:
    """Unavailability at time t; the pointwise complement of inst_availability."""
    t = _check_time(t)
    lam, mu = float(rates.failure_rate), float(rates.repair_rate)
    q = lam / (lam + mu)
    return Probability(q - q * math.exp(-(lam + mu) * t))


def reliability_exp(failure_rate: Number, t: float) -> Probability:
    """Survival probability exp(-lam t) of an exponential lifetime."""
    t = _check_time(t)
    lam = float(failure_rate)
    if lam <= 0:
        raise ValueError(f"failure rate must be > 0, got {failure_rate}")
    return Probability(math.exp(-lam * t))


# --- block structures, steady state ------------------------------------------


def series_steady(rates: Sequence[RatePair]) -> Probability:
    """Product of member availabilities; the empty series is the sure event."""
    value: Number = Fraction(1)
    for r in rates:
        value = value * steady_availability(r).value
    return Probability(value)


def parallel_steady(rates: Sequence[RatePair]) -> Probability:
    """1 - product of member unavailabilities; empty parallel never works."""
    value: Number = Fraction(1)
    for r in rates:
        value = value * steady_unavailability(r).value
    return Probability(1 - value)


def series_parallel_steady(groups: Sequence[Sequence[RatePair]]) -> Probability:
    """Series of parallel stages: prod_i (1 - prod_j (1 - A_ij))."""
    if not groups:
        raise ValueError("series-parallel structure needs at least one stage")
    value: Number = Fraction(1)
    for i, stage in enumerate(groups):
        if not stage:
            raise ValueError(f"stage {i} of series-parallel structure is empty")
        value = value * parallel_steady(stage).value
    return Probability(value)


def parallel_series_steady(groups: Sequence[Sequence[RatePair]]) -> Probability:
    """Parallel of series branches: 1 - prod_i (1 - prod_j A_ij)."""
    if not groups:
        raise ValueError("parallel-series structure needs at least one branch")
    value: Number = Fraction(1)
    for i, branch in enumerate(groups):
        if not branch:
            raise ValueError(f"branch {i} of parallel-series structure is empty")
        value = value * (1 - series_steady(branch).value)
    return Probability(1 - value)


# --- fault tree gates, steady state ------------------------------------------


def and_gate_unavail(rates: Sequence[RatePair]) -> Probability:
    """All inputs down: prod lam_i / (lam_i + mu_i)."""
    if not rates:
        raise ValueError("AND gate needs at least one input")
    value: Number = Fraction(1)
    for r in rates:
        value = value * steady_unavailability(r).value
    return Probability(value)


def or_gate_unavail(rates: Sequence[RatePair]) -> Probability:
    """At least one input down: 1 - prod (1 - Q_i)."""
    if not rates:
        raise ValueError("OR gate needs at least one input")
    return Probability(1 - nor_gate_unavail(rates).value)


def nor_gate_unavail(rates: Sequence[RatePair]) -> Probability:
    """No input down: prod (1 - Q_i)."""
    if not rates:
        raise ValueError("NOR gate needs at least one input")
    value: Number = Fraction(1)
    for r in rates:
        value = value * (1 - steady_unavailability(r).value)
    return Probability(value)


def nand_gate_unavail(negated: Sequence[RatePair], plain: Sequence[RatePair]) -> Probability:
    """Negated group all up, plain group all down.

    Probability is the product of the negated group's availabilities with
    the plain group's unavailabilities.
    """
    if not negated or not plain:
        raise ValueError("NAND gate needs at least one input in each group")
    value: Number = Fraction(1)
    for r in negated:
        value = value * steady_availability(r).value
    for r in plain:
        value = value * steady_unavailability(r).value
    return Probability(value)


def xor_gate_unavail(a: RatePair, b: RatePair) -> Probability:
    """Exactly one of two inputs down: (1-Q1) Q2 + Q1 (1-Q2)."""
    qa = steady_unavailability(a).value
    qb = steady_unavailability(b).value
    return Probability((1 - qa) * qb + qa * (1 - qb))


def not_gate_unavail(a: RatePair) -> Probability:
    """Complement of the input event: mu / (lam + mu)."""
    return Probability(1 - steady_unavailability(a).value)


# --- probabilistic inclusion-exclusion ---------------------------------------


def _exact_probability(value: object, event: str) -> tuple[Fraction, bool]:
    """Lift one event probability to an exact rational, noting its mode."""
    if isinstance(value, Probability):
        value = value.value
    if isinstance(value, bool):
        raise TypeError(f"probability for event {event!r} is a bool")
    if isinstance(value, Fraction):
        exact = True
    elif isinstance(value, int):
        value, exact = Fraction(value), True
    elif isinstance(value, float):
        value, exact = Fraction(value), False
    else:
        raise TypeError(f"cannot use {value!r} as a probability for event {event!r}")
    if not 0 <= value <= 1:
        raise ValueError(f"probability for event {event!r} out of range: {float(value)}")
    return value, exact


def pie_probability(
    cutsets: Union[CutSetCollection, Iterable[frozenset[str]]],
    probs: Mapping[str, Union[Probability, Number, int]],
    max_cutsets: int = 20,
) -> Probability:
    """Probability of the union of cut sets, by inclusion-exclusion.

    Each cut set occurs when all of its (mutually independent) events do;
    the union's probability is the alternating sum over nonempty subsets J
    of the cut sets of (-1)^(|J|-1) * prod of the probabilities of the
    events in union(J).  The 2^m - 1 terms make this exponential in the
    number of cut sets m, so the expansion refuses beyond max_cutsets.
    """
    sets = list(cutsets.sets if isinstance(cutsets, CutSetCollection) else cutsets)
    m = len(sets)
    if m > max_cutsets:
        raise CutSetLimitError(
            f"refusing inclusion-exclusion over {m} cut sets: "
            f"2^{m} - 1 = {2 ** m - 1} terms exceeds the {max_cutsets}-set limit"
        )
    if m == 0:
        return Probability(Fraction(0))

    events: dict[str, int] = {}
    for cs in sets:
        for e in cs:
            events.setdefault(e, len(events))
    exact = True
    by_index: list[Fraction] = [Fraction(0)] * len(events)
    for e, idx in events.items():
        if e not in probs:
            raise KeyError(f"no probability for event {e!r}")
        value, value_exact = _exact_probability(probs[e], e)
        by_index[idx] = value
        exact = exact and value_exact

    set_events: list[list[int]] = [sorted(events[e] for e in cs) for cs in sets]

    # Walk the subsets of cut sets in Gray-code order: exactly one cut set
    # is toggled per step, so the union is maintained by per-event
    # inclusion counts and the product by one multiply or divide per
    # event entering or leaving the union.  Zero-probability events are
    # counted separately to keep division safe.
    counts = [0] * len(events)
    product = Fraction(1)
    zero_events_in_union = 0
    size = 0
    total = Fraction(0)
    for step in range(1, 1 << m):
        toggled = (step & -step).bit_length() - 1
        gray = step ^ (step >> 1)
        entering = gray & (1 << toggled) != 0
        if entering:
            size += 1
            for idx in set_events[toggled]:
                counts[idx] += 1
                if counts[idx] == 1:
                    if by_index[idx]:
                        product *= by_index[idx]
                    else:
                        zero_events_in_union += 1
        else:
            size -= 1
            for idx in set_events[toggled]:
                counts[idx] -= 1
                if counts[idx] == 0:
                    if by_index[idx]:
                        product /= by_index[idx]
                    else:
                        zero_events_in_union -= 1
        if zero_events_in_union:
            continue
        if size & 1:
            total += product
        else:
            total -= product
    return Probability(total if exact else float(total))


# --- whole-model evaluation ---------------------------------------------------


def _require_valid(model: SystemModel) -> None:
    diags = validate(model)
    if diags:
        raise ValueError("invalid model: " + "; ".join(str(d) for d in diags))


def _failure_dual(block: BlockExpr) -> GateExpr:
    """The unavailability fault tree equivalent to a block diagram.

    A series works iff all members work, so it fails iff any member fails;
    parallel dually.  The dual of any block diagram is a coherent tree.
    """
    if isinstance(block, Unit):
        return Basic(block.component)
    if isinstance(block, Series):
        return Or(tuple(_failure_dual(c) for c in block.children))
    return And(tuple(_failure_dual(c) for c in block.children))


def _steady_block(expr: BlockExpr, model: SystemModel) -> Number:
    if isinstance(expr, Unit):
        return steady_availability(model.components[expr.component].rates).value
    if isinstance(expr, Series):
        value: Number = Fraction(1)
        for child in expr.children:
            value = value * _steady_block(child, model)
        return value
    value = Fraction(1)
    for child in expr.children:
        value = value * (1 - _steady_block(child, model))
    return 1 - value


def _steady_gate(expr: GateExpr, model: SystemModel) -> Number:
    if isinstance(expr, Basic):
        return steady_unavailability(model.components[expr.event].rates).value
    if isinstance(expr, And):
        value: Number = Fraction(1)
        for child in expr.children:
            value = value * _steady_gate(child, model)
        return value
    if isinstance(expr, (Or, Nor)):
        value = Fraction(1)
        for child in expr.children:
            value = value * (1 - _steady_gate(child, model))
        return value if isinstance(expr, Nor) else 1 - value
    if isinstance(expr, Nand):
        value = Fraction(1)
        for child in expr.negated:
            value = value * (1 - _steady_gate(child, model))
        for child in expr.plain:
            value = value * _steady_gate(child, model)
        return value
    if isinstance(expr, Xor):
        ql = _steady_gate(expr.left, model)
        qr = _steady_gate(expr.right, model)
        return (1 - ql) * qr + ql * (1 - qr)
    return 1 - _steady_gate(expr.child, model)


def evaluate_steady(model: SystemModel) -> AnalysisResult:
    """Steady-state availability (block body) or unavailability (tree body).

    Dispatch: with all leaves distinct the structure is evaluated
    compositionally (linear cost).  With repeated leaves a coherent
    structure is expanded to minimal cut sets and evaluated by
    inclusion-exclusion over the shared events; anything else needs the
    oracle module.  Results are exact rationals.
    """
    _require_valid(model)

    if model.leaves_distinct:
        if model.is_fault_tree:
            value = _steady_gate(model.body, model)
        else:
            value = _steady_block(model.body, model)
        method = METHOD_CLOSED_FORM if isinstance(model.body, (Unit, Basic)) else METHOD_COMPOSITIONAL
        return AnalysisResult(Probability(value), method)

    tree = model.body if model.is_fault_tree else _failure_dual(model.body)
    if not is_coherent(tree):
        raise RequiresOracleError(
            "shared leaves in a non-coherent tree: closed forms do not apply; "
            "use exhaustive enumeration or simulation"
        )
    mcs = minimize(expand_to_cutsets(tree))
    unavail_probs = {
        event: steady_unavailability(model.components[event].rates)
        for cs in mcs.sets
        for event in cs
    }
    union = pie_probability(mcs, unavail_probs).value
    value = union if model.is_fault_tree else 1 - union
    return AnalysisResult(Probability(value), METHOD_INCLUSION_EXCLUSION)


def _point_block(expr: BlockExpr, model: SystemModel, t: float) -> float:
    if isinstance(expr, Unit):
        return inst_availability(model.components[expr.component].rates, t).value
    if isinstance(expr, Series):
        value = 1.0
        for child in expr.children:
            value *= _point_block(child, model, t)
        return value
    value = 1.0
    for child in expr.children:
        value *= 1.0 - _point_block(child, model, t)
    return 1.0 - value


def _point_gate(expr: GateExpr, model: SystemModel, t: float) -> float:
    if isinstance(expr, Basic):
        return inst_unavailability(model.components[expr.event].rates, t).value
    if isinstance(expr, And):
        value = 1.0
        for child in expr.children:
            value *= _point_gate(child, model, t)
        return value
    if isinstance(expr, (Or, Nor)):
        value = 1.0
        for child in expr.children:
            value *= 1.0 - _point_gate(child, model, t)
        return value if isinstance(expr, Nor) else 1.0 - value
    if isinstance(expr, Nand):
        value = 1.0
        for child in expr.negated:
            value *= 1.0 - _point_gate(child, model, t)
        for child in expr.plain:
            value *= _point_gate(child, model, t)
        return value
    if isinstance(expr, Xor):
        ql = _point_gate(expr.left, model, t)
        qr = _point_gate(expr.right, model, t)
        return (1.0 - ql) * qr + ql * (1.0 - qr)
    return 1.0 - _point_gate(expr.child, model, t)


def evaluate_point(model: SystemModel, t: float) -> AnalysisResult:
    """Availability (block body) or unavailability (tree body) at time t.

    Leaf probabilities come from the point formulas; composition requires
    independence, so every leaf must be a distinct component.
    """
    t = _check_time(t)
    _require_valid(model)
    if not model.leaves_distinct:
        raise RequiresOracleError(
            "shared leaves: point-in-time composition needs independent leaves; "
            "use simulation"
        )
    if model.is_fault_tree:
        value = _point_gate(model.body, model, t)
    else:
        value = _point_block(model.body, model, t)
    method = METHOD_CLOSED_FORM if isinstance(model.body, (Unit, Basic)) else METHOD_COMPOSITIONAL
    return AnalysisResult(Probability(value), method, time=t)
