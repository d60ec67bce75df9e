"""Shared helpers for the test suite: random model generation and
independent brute-force oracles (kept free of the code paths they check)."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import availkit as ak

GATE_KINDS = ("and", "or", "nor", "nand", "xor", "not")


def rand_rate_pair(rng: random.Random) -> ak.RatePair:
    """Rational rates with numerator and denominator drawn from 1..9."""
    return ak.RatePair(
        Fraction(rng.randint(1, 9), rng.randint(1, 9)),
        Fraction(rng.randint(1, 9), rng.randint(1, 9)),
    )


def make_components(rng: random.Random, n: int) -> dict[str, ak.ComponentDef]:
    return {f"c{i}": ak.ComponentDef(f"c{i}", rand_rate_pair(rng)) for i in range(1, n + 1)}


def _is_leaf_turn(rng: random.Random, depth: int, depth_limit: int) -> bool:
    return depth >= depth_limit or rng.random() < 0.12 + 0.22 * depth


def _arity(rng: random.Random, depth: int) -> int:
    return rng.randint(2, 4) if depth <= 1 else rng.randint(1, 3)


def random_block(
    rng: random.Random, ids: Sequence[str], depth: int = 0, depth_limit: int = 3
) -> ak.BlockExpr:
    if _is_leaf_turn(rng, depth, depth_limit):
        return ak.Unit(rng.choice(ids))
    children = tuple(
        random_block(rng, ids, depth + 1, depth_limit) for _ in range(_arity(rng, depth))
    )
    return ak.Series(children) if rng.random() < 0.5 else ak.Parallel(children)


def random_coherent_gate(
    rng: random.Random, ids: Sequence[str], depth: int = 0, depth_limit: int = 3
) -> ak.GateExpr:
    if _is_leaf_turn(rng, depth, depth_limit):
        return ak.Basic(rng.choice(ids))
    children = tuple(
        random_coherent_gate(rng, ids, depth + 1, depth_limit) for _ in range(_arity(rng, depth))
    )
    return ak.And(children) if rng.random() < 0.5 else ak.Or(children)


def random_gate(
    rng: random.Random, ids: Sequence[str], depth: int = 0, depth_limit: int = 3
) -> ak.GateExpr:
    if _is_leaf_turn(rng, depth, depth_limit):
        return ak.Basic(rng.choice(ids))
    kind = rng.choice(GATE_KINDS)
    if kind in ("and", "or", "nor"):
        children = tuple(
            random_gate(rng, ids, depth + 1, depth_limit) for _ in range(_arity(rng, depth))
        )
        return {"and": ak.And, "or": ak.Or, "nor": ak.Nor}[kind](children)
    if kind == "nand":
        negated = tuple(random_gate(rng, ids, depth + 1, depth_limit) for _ in range(rng.randint(1, 2)))
        plain = tuple(random_gate(rng, ids, depth + 1, depth_limit) for _ in range(rng.randint(1, 2)))
        return ak.Nand(negated, plain)
    if kind == "xor":
        return ak.Xor(
            random_gate(rng, ids, depth + 1, depth_limit),
            random_gate(rng, ids, depth + 1, depth_limit),
        )
    return ak.Not(random_gate(rng, ids, depth + 1, depth_limit))


def random_model(rng: random.Random, kind: str, max_components: int = 6) -> ak.SystemModel:
    """A valid random model; leaves may repeat, so shared events do occur.

    kind: 'abd', 'coherent-ft' or 'ft' (all gate types).
    """
    components = make_components(rng, rng.randint(1, max_components))
    ids = list(components)
    if kind == "abd":
        body = random_block(rng, ids)
    elif kind == "coherent-ft":
        body = random_coherent_gate(rng, ids)
    elif kind == "ft":
        body = random_gate(rng, ids)
    else:
        raise ValueError(kind)
    used = set(ak.basic_events(ak.SystemModel("tmp", components, body)))
    kept = {cid: c for cid, c in components.items() if cid in used}
    if rng.random() < 0.3:  # sometimes keep an unreferenced declaration
        kept = dict(components)
    return ak.SystemModel(f"random-{kind}", kept, body)


def steady_leaf_probs(model: ak.SystemModel) -> dict[str, ak.Probability]:
    """Exact leaf probabilities in the model's native polarity."""
    probs = {}
    for event in ak.basic_events(model):
        rates = model.components[event].rates
        if model.is_fault_tree:
            probs[event] = ak.steady_unavailability(rates)
        else:
            probs[event] = ak.steady_availability(rates)
    return probs


def assignments(events: Sequence[str]) -> Iterable[dict[str, bool]]:
    """All 2^n truth assignments over the given events."""
    for bits in product((False, True), repeat=len(events)):
        yield dict(zip(events, bits))


def brute_force_union_probability(cutsets: Iterable[frozenset], probs: dict) -> Fraction:
    """Independent oracle for P(union of cut sets): joint-state enumeration.

    Sums, over every assignment of the involved events, the Bernoulli
    weight of assignments in which at least one cut set fully occurs.
    """
    sets = [frozenset(cs) for cs in cutsets]
    events = sorted({e for cs in sets for e in cs})
    total = Fraction(0)
    for state in assignments(events):
        occurred = {e for e, v in state.items() if v}
        if any(cs <= occurred for cs in sets):
            weight = Fraction(1)
            for e in events:
                p = Fraction(probs[e]) if not isinstance(probs[e], Fraction) else probs[e]
                weight *= p if state[e] else 1 - p
            total += weight
    return total
