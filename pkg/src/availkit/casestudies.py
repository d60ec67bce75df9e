"""Built-in case-study models of the DFH-3 satellite solar array.

The deployment chain of the solar array is a series of six stages: a
redundant pair of electric detonators (ED), the cutting knife (CK), a
redundant pair of starting springs (SS), two hinge bearings (HB), and a
redundant pair of locking-mechanism hinges (HL).  Redundant twins are
separate physical units sharing one rate pair, so all leaves are
independent.

The matching unavailability fault tree collects fourteen basic failure
events: four deployment faults (x1..x4), a two-way redundant detonation
fault (x5, x6), and eight locking/orientation faults (x7..x14).  No
published rates exist for the tree's events, so the fixture documents
example rates of lambda=0.1, mu=0.3 per event.
"""

from __future__ import annotations

from fractions import Fraction

from .model import (
    And,
    Basic,
    ComponentDef,
    Or,
    Parallel,
    RatePair,
    Series,
    SystemModel,
    Unit,
)

__all__ = ["dfh3_abd", "dfh3_ft", "CASE_STUDIES", "DFH3_ABD_STEADY_AVAILABILITY"]

# Exact steady-state availability of the block diagram below.
DFH3_ABD_STEADY_AVAILABILITY = Fraction(40, 343)


def dfh3_abd() -> SystemModel:
    """Solar array deployment chain as an availability block diagram."""
    rates = {
        "ED": RatePair("0.1", "0.3"),
        "CK": RatePair("0.2", "0.5"),
        "SS": RatePair("0.3", "0.4"),
        "HB": RatePair("0.7", "0.8"),
        "HL": RatePair("0.5", "0.5"),
    }
    components = {}
    for kind in ("ED", "SS", "HL"):
        for unit in ("1", "2"):
            cid = kind + unit
            components[cid] = ComponentDef(cid, rates[kind])
    components["CK"] = ComponentDef("CK", rates["CK"])
    components["HB1"] = ComponentDef("HB1", rates["HB"])
    components["HB2"] = ComponentDef("HB2", rates["HB"])

    body = Series(
        (
            Parallel((Unit("ED1"), Unit("ED2"))),
            Unit("CK"),
            Parallel((Unit("SS1"), Unit("SS2"))),
            Unit("HB1"),
            Unit("HB2"),
            Parallel((Unit("HL1"), Unit("HL2"))),
        )
    )
    ordered = {cid: components[cid] for cid in ("ED1", "ED2", "CK", "SS1", "SS2", "HB1", "HB2", "HL1", "HL2")}
    return SystemModel(name="dfh3-abd", components=ordered, body=body)


def dfh3_ft() -> SystemModel:
    """Solar array unavailability fault tree over fourteen basic events."""
    rates = RatePair("0.1", "0.3")  # documented example rates
    events = [f"x{i}" for i in range(1, 15)]
    components = {e: ComponentDef(e, rates) for e in events}
    body = Or(
        (
            Or(tuple(Basic(e) for e in events[0:4])),
            And((Basic("x5"), Basic("x6"))),
            Or(tuple(Basic(e) for e in events[6:14])),
        )
    )
    return SystemModel(name="dfh3-ft", components=components, body=body)


CASE_STUDIES = {
    "dfh3-abd": dfh3_abd,
    "dfh3-ft": dfh3_ft,
}
