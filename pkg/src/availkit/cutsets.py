"""Cut-set extraction and minimization for coherent fault trees.

A cut set is a set of basic events whose joint occurrence triggers the
top event; the tree's disjunctive normal form is a collection of cut
sets.  Collections are kept canonically ordered (by size, then by the
sorted event ids) so output is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import And, Basic, GateExpr, Or

__all__ = [
    "CutSetCollection",
    "NonCoherentError",
    "ExpansionLimitError",
    "is_coherent",
    "expand_to_cutsets",
    "minimize",
]

DEFAULT_EXPANSION_LIMIT = 4096


class NonCoherentError(Exception):
    """The tree uses a gate outside {AND, OR, basic event}."""


class ExpansionLimitError(Exception):
    """DNF expansion would exceed the configured cut-set budget."""


def _canonical(sets) -> tuple[frozenset[str], ...]:
    unique = set(sets)
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(s))))


@dataclass(frozen=True)
class CutSetCollection:
    """A duplicate-free, canonically ordered collection of cut sets."""

    sets: tuple[frozenset[str], ...]
    minimized: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", _canonical(self.sets))

    def holds(self, occurred: frozenset[str] | set[str]) -> bool:
        """Boolean function of the collection: some cut set fully occurred."""
        return any(cs <= occurred for cs in self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def is_coherent(tree: GateExpr) -> bool:
    """True iff the tree contains only basic events, AND and OR gates."""
    if isinstance(tree, Basic):
        return True
    if isinstance(tree, (And, Or)):
        return all(is_coherent(c) for c in tree.children)
    return False


def expand_to_cutsets(tree: GateExpr, max_cutsets: int = DEFAULT_EXPANSION_LIMIT) -> CutSetCollection:
    """Top-down DNF expansion of a coherent tree.

    OR gates union their children's collections; AND gates distribute,
    taking the cross-product union of the children's cut sets.  The
    intermediate collection is bounded by max_cutsets to keep the
    exponential blowup explicit rather than silent.
    """

    def expand(node: GateExpr, path: str) -> list[frozenset[str]]:
        if isinstance(node, Basic):
            return [frozenset((node.event,))]
        if isinstance(node, Or):
            acc: list[frozenset[str]] = []
            for i, child in enumerate(node.children):
                acc.extend(expand(child, f"{path}.children[{i}]"))
            _check_size(acc)
            return acc
        if isinstance(node, And):
            acc = [frozenset()]
            for i, child in enumerate(node.children):
                parts = expand(child, f"{path}.children[{i}]")
                acc = [left | right for left in acc for right in parts]
                _check_size(acc)
            return acc
        raise NonCoherentError(
            f"non-coherent tree: {type(node).__name__} gate at {path}"
        )

    def _check_size(acc: list) -> None:
        if len(acc) > max_cutsets:
            raise ExpansionLimitError(
                f"cut-set expansion exceeds the {max_cutsets}-set limit"
            )

    return CutSetCollection(tuple(expand(tree, "tree")), minimized=False)


def minimize(collection: CutSetCollection) -> CutSetCollection:
    """Remove every cut set that is a superset of another (absorption).

    Processing in increasing size order reaches the fixpoint in one pass;
    the result is an antichain representing the same boolean function,
    i.e. the minimal cut sets.
    """
    keep: list[frozenset[str]] = []
    for cs in collection.sets:  # already ordered smallest first
        if not any(k <= cs for k in keep):
            keep.append(cs)
    return CutSetCollection(tuple(keep), minimized=True)
