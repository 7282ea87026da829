from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from ..multigraph import Copy, Multigraph, Pair

# Internally a decomposition is a "labelling": pair -> list of class labels,
# one per copy index.  Labels 0..k-1 are the forests, label k is D.
Labels = dict[Pair, list[int]]


class SearchBudgetExceeded(RuntimeError):
    """The exact search hit its node budget before reaching an answer."""


class InvariantBreach(RuntimeError):
    """An internal guarantee failed (a bug, not a property of the input)."""


class IrreducibleInstance(InvariantBreach):
    """No reduction applies to an instance that satisfies the hypotheses."""

    def __init__(self, message, graph=None, f=None, trace=None):
        super().__init__(message)
        self.graph = graph
        self.f = f
        self.trace = trace


@dataclass(frozen=True)
class KfDecomposition:
    """k forest classes plus the capacity-bounded forest ``d_class``."""

    forest_classes: tuple[frozenset[Copy], ...]
    d_class: frozenset[Copy]

    @property
    def k(self) -> int:
        return len(self.forest_classes)

    @classmethod
    def from_labels(cls, k: int, labels: Mapping[Pair, Sequence[int]]) -> "KfDecomposition":
        classes: list[set[Copy]] = [set() for _ in range(k + 1)]
        for (u, v), labs in labels.items():
            for i, c in enumerate(labs):
                classes[c].add((u, v, i))
        return cls(tuple(frozenset(c) for c in classes[:k]), frozenset(classes[k]))

    def labels(self) -> Labels:
        out: dict[Pair, dict[int, int]] = {}
        for c, cls in enumerate(list(self.forest_classes) + [self.d_class]):
            for u, v, i in cls:
                out.setdefault((u, v), {})[i] = c
        return {p: [d[i] for i in sorted(d)] for p, d in out.items()}

    def label_of(self, copy: Copy) -> str:
        for i, cls in enumerate(self.forest_classes):
            if copy in cls:
                return f"F{i + 1}"
        if copy in self.d_class:
            return "D"
        raise KeyError(copy)

    def canonical(self) -> "KfDecomposition":
        """Sort labels within each pair, then number forests by first use."""
        k = self.k
        labels = self.labels()
        order: dict[int, int] = {}
        for p in sorted(labels):
            for c in sorted(labels[p]):
                if c < k and c not in order:
                    order[c] = len(order)
        for c in range(k):
            if c not in order:
                order[c] = len(order)
        order[k] = k
        relabelled = {p: sorted(order[c] for c in labs) for p, labs in labels.items()}
        return KfDecomposition.from_labels(k, relabelled)

    def copies(self) -> Iterator[tuple[Copy, str]]:
        """All (copy, class name) items in canonical copy order."""
        items = []
        for i, cls in enumerate(self.forest_classes):
            items.extend((c, f"F{i + 1}") for c in cls)
        items.extend((c, "D") for c in self.d_class)
        return iter(sorted(items))


Measure = tuple[int, int, int]


def instance_measure(g: Multigraph, f: Sequence[int]) -> Measure:
    """Edge count, then vertex count, then minus the capacity sum; smaller is lexicographically less."""
    return (g.num_edges, g.n, -sum(f))


@dataclass(frozen=True)
class TraceStep:
    """One reduction applied by the constructive decomposer.

    ``measure`` summarises the instance the step was applied to and
    ``derived`` the instances it recursed on, each as
    (edge count, vertex count, minus capacity sum).
    """

    tag: str
    depth: int
    measure: Measure
    params: Mapping[str, object] = field(default_factory=dict)
    derived: tuple[Measure, ...] = ()

    @property
    def edges(self) -> int:
        return self.measure[0]

    @property
    def capacity_sum(self) -> int:
        return -self.measure[2]

    def describe(self) -> str:
        parts = [f"{k}={v}" for k, v in self.params.items()]
        sub = ",".join(f"{e}e/{-c}f" for e, _, c in self.derived)
        return f"{'  ' * self.depth}{self.tag} [{self.edges}e/{self.capacity_sum}f] {' '.join(parts)} -> {sub}".rstrip()


@dataclass
class ReductionTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TraceStep]:
        return iter(self.steps)

    def tags(self) -> list[str]:
        return [s.tag for s in self.steps]

    def measure_decreases(self) -> bool:
        """Every derived instance is strictly smaller than its parent."""
        return all(m < s.measure for s in self.steps for m in s.derived)

    def format(self) -> str:
        return "\n".join(s.describe() for s in self.steps)
