"""/c3rf/src/c3rf/core/graph.py
Discrete factor graphs with log-potential tables, scoring and Gibbs weights.

Tables are dense, row-major in scope order, and hold log-potentials in
R u {-inf}; -inf marks a forbidden joint assignment.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..constants import DEFAULT_POTENTIAL_LOW
from .errors import (
    DuplicateId,
    GraphError,
    InvalidConfiguration,
    NaNPotential,
    ScopeOutOfRange,
    TableSizeMismatch,
)

logger = logging.getLogger(__name__)

Configuration = np.ndarray


@dataclass(frozen=True)
class VariableSpec:
    """A discrete variable with labels 0..cardinality-1."""
    id: int
    cardinality: int


@dataclass(frozen=True, eq=False)
class FactorSpec:
    """A log-potential table over an ordered scope of variables."""
    id: int
    scope: Tuple[int, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "scope", tuple(int(v) for v in self.scope))
        table = np.array(self.table, dtype=float).ravel()
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


@dataclass(frozen=True, eq=False)
class FactorGraph:
    """Validated bipartite variable/factor graph. Build it with build_graph."""
    variables: Tuple[VariableSpec, ...]
    factors: Tuple[FactorSpec, ...]
    cardinalities: np.ndarray = field(repr=False)
    # adjacency[v] = ((factor index, position of v in that scope), ...) by factor id
    adjacency: Tuple[Tuple[Tuple[int, int], ...], ...] = field(repr=False)
    shaped_tables: Tuple[np.ndarray, ...] = field(repr=False)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    def degree(self, variable: int) -> int:
        """Number of factors touching a variable, N(i)."""
        return len(self.adjacency[variable])

    def num_configurations(self) -> int:
        """Size of the joint label space as an exact integer."""
        return math.prod(int(k) for k in self.cardinalities)

    def is_forest(self) -> bool:
        """True when the bipartite graph has no cycles."""
        n = self.num_variables
        parent = list(range(n + self.num_factors))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for f, factor in enumerate(self.factors):
            for v in factor.scope:
                ra, rb = find(v), find(n + f)
                if ra == rb:
                    return False
                parent[ra] = rb
        return True


@dataclass(frozen=True, eq=False)
class GibbsModel:
    """A factor graph with a temperature: P(y) proportional to exp(S(y) / T)."""
    graph: FactorGraph
    temperature: float = 1.0

    def __post_init__(self) -> None:
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")

    def with_temperature(self, temperature: float) -> "GibbsModel":
        return GibbsModel(self.graph, float(temperature))

    @property
    def num_variables(self) -> int:
        return self.graph.num_variables


def build_graph(variables: Sequence[VariableSpec], factors: Sequence[FactorSpec]) -> FactorGraph:
    """
    Validate variable and factor specs and assemble a FactorGraph.

    Args:
        variables: specs with ids 0..n-1 (any order)
        factors: specs whose scopes reference existing, distinct variables

    Returns:
        immutable FactorGraph with adjacency built

    Raises:
        DuplicateId, ScopeOutOfRange, TableSizeMismatch, NaNPotential, GraphError
    """
    by_id: Dict[int, VariableSpec] = {}
    for var in variables:
        if var.id in by_id:
            raise DuplicateId(f"Duplicate variable id: {var.id}")
        if var.cardinality < 2:
            raise GraphError(f"Variable {var.id} has cardinality {var.cardinality} < 2")
        by_id[var.id] = var
    n = len(by_id)
    if sorted(by_id) != list(range(n)):
        raise GraphError(f"Variable ids must be contiguous 0..{n - 1}")
    ordered_vars = tuple(by_id[i] for i in range(n))
    cards = np.array([v.cardinality for v in ordered_vars], dtype=np.int64)

    seen_factor_ids = set()
    shaped = []
    for factor in factors:
        if factor.id in seen_factor_ids:
            raise DuplicateId(f"Duplicate factor id: {factor.id}")
        seen_factor_ids.add(factor.id)
        if not factor.scope:
            raise ScopeOutOfRange(f"Factor {factor.id} has an empty scope")
        if len(set(factor.scope)) != len(factor.scope):
            raise ScopeOutOfRange(f"Factor {factor.id} repeats a variable in scope {list(factor.scope)}")
        for v in factor.scope:
            if not 0 <= v < n:
                raise ScopeOutOfRange(f"Factor {factor.id} references unknown variable {v}")
        shape = tuple(int(cards[v]) for v in factor.scope)
        expected = math.prod(shape)
        if factor.table.size != expected:
            raise TableSizeMismatch(
                f"Factor {factor.id} table has {factor.table.size} entries, expected {expected}"
            )
        if np.isnan(factor.table).any():
            raise NaNPotential(f"Factor {factor.id} contains NaN")
        if np.isposinf(factor.table).any():
            raise NaNPotential(f"Factor {factor.id} contains +inf")
        table = factor.table.reshape(shape)
        shaped.append(table)

    adjacency: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    order = sorted(range(len(factors)), key=lambda f: factors[f].id)
    for f in order:
        for pos, v in enumerate(factors[f].scope):
            adjacency[v].append((f, pos))

    cards.setflags(write=False)
    return FactorGraph(
        variables=ordered_vars,
        factors=tuple(factors),
        cardinalities=cards,
        adjacency=tuple(tuple(edges) for edges in adjacency),
        shaped_tables=tuple(shaped),
    )


def as_configuration(graph: FactorGraph, labels: Iterable[int]) -> Configuration:
    """Check a label vector against a graph and return it as an int array."""
    y = np.asarray(list(labels) if not isinstance(labels, np.ndarray) else labels)
    if y.ndim != 1 or y.shape[0] != graph.num_variables:
        raise InvalidConfiguration(
            f"Configuration has length {y.size}, graph has {graph.num_variables} variables"
        )
    if y.size and not np.issubdtype(y.dtype, np.integer):
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise InvalidConfiguration("Configuration labels must be integers")
    y = y.astype(np.int64)
    if np.any(y < 0) or np.any(y >= graph.cardinalities):
        raise InvalidConfiguration(f"Configuration {y.tolist()} has labels out of range")
    return y


def score_batch(model: GibbsModel, configurations: np.ndarray) -> np.ndarray:
    """
    Scores S(y) = sum_F theta_F(y_F) for a stack of configurations.

    Args:
        model: the scored model
        configurations: (m, n) integer array, rows already validated

    Returns:
        float array of length m; -inf where a forbidden entry is hit
    """
    Y = np.asarray(configurations, dtype=np.int64)
    if Y.ndim == 1:
        Y = Y[None, :]
    total = np.zeros(Y.shape[0], dtype=float)
    graph = model.graph
    for factor, table in zip(graph.factors, graph.shaped_tables):
        flat = np.ravel_multi_index(tuple(Y[:, v] for v in factor.scope), table.shape)
        total += factor.table[flat]
    return total


def score(model: GibbsModel, y: Iterable[int]) -> float:
    """S(y); temperature is not applied."""
    config = as_configuration(model.graph, y)
    return float(score_batch(model, config[None, :])[0])


def log_gibbs_weight(model: GibbsModel, y: Iterable[int]) -> float:
    """Unnormalized log-probability S(y) / T."""
    return score(model, y) / model.temperature


class GraphBuilder:
    """Incremental graph construction used by expansions and cardinality trees."""

    def __init__(self, cardinalities: Sequence[int] = ()):
        self._cards: List[int] = [int(k) for k in cardinalities]
        self._factors: List[FactorSpec] = []

    @classmethod
    def from_graph(cls, graph: FactorGraph) -> "GraphBuilder":
        builder = cls(graph.cardinalities.tolist())
        for factor in graph.factors:
            builder.add_factor(factor.scope, factor.table)
        return builder

    @property
    def num_variables(self) -> int:
        return len(self._cards)

    def cardinality(self, variable: int) -> int:
        return self._cards[variable]

    def add_variable(self, cardinality: int) -> int:
        self._cards.append(int(cardinality))
        return len(self._cards) - 1

    def add_factor(self, scope: Sequence[int], table: np.ndarray) -> int:
        fid = len(self._factors)
        self._factors.append(FactorSpec(fid, tuple(scope), np.asarray(table, dtype=float)))
        return fid

    def build(self) -> FactorGraph:
        variables = [VariableSpec(i, k) for i, k in enumerate(self._cards)]
        return build_graph(variables, self._factors)


def gen_grid(
    N: int,
    seed: int,
    potential_low: float = DEFAULT_POTENTIAL_LOW,
    num_labels: int = 2,
    temperature: float = 1.0,
) -> GibbsModel:
    """
    Random N x N 4-connected grid with i.i.d. Uniform[potential_low, 0] tables.

    Variable (r, c) has id r * N + c. Unary factors come first, then one
    general pairwise factor per grid edge (right neighbour before down
    neighbour, in row-major order).
    """
    if N < 1:
        raise ValueError(f"Grid size must be >= 1, got {N}")
    if not potential_low < 0:
        raise ValueError(f"potential_low must be < 0, got {potential_low}")
    rng = np.random.default_rng(seed)
    K = int(num_labels)
    builder = GraphBuilder([K] * (N * N))
    for v in range(N * N):
        builder.add_factor([v], rng.uniform(potential_low, 0.0, size=K))
    for r in range(N):
        for c in range(N):
            v = r * N + c
            if c + 1 < N:
                builder.add_factor([v, v + 1], rng.uniform(potential_low, 0.0, size=K * K))
            if r + 1 < N:
                builder.add_factor([v, v + N], rng.uniform(potential_low, 0.0, size=K * K))
    graph = builder.build()
    logger.debug("Generated %dx%d grid with %d factors (seed=%d)", N, N, graph.num_factors, seed)
    return GibbsModel(graph, temperature)
