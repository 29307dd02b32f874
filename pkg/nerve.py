"""
Nerve of a finite good cover

Simplices are strictly increasing vertex tuples. Cochains are sparse maps from
simplices of one dimension to coefficient values; a missing key is the zero value.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from numbers import Integral

import networkx as nx

from errors import DegreeMismatch, EmptyInput, LengthMismatch, NotInNerve

logger = logging.getLogger(__name__)


class Nerve:
    """Face-closed abstract simplicial complex with component labels"""

    def __init__(self, simplices_by_dim):
        self._simplices = {
            dim: tuple(sorted(simplices)) for dim, simplices in simplices_by_dim.items()
        }
        self._index = {
            dim: {s: pos for pos, s in enumerate(simplices)}
            for dim, simplices in self._simplices.items()
        }
        self.vertices = tuple(s[0] for s in self._simplices.get(0, ()))

        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self._simplices.get(1, ()))
        components = sorted(
            (sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0]
        )
        self.components = {v: label for label, comp in enumerate(components) for v in comp}
        self.component_count = len(components)

    @property
    def dimension(self):
        return max(self._simplices) if self._simplices else -1

    def simplices(self, k):
        return self._simplices.get(k, ())

    def index_of(self, simplex):
        return self._index[len(simplex) - 1][tuple(simplex)]

    def __contains__(self, simplex):
        simplex = tuple(simplex)
        return bool(simplex) and simplex in self._index.get(len(simplex) - 1, {})

    def component_of(self, vertex):
        return self.components[vertex]

    def facets(self):
        """Maximal simplices, lexicographic within each dimension"""
        found = []
        for dim in sorted(self._simplices, reverse=True):
            for s in self._simplices[dim]:
                if not any(set(s) < set(f) for f in found):
                    found.append(s)
        return sorted(found, key=lambda s: (len(s), s))

    def counts(self):
        return [len(self.simplices(k)) for k in range(self.dimension + 1)]

    def __repr__(self):
        return f"Nerve(vertices={len(self.vertices)}, counts={self.counts()})"


def build_nerve(facets):
    """Close a list of vertex sets under taking faces"""
    facets = [sorted(set(f)) for f in facets]
    if not facets or any(not f for f in facets):
        raise EmptyInput("nerve needs at least one nonempty facet")
    for f in facets:
        for v in f:
            if not isinstance(v, Integral) or v < 0:
                raise ValueError(f"vertex ids must be non-negative integers, got {v!r}")

    by_dim = {}
    for f in facets:
        for size in range(1, len(f) + 1):
            for face in combinations(f, size):
                by_dim.setdefault(size - 1, set()).add(tuple(int(v) for v in face))

    nerve = Nerve(by_dim)
    logger.debug("built nerve", extra={"counts": nerve.counts()})
    return nerve


def enumerate_simplices(nerve, k):
    if k < 0:
        raise ValueError("simplex dimension must be non-negative")
    return list(nerve.simplices(k))


def permutation_sign(values):
    """Sign of the permutation sorting a tuple of distinct values"""
    sign = 1
    values = list(values)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class Cochain:
    """Degree-k cochain; values maps simplex -> coefficient, zero entries dropped"""

    nerve: Nerve
    degree: int
    zero: object
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for simplex, value in self.values.items():
            simplex = tuple(simplex)
            if len(simplex) != self.degree + 1:
                raise DegreeMismatch(
                    f"simplex {simplex} in a degree {self.degree} cochain"
                )
            if simplex not in self.nerve:
                raise NotInNerve(simplex)
            if value:
                cleaned[simplex] = value
        object.__setattr__(self, "values", cleaned)

    @classmethod
    def from_function(cls, nerve, degree, zero, fn):
        return cls(nerve, degree, zero, {s: fn(s) for s in nerve.simplices(degree)})

    def __getitem__(self, simplex):
        return self.values.get(tuple(simplex), self.zero)

    def items(self):
        return self.values.items()

    def __bool__(self):
        return bool(self.values)

    def _check(self, other):
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.values)
        for s, v in other.values.items():
            out[s] = out[s] + v if s in out else v
        return Cochain(self.nerve, self.degree, self.zero, out)

    def __neg__(self):
        return Cochain(self.nerve, self.degree, self.zero, {s: -v for s, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return Cochain(
            self.nerve, self.degree, self.zero, {s: v * k for s, v in self.values.items()}
        )

    def map(self, fn, zero):
        return Cochain(self.nerve, self.degree, zero, {s: fn(v) for s, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    __hash__ = None


def zero_cochain(nerve, degree, zero):
    return Cochain(nerve, degree, zero, {})


def cech_differential(c):
    """(dc)(l0..l{k+1}) = sum_i (-1)^i c(l0..^li..l{k+1})"""
    out = {}
    for simplex in c.nerve.simplices(c.degree + 1):
        total = c.zero
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1:]
            value = c[face]
            if value:
                total = total + value if i % 2 == 0 else total - value
        out[simplex] = total
    return Cochain(c.nerve, c.degree + 1, c.zero, out)


def alternating_value(c, t):
    """Value of c on an arbitrary index tuple under the alternating convention"""
    t = tuple(t)
    if len(t) != c.degree + 1:
        raise LengthMismatch(f"{len(t)} indices for a degree {c.degree} cochain")
    distinct = tuple(sorted(set(t)))
    if distinct not in c.nerve:
        raise NotInNerve(t)
    if len(distinct) != len(t):
        return c.zero
    value = c[distinct]
    return value if permutation_sign(t) > 0 else -value
