"""
Tu-Cech cochains on finite groupoids

Composition is written left to right: a*b is defined when r(a) = s(b) and runs
from s(a) to r(b). A composable n-tuple (g0, ..., g{n-1}) passes through the
objects s(g0), r(g0), ..., r(g{n-1}); degree-0 "tuples" are objects.

Face maps on tuples:
    e~_0 drops the first arrow, e~_n drops the last, e~_i composes g{i-1} g_i.
For one arrow, e~_0(g) = r(g) and e~_1(g) = s(g).

Coefficients are (1/N)Z/Z, stored as CircleScalar.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod

from coefficients import CIRCLE_ZERO, circle_reduce
from errors import (
    CellUndefined,
    DegreeOutOfRange,
    GroupoidAxiomError,
    IndexOutOfRange,
    NotACocycle,
    TooLarge,
)
from homology import (
    CheckReport,
    CohomologyGroup,
    IntegerMatrix,
    MatrixComplex,
    canonical_factors,
    hstack,
    lattice_quotient,
    mod_n_coboundary_generators,
    mod_n_cocycle_generators,
    mod_n_cohomology,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# groupoids
# ---------------------------------------------------------------------------

class FiniteGroupoid:
    """Objects, arrows with (source, range), composition, identities, inverses"""

    def __init__(self, objects, arrows, composition, identities, inverses, name=""):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self._ends = dict(arrows)
        self._compose = dict(composition)
        self.identities = dict(identities)
        self.inverses = dict(inverses)
        self.name = name
        self.validate()

    def source(self, arrow):
        return self._ends[arrow][0]

    def range(self, arrow):
        return self._ends[arrow][1]

    def arrow_list(self):
        return [a for a, _ in self.arrows]

    def composable(self, a, b):
        return self.range(a) == self.source(b)

    def compose(self, a, b):
        if not self.composable(a, b):
            raise GroupoidAxiomError(f"{a} and {b} are not composable")
        return self._compose[(a, b)]

    def compose_all(self, arrows):
        result = arrows[0]
        for a in arrows[1:]:
            result = self.compose(result, a)
        return result

    def validate(self):
        arrows = self.arrow_list()
        objects = set(self.objects)
        for a in arrows:
            if self.source(a) not in objects or self.range(a) not in objects:
                raise GroupoidAxiomError(f"arrow {a} has an end outside the object set")

        pairs = {(a, b) for a in arrows for b in arrows if self.composable(a, b)}
        if set(self._compose) != pairs:
            raise GroupoidAxiomError("composition must be defined exactly on composable pairs")
        for a, b in pairs:
            c = self._compose[(a, b)]
            if self.source(c) != self.source(a) or self.range(c) != self.range(b):
                raise GroupoidAxiomError(f"{a}*{b} = {c} has the wrong ends")
        for a, b in pairs:
            for c in arrows:
                if self.composable(b, c):
                    if self._compose[(self._compose[(a, b)], c)] != self._compose[(a, self._compose[(b, c)])]:
                        raise GroupoidAxiomError(f"composition is not associative on {a}, {b}, {c}")

        for x in self.objects:
            unit = self.identities.get(x)
            if unit is None or self.source(unit) != x or self.range(unit) != x:
                raise GroupoidAxiomError(f"object {x} has no identity arrow")
        for a in arrows:
            if self._compose[(self.identities[self.source(a)], a)] != a:
                raise GroupoidAxiomError(f"left identity fails on {a}")
            if self._compose[(a, self.identities[self.range(a)])] != a:
                raise GroupoidAxiomError(f"right identity fails on {a}")
            inv = self.inverses.get(a)
            if inv is None or not self.composable(a, inv):
                raise GroupoidAxiomError(f"arrow {a} has no inverse")
            if self._compose[(a, inv)] != self.identities[self.source(a)]:
                raise GroupoidAxiomError(f"{a} * inverse is not an identity")
            if self._compose[(inv, a)] != self.identities[self.range(a)]:
                raise GroupoidAxiomError(f"inverse * {a} is not an identity")


class TransformationGroupoid(FiniteGroupoid):
    """G x X for G = Z/m1 x ... x Z/mr acting on a finite set

    Arrows are (g, x) with s(g, x) = g^{-1} x and r(g, x) = x.
    """

    def __init__(self, moduli, points, generator_actions=None, name=""):
        self.moduli = tuple(int(m) for m in moduli)
        self.points = tuple(points)
        self.generator_actions = {
            int(i): dict(perm) for i, perm in (generator_actions or {}).items()
        }
        self._validate_action()
        self.elements = list(product(*(range(m) for m in self.moduli)))

        arrows = [((g, x), (self.act(self.negate(g), x), x)) for g in self.elements for x in self.points]
        composition = {}
        for (g0, y), (s0, r0) in arrows:
            for (g1, x), (s1, r1) in arrows:
                if r0 == s1:
                    composition[((g0, y), (g1, x))] = (self.add(g0, g1), x)
        zero = tuple(0 for _ in self.moduli)
        identities = {x: (zero, x) for x in self.points}
        inverses = {(g, x): (self.negate(g), self.act(self.negate(g), x)) for g in self.elements
                    for x in self.points}
        super().__init__(self.points, arrows, composition, identities, inverses,
                         name or f"Z/{self.moduli} acting on {len(self.points)} points")

    def _validate_action(self):
        for i, perm in self.generator_actions.items():
            if not 0 <= i < len(self.moduli):
                raise GroupoidAxiomError(f"action names generator {i}, group has {len(self.moduli)}")
            if set(perm) != set(self.points) or set(perm.values()) != set(self.points):
                raise GroupoidAxiomError(f"generator {i} does not act by a permutation")
            for x in self.points:
                y = x
                for _ in range(self.moduli[i]):
                    y = perm[y]
                if y != x:
                    raise GroupoidAxiomError(f"generator {i} does not have order dividing {self.moduli[i]}")
        for i, j in combinations(sorted(self.generator_actions), 2):
            p, q = self.generator_actions[i], self.generator_actions[j]
            if any(p[q[x]] != q[p[x]] for x in self.points):
                raise GroupoidAxiomError(f"generators {i} and {j} do not commute")

    def add(self, g, h):
        return tuple((a + b) % m for a, b, m in zip(g, h, self.moduli))

    def negate(self, g):
        return tuple((-a) % m for a, m in zip(g, self.moduli))

    def act(self, g, x):
        for i, times in enumerate(g):
            perm = self.generator_actions.get(i)
            if perm:
                for _ in range(times):
                    x = perm[x]
        return x


def point_groupoid(moduli):
    return TransformationGroupoid(moduli, ["pt"], {}, name=f"Z/{tuple(moduli)} acting on a point")


# ---------------------------------------------------------------------------
# covers and presimplicial indices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TuCover:
    """Object cover U^0 and arrow cover U^1, each a mapping label -> subset"""

    objects: dict
    arrows: dict

    def validate(self, groupoid):
        covered = set().union(*self.objects.values()) if self.objects else set()
        if covered != set(groupoid.objects):
            raise GroupoidAxiomError("object cover does not cover the objects")
        covered = set().union(*self.arrows.values()) if self.arrows else set()
        if covered != set(groupoid.arrow_list()):
            raise GroupoidAxiomError("arrow cover does not cover the arrows")
        return self


def trivial_cover(groupoid):
    return TuCover({"X": frozenset(groupoid.objects)}, {"G": frozenset(groupoid.arrow_list())})


@dataclass(frozen=True)
class PresimplicialIndex:
    """lambda_l for 0 <= l <= n and lambda_lp for l < p, edges in lexicographic order"""

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        expected = len(self.vertices) * (len(self.vertices) - 1) // 2
        if len(self.edges) != expected:
            raise ValueError(f"index of dimension {self.n} needs {expected} edge labels")

    @property
    def n(self):
        return len(self.vertices) - 1

    def edge(self, l, p):
        return dict(zip(combinations(range(self.n + 1), 2), self.edges))[(l, p)]

    def __str__(self):
        return "".join(map(str, self.vertices)) + ("|" + ",".join(map(str, self.edges)) if self.edges else "")


def coface_injection(i, n):
    """The strictly increasing map [n-1] -> [n] missing i"""
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"face index {i} outside 0..{n}")
    return tuple(j for j in range(n + 1) if j != i)


def index_face(g, index):
    """g~(lambda)(f) = lambda(g o f) for a strictly increasing g: [k] -> [n]"""
    g = tuple(g)
    if any(a >= b for a, b in zip(g, g[1:])) or (g and (g[0] < 0 or g[-1] > index.n)):
        raise ValueError(f"{g} is not a strictly increasing map into [{index.n}]")
    edges = {pair: label for pair, label in zip(combinations(range(index.n + 1), 2), index.edges)}
    return PresimplicialIndex(
        tuple(index.vertices[v] for v in g),
        tuple(edges[(g[l], g[p])] for l, p in combinations(range(len(g)), 2)),
    )


# ---------------------------------------------------------------------------
# simplicial structure of the groupoid
# ---------------------------------------------------------------------------

def composable_tuples(groupoid, n):
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return list(groupoid.objects)
    tuples = [(a,) for a in groupoid.arrow_list()]
    for _ in range(n - 1):
        tuples = [t + (b,) for t in tuples for b in groupoid.arrow_list()
                  if groupoid.composable(t[-1], b)]
    return tuples


def face_map(groupoid, i, point):
    """e~_i on a composable tuple"""
    n = len(point)
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"face index {i} outside 0..{n}")
    if n == 1:
        return groupoid.range(point[0]) if i == 0 else groupoid.source(point[0])
    if i == 0:
        return tuple(point[1:])
    if i == n:
        return tuple(point[:-1])
    return tuple(point[: i - 1]) + (groupoid.compose(point[i - 1], point[i]),) + tuple(point[i + 1:])


def degeneracy_map(groupoid, i, point, degree):
    """eta~_i: insert an identity arrow at position i"""
    if not 0 <= i <= degree:
        raise IndexOutOfRange(f"degeneracy index {i} outside 0..{degree}")
    if degree == 0:
        return (groupoid.identities[point],)
    if i == 0:
        return (groupoid.identities[groupoid.source(point[0])],) + tuple(point)
    return tuple(point[:i]) + (groupoid.identities[groupoid.range(point[i - 1])],) + tuple(point[i:])


def face_identity_failures(groupoid, n):
    """Tuples violating e~_i e~_j = e~_{j-1} e~_i for i < j"""
    failures = []
    for point in composable_tuples(groupoid, n):
        for j in range(n + 1):
            for i in range(j):
                lhs = face_map(groupoid, i, face_map(groupoid, j, point))
                rhs = face_map(groupoid, j - 1, face_map(groupoid, i, point))
                if lhs != rhs:
                    failures.append((point, i, j))
    return failures


def degeneracy_identity_failures(groupoid, n):
    """Tuples violating e~_i eta~_i = e~_{i+1} eta~_i = id"""
    failures = []
    for point in composable_tuples(groupoid, n):
        for i in range(n + 1):
            lifted = degeneracy_map(groupoid, i, point, n)
            for face in (i, i + 1):
                if face_map(groupoid, face, lifted) != point:
                    failures.append((point, i, face))
    return failures


def cell_membership(groupoid, cover, index, point):
    n = index.n
    if n == 0:
        return point in cover.objects[index.vertices[0]]
    if len(point) != n:
        return False
    if groupoid.source(point[0]) not in cover.objects[index.vertices[0]]:
        return False
    for k in range(n):
        if groupoid.range(point[k]) not in cover.objects[index.vertices[k + 1]]:
            return False
    for k in range(n):
        for l in range(k, n):
            composite = groupoid.compose_all(point[k: l + 1])
            if composite not in cover.arrows[index.edge(k, l + 1)]:
                return False
    return True


def cells(groupoid, cover, n):
    """All (index, tuple) pairs with the tuple in U^n_index, deterministic order"""
    object_labels = list(cover.objects)
    arrow_labels = list(cover.arrows)
    out = []
    for point in composable_tuples(groupoid, n):
        if n == 0:
            ends = [point]
        else:
            ends = [groupoid.source(point[0])] + [groupoid.range(a) for a in point]
        vertex_options = [[u for u in object_labels if x in cover.objects[u]] for x in ends]
        edge_options = [
            [u for u in arrow_labels if groupoid.compose_all(point[l: p]) in cover.arrows[u]]
            for l, p in combinations(range(n + 1), 2)
        ]
        for vertices in product(*vertex_options):
            for edges in product(*edge_options):
                out.append((PresimplicialIndex(tuple(vertices), tuple(edges)), point))
    return out


# ---------------------------------------------------------------------------
# cochains and the Tu differential
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TuCochain:
    groupoid: FiniteGroupoid
    cover: TuCover
    degree: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        for (index, point) in self.values:
            if index.n != self.degree or not cell_membership(self.groupoid, self.cover, index, point):
                raise CellUndefined(f"({index}, {point}) is not a degree-{self.degree} cell")

    def __getitem__(self, cell):
        try:
            return self.values[cell]
        except KeyError:
            raise CellUndefined(f"no value on cell ({cell[0]}, {cell[1]})") from None

    def is_zero(self):
        return not any(self.values.values())


def tu_differential(c):
    """(d phi)_mu(t) = sum_i (-1)^i phi_{e~_i mu}(e~_i t)"""
    n = c.degree + 1
    out = {}
    for index, point in cells(c.groupoid, c.cover, n):
        total = CIRCLE_ZERO
        for i in range(n + 1):
            face = (index_face(coface_injection(i, n), index), face_map(c.groupoid, i, point))
            value = c[face]
            total = total + value if i % 2 == 0 else total - value
        out[(index, point)] = total
    return TuCochain(c.groupoid, c.cover, n, out)


def constant_cochain(groupoid, cover, degree, value):
    value = circle_reduce(value)
    return TuCochain(groupoid, cover, degree,
                     {cell: value for cell in cells(groupoid, cover, degree)})


def _coboundary_matrix(groupoid, source_cells, target_cells, n):
    positions = {cell: i for i, cell in enumerate(source_cells)}
    entries = {}
    for row, (index, point) in enumerate(target_cells):
        for i in range(n + 1):
            face = (index_face(coface_injection(i, n), index), face_map(groupoid, i, point))
            col = positions[face]
            entries[(row, col)] = entries.get((row, col), 0) + (-1) ** i
    return IntegerMatrix(len(target_cells), len(source_cells), entries)


class TuComplex(MatrixComplex):
    """Integer matrices of the Tu differential on cells of degrees 0..top+1"""

    def __init__(self, groupoid, cover, top, cell_budget=20000):
        cover.validate(groupoid)
        self.groupoid = groupoid
        self.cover = cover
        self.cells = []
        for n in range(top + 2):
            self.cells.append(cells(groupoid, cover, n))
            total = sum(len(c) for c in self.cells)
            if total > cell_budget:
                raise TooLarge(f"{total} cells exceed the budget of {cell_budget}")
        differentials = [
            _coboundary_matrix(groupoid, self.cells[n], self.cells[n + 1], n + 1)
            for n in range(top + 1)
        ]
        super().__init__([len(c) for c in self.cells], differentials,
                         f"Tu complex of {groupoid.name}")
        logger.debug("assembled Tu complex", extra={"cells": list(self.dims)})

    def cochain_from_vector(self, n, values, modulus):
        return TuCochain(self.groupoid, self.cover, n, {
            cell: circle_reduce(Fraction(int(v), modulus)) for cell, v in zip(self.cells[n], values)
        })


def brute_cohomology(groupoid, cover, k, modulus, ambient=None, cell_budget=20000):
    """H^k with (1/N)Z/Z coefficients; with ambient M, its image in H^k((1/M)Z/Z)"""
    if not 0 <= k <= 2:
        raise DegreeOutOfRange(f"brute force covers degrees 0..2, got {k}")
    complex_ = TuComplex(groupoid, cover, k, cell_budget)
    if ambient is None:
        return mod_n_cohomology(complex_, k, modulus)
    if ambient % modulus:
        raise ValueError(f"ambient modulus {ambient} is not a multiple of {modulus}")
    scaled = mod_n_cocycle_generators(complex_, k, modulus) * (ambient // modulus)
    boundaries = mod_n_coboundary_generators(complex_, k, ambient)
    image = lattice_quotient(hstack(complex_.dim(k), scaled, boundaries), boundaries)
    return CohomologyGroup(0, canonical_factors(image.factors), f"Z/{modulus} in Z/{ambient}")


def enumerate_cocycles(groupoid, cover, k, modulus, limit=4096, cell_budget=20000):
    """Every (1/N)Z/Z-valued k-cocycle, TooLarge past `limit` elements"""
    complex_ = TuComplex(groupoid, cover, k, cell_budget)
    m = complex_.dim(k)
    quotient = lattice_quotient(mod_n_cocycle_generators(complex_, k, modulus),
                                IntegerMatrix.identity(m).scale(modulus))
    total = prod(quotient.factors)
    if total > limit:
        raise TooLarge(f"{total} cocycles exceed the enumeration limit of {limit}")
    out = []
    for coeffs in product(*(range(d) for d in quotient.factors)):
        vector = [0] * m
        for c, gen in zip(coeffs, quotient.torsion_generators):
            vector = [v + c * g for v, g in zip(vector, gen)]
        out.append(complex_.cochain_from_vector(k, [v % modulus for v in vector], modulus))
    return out


def check_onecocycle_independence(phi, require_cocycle=True):
    """phi_{l0 l1 l01} agrees with phi_{l0 l1 l01'} on every common arrow"""
    if phi.degree != 1:
        raise DegreeOutOfRange("independence is a statement about 1-cochains")
    if require_cocycle and not tu_differential(phi).is_zero():
        raise NotACocycle("1-cochain is not closed under the Tu differential")
    seen = {}
    for (index, point), value in phi.values.items():
        key = (index.vertices, point)
        if seen.setdefault(key, value) != value:
            return False
    return True


# ---------------------------------------------------------------------------
# JSON form and the desk suite
# ---------------------------------------------------------------------------

def groupoid_from_json(data):
    """{"group": [2], "set": ["a", "b"], "action": {"0": {"a": "b", "b": "a"}}}"""
    return TransformationGroupoid(
        data.get("group", []),
        data.get("set", ["pt"]),
        {int(i): perm for i, perm in data.get("action", {}).items()},
    )


def _arrow_key(raw):
    g, x = raw
    return (tuple(int(v) for v in g), x)


def cover_from_json(groupoid, data):
    """A cover: {"objects": {label: [x, ...]}, "arrows": {label: [[g, x], ...]}}; "trivial" for one set each"""
    if data == "trivial":
        return trivial_cover(groupoid)
    objects = {label: frozenset(members) for label, members in data["objects"].items()}
    arrows = {label: frozenset(_arrow_key(a) for a in members)
              for label, members in data["arrows"].items()}
    return TuCover(objects, arrows).validate(groupoid)


def standard_cases():
    """Z/2 swapping {a, b} and Z/4 on a point, three covers each"""
    swap = TransformationGroupoid([2], ["a", "b"], {0: {"a": "b", "b": "a"}})
    units = frozenset(swap.identities.values())
    swaps = frozenset(swap.arrow_list()) - units
    swap_covers = [
        trivial_cover(swap),
        TuCover({"A": frozenset({"a"}), "B": frozenset({"b"})},
                {"G": frozenset(swap.arrow_list())}),
        TuCover({"A": frozenset({"a"}), "B": frozenset({"b"}), "X": frozenset({"a", "b"})},
                {"I": units, "S": swaps}),
    ]

    cyclic = point_groupoid([4])

    def by_element(*values):
        return frozenset(a for a in cyclic.arrow_list() if a[0][0] in values)

    point = {"X": frozenset({"pt"})}
    cyclic_covers = [
        trivial_cover(cyclic),
        TuCover(point, {"E": by_element(0, 2), "O": by_element(1, 3)}),
        TuCover(point, {"A": by_element(0, 1, 2), "B": by_element(0, 2, 3), "C": by_element(0)}),
    ]
    return [(swap, swap_covers), (cyclic, cyclic_covers)]


def _group_oracles(cell_budget):
    cyclic = point_groupoid([2])
    cover = trivial_cover(cyclic)
    report = CheckReport("tu.group_oracles")
    h1 = brute_cohomology(cyclic, cover, 1, 2, cell_budget=cell_budget)
    report.record(h1.torsion == (2,), group="H^1(Z/2; (1/2)Z/Z)", got=str(h1), expected="Z/2")
    h2 = brute_cohomology(cyclic, cover, 2, 4, cell_budget=cell_budget)
    report.record(h2.torsion == (2,), group="H^2(Z/2; (1/4)Z/Z)", got=str(h2), expected="Z/2")
    image = brute_cohomology(cyclic, cover, 2, 4, ambient=8, cell_budget=cell_budget)
    report.record(not image.torsion, group="H^2(Z/2; (1/4)Z/Z) in (1/8)Z/Z", got=str(image),
                  expected="0")
    trivial = point_groupoid([])
    for k in (1, 2):
        h = brute_cohomology(trivial, trivial_cover(trivial), k, 2, cell_budget=cell_budget)
        report.record(not h.torsion, group=f"H^{k}(trivial group)", got=str(h), expected="0")
    return report


def run_tu_suite(cases=None, modulus=2, cell_budget=20000):
    """Simplicial identities, d_Tu^2 = 0, cocycle independence and group-cohomology oracles"""
    builtin = cases is None
    cases = standard_cases() if builtin else cases
    identities = CheckReport("tu.simplicial_identities")
    square = CheckReport("tu.d_squared")
    independence = CheckReport("tu.onecocycle_independence")

    for groupoid, covers in cases:
        for n in (2, 3):
            for point, i, j in face_identity_failures(groupoid, n):
                identities.record(False, groupoid=groupoid.name, tuple=point, i=i, j=j)
            identities.checked += len(composable_tuples(groupoid, n))
        for n in (0, 1, 2):
            for point, i, face in degeneracy_identity_failures(groupoid, n):
                identities.record(False, groupoid=groupoid.name, tuple=point, i=i, face=face)
            identities.checked += len(composable_tuples(groupoid, n))

        for position, cover in enumerate(covers):
            complex_ = TuComplex(groupoid, cover, 2, cell_budget)
            defects = complex_.square_defects()
            square.record(not defects, groupoid=groupoid.name, cover=position, degrees=defects)
            for phi in enumerate_cocycles(groupoid, cover, 1, modulus, cell_budget=cell_budget):
                independence.record(check_onecocycle_independence(phi),
                                    groupoid=groupoid.name, cover=position)

    reports = [identities, square, independence]
    if builtin:
        reports.append(_group_oracles(cell_budget))
    for report in reports:
        logger.info("tu check", extra={"check": report.name, "checked": report.checked,
                                       "passed": report.passed})
    return reports
