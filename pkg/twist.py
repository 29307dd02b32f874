"""
Euler cocycle F, the Steenrod correction C(F) and the cup operations

All products use the front-face / back-face index pattern: the cochain being
twisted sits on the leading vertices and F (or C) on the trailing ones. With
increasing tuples both faces stay increasing.
"""

import logging
from dataclasses import dataclass

from coefficients import (
    UpperTriValue,
    VectorValue,
    pair_vector,
    scalar_zero,
    upper_pairs,
)
from errors import DegreeMismatch, LengthMismatch, NotClosed
from nerve import Cochain, cech_differential

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwistCocycle:
    nerve: object
    n: int
    F: Cochain

    def at(self, triangle):
        """F on an increasing triangle, zero vector if absent"""
        return self.F[tuple(triangle)]


@dataclass(frozen=True)
class SteenrodCochain:
    twist: TwistCocycle
    C: Cochain

    def at(self, tetrahedron):
        return self.C[tuple(tetrahedron)]


def validate_twist(nerve, F, n=None):
    if F.degree != 2:
        raise DegreeMismatch(f"twist must be a 2-cochain, got degree {F.degree}")
    n = len(F.zero) if n is None else n
    for simplex, value in F.items():
        if len(value) != n:
            raise LengthMismatch(f"twist value at {simplex} has length {len(value)}, expected {n}")

    dF = cech_differential(F)
    for simplex in nerve.simplices(3):
        value = dF[simplex]
        for component, entry in enumerate(value):
            if entry != 0:
                raise NotClosed(simplex, component, entry)

    logger.debug("validated twist", extra={"n": n, "support": len(F.values)})
    return TwistCocycle(nerve, n, F)


def twist_from_support(nerve, n, support):
    """Twist from [(triangle, integer vector), ...]; validated"""
    values = {}
    for simplex, value in support:
        simplex = tuple(sorted(simplex))
        vec = VectorValue.of(value, "Z")
        if len(vec) != n:
            raise LengthMismatch(f"support value at {simplex} has length {len(vec)}, expected {n}")
        values[simplex] = values[simplex] + vec if simplex in values else vec
    return validate_twist(nerve, Cochain(nerve, 2, VectorValue.zero(n), values), n)


def zero_twist(nerve, n):
    return TwistCocycle(nerve, n, Cochain(nerve, 2, VectorValue.zero(n), {}))


def steenrod_value(twist, tetrahedron):
    """C_{l0l1l2l3, ij} = F_{l0l1l2,i} F_{l0l2l3,j} - F_{l1l2l3,i} F_{l0l1l3,j}"""
    l0, l1, l2, l3 = tetrahedron
    f012 = twist.at((l0, l1, l2))
    f023 = twist.at((l0, l2, l3))
    f123 = twist.at((l1, l2, l3))
    f013 = twist.at((l0, l1, l3))
    return UpperTriValue(
        twist.n,
        tuple(f012[i] * f023[j] - f123[i] * f013[j] for i, j in upper_pairs(twist.n)),
        "Z",
    )


def steenrod_cochain(twist):
    zero = UpperTriValue.zero(twist.n)
    if twist.n < 2:
        return SteenrodCochain(twist, Cochain(twist.nerve, 3, zero, {}))
    C = Cochain.from_function(
        twist.nerve, 3, zero, lambda tet: steenrod_value(twist, tet)
    )
    return SteenrodCochain(twist, C)


def cup1_col1(phi, twist):
    """(phi u1 F)(l0..l{k+1}) = <phi(l0..l{k-1}), F(l{k-1} l_k l{k+1})>"""
    k = phi.degree + 1
    zero = scalar_zero(phi.zero.kind)
    out = {}
    for simplex in twist.nerve.simplices(k + 1):
        front = simplex[:k]
        value = phi[front]
        if not value:
            continue
        out[simplex] = pair_vector(value, twist.at(simplex[k - 1:]))
    return Cochain(twist.nerve, k + 1, zero, out)


def cup1_col2(phi, twist):
    """Component l at (l0..lk) is sum_{i<j} phi_ij (F_i [l=j] - [l=i] F_j)"""
    k = phi.degree + 2
    kind = phi.zero.kind
    n = twist.n
    out = {}
    for simplex in twist.nerve.simplices(k):
        value = phi[simplex[: k - 1]]
        if not value:
            continue
        F = twist.at(simplex[k - 2:])
        comps = [scalar_zero(kind)] * n
        for (i, j), entry in value.items():
            comps[j] = comps[j] + entry * F[i]
            comps[i] = comps[i] - entry * F[j]
        out[simplex] = VectorValue(tuple(comps), kind)
    return Cochain(twist.nerve, k, VectorValue.zero(n, kind), out)


def cup2(phi, steenrod):
    """(phi u2 C)(l0..l{k+1}) = sum_{i<j} phi_ij(l0..l{k-2}) C_ij(l{k-2}..l{k+1})"""
    k = phi.degree + 2
    nerve = steenrod.twist.nerve
    zero = scalar_zero(phi.zero.kind)
    out = {}
    for simplex in nerve.simplices(k + 1):
        value = phi[simplex[: k - 1]]
        if not value:
            continue
        C = steenrod.at(simplex[k - 2:])
        out[simplex] = sum(
            (entry * c for entry, c in zip(value.entries, C.entries)), zero
        )
    return Cochain(nerve, k + 1, zero, out)


def cup_front_back(a, b):
    """(a u b)(l0..l4) = a(l0 l1 l2) b(l2 l3 l4) for integer 2-cochains"""
    nerve = a.nerve
    out = {}
    for simplex in nerve.simplices(a.degree + b.degree):
        out[simplex] = a[simplex[: a.degree + 1]] * b[simplex[a.degree:]]
    return Cochain(nerve, a.degree + b.degree, 0, out)


def euler_component(twist, i):
    return twist.F.map(lambda v: v[i], 0)


def steenrod_identity_defects(twist, steenrod=None):
    """Simplices where F_i u F_j - F_j u F_i differs from dC_ij, as (simplex, (i, j), lhs, rhs)"""
    steenrod = steenrod or steenrod_cochain(twist)
    defects = []
    for i, j in upper_pairs(twist.n):
        Fi = euler_component(twist, i)
        Fj = euler_component(twist, j)
        lhs = cup_front_back(Fi, Fj) - cup_front_back(Fj, Fi)
        Cij = steenrod.C.map(lambda v, p=(i, j): v.get(*p), 0)
        rhs = cech_differential(Cij)
        for simplex in twist.nerve.simplices(4):
            if lhs[simplex] != rhs[simplex]:
                defects.append((simplex, (i, j), lhs[simplex], rhs[simplex]))
    return defects
