"""
The dimensionally reduced complex (C_F, D_F)

A degree-k cochain is a triple (phi0, phi1, phi2) of Cech cochains of degrees k,
k-1, k-2 with values in A, A^n and strictly upper triangular n x n matrices over A:

    D_F(phi0, phi1, phi2) = (d phi0 + (-1)^{k+1} phi1 u1 F + (-1)^{k+1} phi2 u2 C(F),
                             d phi1 + (-1)^k phi2 u1 F,
                             d phi2)

Columns that do not exist in low degree are treated as zero. The two-column
complex drops phi2. One integer matrix per degree serves every scalar kind.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from coefficients import UpperTriValue, VectorValue, scalar_kind_of, scalar_zero, upper_pairs
from errors import DegreeMismatch
from homology import (
    IntegerMatrix,
    MatrixComplex,
    ShortExactSequence,
    cohomology_group,
    connecting_matrices,
    image_basis,
    kernel_basis,
    lattice_includes,
)
from nerve import Cochain, cech_differential, zero_cochain
from twist import cup1_col1, cup1_col2, cup2, steenrod_cochain, zero_twist

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimRedCochain:
    degree: int
    column0: Cochain
    column1: Optional[Cochain] = None
    column2: Optional[Cochain] = None
    columns: int = 3

    def __post_init__(self):
        k = self.degree
        if self.column0.degree != k:
            raise DegreeMismatch(f"column 0 has degree {self.column0.degree}, expected {k}")
        if self.column1 is not None and self.column1.degree != k - 1:
            raise DegreeMismatch(f"column 1 has degree {self.column1.degree}, expected {k - 1}")
        if self.column2 is not None and self.column2.degree != k - 2:
            raise DegreeMismatch(f"column 2 has degree {self.column2.degree}, expected {k - 2}")

    def __bool__(self):
        return any(bool(c) for c in (self.column0, self.column1, self.column2) if c is not None)


def dimred_zero(nerve, n, degree, kind="Z", columns=3):
    return DimRedCochain(
        degree,
        zero_cochain(nerve, degree, scalar_zero(kind)),
        zero_cochain(nerve, degree - 1, VectorValue.zero(n, kind)) if degree >= 1 else None,
        zero_cochain(nerve, degree - 2, UpperTriValue.zero(n, kind))
        if degree >= 2 and columns == 3 else None,
        columns,
    )


def _signed(c, sign):
    return c if sign > 0 else -c


def d_f(c, twist, steenrod=None):
    """Twisted differential on cochain triples, any scalar kind"""
    k = c.degree
    kind = scalar_kind_of(c.column0.zero)
    nerve = twist.nerve
    n = twist.n
    steenrod = steenrod or steenrod_cochain(twist)
    sign_col0 = (-1) ** (k + 1)
    sign_col1 = (-1) ** k

    out0 = cech_differential(c.column0)
    if c.column1 is not None:
        out0 = out0 + _signed(cup1_col1(c.column1, twist), sign_col0)
    if c.column2 is not None:
        out0 = out0 + _signed(cup2(c.column2, steenrod), sign_col0)

    if c.column1 is not None:
        out1 = cech_differential(c.column1)
    else:
        out1 = zero_cochain(nerve, k, VectorValue.zero(n, kind))
    if c.column2 is not None:
        out1 = out1 + _signed(cup1_col2(c.column2, twist), sign_col1)

    out2 = None
    if c.columns == 3 and k + 1 >= 2:
        if c.column2 is not None:
            out2 = cech_differential(c.column2)
        else:
            out2 = zero_cochain(nerve, k - 1, UpperTriValue.zero(n, kind))

    return DimRedCochain(k + 1, out0, out1, out2, c.columns)


class DimRedComplex(MatrixComplex):
    """Sparse integer matrices of D_F in lexicographic bases

    Basis elements are (column, simplex, component) with component None in
    column 0, l in column 1 and a pair (i, j) in column 2.
    """

    def __init__(self, nerve, twist, scalar="Z", kmax=3, columns=3, name=""):
        self.nerve = nerve
        self.twist = twist
        self.scalar = scalar
        self.columns = columns
        self.steenrod = steenrod_cochain(twist)
        self._incidence = {}
        self._prefixes = {}

        self.bases = [self._basis(k) for k in range(kmax + 2)]
        self.positions = [{e: i for i, e in enumerate(b)} for b in self.bases]
        differentials = [self._assemble(k) for k in range(kmax + 1)]
        super().__init__([len(b) for b in self.bases], differentials,
                         name or f"{columns}-column complex, n={twist.n}")
        logger.info("assembled complex",
                    extra={"columns": columns, "n": twist.n, "dims": list(self.dims)})

    def _basis(self, k):
        nerve, n = self.nerve, self.twist.n
        basis = [(0, s, None) for s in nerve.simplices(k)]
        if k >= 1:
            basis += [(1, s, l) for s in nerve.simplices(k - 1) for l in range(n)]
        if k >= 2 and self.columns == 3:
            basis += [(2, s, p) for s in nerve.simplices(k - 2) for p in upper_pairs(n)]
        return basis

    def _cofaces(self, simplex):
        dim = len(simplex)
        if dim not in self._incidence:
            table = {}
            for tau in self.nerve.simplices(dim):
                for i in range(len(tau)):
                    table.setdefault(tau[:i] + tau[i + 1:], []).append((tau, i))
            self._incidence[dim] = table
        return self._incidence[dim].get(simplex, ())

    def _extensions(self, prefix, dim):
        """Simplices of dimension dim whose leading vertices are prefix"""
        key = (len(prefix), dim)
        if key not in self._prefixes:
            table = {}
            for tau in self.nerve.simplices(dim):
                table.setdefault(tau[: len(prefix)], []).append(tau)
            self._prefixes[key] = table
        return self._prefixes[key].get(prefix, ())

    def _assemble(self, k):
        rows = self.positions[k + 1]
        entries = {}

        def add(row_elem, col, value):
            if value:
                key = (rows[row_elem], col)
                entries[key] = entries.get(key, 0) + value

        sign_col0 = (-1) ** (k + 1)
        sign_col1 = (-1) ** k
        for col, (column, simplex, comp) in enumerate(self.bases[k]):
            for tau, i in self._cofaces(simplex):
                add((column, tau, comp), col, (-1) ** i)
            if column == 1:
                for tau in self._extensions(simplex, k + 1):
                    add((0, tau, None), col, sign_col0 * self.twist.at(tau[k - 1:])[comp])
            elif column == 2:
                i, j = comp
                for tau in self._extensions(simplex, k):
                    F = self.twist.at(tau[k - 2:])
                    add((1, tau, j), col, sign_col1 * F[i])
                    add((1, tau, i), col, -sign_col1 * F[j])
                for tau in self._extensions(simplex, k + 1):
                    add((0, tau, None), col, sign_col0 * self.steenrod.at(tau[k - 2:]).get(i, j))

        return IntegerMatrix(len(self.bases[k + 1]), len(self.bases[k]), entries)

    def column_positions(self, k, column):
        return [i for i, e in enumerate(self.bases[k]) if e[0] == column]

    def to_vector(self, cochain):
        """Coordinates of a cochain triple in the degree-k basis"""
        out = []
        for column, simplex, comp in self.bases[cochain.degree]:
            source = (cochain.column0, cochain.column1, cochain.column2)[column]
            if source is None:
                raise DegreeMismatch(f"cochain has no column {column}")
            value = source[simplex]
            if column == 1:
                value = value[comp]
            elif column == 2:
                value = value.get(*comp)
            out.append(value)
        return out

    def from_vector(self, k, values, kind=None):
        kind = kind or self.scalar
        n = self.twist.n
        col0, col1, col2 = {}, {}, {}
        for (column, simplex, comp), value in zip(self.bases[k], values):
            if column == 0:
                col0[simplex] = value
            elif column == 1:
                col1.setdefault(simplex, [scalar_zero(kind)] * n)[comp] = value
            else:
                col2.setdefault(simplex, {})[comp] = value
        return DimRedCochain(
            k,
            Cochain(self.nerve, k, scalar_zero(kind), col0),
            Cochain(self.nerve, k - 1, VectorValue.zero(n, kind),
                    {s: VectorValue(tuple(v), kind) for s, v in col1.items()})
            if k >= 1 else None,
            Cochain(self.nerve, k - 2, UpperTriValue.zero(n, kind),
                    {s: UpperTriValue.from_mapping(n, v, kind) for s, v in col2.items()})
            if k >= 2 and self.columns == 3 else None,
            self.columns,
        )


class TwoColumnComplex(DimRedComplex):
    def __init__(self, nerve, twist, scalar="Z", kmax=3, name=""):
        super().__init__(nerve, twist, scalar, kmax, columns=2, name=name)


def assemble_complex(nerve, twist, scalar="Z", kmax=3):
    return DimRedComplex(nerve, twist, scalar, kmax)


def assemble_two_column(nerve, twist, scalar="Z", kmax=3):
    return TwoColumnComplex(nerve, twist, scalar, kmax)


def cech_complex(nerve, kmax=3):
    """Untwisted integer Cech complex (the rank-zero twisted complex)"""
    return DimRedComplex(nerve, zero_twist(nerve, 0), "Z", kmax, name="Cech complex")


def cech_cohomology(nerve, k, scalar="Z"):
    return cohomology_group(cech_complex(nerve, max(k, 0)), k, scalar)


def _coordinate_map(target_ids, source_ids, rows, cols):
    return IntegerMatrix(rows, cols, {(t, s): 1 for s, t in zip(source_ids, target_ids)})


def column_filtration(complex_):
    """0 -> column 0 -> C_F -> columns >= 1 -> 0 as a short exact sequence of complexes"""
    top = complex_.top_degree
    sub_ids = [complex_.column_positions(k, 0) for k in range(top + 2)]
    quot_ids = [[i for i, e in enumerate(complex_.bases[k]) if e[0] >= 1] for k in range(top + 2)]

    sub = MatrixComplex(
        [len(ids) for ids in sub_ids],
        [complex_.differential(k).block(sub_ids[k + 1], sub_ids[k]) for k in range(top + 1)],
        "column 0",
    )
    quot = MatrixComplex(
        [len(ids) for ids in quot_ids],
        [complex_.differential(k).block(quot_ids[k + 1], quot_ids[k]) for k in range(top + 1)],
        "columns >= 1",
    )
    inclusions = tuple(
        _coordinate_map(sub_ids[k], range(len(sub_ids[k])), complex_.dim(k), len(sub_ids[k]))
        for k in range(top + 2)
    )
    projections = tuple(
        _coordinate_map(range(len(quot_ids[k])), quot_ids[k], len(quot_ids[k]), complex_.dim(k))
        for k in range(top + 2)
    )
    return ShortExactSequence(f"column filtration of {complex_.name}",
                              sub, complex_, quot, inclusions, projections)


def cup_euler_matrix(nerve, twist, k):
    """Matrix of phi -> phi u1 F from C^{k-1}(Z^n) (basis (simplex, l)) to C^{k+1}(Z)"""
    sources = [(s, l) for s in nerve.simplices(k - 1) for l in range(twist.n)]
    targets = {s: i for i, s in enumerate(nerve.simplices(k + 1))}
    entries = {}
    for col, (sigma, l) in enumerate(sources):
        for tau in nerve.simplices(k + 1):
            if tau[:k] == sigma:
                value = twist.at(tau[k - 1:])[l]
                if value:
                    entries[(targets[tau], col)] = value
    return IntegerMatrix(len(targets), len(sources), entries)


def connecting_cup_defects(complex_):
    """Degrees k where the column-filtration connecting map of the two-column
    complex differs from (-1)^{k+1} phi u1 F on cohomology"""
    if complex_.columns != 2:
        raise ValueError("the connecting map is compared with u1 F on the two-column complex")
    ses = column_filtration(complex_)
    top = complex_.top_degree
    delta = connecting_matrices(ses, range(top))
    defects = []
    for k in range(1, top):
        cocycles = kernel_basis(ses.quot.differential(k), ses.quot.snf(k))
        if cocycles.shape[1] == 0:
            continue
        cup = cup_euler_matrix(complex_.nerve, complex_.twist, k).to_dense() * (-1) ** (k + 1)
        difference = (delta[k] - cup).dot(cocycles)
        boundaries = image_basis(ses.sub.differential(k), ses.sub.snf(k))
        if not lattice_includes(boundaries, difference):
            defects.append(k)
    return defects
