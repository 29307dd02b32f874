"""
Exact integer linear algebra and cohomology

Smith normal form over Z on numpy object arrays (Python ints, no overflow),
lattice quotients, cohomology groups of integer cochain complexes over Z, Q,
Q/Z and Z/N, coboundary solving, Bockstein maps, and exactness certificates for
long exact sequences induced by short exact sequences of complexes.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from coefficients import (
    CircleScalar,
    UpperTriValue,
    VectorValue,
    circle_reduce,
    format_scalar,
    rep0,
)
from errors import DegreeOutOfRange, NotACocycle, NotCoboundary, NotSES

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def _zeros(rows, cols):
    return np.zeros((rows, cols), dtype=object)


def _identity(n):
    out = _zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; entries maps (row, col) -> nonzero int"""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = int(v)
            if v:
                cleaned[(int(i), int(j))] = v
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, array):
        array = np.asarray(array, dtype=object)
        rows, cols = array.shape
        return cls(rows, cols, {
            (i, j): int(array[i, j])
            for i in range(rows) for j in range(cols) if array[i, j]
        })

    @property
    def shape(self):
        return (self.rows, self.cols)

    def to_dense(self):
        out = _zeros(self.rows, self.cols)
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, out)

    def scale(self, k):
        return IntegerMatrix(self.rows, self.cols, {p: v * k for p, v in self.entries.items()})

    def transpose(self):
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def block(self, row_ids, col_ids):
        row_pos = {r: p for p, r in enumerate(row_ids)}
        col_pos = {c: p for p, c in enumerate(col_ids)}
        return IntegerMatrix(len(row_ids), len(col_ids), {
            (row_pos[i], col_pos[j]): v
            for (i, j), v in self.entries.items() if i in row_pos and j in col_pos
        })

    def apply(self, vector, zero=0):
        """Matrix times a vector of any Z-module values"""
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} against {self.cols} columns")
        out = [zero] * self.rows
        for (i, j), v in self.entries.items():
            x = vector[j]
            if x:
                out[i] = out[i] + v * x
        return out

    def is_zero(self):
        return not self.entries

    def to_json(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }


def as_dense(matrix):
    if isinstance(matrix, IntegerMatrix):
        return matrix.to_dense()
    return np.asarray(matrix, dtype=object)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == S with U, V unimodular; U_inv is the inverse of U"""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    diagonal: tuple

    @property
    def rank(self):
        return len(self.diagonal)

    @property
    def factors(self):
        return [d for d in self.diagonal if d > 1]


def _select_pivot(M, t):
    sub = M[t:, t:]
    rows, cols = np.nonzero(sub)
    if len(rows) == 0:
        return None
    best = min(zip(rows, cols), key=lambda rc: (abs(sub[rc[0], rc[1]]), rc[0], rc[1]))
    return t + int(best[0]), t + int(best[1])


def smith_normal_form(A):
    """Deterministic Smith normal form

    Pivot: smallest absolute value in the remaining block, ties broken by the
    lexicographically first position.
    """
    M = as_dense(A).copy()
    m, n = M.shape
    U, U_inv, V = _identity(m), _identity(m), _identity(n)

    def swap_rows(a, b):
        if a != b:
            M[[a, b], :] = M[[b, a], :]
            U[[a, b], :] = U[[b, a], :]
            U_inv[:, [a, b]] = U_inv[:, [b, a]]

    def swap_cols(a, b):
        if a != b:
            M[:, [a, b]] = M[:, [b, a]]
            V[:, [a, b]] = V[:, [b, a]]

    def add_row(src, dst, f):
        # row dst += f * row src
        M[dst, :] = M[dst, :] + f * M[src, :]
        U[dst, :] = U[dst, :] + f * U[src, :]
        U_inv[:, src] = U_inv[:, src] - f * U_inv[:, dst]

    def add_col(src, dst, f):
        M[:, dst] = M[:, dst] + f * M[:, src]
        V[:, dst] = V[:, dst] + f * V[:, src]

    t = 0
    while t < min(m, n):
        pivot = _select_pivot(M, t)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        p = M[t, t]

        for i in range(t + 1, m):
            if M[i, t]:
                add_row(t, i, -(M[i, t] // p))
        for j in range(t + 1, n):
            if M[t, j]:
                add_col(t, j, -(M[t, j] // p))
        if any(M[i, t] for i in range(t + 1, m)) or any(M[t, j] for j in range(t + 1, n)):
            continue

        bad = next(
            (i for i in range(t + 1, m) if any(M[i, j] % p for j in range(t + 1, n))),
            None,
        )
        if bad is not None:
            add_row(bad, t, 1)
            continue

        if p < 0:
            M[t, :] = -M[t, :]
            U[t, :] = -U[t, :]
            U_inv[:, t] = -U_inv[:, t]
        t += 1

    diagonal = tuple(int(M[i, i]) for i in range(min(m, n)) if M[i, i])
    return SmithDecomposition(U, M, V, U_inv, diagonal)


def kernel_basis(A, snf=None):
    """Columns spanning {x : A x = 0} over Z"""
    snf = snf or smith_normal_form(A)
    return snf.V[:, snf.rank:]


def image_basis(A, snf=None):
    """Columns forming a Z-basis of the column span of A"""
    snf = snf or smith_normal_form(A)
    out = snf.U_inv[:, : snf.rank].copy()
    for i, d in enumerate(snf.diagonal):
        out[:, i] = out[:, i] * d
    return out


def rational_rank(A):
    """Rank over Q by fraction-exact Gaussian elimination"""
    M = [[Fraction(v) for v in row] for row in as_dense(A).tolist()]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r][c] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for r in range(rows):
            if r != rank and M[r][c] != 0:
                factor = M[r][c] / M[rank][c]
                M[r] = [a - factor * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def solve_integer(A, b, snf=None):
    """Integer x with A x = b, NotCoboundary carrying the residue otherwise"""
    snf = snf or smith_normal_form(A)
    b = [int(v) for v in b]
    y = [sum(int(snf.U[i, j]) * b[j] for j in range(len(b))) for i in range(snf.U.shape[0])]
    residue = []
    for i, value in enumerate(y):
        if i < snf.rank:
            d = snf.diagonal[i]
            if value % d:
                residue.append((i, value % d, d))
        elif value:
            residue.append((i, value, 0))
    if residue:
        raise NotCoboundary(residue)
    cols = snf.V.shape[0]
    x_prime = [y[i] // snf.diagonal[i] if i < snf.rank else 0 for i in range(cols)]
    return [sum(int(snf.V[r, c]) * x_prime[c] for c in range(cols)) for r in range(cols)]


def solve_rational(A, b, snf=None):
    snf = snf or smith_normal_form(A)
    b = [Fraction(v) for v in b]
    y = [sum((int(snf.U[i, j]) * b[j] for j in range(len(b))), Fraction(0))
         for i in range(snf.U.shape[0])]
    residue = [(i, v, 0) for i, v in enumerate(y) if i >= snf.rank and v]
    if residue:
        raise NotCoboundary(residue)
    cols = snf.V.shape[0]
    x_prime = [y[i] / snf.diagonal[i] if i < snf.rank else Fraction(0) for i in range(cols)]
    return [sum((int(snf.V[r, c]) * x_prime[c] for c in range(cols)), Fraction(0))
            for r in range(cols)]


def solve_circle(A, b, snf=None):
    """x in (Q/Z)^n with A x = b in (Q/Z)^m"""
    snf = snf or smith_normal_form(A)
    b = [rep0(v) for v in b]
    y = [sum((int(snf.U[i, j]) * b[j] for j in range(len(b))), Fraction(0))
         for i in range(snf.U.shape[0])]
    residue = [(i, v - (v.numerator // v.denominator), 1)
               for i, v in enumerate(y) if i >= snf.rank and v.denominator != 1]
    if residue:
        raise NotCoboundary(residue)
    cols = snf.V.shape[0]
    x_prime = [y[i] / snf.diagonal[i] if i < snf.rank else Fraction(0) for i in range(cols)]
    return [circle_reduce(sum((int(snf.V[r, c]) * x_prime[c] for c in range(cols)), Fraction(0)))
            for r in range(cols)]


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def hstack(rows, *blocks):
    parts = []
    for b in blocks:
        b = as_dense(b)
        if b.ndim != 2 or b.shape[0] != rows:
            if b.size:
                raise ValueError(f"block of shape {b.shape} does not have {rows} rows")
            b = _zeros(rows, 0)
        parts.append(b)
    if not parts:
        return _zeros(rows, 0)
    return np.hstack(parts).astype(object)


def lattice_contains(gens, vector, snf=None):
    try:
        solve_integer(gens, vector, snf)
    except NotCoboundary:
        return False
    return True


def lattice_includes(big, small):
    """Every column of small lies in the Z-span of the columns of big"""
    small = as_dense(small)
    if small.shape[1] == 0:
        return True
    snf = smith_normal_form(big)
    return all(lattice_contains(big, list(small[:, j]), snf) for j in range(small.shape[1]))


def lattice_equal(a, b):
    return lattice_includes(a, b) and lattice_includes(b, a)


@dataclass(frozen=True)
class LatticeQuotient:
    """L/K = Z^free_rank + sum Z/factors; generators are representatives in L"""

    free_rank: int
    factors: tuple
    torsion_generators: tuple
    free_generators: tuple


def lattice_quotient(L, K):
    """Structure of L/K for lattices given by generator columns, K inside L"""
    L = as_dense(L)
    K = as_dense(K)
    basis = image_basis(L)
    rank_L = basis.shape[1]
    basis_snf = smith_normal_form(basis)
    coords = _zeros(rank_L, K.shape[1])
    for j in range(K.shape[1]):
        coords[:, j] = solve_integer(basis, list(K[:, j]), basis_snf)

    snf = smith_normal_form(coords)
    new_basis = basis.dot(snf.U_inv) if rank_L else basis
    factors, torsion_gens = [], []
    for i, d in enumerate(snf.diagonal):
        if d > 1:
            factors.append(d)
            torsion_gens.append(tuple(int(v) for v in new_basis[:, i]))
    free_gens = tuple(
        tuple(int(v) for v in new_basis[:, i]) for i in range(snf.rank, rank_L)
    )
    return LatticeQuotient(rank_L - snf.rank, tuple(factors), tuple(torsion_gens), free_gens)


def canonical_factors(orders):
    """Invariant factors (divisibility chain, no 1s) of a sum of cyclic groups"""
    orders = [int(o) for o in orders if int(o) > 1]
    if not orders:
        return ()
    diag = _zeros(len(orders), len(orders))
    for i, o in enumerate(orders):
        diag[i, i] = o
    return tuple(smith_normal_form(diag).factors)


# ---------------------------------------------------------------------------
# complexes and cohomology
# ---------------------------------------------------------------------------

class MatrixComplex:
    """Cochain complex of free Z-modules: dims[k] and d^k : C^k -> C^{k+1}"""

    def __init__(self, dims, differentials, name=""):
        dims = tuple(int(d) for d in dims)
        differentials = tuple(differentials)
        if len(dims) != len(differentials) + 1:
            raise ValueError("need one more dimension than differentials")
        for k, d in enumerate(differentials):
            if d.shape != (dims[k + 1], dims[k]):
                raise ValueError(f"d^{k} has shape {d.shape}, expected {(dims[k + 1], dims[k])}")
        self.dims = dims
        self.differentials = differentials
        self.name = name
        self._snf = {}

    @property
    def top_degree(self):
        return len(self.differentials) - 1

    def dim(self, k):
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def differential(self, k):
        if k == -1:
            return IntegerMatrix.zeros(self.dim(0), 0)
        if 0 <= k <= self.top_degree:
            return self.differentials[k]
        raise DegreeOutOfRange(f"d^{k} not assembled (top degree {self.top_degree})")

    def snf(self, k):
        if k not in self._snf:
            self._snf[k] = smith_normal_form(self.differential(k))
        return self._snf[k]

    def check_degree(self, k):
        if not 0 <= k <= self.top_degree:
            raise DegreeOutOfRange(
                f"degree {k} outside 0..{self.top_degree} for complex {self.name or '?'}"
            )

    def square_defects(self):
        """Degrees k where d^{k+1} d^k is not the zero matrix"""
        return [
            k for k in range(self.top_degree)
            if not (self.differentials[k + 1] @ self.differentials[k]).is_zero()
        ]


@dataclass(frozen=True)
class CohomologyGroup:
    rank: int
    torsion: tuple = ()
    coefficients: str = "Z"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion), "coefficients": self.coefficients}

    def __str__(self):
        free = {"Z": "Z", "Q": "Q", "Q/Z": "(Q/Z)"}.get(self.coefficients, "Z")
        parts = []
        if self.rank == 1:
            parts.append(free)
        elif self.rank > 1:
            parts.append(f"{free}^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


SCALAR_LABELS = {"Z": "Z", "Q": "Q", "QZ": "Q/Z"}


def cohomology_group(complex_, k, scalar="Z", modulus=None):
    complex_.check_degree(k)
    if scalar == "Z":
        snf_k, snf_prev = complex_.snf(k), complex_.snf(k - 1)
        rank = complex_.dim(k) - snf_k.rank - snf_prev.rank
        group = CohomologyGroup(rank, tuple(snf_prev.factors), "Z")
    elif scalar == "Q":
        rank = (complex_.dim(k) - rational_rank(complex_.differential(k))
                - rational_rank(complex_.differential(k - 1)))
        group = CohomologyGroup(rank, (), "Q")
    elif scalar == "QZ":
        integral = cohomology_group(complex_, k, "Z")
        group = CohomologyGroup(integral.rank, tuple(complex_.snf(k).factors), "Q/Z")
    elif scalar == "Z/N":
        if not modulus or modulus < 2:
            raise ValueError("Z/N coefficients need a modulus N >= 2")
        group = mod_n_cohomology(complex_, k, modulus)
    else:
        raise ValueError(f"Unknown scalar: {scalar}")
    logger.debug("cohomology", extra={"degree": k, "scalar": scalar, "group": str(group)})
    return group


def mod_n_cocycle_generators(complex_, k, modulus):
    """Generators of {x in Z^m : d^k x = 0 mod N}"""
    d = complex_.differential(k).to_dense()
    p, m = d.shape
    aug = hstack(p, d, _identity(p) * modulus)
    return kernel_basis(aug)[:m, :]


def mod_n_coboundary_generators(complex_, k, modulus):
    m = complex_.dim(k)
    return hstack(m, image_basis(complex_.differential(k - 1), complex_.snf(k - 1)),
                  _identity(m) * modulus)


def mod_n_cohomology(complex_, k, modulus):
    """H^k with Z/N coefficients computed at chain level"""
    complex_.check_degree(k)
    quotient = lattice_quotient(
        mod_n_cocycle_generators(complex_, k, modulus),
        mod_n_coboundary_generators(complex_, k, modulus),
    )
    return CohomologyGroup(0, canonical_factors(quotient.factors), f"Z/{modulus}")


def uct_mod_n(complex_, k, modulus):
    """H^k(Z) (x) Z/N + Tor(H^{k+1}(Z), Z/N) as invariant factors"""
    here = cohomology_group(complex_, k, "Z")
    above = complex_.snf(k).factors
    orders = [modulus] * here.rank
    orders += [gcd(d, modulus) for d in here.torsion]
    orders += [gcd(d, modulus) for d in above]
    return CohomologyGroup(0, canonical_factors(orders), f"Z/{modulus}")


def coboundary_witness(complex_, k, z, scalar="Z"):
    """x with d^{k-1} x = z, solved over Z, Q or Q/Z"""
    complex_.check_degree(k)
    d_k = complex_.differential(k)
    if scalar == "QZ":
        image = d_k.apply([rep0(v) for v in z], Fraction(0))
        if any(Fraction(v).denominator != 1 for v in image):
            raise NotACocycle(f"degree {k} cochain is not closed over Q/Z")
        return solve_circle(complex_.differential(k - 1), z, complex_.snf(k - 1))
    image = d_k.apply(list(z), 0)
    if any(image):
        raise NotACocycle(f"degree {k} cochain is not closed")
    if scalar == "Q":
        return solve_rational(complex_.differential(k - 1), z, complex_.snf(k - 1))
    return solve_integer(complex_.differential(k - 1), z, complex_.snf(k - 1))


def is_coboundary(complex_, k, z, scalar="Z"):
    try:
        coboundary_witness(complex_, k, z, scalar)
    except NotCoboundary:
        return False
    return True


def bockstein(complex_, k, z):
    """Lift a Q/Z k-cocycle to [0,1) representatives, differentiate over Q"""
    complex_.check_degree(k)
    lifted = [rep0(v) for v in z]
    image = complex_.differential(k).apply(lifted, Fraction(0))
    if any(Fraction(v).denominator != 1 for v in image):
        raise NotACocycle(f"degree {k} cochain is not closed over Q/Z")
    return [int(Fraction(v)) for v in image]


def class_order(complex_, k, y):
    """Order of the class of an integer k-cocycle y; None if it has infinite order"""
    snf = complex_.snf(k - 1)
    w = [sum(int(snf.U[i, j]) * int(y[j]) for j in range(len(y))) for i in range(snf.U.shape[0])]
    if any(w[i] for i in range(snf.rank, len(w))):
        return None
    order = 1
    for i, d in enumerate(snf.diagonal):
        order = lcm(order, d // gcd(d, w[i]))
    return order


@dataclass(frozen=True)
class BocksteinWitness:
    order: int
    cocycle: tuple   # Q/Z values on the degree-k basis
    target: tuple    # integer (k+1)-cocycle of exact order `order`


def torsion_witnesses(complex_, k):
    """For each invariant factor d of H^{k+1}(Z): a (1/d)Z/Z k-cocycle and its Bockstein target"""
    complex_.check_degree(k)
    snf = complex_.snf(k)
    witnesses = []
    for i, d in enumerate(snf.diagonal):
        if d < 2:
            continue
        x = snf.V[:, i]
        z = tuple(circle_reduce(Fraction(int(v), d)) for v in x)
        y = tuple(int(v) for v in snf.U_inv[:, i])
        witnesses.append(BocksteinWitness(d, z, y))
    return witnesses


# ---------------------------------------------------------------------------
# long exact sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> sub -> mid -> quot -> 0, maps given per degree 0..top+1"""

    name: str
    sub: MatrixComplex
    mid: MatrixComplex
    quot: MatrixComplex
    inclusions: tuple
    projections: tuple


@dataclass(frozen=True)
class LESNode:
    label: str
    degree: int
    exact: bool
    group: str
    image: str
    kernel: str

    def to_json(self):
        return {
            "label": self.label,
            "degree": self.degree,
            "exact": self.exact,
            "group": self.group,
            "image": self.image,
            "kernel": self.kernel,
        }


@dataclass
class LESReport:
    name: str
    nodes: list = field(default_factory=list)
    connecting_zero: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(node.exact for node in self.nodes)

    def failures(self):
        return [node for node in self.nodes if not node.exact]

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "nodes": [node.to_json() for node in self.nodes],
            "connecting_zero": {str(k): v for k, v in sorted(self.connecting_zero.items())},
        }


def jsonable(value):
    """Witness values as JSON: scalars via format_scalar, containers recursively"""
    if isinstance(value, (CircleScalar, Fraction)):
        return format_scalar(value)
    if isinstance(value, (VectorValue, tuple, list)):
        return [jsonable(v) for v in value]
    if isinstance(value, UpperTriValue):
        return {f"{i},{j}": jsonable(v) for (i, j), v in value.items()}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return str(value)


@dataclass
class CheckReport:
    """Pointwise verification outcome: how many samples were checked and which failed"""

    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures

    def record(self, ok, **context):
        self.checked += 1
        if not ok:
            self.failures.append(context)
        return ok

    def merge(self, other):
        self.checked += other.checked
        self.failures.extend(other.failures)
        return self

    def to_json(self, max_failures=20):
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failure_count": len(self.failures),
            "failures": [jsonable(f) for f in self.failures[:max_failures]],
            "notes": jsonable(self.notes),
        }


def _quotient_label(q):
    return str(CohomologyGroup(q.free_rank, canonical_factors(q.factors)))


def _check_ses(ses, degrees):
    for k in degrees:
        i = ses.inclusions[k]
        p = ses.projections[k]
        a, b, c = ses.sub.dim(k), ses.mid.dim(k), ses.quot.dim(k)
        if i.shape != (b, a) or p.shape != (c, b):
            raise NotSES(f"degree {k}: map shapes {i.shape}, {p.shape} against dims {a}, {b}, {c}")
        if not (p @ i).is_zero():
            raise NotSES(f"degree {k}: projection after inclusion is not zero")
        snf_i, snf_p = smith_normal_form(i), smith_normal_form(p)
        if snf_i.rank != a or snf_i.factors:
            raise NotSES(f"degree {k}: inclusion is not a split injection")
        if snf_p.rank != c or snf_p.factors:
            raise NotSES(f"degree {k}: projection is not surjective")
        if not lattice_includes(image_basis(i, snf_i), kernel_basis(p, snf_p)):
            raise NotSES(f"degree {k}: kernel of the projection exceeds the image of the inclusion")


def _section(p):
    """s with p s = id, by integer solves against unit vectors"""
    snf = smith_normal_form(p)
    rows, cols = p.shape
    out = _zeros(cols, rows)
    for j in range(rows):
        unit = [0] * rows
        unit[j] = 1
        out[:, j] = solve_integer(p, unit, snf)
    return out


def _retraction(i):
    """r with r i = id for a split injection i"""
    snf = smith_normal_form(i)
    a = i.shape[1]
    return snf.V.dot(snf.U[:a, :]) if a else _zeros(0, i.shape[0])


def connecting_matrices(ses, degrees):
    out = {}
    for k in degrees:
        s = _section(ses.projections[k])
        r = _retraction(ses.inclusions[k + 1])
        d = ses.mid.differential(k).to_dense()
        out[k] = r.dot(d).dot(s) if r.size and s.size else _zeros(ses.sub.dim(k + 1), ses.quot.dim(k))
    return out


def _node(label, degree, f_image, X, kX, g, Y, kY):
    """Exactness at H^kX(X): image of the incoming map equals the kernel of the outgoing one"""
    m = X.dim(kX)
    boundaries = image_basis(X.differential(kX - 1), X.snf(kX - 1))
    left = hstack(m, f_image, boundaries)

    cocycles = kernel_basis(X.differential(kX), X.snf(kX))
    target_boundaries = image_basis(Y.differential(kY - 1), Y.snf(kY - 1)) if Y.dim(kY) else _zeros(0, 0)
    if Y.dim(kY) == 0 or cocycles.shape[1] == 0:
        right = cocycles
    else:
        g_z = as_dense(g).dot(cocycles)
        system = hstack(Y.dim(kY), g_z, -target_boundaries)
        coords = kernel_basis(system)[: cocycles.shape[1], :]
        right = cocycles.dot(coords)
    right = hstack(m, right, boundaries)

    exact = lattice_equal(left, right)
    return LESNode(
        label=label,
        degree=degree,
        exact=exact,
        group=_quotient_label(lattice_quotient(kernel_basis(X.differential(kX), X.snf(kX)), boundaries)),
        image=_quotient_label(lattice_quotient(left, boundaries)),
        kernel=_quotient_label(lattice_quotient(right, boundaries)),
    )


def verify_exactness(ses, top=None):
    """Assemble the long exact sequence of ses and certify exactness at every node"""
    top = min(ses.sub.top_degree, ses.mid.top_degree, ses.quot.top_degree) if top is None else top
    _check_ses(ses, range(top + 2))
    delta = connecting_matrices(ses, range(top + 1))
    report = LESReport(ses.name)

    for k in range(top + 1):
        if k == 0:
            incoming = _zeros(ses.sub.dim(0), 0)
        else:
            z_prev = kernel_basis(ses.quot.differential(k - 1), ses.quot.snf(k - 1))
            incoming = delta[k - 1].dot(z_prev) if z_prev.size else _zeros(ses.sub.dim(k), 0)
        report.nodes.append(_node(
            f"H^{k}(sub)", k, incoming, ses.sub, k, ses.inclusions[k].to_dense(), ses.mid, k,
        ))

        z_sub = kernel_basis(ses.sub.differential(k), ses.sub.snf(k))
        incoming = ses.inclusions[k].to_dense().dot(z_sub) if z_sub.size else _zeros(ses.mid.dim(k), 0)
        report.nodes.append(_node(
            f"H^{k}(mid)", k, incoming, ses.mid, k, ses.projections[k].to_dense(), ses.quot, k,
        ))

        z_mid = kernel_basis(ses.mid.differential(k), ses.mid.snf(k))
        incoming = ses.projections[k].to_dense().dot(z_mid) if z_mid.size else _zeros(ses.quot.dim(k), 0)
        report.nodes.append(_node(
            f"H^{k}(quot)", k, incoming, ses.quot, k, delta[k], ses.sub, k + 1,
        ))

        z_quot = kernel_basis(ses.quot.differential(k), ses.quot.snf(k))
        if z_quot.size == 0 or delta[k].size == 0:
            report.connecting_zero[k] = True
        else:
            boundaries = image_basis(ses.sub.differential(k), ses.sub.snf(k))
            report.connecting_zero[k] = lattice_includes(boundaries, delta[k].dot(z_quot))

    logger.info("verified long exact sequence",
                extra={"sequence": ses.name, "nodes": len(report.nodes), "passed": report.passed})
    return report


def default_moduli(complex_, k):
    orders = list(complex_.snf(k - 1).factors) + list(complex_.snf(k).factors)
    moduli = {2, 3}
    if orders:
        moduli.add(lcm(*orders) * 2)
    return sorted(moduli)


def coefficient_les_report(complex_, top=None, moduli=None):
    """Certify the Z -> Q -> Q/Z long exact sequence by accounting and witnesses"""
    top = complex_.top_degree if top is None else top
    report = LESReport(f"{complex_.name or 'complex'}: Z -> Q -> Q/Z")
    for k in range(top + 1):
        hz = cohomology_group(complex_, k, "Z")
        hq = cohomology_group(complex_, k, "Q")
        hqz = cohomology_group(complex_, k, "QZ")

        # torsion of H^k(Z) is exactly the Bockstein image of H^{k-1}(Q/Z)
        orders = []
        witnesses_ok = True
        if k >= 1:
            for w in torsion_witnesses(complex_, k - 1):
                lifted = bockstein(complex_, k - 1, w.cocycle)
                difference = [a - b for a, b in zip(lifted, w.target)]
                witnesses_ok &= is_coboundary(complex_, k, difference)
                witnesses_ok &= class_order(complex_, k, w.target) == w.order
                orders.append(w.order)
        exact_z = witnesses_ok and tuple(orders) == hz.torsion
        report.nodes.append(LESNode(
            f"H^{k}(Z)", k, exact_z, str(hz),
            str(CohomologyGroup(0, tuple(orders))), str(CohomologyGroup(0, hz.torsion)),
        ))

        report.nodes.append(LESNode(f"H^{k}(Q)", k, hq.rank == hz.rank, str(hq),
                                    f"Q^{hz.rank}", f"Q^{hq.rank}"))

        checks = [(N, mod_n_cohomology(complex_, k, N), uct_mod_n(complex_, k, N))
                  for N in (moduli or default_moduli(complex_, k))]
        exact_qz = all(a == b for _, a, b in checks)
        report.nodes.append(LESNode(
            f"H^{k}(Q/Z)", k, exact_qz, str(hqz),
            "; ".join(f"Z/{N}: {a}" for N, a, _ in checks),
            "; ".join(f"Z/{N}: {b}" for N, _, b in checks),
        ))
        report.connecting_zero[k] = not hqz.torsion
    return report
