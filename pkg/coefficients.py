"""
Exact coefficient arithmetic

Scalars come in three kinds, all written additively:
    "Z"   Python int
    "Q"   fractions.Fraction
    "QZ"  CircleScalar, an element of Q/Z kept as its representative in [0, 1)

VectorValue and UpperTriValue wrap tuples of one scalar kind. An UpperTriValue
stores the entries m_ij, i < j, in lexicographic pair order (0-based indices).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from numbers import Integral

from errors import LengthMismatch, NonInteger

SCALAR_KINDS = ("Z", "Q", "QZ")


@total_ordering
@dataclass(frozen=True)
class CircleScalar:
    """Element of Q/Z"""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - (v.numerator // v.denominator))

    def __add__(self, other):
        if not isinstance(other, CircleScalar):
            return NotImplemented
        return CircleScalar(self.value + other.value)

    def __sub__(self, other):
        if not isinstance(other, CircleScalar):
            return NotImplemented
        return CircleScalar(self.value - other.value)

    def __neg__(self):
        return CircleScalar(-self.value)

    def __mul__(self, other):
        # Q/Z is only a Z-module
        if isinstance(other, Integral):
            return CircleScalar(self.value * int(other))
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self):
        return self.value != 0

    def __lt__(self, other):
        return self.value < other.value

    def __str__(self):
        return f"{self.value} mod 1"

    @property
    def order(self):
        return self.value.denominator


CIRCLE_ZERO = CircleScalar(Fraction(0))


def circle_reduce(q):
    """Canonical representative of q mod 1 in [0, 1)"""
    return CircleScalar(Fraction(q))


def rep0(q):
    """The [0, 1) representative of q as a Fraction"""
    if isinstance(q, CircleScalar):
        return q.value
    return circle_reduce(q).value


def scalar_zero(kind):
    if kind == "Z":
        return 0
    if kind == "Q":
        return Fraction(0)
    if kind == "QZ":
        return CIRCLE_ZERO
    raise ValueError(f"Unknown scalar kind: {kind}")


def coerce_scalar(kind, value):
    if kind == "Z":
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise NonInteger(value)
            return value.numerator
        if isinstance(value, Integral):
            return int(value)
        q = Fraction(value)
        if q.denominator != 1:
            raise NonInteger(value)
        return q.numerator
    if kind == "Q":
        return Fraction(value)
    if kind == "QZ":
        return value if isinstance(value, CircleScalar) else circle_reduce(value)
    raise ValueError(f"Unknown scalar kind: {kind}")


def scalar_kind_of(value):
    if isinstance(value, CircleScalar):
        return "QZ"
    if isinstance(value, Fraction):
        return "Q"
    if isinstance(value, Integral):
        return "Z"
    raise TypeError(f"Not a scalar: {value!r}")


def to_integer(value):
    """Exact conversion of an integral Fraction/int, NonInteger otherwise"""
    value = Fraction(value)
    if value.denominator != 1:
        raise NonInteger(value)
    return value.numerator


def upper_pairs(n):
    """Index pairs (i, j), i < j, in storage order"""
    return list(combinations(range(n), 2))


def upper_rank(n):
    return n * (n - 1) // 2


@dataclass(frozen=True)
class VectorValue:
    components: tuple
    kind: str = "Z"

    @classmethod
    def zero(cls, n, kind="Z"):
        return cls(tuple(scalar_zero(kind) for _ in range(n)), kind)

    @classmethod
    def of(cls, values, kind="Z"):
        return cls(tuple(coerce_scalar(kind, v) for v in values), kind)

    @classmethod
    def unit(cls, n, index, kind="Z"):
        comps = [scalar_zero(kind)] * n
        comps[index] = coerce_scalar(kind, 1)
        return cls(tuple(comps), kind)

    @property
    def n(self):
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index):
        return self.components[index]

    def _check(self, other):
        if len(other) != len(self):
            raise LengthMismatch(f"vector lengths {len(self)} and {len(other)}")

    def __add__(self, other):
        self._check(other)
        return VectorValue(tuple(a + b for a, b in zip(self, other)), self.kind)

    def __sub__(self, other):
        self._check(other)
        return VectorValue(tuple(a - b for a, b in zip(self, other)), self.kind)

    def __neg__(self):
        return VectorValue(tuple(-a for a in self), self.kind)

    def scale(self, k):
        return VectorValue(tuple(a * k for a in self), self.kind)

    def __bool__(self):
        return any(bool(a) for a in self.components)

    def map(self, fn, kind):
        return VectorValue(tuple(fn(a) for a in self.components), kind)


@dataclass(frozen=True)
class UpperTriValue:
    n: int
    entries: tuple
    kind: str = "Z"

    def __post_init__(self):
        if len(self.entries) != upper_rank(self.n):
            raise LengthMismatch(
                f"expected {upper_rank(self.n)} upper entries for n={self.n}, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def zero(cls, n, kind="Z"):
        return cls(n, tuple(scalar_zero(kind) for _ in range(upper_rank(n))), kind)

    @classmethod
    def of(cls, n, values, kind="Z"):
        return cls(n, tuple(coerce_scalar(kind, v) for v in values), kind)

    @classmethod
    def from_mapping(cls, n, mapping, kind="Z"):
        """Build from {(i, j): value} with 0-based i < j"""
        return cls(
            n,
            tuple(coerce_scalar(kind, mapping.get(p, 0)) for p in upper_pairs(n)),
            kind,
        )

    @classmethod
    def unit(cls, n, pair, kind="Z"):
        return cls.from_mapping(n, {tuple(pair): 1}, kind)

    def get(self, i, j):
        return dict(zip(upper_pairs(self.n), self.entries))[(i, j)]

    def items(self):
        return zip(upper_pairs(self.n), self.entries)

    def _check(self, other):
        if other.n != self.n:
            raise LengthMismatch(f"upper-triangular ranks {self.n} and {other.n}")

    def __add__(self, other):
        self._check(other)
        return UpperTriValue(
            self.n, tuple(a + b for a, b in zip(self.entries, other.entries)), self.kind
        )

    def __sub__(self, other):
        self._check(other)
        return UpperTriValue(
            self.n, tuple(a - b for a, b in zip(self.entries, other.entries)), self.kind
        )

    def __neg__(self):
        return UpperTriValue(self.n, tuple(-a for a in self.entries), self.kind)

    def scale(self, k):
        return UpperTriValue(self.n, tuple(a * k for a in self.entries), self.kind)

    def __bool__(self):
        return any(bool(a) for a in self.entries)

    def map(self, fn, kind):
        return UpperTriValue(self.n, tuple(fn(a) for a in self.entries), kind)


def pair_vector(phi, F):
    """Sum of phi_l * F_l, with F integer valued"""
    if len(phi) != len(F):
        raise LengthMismatch(f"pairing lengths {len(phi)} and {len(F)}")
    total = scalar_zero(phi.kind)
    for a, f in zip(phi, F):
        total = total + a * int(f)
    return total


def mackey_bilinear(m, u, v):
    """Sum over i < j of m_ij u_i v_j"""
    if len(u) != m.n or len(v) != m.n:
        raise LengthMismatch(f"vectors of length {len(u)}, {len(v)} against n={m.n}")
    total = scalar_zero(m.kind)
    for (i, j), entry in m.items():
        total = total + entry * (int(u[i]) * int(v[j]))
    return total


def mackey_antisym(m, u, v):
    """Sum over i < j of m_ij (u_i v_j - v_i u_j)"""
    return mackey_bilinear(m, u, v) - mackey_bilinear(m, v, u)


def format_scalar(value):
    """JSON form: ints as numbers, rationals as "p/q", circle values as "p/q mod 1" """
    if isinstance(value, CircleScalar):
        return f"{value.value} mod 1"
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return int(value)


def parse_scalar(raw, kind=None):
    if isinstance(raw, str):
        text = raw.strip()
        if text.endswith("mod 1"):
            return circle_reduce(Fraction(text[: -len("mod 1")].strip()))
        value = Fraction(text)
    else:
        value = Fraction(raw)
    if kind is None:
        return value.numerator if value.denominator == 1 else value
    return coerce_scalar(kind, value)
