"""
Standard setups, m-data and the surjectivity Tu-Cech cocycle

All circle-valued quantities are written additively in Q/Z. The base is sampled:
each BaseSample is a point z of the base, recorded through its carrier (the cover
sets containing z, a simplex of the nerve) and local values s_ab(z) in Q^n for
every ordered pair of carrier vertices, with s_aa = 0, s_ba = -s_ab and
ds = F on the carrier's triangles.

Fiber points are (sample, xi) with xi in [0,1)^n; the integer lattice acts
trivially on them, and (-s).x = (sample, xi - s mod 1).

    w~_l(x)        = rep0(xi + s_{frame,l}) + offset_l(x)
    m_{l0 l1}(s,x) = s_{l0 l1} - w~_{l1}(x) + w~_{l0}((-s).x) + s
    phi(l0,l1,l2; s,t,x) = phi20_{012} + phi11_{01}(m12) - Q(m12, m01) + Q(F012, m02)

with m01 = m_{l0l1}(s,(-t)x), m12 = m_{l1l2}(t,x), m02 = m_{l0l2}(s+t,x) and
Q(m, l) = sum_{i<j} phi02_{l0,ij} m_i l_j.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from coefficients import (
    CIRCLE_ZERO,
    UpperTriValue,
    VectorValue,
    circle_reduce,
    mackey_bilinear,
    rep0,
    to_integer,
    upper_pairs,
)
from dimred_complex import DimRedCochain, d_f
from errors import InvalidInstance, LengthMismatch, NonInteger, NotInNerve
from homology import CheckReport
from nerve import Cochain, alternating_value, build_nerve, cech_differential
from twist import twist_from_support

logger = logging.getLogger(__name__)

DENOMINATORS = (1, 2, 3, 4, 6)


# ---------------------------------------------------------------------------
# setups and fiber samples
# ---------------------------------------------------------------------------

def _vector(values, n):
    out = tuple(Fraction(v) for v in values)
    if len(out) != n:
        raise LengthMismatch(f"vector of length {len(out)}, expected {n}")
    return out


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _neg(u):
    return tuple(-a for a in u)


def _rep0(u):
    return tuple(rep0(a) for a in u)


@dataclass(frozen=True)
class BaseSample:
    component: int
    carrier: tuple
    s: dict = field(compare=False)
    frame: int = 0

    def pair(self, a, b):
        try:
            return self.s[(a, b)]
        except KeyError:
            raise NotInNerve((a, b)) from None


@dataclass(frozen=True)
class FiberSample:
    sample: int
    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", _rep0(self.xi))

    def shifted(self, s):
        """(-s).x"""
        return FiberSample(self.sample, _sub(self.xi, s))


class StandardSetup:
    """Nerve, torus rank, base samples and per-component base vertices"""

    def __init__(self, nerve, n, samples, base=None):
        self.nerve = nerve
        self.n = n
        self.samples = tuple(samples)
        self.base = dict(base or {})
        if not self.samples:
            raise InvalidInstance("a standard setup needs at least one base sample")

    def sample(self, index):
        return self.samples[index]

    def s(self, index, a, b):
        return self.samples[index].pair(a, b)

    def euler(self, index, a, b, c):
        """ds on an arbitrary index triple; NonInteger when s is corrupted"""
        value = _add(_sub(self.s(index, b, c), self.s(index, a, c)), self.s(index, a, b))
        try:
            return tuple(to_integer(v) for v in value)
        except NonInteger as exc:
            raise NonInteger(exc.value, f"ds at sample {index}, indices {(a, b, c)} is {value}") from None

    def section(self, index, vertex):
        """sigma_l(z): the fiber point where w~_l vanishes before offsets"""
        sample = self.samples[index]
        return FiberSample(index, _neg(sample.pair(sample.frame, vertex)))

    def to_json(self):
        return {
            "n": self.n,
            "base": {f"component{c}": v for c, v in sorted(self.base.items())},
            "samples": [
                {
                    "component": sample.component,
                    "carrier": list(sample.carrier),
                    "frame": sample.frame,
                    "s": [{"pair": [a, b], "value": [str(v) for v in value]}
                          for (a, b), value in sorted(sample.s.items()) if a < b],
                }
                for sample in self.samples
            ],
        }


def _base_vertices(nerve, base=None):
    out = {}
    for v in nerve.vertices:
        out.setdefault(nerve.component_of(v), v)
    out.update(base or {})
    return out


def _frame(carrier, component, base):
    vertex = base.get(component)
    return vertex if vertex in carrier else carrier[0]


def _sample_from_frame(twist, carrier, frame, frame_values, component):
    """Complete s from s_{frame, v} using ds = F on the triangles through the frame"""
    n = twist.n
    zero = tuple(Fraction(0) for _ in range(n))
    s = {(v, v): zero for v in carrier}
    for v in carrier:
        if v != frame:
            s[(frame, v)] = frame_values[v]
            s[(v, frame)] = _neg(frame_values[v])
    for a, b in combinations(carrier, 2):
        if frame in (a, b):
            continue
        F = alternating_value(twist.F, (frame, a, b))
        s[(a, b)] = _sub(_add(tuple(Fraction(f) for f in F), s[(frame, b)]), s[(frame, a)])
        s[(b, a)] = _neg(s[(a, b)])
    return BaseSample(component, tuple(carrier), s, frame)


def random_rational(rng, bound=2):
    d = int(rng.choice(DENOMINATORS))
    return Fraction(int(rng.integers(-bound * d, bound * d + 1)), d)


def random_vector(rng, n, bound=2):
    return tuple(random_rational(rng, bound) for _ in range(n))


def random_integer_vector(rng, n, bound=3):
    return tuple(int(v) for v in rng.integers(-bound, bound + 1, size=n))


def random_standard_setup(nerve, twist, rng, samples_per_facet=2, base=None):
    """Base samples on every facet with random rational s_{frame, v}"""
    base = _base_vertices(nerve, base)
    samples = []
    for carrier in nerve.facets():
        component = nerve.component_of(carrier[0])
        frame = _frame(carrier, component, base)
        for _ in range(samples_per_facet):
            values = {v: random_vector(rng, twist.n) for v in carrier if v != frame}
            samples.append(_sample_from_frame(twist, carrier, frame, values, component))
    setup = StandardSetup(nerve, twist.n, samples, base)
    logger.debug("random standard setup", extra={"samples": len(samples), "n": twist.n})
    return setup


def standard_setup_from_s(nerve, n, pairs, base=None):
    """One sample per facet from a global s given on pairs {(a, b): vector}

    A pair given in one orientation gets its reverse by negation; pairs given in
    both orientations are kept as given so corrupted data stays visible.
    """
    base = _base_vertices(nerve, base)
    given = {(int(a), int(b)): _vector(v, n) for (a, b), v in pairs.items()}
    zero = tuple(Fraction(0) for _ in range(n))
    samples = []
    for carrier in nerve.facets():
        component = nerve.component_of(carrier[0])
        s = {}
        for a in carrier:
            for b in carrier:
                if (a, b) in given:
                    s[(a, b)] = given[(a, b)]
                elif (b, a) in given:
                    s[(a, b)] = _neg(given[(b, a)])
                elif a == b:
                    s[(a, b)] = zero
                else:
                    raise InvalidInstance(f"s is missing the pair {(a, b)}")
        samples.append(BaseSample(component, tuple(carrier), s, _frame(carrier, component, base)))
    return StandardSetup(nerve, n, samples, base)


def validate_setup(setup):
    """Raise NonInteger where ds is fractional on some ordered triple of a carrier"""
    for index, sample in enumerate(setup.samples):
        for a, b, c in product(sample.carrier, repeat=3):
            setup.euler(index, a, b, c)
    return setup


def check_setup(setup, twist=None):
    """Antisymmetry, s_ll = 0, integral ds and agreement with the twist on every sample"""
    report = CheckReport("setup")
    for index, sample in enumerate(setup.samples):
        for a in sample.carrier:
            report.record(not any(sample.pair(a, a)), sample=index, pair=(a, a), issue="s_ll != 0")
            for b in sample.carrier:
                report.record(not any(_add(sample.pair(a, b), sample.pair(b, a))),
                              sample=index, pair=(a, b), issue="antisymmetry")
        for a, b, c in product(sample.carrier, repeat=3):
            try:
                F = setup.euler(index, a, b, c)
            except NonInteger as exc:
                report.record(False, sample=index, indices=(a, b, c), error="NonInteger",
                              value=exc.value)
                continue
            if twist is not None and len({a, b, c}) == 3:
                expected = alternating_value(twist.F, (a, b, c))
                report.record(tuple(expected) == F, sample=index, indices=(a, b, c),
                              ds=F, twist=tuple(expected))
    return report


# ---------------------------------------------------------------------------
# lifts and m-data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WLiftData:
    """Integer offsets n_l(x) of the lifts w~_l

    Offsets come from `table` when present, otherwise from a generator seeded by
    (seed, vertex, sample, xi); they vanish at the section sigma_l of every sample.
    """

    seed: int = None
    spread: int = 2
    table: dict = field(default_factory=dict, compare=False)

    def offset(self, setup, vertex, x):
        if x == setup.section(x.sample, vertex):
            return (0,) * setup.n
        if (vertex, x) in self.table:
            return tuple(int(v) for v in self.table[(vertex, x)])
        if self.seed is None:
            return (0,) * setup.n
        entropy = [self.seed, vertex, x.sample]
        for q in x.xi:
            entropy += [q.numerator, q.denominator]
        rng = np.random.default_rng(entropy)
        return tuple(int(v) for v in rng.integers(-self.spread, self.spread + 1, size=setup.n))


def w_lift(setup, wdata, vertex, x):
    sample = setup.sample(x.sample)
    base = _rep0(_add(x.xi, sample.pair(sample.frame, vertex)))
    return _add(base, tuple(Fraction(v) for v in wdata.offset(setup, vertex, x)))


def m_value(setup, wdata, l0, l1, s, x):
    """m_{l0 l1}(s, x) in Z^n"""
    s = _vector(s, setup.n)
    value = _add(
        _add(_sub(setup.s(x.sample, l0, l1), w_lift(setup, wdata, l1, x)),
             w_lift(setup, wdata, l0, x.shifted(s))),
        s,
    )
    try:
        return tuple(to_integer(v) for v in value)
    except NonInteger:
        raise NonInteger(value, f"m_{l0}{l1}({s}, {x}) = {value} is not integral") from None


def mackey_pairing(f, m, l):
    """sum_{i<j} f_ij m_i l_j in Q/Z"""
    return mackey_bilinear(f, m, l)


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

def _bilinear(g, u, v):
    """sum_{i<j} g_ij u_i v_j over Q"""
    total = Fraction(0)
    for (i, j), entry in g.items():
        total += entry * u[i] * v[j]
    return total


class BrauerTriple:
    """(phi20, phi11, phi02) over Q/Z, evaluated on arbitrary index tuples of a sample's carrier"""

    def __init__(self, setup):
        self.setup = setup
        self.n = setup.n

    def phi20(self, sample, a, b, c):
        raise NotImplementedError

    def phi11(self, sample, a, b, m):
        raise NotImplementedError

    def phi02(self, sample, a):
        raise NotImplementedError

    def __add__(self, other):
        return SumTriple(self.setup, self, other)


class GTriple(BrauerTriple):
    """Triple built from a rational strictly upper triangular g per component

    phi02 = [g], phi11_ab(m) = [B(m, s_ab) - B(s_ab, m)],
    phi20_abc = [B(s_ab, s_bc) - B(ds_abc, s_ac)], B(u, v) = sum_{i<j} g_ij u_i v_j.
    The unreduced formulas are the rational lift.
    """

    def __init__(self, setup, g):
        super().__init__(setup)
        if isinstance(g, UpperTriValue):
            g = {c: g for c in set(setup.base) | {s.component for s in setup.samples}}
        self.g = {c: UpperTriValue.of(self.n, v.entries, "Q") for c, v in g.items()}

    def g_of(self, sample):
        return self.g.get(self.setup.sample(sample).component, UpperTriValue.zero(self.n, "Q"))

    def lift20(self, sample, a, b, c):
        g, s = self.g_of(sample), self.setup.s
        F = self.setup.euler(sample, a, b, c)
        return _bilinear(g, s(sample, a, b), s(sample, b, c)) - _bilinear(g, F, s(sample, a, c))

    def lift11(self, sample, a, b, m):
        g, s_ab = self.g_of(sample), self.setup.s(sample, a, b)
        return _bilinear(g, m, s_ab) - _bilinear(g, s_ab, m)

    def lift02(self, sample, a):
        return self.g_of(sample)

    def phi20(self, sample, a, b, c):
        return circle_reduce(self.lift20(sample, a, b, c))

    def phi11(self, sample, a, b, m):
        return circle_reduce(self.lift11(sample, a, b, m))

    def phi02(self, sample, a):
        return self.g_of(sample).map(circle_reduce, "QZ")


class PullbackTriple(BrauerTriple):
    """(beta, 0, 0) for a Q/Z-valued Cech 2-cocycle beta, extended alternatingly"""

    def __init__(self, setup, beta):
        super().__init__(setup)
        self.beta = beta

    def phi20(self, sample, a, b, c):
        return alternating_value(self.beta, (a, b, c))

    def phi11(self, sample, a, b, m):
        return CIRCLE_ZERO

    def phi02(self, sample, a):
        return UpperTriValue.zero(self.n, "QZ")


class SumTriple(BrauerTriple):
    def __init__(self, setup, *parts):
        super().__init__(setup)
        self.parts = parts

    def phi20(self, sample, a, b, c):
        return sum((p.phi20(sample, a, b, c) for p in self.parts), CIRCLE_ZERO)

    def phi11(self, sample, a, b, m):
        return sum((p.phi11(sample, a, b, m) for p in self.parts), CIRCLE_ZERO)

    def phi02(self, sample, a):
        return sum((p.phi02(sample, a) for p in self.parts[1:]), self.parts[0].phi02(sample, a))


def lift_triple_from_g(setup, g):
    return GTriple(setup, g)


def random_g(setup, rng):
    components = sorted(set(setup.base) | {s.component for s in setup.samples})
    return {
        c: UpperTriValue(setup.n, tuple(random_rational(rng, 1) for _ in upper_pairs(setup.n)), "Q")
        for c in components
    }


def random_pullback(setup, twist, rng):
    """beta = (c/d) F_0 + d eta for a random Q/Z 1-cochain eta"""
    nerve = setup.nerve
    eta = Cochain.from_function(nerve, 1, CIRCLE_ZERO,
                                lambda _: circle_reduce(random_rational(rng, 1)))
    beta = cech_differential(eta)
    if twist.n:
        d = int(rng.choice(DENOMINATORS[1:]))
        c = int(rng.integers(1, d + 1))
        beta = beta + twist.F.map(lambda v: circle_reduce(Fraction(c * v[0], d)), CIRCLE_ZERO)
    return PullbackTriple(setup, beta)


def random_triple(setup, twist, rng):
    return GTriple(setup, random_g(setup, rng)) + random_pullback(setup, twist, rng)


def check_triple(triple, setup, rng):
    """The three cocycle identities on every index tuple of every carrier, random m"""
    report = CheckReport("triple_cocycle")
    n = setup.n
    for index, sample in enumerate(setup.samples):
        carrier = sample.carrier
        for a, b in product(carrier, repeat=2):
            diff = triple.phi02(index, b) - triple.phi02(index, a)
            report.record(not diff, identity="d phi02 = 0", sample=index, indices=(a, b))

        for a, b, c in product(carrier, repeat=3):
            m = random_integer_vector(rng, n)
            F = setup.euler(index, a, b, c)
            f = triple.phi02(index, a)
            lhs = -(triple.phi11(index, b, c, m) - triple.phi11(index, a, c, m)
                    + triple.phi11(index, a, b, m))
            rhs = mackey_pairing(f, F, m) - mackey_pairing(f, m, F)
            report.record(lhs == rhs, identity="-d phi11(m) = Q(F, m) - Q(m, F)",
                          sample=index, indices=(a, b, c), m=m, lhs=lhs, rhs=rhs)

        for a, b, c, d in product(carrier, repeat=4):
            f = triple.phi02(index, a)
            lhs = (triple.phi20(index, b, c, d) - triple.phi20(index, a, c, d)
                   + triple.phi20(index, a, b, d) - triple.phi20(index, a, b, c))
            F_bcd = setup.euler(index, b, c, d)
            rhs = (triple.phi11(index, a, b, F_bcd)
                   + mackey_pairing(f, setup.euler(index, a, b, c), setup.euler(index, a, c, d))
                   - mackey_pairing(f, F_bcd, setup.euler(index, a, b, d)))
            report.record(lhs == rhs, identity="d phi20 = phi11(F) + g u2 C",
                          sample=index, indices=(a, b, c, d), lhs=lhs, rhs=rhs)
    return report


# ---------------------------------------------------------------------------
# the surjectivity cocycle
# ---------------------------------------------------------------------------

class SurjectivityCocycle:
    """phi(l0, l1, l2; s, t, x) on composable pairs ((s, (-t)x), (t, x))"""

    def __init__(self, triple, setup, wdata):
        self.triple = triple
        self.setup = setup
        self.wdata = wdata

    def m_data(self, l0, l1, l2, s, t, x):
        m = lambda a, b, g, y: m_value(self.setup, self.wdata, a, b, g, y)
        return m(l0, l1, s, x.shifted(t)), m(l1, l2, t, x), m(l0, l2, _add(s, t), x)

    def __call__(self, l0, l1, l2, s, t, x):
        s, t = _vector(s, self.setup.n), _vector(t, self.setup.n)
        index = x.sample
        m01, m12, m02 = self.m_data(l0, l1, l2, s, t, x)
        f = self.triple.phi02(index, l0)
        F = self.setup.euler(index, l0, l1, l2)
        return (self.triple.phi20(index, l0, l1, l2)
                + self.triple.phi11(index, l0, l1, m12)
                - mackey_pairing(f, m12, m01)
                + mackey_pairing(f, F, m02))


def surjectivity_cocycle(triple, setup, wdata):
    return SurjectivityCocycle(triple, setup, wdata)


@dataclass(frozen=True)
class ClosureSample:
    indices: tuple
    group: tuple
    x: FiberSample


def random_fiber_sample(setup, rng, sample=None):
    index = int(rng.integers(len(setup.samples))) if sample is None else sample
    return FiberSample(index, tuple(random_rational(rng, 1) for _ in range(setup.n)))


def closure_plan(setup, rng, count):
    """Random index quadruples (with repeats) x group triples x fiber samples"""
    plan = []
    for _ in range(count):
        x = random_fiber_sample(setup, rng)
        carrier = setup.sample(x.sample).carrier
        indices = tuple(int(v) for v in rng.choice(carrier, size=4))
        group = tuple(random_vector(rng, setup.n) for _ in range(3))
        plan.append(ClosureSample(indices, group, x))
    return plan


def check_tu_closure(phi, plan):
    """(d_Tu phi)(r,s,t,x) = phi_123(s,t,x) - phi_023(r+s,t,x) + phi_013(r,s+t,x) - phi_012(r,s,(-t)x)"""
    report = CheckReport("tu_closure")
    for item in plan:
        l0, l1, l2, l3 = item.indices
        r, s, t = item.group
        x = item.x
        try:
            value = (phi(l1, l2, l3, s, t, x)
                     - phi(l0, l2, l3, _add(r, s), t, x)
                     + phi(l0, l1, l3, r, _add(s, t), x)
                     - phi(l0, l1, l2, r, s, x.shifted(t)))
        except NonInteger as exc:
            report.record(False, indices=item.indices, group=item.group, x=x.xi,
                          sample=x.sample, error="NonInteger", value=exc.value)
            continue
        report.record(not value, indices=item.indices, group=item.group, x=x.xi,
                      sample=x.sample, value=value)
    return report


def check_m_data(setup, wdata, rng, count):
    """Integrality, coherence and both section normalizations at random samples"""
    report = CheckReport("m_data")
    n = setup.n
    for _ in range(count):
        x = random_fiber_sample(setup, rng)
        carrier = setup.sample(x.sample).carrier
        l0, l1, l2 = (int(v) for v in rng.choice(carrier, size=3))
        s, t = random_vector(rng, n), random_vector(rng, n)
        try:
            lhs = _sub(_add(m_value(setup, wdata, l0, l1, s, x.shifted(t)),
                            m_value(setup, wdata, l1, l2, t, x)),
                       m_value(setup, wdata, l0, l2, _add(s, t), x))
            F = setup.euler(x.sample, l0, l1, l2)
        except NonInteger as exc:
            report.record(False, law="integrality", sample=x.sample, error="NonInteger",
                          value=exc.value)
            continue
        report.record(lhs == tuple(Fraction(v) for v in F), law="coherence", sample=x.sample,
                      indices=(l0, l1, l2), s=s, t=t, got=lhs, expected=F)

        section = setup.section(x.sample, l1)
        first = m_value(setup, wdata, l0, l1, _neg(setup.s(x.sample, l0, l1)), section)
        report.record(not any(first), law="m_{l0 l1}(-s_{l0 l1}, sigma_l1) = 0",
                      sample=x.sample, indices=(l0, l1), got=first)
        k = random_integer_vector(rng, n)
        second = m_value(setup, wdata, l1, l1, k, section)
        report.record(second == k, law="m_{ll}(k, sigma_l) = k", sample=x.sample,
                      vertex=l1, got=second, expected=k)
    return report


# ---------------------------------------------------------------------------
# TuDimRed witnesses
# ---------------------------------------------------------------------------

def tudimred_witnesses(triple, setup, wdata, rng=None, count=50):
    """tau10 = 0, tau01_l(m) = -phi20_lll - Q_l(m, m) and a report on the three identities"""
    phi = surjectivity_cocycle(triple, setup, wdata)
    n = setup.n
    rng = rng if rng is not None else np.random.default_rng(0)

    def tau10(sample, a, b):
        return CIRCLE_ZERO

    def tau01(sample, a, m):
        return -triple.phi20(sample, a, a, a) - mackey_pairing(triple.phi02(sample, a), m, m)

    report = CheckReport("tudimred_identities")
    for _ in range(count):
        index = int(rng.integers(len(setup.samples)))
        carrier = setup.sample(index).carrier
        l0, l1, l2 = (int(v) for v in rng.choice(carrier, size=3))
        m, l = random_integer_vector(rng, n), random_integer_vector(rng, n)
        sigma0, sigma1, sigma2 = (setup.section(index, v) for v in (l0, l1, l2))
        s01, s12, s02 = setup.s(index, l0, l1), setup.s(index, l1, l2), setup.s(index, l0, l2)
        F = setup.euler(index, l0, l1, l2)
        minus_F = _neg(F)
        try:
            lhs = mackey_pairing(triple.phi02(index, l0), m, l)
            rhs = (tau01(index, l0, l) + tau01(index, l0, m) - tau01(index, l0, _add(m, l))
                   + phi(l0, l0, l0, m, l, sigma0))
            report.record(lhs == rhs, identity=1, sample=index, indices=(l0,), m=m, l=l,
                          lhs=lhs, rhs=rhs)

            lhs = triple.phi11(index, l0, l1, m)
            rhs = (tau01(index, l1, m) - tau01(index, l0, m)
                   + phi(l0, l1, l1, _neg(s01), m, sigma1)
                   - phi(l0, l0, l1, m, _neg(s01), sigma1))
            report.record(lhs == rhs, identity=2, sample=index, indices=(l0, l1), m=m,
                          lhs=lhs, rhs=rhs)

            lhs = triple.phi20(index, l0, l1, l2)
            rhs = (tau10(index, l1, l2) + tau10(index, l0, l1) - tau10(index, l0, l2)
                   - tau01(index, l0, minus_F)
                   + phi(l0, l1, l2, _neg(s01), _neg(s12), sigma2)
                   - phi(l0, l0, l2, minus_F, _neg(s02), sigma2))
            report.record(lhs == rhs, identity=3, sample=index, indices=(l0, l1, l2),
                          lhs=lhs, rhs=rhs)
        except NonInteger as exc:
            report.record(False, sample=index, error="NonInteger", value=exc.value)
    return tau10, tau01, report


# ---------------------------------------------------------------------------
# lift independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftBockstein:
    """Per base sample, D over Q of the rational lift: (Delta30, Delta21, Delta12)"""

    components: tuple

    @property
    def all_zero(self):
        return all(not c for _, parts in self.components for c in parts)

    def nonzero(self):
        return [(index, column, dict(c.values))
                for index, parts in self.components
                for column, c in enumerate(parts) if c]


def _carrier_lift(triple, index):
    """Rational lift of a g-triple as a degree-2 cochain triple on the carrier simplex"""
    setup = triple.setup
    n = setup.n
    carrier = setup.sample(index).carrier
    local = build_nerve([carrier])
    support = [((a, b, c), setup.euler(index, a, b, c)) for a, b, c in local.simplices(2)]
    twist = twist_from_support(local, n, support)
    units = [tuple(int(i == l) for i in range(n)) for l in range(n)]
    lift = DimRedCochain(
        2,
        Cochain.from_function(local, 2, Fraction(0), lambda t: triple.lift20(index, *t)),
        Cochain.from_function(local, 1, VectorValue.zero(n, "Q"), lambda e: VectorValue(
            tuple(triple.lift11(index, e[0], e[1], u) for u in units), "Q")),
        Cochain.from_function(local, 0, UpperTriValue.zero(n, "Q"),
                              lambda v: triple.lift02(index, v[0])),
    )
    return lift, twist


def _to_integers(value):
    if isinstance(value, (VectorValue, UpperTriValue)):
        return value.map(to_integer, "Z")
    return to_integer(value)


def _integral(c):
    try:
        return c.map(_to_integers, _to_integers(c.zero))
    except NonInteger as exc:
        raise NonInteger(exc.value, "Bockstein of the rational lift is not integral") from None


def bockstein_of_g_triple(setup, g):
    """Apply D over Q to the rational lift of the g-triple on every sample's carrier"""
    validate_setup(setup)
    triple = lift_triple_from_g(setup, g)
    components = []
    for index in range(len(setup.samples)):
        lift, twist = _carrier_lift(triple, index)
        image = d_f(lift, twist)
        parts = (image.column0, image.column1, image.column2)
        components.append((index, tuple(_integral(c) for c in parts)))
    result = LiftBockstein(tuple(components))
    logger.info("lift independence", extra={"samples": len(components), "zero": result.all_zero})
    return result
