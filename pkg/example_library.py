"""
Worked examples as instance dictionaries

Each builder returns the JSON-ready instance for one fixture. The 7-vertex torus
triangulation is checked against H^0 = Z, H^1 = Z^2, H^2 = Z before it is used.
"""

import logging
from functools import lru_cache

from dimred_complex import cech_cohomology
from errors import InvalidInstance, UnknownExample
from homology import CohomologyGroup
from nerve import build_nerve

logger = logging.getLogger(__name__)

BOUNDARY_TETRAHEDRON = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
CIRCLE = [[0, 1], [1, 2], [0, 2]]
TORUS_GENERATOR = [0, 1, 3]
TORUS_COHOMOLOGY = (CohomologyGroup(1), CohomologyGroup(2), CohomologyGroup(1))


def torus_triangles():
    """{i, i+1, i+3} and {i, i+2, i+3} mod 7"""
    triangles = set()
    for i in range(7):
        triangles.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        triangles.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return [list(t) for t in sorted(triangles)]


@lru_cache(maxsize=1)
def validated_torus_facets():
    facets = torus_triangles()
    nerve = build_nerve(facets)
    groups = tuple(cech_cohomology(nerve, k) for k in range(3))
    if groups != TORUS_COHOMOLOGY:
        raise InvalidInstance(
            f"torus triangulation has cohomology {[str(g) for g in groups]}, expected Z, Z^2, Z"
        )
    logger.debug("validated torus nerve", extra={"triangles": len(facets)})
    return tuple(tuple(f) for f in facets)


def _instance(name, facets, n, support, parameters, degrees=(0, 1, 2, 3)):
    return {
        "name": name,
        "nerve": {"facets": [list(f) for f in facets]},
        "twist": {
            "n": n,
            "support": [{"simplex": list(simplex), "value": list(value)} for simplex, value in support],
        },
        "setup": "random",
        "compute": {"degrees": list(degrees), "coefficients": ["Z"]},
        "parameters": parameters,
    }


def hopf():
    return _instance("hopf", BOUNDARY_TETRAHEDRON, 1, [([0, 1, 2], [1])], {})


def lens(k=2):
    return _instance(f"lens-{k}", BOUNDARY_TETRAHEDRON, 1, [([0, 1, 2], [k])], {"k": k})


def t3():
    return _instance("t3", CIRCLE, 2, [], {})


def nilmanifold(k=1):
    return _instance(f"nilmanifold-{k}", validated_torus_facets(), 1,
                     [(TORUS_GENERATOR, [k])], {"k": k})


def s2_rank2(euler=(2, 0)):
    a, b = euler
    support = [([0, 1, 2], [a, b])] if (a, b) != (0, 0) else []
    return _instance("s2-rank2", BOUNDARY_TETRAHEDRON, 2, support, {"euler": [a, b]})


def torus_nerve(euler=(0, 0)):
    a, b = euler
    support = [(TORUS_GENERATOR, [a, b])] if (a, b) != (0, 0) else []
    return _instance("torus-nerve", validated_torus_facets(), 2, support, {"euler": [a, b]},
                     degrees=(0, 1, 2))


EXAMPLES = {
    "hopf": lambda k, euler: hopf(),
    "lens": lambda k, euler: lens(2 if k is None else k),
    "t3": lambda k, euler: t3(),
    "nilmanifold": lambda k, euler: nilmanifold(1 if k is None else k),
    "s2-rank2": lambda k, euler: s2_rank2((2, 0) if euler is None else euler),
    "torus-nerve": lambda k, euler: torus_nerve((0, 0) if euler is None else euler),
}


def build_example(name, k=None, euler=None):
    try:
        builder = EXAMPLES[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(sorted(EXAMPLES))}") from None
    return builder(k, tuple(euler) if euler is not None else None)
