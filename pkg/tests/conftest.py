from fractions import Fraction
from itertools import product as iter_product

import pytest

from anticonc import kernels
from anticonc.groups import (
    make_cyclic,
    make_cyclic_power,
    make_dihedral,
    make_direct_product,
    make_gl2,
    make_symmetric,
)


@pytest.fixture(scope="session")
def catalog():
    """Small groups exercising every constructor family."""
    return {
        "Z1": make_cyclic(1),
        "Z2": make_cyclic(2),
        "Z3": make_cyclic(3),
        "Z4": make_cyclic(4),
        "Z5": make_cyclic(5),
        "Z6": make_cyclic(6),
        "Z7": make_cyclic(7),
        "Z9": make_cyclic(9),
        "Z12": make_cyclic(12),
        "Z2xZ2": make_cyclic_power(2, 2),
        "Z3xZ3": make_cyclic_power(3, 2),
        "Z3xZ4": make_direct_product(make_cyclic(3), make_cyclic(4)),
        "D3": make_dihedral(3),
        "D4": make_dihedral(4),
        "D5": make_dihedral(5),
        "S3": make_symmetric(3),
        "S4": make_symmetric(4),
        "GL2_2": make_gl2(2),
        "GL2_3": make_gl2(3),
    }


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Every importable kernel backend (at least 'pure')."""
    return kernels.get_backend(request.param)


def brute_force_law(group, vars):
    """Oracle: the product law by enumerating all 2^n outcomes directly."""
    counts = {}
    for picks in iter_product(*(((v.a, v.b)) for v in vars)):
        z = group.identity
        for e in picks:
            z = group.mul(z, e)
        counts[z] = counts.get(z, 0) + 1
    den = 2 ** len(vars)
    return {x: Fraction(c, den) for x, c in counts.items()}
