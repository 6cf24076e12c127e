"""The cochain complex: coboundary, circle product, and the graded bracket."""

import random

import pytest

from conftest import (
    random_cochain,
    random_structure,
    virasoro,
    witt_module,
)
from homconf.cochains import (
    Cochain,
    DegreeLimit,
    algebra_space,
    bracket_as_cochain,
    check_cochain,
    circle,
    coboundary,
    mc_check,
    module_space,
    nr_bracket,
)
from homconf.poly import D, MultiPoly, PolyVector, lam
from homconf.structures import (
    HomLieConformalAlgebra,
    Representation,
    StructureMap,
    check_hom_lie,
    check_representation,
)


def _skew_cochain(rng: random.Random, a, degree: int) -> Cochain:
    """A cochain satisfying the skew conditions: degree one is free, higher
    degrees are coboundaries (hence skew)."""
    sp = algebra_space(a)
    if degree == 1:
        return random_cochain(rng, 1, sp, sp, 1)
    return coboundary(a, None, _skew_cochain(rng, a, degree - 1))


def test_bracket_cochain_squares_to_zero(vir):
    m = bracket_as_cochain(vir)
    assert check_cochain(m).passed
    assert nr_bracket(m, m).is_zero()


@pytest.mark.parametrize("n", [1, 2])
def test_bracket_pairing_is_signed_coboundary(vir, rng, n):
    """[m, f] = (-1)^(1+n) delta(f) for cochains into the algebra itself."""
    m = bracket_as_cochain(vir)
    for _ in range(5):
        sp = algebra_space(vir)
        f = random_cochain(rng, n, sp, sp, 1)
        lhs = nr_bracket(m, f)
        rhs = coboundary(vir, None, f).scale((-1) ** (1 + n))
        assert (lhs - rhs).is_zero()


def test_nr_bracket_graded_antisymmetry(vir, rng):
    sp = algebra_space(vir)
    for n, l in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        f = random_cochain(rng, n, sp, sp, 1)
        g = random_cochain(rng, l, sp, sp, 1)
        flip = nr_bracket(g, f).scale((-1) ** ((n - 1) * (l - 1)))
        assert (nr_bracket(f, g) + flip).is_zero()


def test_nr_bracket_graded_jacobi(vir, rng):
    """[f,[g,h]] = [[f,g],h] + (-1)^(|f||g|) [g,[f,h]] on skew cochains."""
    for degs in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (1, 2, 2)]:
        f, g, h = (_skew_cochain(rng, vir, d) for d in degs)
        df, dg = degs[0] - 1, degs[1] - 1
        lhs = nr_bracket(f, nr_bracket(g, h))
        rhs = (nr_bracket(nr_bracket(f, g), h)
               + nr_bracket(g, nr_bracket(f, h)).scale((-1) ** (df * dg)))
        assert (lhs - rhs).is_zero()


def test_coboundary_compatibility_with_bracket(vir, rng):
    """(-1)^(l-1) [delta f, g] + [f, delta g] = (-1)^(n+l) delta [f, g]."""
    for n, l in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        f = _skew_cochain(rng, vir, n)
        g = _skew_cochain(rng, vir, l)
        df = coboundary(vir, None, f)
        dg = coboundary(vir, None, g)
        lhs = nr_bracket(df, g).scale((-1) ** (l - 1)) + nr_bracket(f, dg)
        rhs = coboundary(vir, None, nr_bracket(f, g)).scale((-1) ** (n + l))
        assert (lhs - rhs).is_zero()


@pytest.mark.parametrize("c", [0, 1])
@pytest.mark.parametrize("degree", [0, 1])
def test_coboundary_squares_to_zero(rng, c, degree):
    a = virasoro()
    r = witt_module(a, 1, c)
    src = algebra_space(a)
    dst = module_space(r)
    for _ in range(12):
        f = random_cochain(rng, degree, src, dst, 2)
        once = coboundary(a, r, f)
        twice = coboundary(a, r, once)
        assert twice.is_zero()


def test_circle_inserts_into_one_slot(vir):
    sp = algebra_space(vir)
    f = Cochain(1, sp, sp, {(0,): PolyVector([D])})
    g = Cochain(2, sp, sp, {(0, 0): PolyVector([lam(1)])})
    out = circle(f, g)
    assert out.degree == 2
    assert str(out.get((0, 0))[0]) == "1*d*l1"


def test_maurer_cartan_agrees_with_axioms(rng):
    """mc passes exactly when the bracket and action axioms both pass."""
    matches = 0
    positives = 0
    for trial in range(20):
        if trial % 2 == 0:
            # scaled fixtures: both sides pass
            k = rng.choice([1, 2, -1])
            a = virasoro()
            table = ((a.bracket[0][0].scale(k),),)
            a = HomLieConformalAlgebra(1, ("e",), table,
                                       StructureMap.identity(1))
            r = witt_module(a, rng.randint(0, 2), rng.randint(-1, 1))
            r = Representation(a, 1, ("f",),
                               ((r.action[0][0].scale(k),),),
                               StructureMap.identity(1))
        else:
            a, r = random_structure(rng, rng.choice([1, 2]),
                                    rng.choice([1, 2]))
        axioms = (check_hom_lie(a).passed
                  and check_representation(a, r).passed)
        assert mc_check(a, r).passed == axioms
        matches += 1
        positives += axioms
    assert matches == 20
    assert positives >= 5  # both directions are exercised


def test_check_cochain_rejects_non_skew(vir):
    sp = algebra_space(vir)
    f = Cochain(2, sp, sp, {(0, 0): PolyVector([D * D])})
    report = check_cochain(f)
    assert not report.passed
    assert any(e.name.startswith("skew") for e in report.failures())


def test_degree_limit():
    sp = algebra_space(virasoro())
    with pytest.raises(DegreeLimit):
        Cochain(10, sp, sp, {})


def test_cochain_table_rejects_stray_variables(vir):
    sp = algebra_space(vir)
    with pytest.raises(ValueError):
        Cochain(1, sp, sp, {(0,): PolyVector([lam(1)])})
