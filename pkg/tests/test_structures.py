"""Axiom checks for the twisted bracket, modules, and derived structures."""

from fractions import Fraction

import pytest

from conftest import abelian, trivial_module, virasoro, witt_module
from homconf.poly import D, L, ONE, MultiPoly, PolyVector
from homconf.structures import (
    HomLieConformalAlgebra,
    NotRegular,
    Representation,
    StructureMap,
    adjoint_rep,
    bracket_at,
    check_hom_lie,
    check_representation,
    eval_lambda,
    invert_structure_map,
    semidirect,
)


def test_virasoro_passes():
    assert check_hom_lie(virasoro()).passed


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_abelian_passes(rank):
    assert check_hom_lie(abelian(rank)).passed


def test_constant_bracket_fails_skew():
    bad = HomLieConformalAlgebra(1, ("e",), ((PolyVector([ONE]),),),
                                 StructureMap.identity(1))
    report = check_hom_lie(bad)
    assert not report.passed
    first = report.failures()[0]
    assert first.name == "skew e e"
    assert first.witness.poly == "2"
    assert first.witness.component == "e"


def test_square_lambda_action_fails_composition():
    a = virasoro()
    bad = Representation(a, 1, ("f",), ((PolyVector([L * L]),),),
                         StructureMap.identity(1))
    report = check_representation(a, bad)
    assert not report.passed
    first = report.failures()[0]
    assert first.name == "composition e e f"
    # (l1 - l2)(l1 + l2)^2
    assert first.witness.poly == "1*l1^3 + 1*l1^2*l2 - 1*l1*l2^2 - 1*l2^3"
    assert first.witness.component == "f"


@pytest.mark.parametrize("delta,c", [(0, 0), (1, 0), (1, Fraction(1, 2)),
                                     (2, -3)])
def test_module_family_passes(delta, c):
    a = virasoro()
    assert check_representation(a, witt_module(a, delta, c)).passed


def test_trivial_module_passes():
    a = abelian(2)
    assert check_representation(a, trivial_module(a, 2)).passed


def test_semidirect_is_an_algebra():
    a = virasoro()
    r = witt_module(a, 1, 0)
    sd = semidirect(a, r)
    assert sd.rank == 2
    assert check_hom_lie(sd).passed


def test_adjoint_representation():
    a = virasoro()
    ad = adjoint_rep(a, 0)
    assert check_representation(a, ad).passed
    # the action table is the bracket itself
    assert ad.action[0][0] == a.bracket[0][0]


def test_bracket_at_is_sesquilinear():
    a = virasoro()
    e = a.unit(0)
    de = e.scale(D)
    lhs = bracket_at(a, de, e, L)
    assert lhs == bracket_at(a, e, e, L).scale(-L)
    rhs = bracket_at(a, e, de, L)
    assert rhs == bracket_at(a, e, e, L).scale(D + L)


def test_eval_lambda_substitutes_one_variable():
    v = PolyVector([D + L.scale(2)])
    assert eval_lambda(v, "l", -D).is_zero() is False
    assert eval_lambda(v, "l", D.scale(Fraction(-1, 2))).is_zero()


def test_structure_map_inversion():
    s = StructureMap.from_rows([[MultiPoly.const(2), D], [ONE.scale(0), ONE]])
    inv = invert_structure_map(s)
    eye = StructureMap.identity(2)
    composed = StructureMap.from_rows(
        [[sum((s.entries[i][k] * inv.entries[k][j] for k in range(2)),
              start=ONE.scale(0)) for j in range(2)] for i in range(2)])
    assert composed == eye


def test_singular_structure_map_rejected():
    s = StructureMap.from_rows([[D, D], [D, D]])
    with pytest.raises(NotRegular):
        invert_structure_map(s)
