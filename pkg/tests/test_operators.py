"""Module-to-algebra operators: characterizations and induced structures."""

from fractions import Fraction

import pytest

from conftest import (
    abelian,
    random_cochain,
    random_module_map,
    t_one,
    trivial_module,
    virasoro,
    witt_module,
)
from homconf.cochains import algebra_space, module_space
from homconf.operators import (
    ModuleMap,
    NotOOperator,
    _oop_residual,
    check_ooperator,
    check_pre_lie,
    check_rota_baxter,
    delta_t,
    graded_bracket,
    graded_bracket_maps,
    module_map_as_cochain,
    modified_coboundary,
    n_from_t,
    nijenhuis_check,
    pre_lie_from,
    require_ooperator,
    rho_t,
    subadjacent,
)
from homconf.poly import D, L, ONE, MultiPoly, PolyVector
from homconf.structures import (
    adjoint_rep,
    bracket_at,
    check_hom_lie,
    check_representation,
    semidirect,
)


def _defining_identity_holds(a, r, t) -> bool:
    return all(_oop_residual(a, r, t, t, m, n).is_zero()
               for m in range(r.mrank) for n in range(r.mrank))


def _graph_is_closed(a, r, t) -> bool:
    """[(Tm + m) _l (Tn + n)] stays inside the graph of T."""
    sd = semidirect(a, r)
    n_alg = a.rank
    for m in range(r.mrank):
        for n in range(r.mrank):
            gm = PolyVector(list(t.column(m)) + list(r.unit(m)))
            gn = PolyVector(list(t.column(n)) + list(r.unit(n)))
            w = bracket_at(sd, gm, gn, L)
            alg_part = PolyVector(w[:n_alg])
            mod_part = PolyVector(w[n_alg:])
            if not (alg_part - t.apply(mod_part)).is_zero():
                return False
    return True


@pytest.mark.parametrize("c", [0, 1, Fraction(-1, 2)])
def test_identity_map_is_an_operator(c):
    a = virasoro()
    r = witt_module(a, 1, c)
    assert check_ooperator(a, r, t_one()).passed


def test_scaled_identity_on_adjoint_fails():
    a = virasoro()
    r = adjoint_rep(a, 0)
    report = check_ooperator(a, r, ModuleMap.scalar(1, 2))
    assert not report.passed
    first = report.failures()[0]
    # the residual is -k^2 (d + 2l) e, here -4(d + 2l) e
    assert first.witness.poly == "-4*d - 8*l"
    with pytest.raises(NotOOperator):
        require_ooperator(a, r, ModuleMap.scalar(1, 2))


def test_characterizations_agree(rng):
    """Defining identity, vanishing self-bracket, graph closure, and the
    induced square-zero operator agree on random maps."""
    contexts = [
        (virasoro(), witt_module(virasoro(), 1, 0)),
        (abelian(2), trivial_module(abelian(2), 2)),
    ]
    seen_pass = seen_fail = 0
    for a, r in contexts:
        candidates = [t_one() if r.mrank == 1
                      else ModuleMap.scalar(2, 1)]
        candidates += [random_module_map(rng, r.mrank, a.rank, 1)
                       for _ in range(10)]
        for t in candidates:
            p1 = _defining_identity_holds(a, r, t)
            p2 = graded_bracket_maps(a, r, t, t).is_zero()
            p3 = _graph_is_closed(a, r, t)
            p4 = nijenhuis_check(semidirect(a, r), n_from_t(a, r, t)).passed
            assert p1 == p2 == p3 == p4
            seen_pass += p1
            seen_fail += not p1
    assert seen_pass >= 2 and seen_fail >= 2


def test_self_bracket_is_twice_the_residual(vir, m10, rng):
    """{{T, T}} = -2 (defining-identity residual of T), slotwise."""
    for _ in range(5):
        t = random_module_map(rng, 1, 1, 1)
        bracket = graded_bracket_maps(vir, m10, t, t)
        res = _oop_residual(vir, m10, t, t, 0, 0)
        got = bracket.get((0, 0)).subs({"l1": L})
        assert (got + res.scale(2)).is_zero()


def test_rota_baxter_weights(vir):
    rop = ModuleMap.scalar(1, 1)
    assert check_rota_baxter(vir, rop, 0, -1).passed
    report = check_rota_baxter(vir, rop, 0, -2)
    assert not report.passed
    assert report.failures()[0].witness.poly == "1*d + 2*l"


def test_pre_lie_and_subadjacent():
    a = virasoro()
    c = Fraction(1, 2)
    r = witt_module(a, 1, c)
    product = pre_lie_from(a, r, t_one())
    assert check_pre_lie(product).passed
    expected = D + L + MultiPoly.const(c)
    assert (product.table[0][0] - PolyVector([expected])).is_zero()
    sub = subadjacent(product)
    assert check_hom_lie(sub).passed
    assert (sub.bracket[0][0] - PolyVector([D + L.scale(2)])).is_zero()


def test_induced_representation():
    a = virasoro()
    c = Fraction(1, 2)
    r = witt_module(a, 1, c)
    product = pre_lie_from(a, r, t_one())
    sub = subadjacent(product)
    rt = rho_t(a, r, t_one())
    assert check_representation(rt.algebra, rt).passed
    expected = D + L + MultiPoly.const(c)
    assert (rt.action[0][0] - PolyVector([expected])).is_zero()
    assert rt.algebra.rank == sub.rank


@pytest.mark.parametrize("p", [1, 2])
def test_bracket_with_operator_is_modified_coboundary(rng, p):
    """{{T, P}} = (-1)^p * coboundary over the induced structures."""
    a = virasoro()
    r = witt_module(a, 1, 0)
    t = t_one()
    tc = module_map_as_cochain(t, a, r)
    for _ in range(5):
        f = random_cochain(rng, p, module_space(r), algebra_space(a), 1)
        lhs = graded_bracket(a, r, tc, f)
        rhs = modified_coboundary(a, r, t, f).scale((-1) ** p)
        assert (lhs - rhs).is_zero()


def test_operator_differential_squares_to_zero(rng):
    a = virasoro()
    r = witt_module(a, 1, 0)  # central charge zero: degree 0 works too
    t = t_one()
    for p in [0, 1, 2]:
        for _ in range(4):
            if p == 0:
                # at degree zero the square vanishes on constant elements
                # (and needs a zero central charge)
                f = random_cochain(rng, 0, algebra_space(a),
                                   algebra_space(a), 0)
            else:
                f = random_cochain(rng, p, module_space(r),
                                   algebra_space(a), 1)
            once = delta_t(a, r, t, f, verify=False)
            twice = delta_t(a, r, t, once, verify=False)
            assert twice.is_zero()


def test_graded_bracket_antisymmetry(rng):
    a = virasoro()
    r = witt_module(a, 1, 0)
    for p, q in [(1, 1), (1, 2), (2, 2)]:
        f = random_cochain(rng, p, module_space(r), algebra_space(a), 1)
        g = random_cochain(rng, q, module_space(r), algebra_space(a), 1)
        flip = graded_bracket(a, r, g, f).scale((-1) ** (p * q))
        assert (graded_bracket(a, r, f, g) + flip).is_zero()


def test_nijenhuis_from_operator(vir, m10):
    sd = semidirect(vir, m10)
    n = n_from_t(vir, m10, t_one())
    assert nijenhuis_check(sd, n).passed
    # the square is strictly upper triangular, so N^2 = 0
    squared = ModuleMap.from_rows(2, 2, [
        [sum((n.entries[i][k] * n.entries[k][j] for k in range(2)),
             start=D.scale(0)) for j in range(2)] for i in range(2)])
    assert squared.is_zero()
