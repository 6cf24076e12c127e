"""Shared fixtures: small algebras, modules, and deterministic random data."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from homconf.cochains import Cochain, Space
from homconf.operators import ModuleMap
from homconf.poly import D, L, ONE, ZERO, MultiPoly, PolyVector, lam_name
from homconf.structures import (
    HomLieConformalAlgebra,
    Representation,
    StructureMap,
)


def _names(prefix: str, rank: int) -> tuple[str, ...]:
    if rank == 1:
        return (prefix,)
    return tuple(f"{prefix}{i + 1}" for i in range(rank))


def virasoro() -> HomLieConformalAlgebra:
    """Rank one, bracket (d + 2l) e, identity twist."""
    table = ((PolyVector([D + L.scale(2)]),),)
    return HomLieConformalAlgebra(1, ("e",), table,
                                  StructureMap.identity(1), name="vir")


def witt_module(a: HomLieConformalAlgebra, delta, c) -> Representation:
    """Free rank-one module with action (d + delta*l + c) f."""
    poly = D + L.scale(Fraction(delta)) + MultiPoly.const(Fraction(c))
    return Representation(a, 1, ("f",), ((PolyVector([poly]),),),
                          StructureMap.identity(1), name="M")


def abelian(rank: int) -> HomLieConformalAlgebra:
    """Zero bracket on a free module of the given rank."""
    zero = PolyVector.zeros(rank)
    table = tuple(tuple(zero for _ in range(rank)) for _ in range(rank))
    return HomLieConformalAlgebra(rank, _names("e", rank), table,
                                  StructureMap.identity(rank), name="ab")


def trivial_module(a: HomLieConformalAlgebra, rank: int) -> Representation:
    zero = PolyVector.zeros(rank)
    action = tuple(tuple(zero for _ in range(rank)) for _ in range(a.rank))
    return Representation(a, rank, _names("f", rank), action,
                          StructureMap.identity(rank), name="triv")


def t_one() -> ModuleMap:
    """The identity-matrix map from the rank-one module to the algebra."""
    return ModuleMap(1, 1, ((ONE,),))


@pytest.fixture
def vir() -> HomLieConformalAlgebra:
    return virasoro()


@pytest.fixture
def m10(vir) -> Representation:
    return witt_module(vir, 1, 0)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240826)


# -- deterministic random data -------------------------------------------------


def random_poly(rng: random.Random, names: list[str],
                max_deg: int = 1) -> MultiPoly:
    """A sparse polynomial with small integer coefficients."""
    out = ZERO
    for name in names:
        for k in range(max_deg + 1):
            if rng.random() < 0.5:
                c = rng.randint(-2, 2)
                if c:
                    out = out + (MultiPoly.var(name) ** k).scale(c)
    if rng.random() < 0.5:
        out = out + MultiPoly.const(rng.randint(-2, 2))
    return out


def random_vector(rng: random.Random, rank: int, names: list[str],
                  max_deg: int = 1) -> PolyVector:
    return PolyVector([random_poly(rng, names, max_deg)
                       for _ in range(rank)])


def random_structure(rng: random.Random, rank: int, mrank: int):
    """A random bracket/action pair (usually not satisfying any axiom)."""
    table = tuple(tuple(random_vector(rng, rank, ["d", "l"])
                        for _ in range(rank)) for _ in range(rank))
    a = HomLieConformalAlgebra(rank, _names("e", rank), table,
                               StructureMap.identity(rank))
    action = tuple(tuple(random_vector(rng, mrank, ["d", "l"])
                         for _ in range(mrank)) for _ in range(rank))
    r = Representation(a, mrank, _names("f", mrank), action,
                       StructureMap.identity(mrank))
    return a, r


def random_module_map(rng: random.Random, source_rank: int,
                      target_rank: int, max_deg: int = 1) -> ModuleMap:
    rows = [[random_poly(rng, ["d"], max_deg) for _ in range(source_rank)]
            for _ in range(target_rank)]
    return ModuleMap.from_rows(source_rank, target_rank, rows)


def random_cochain(rng: random.Random, degree: int, src: Space, dst: Space,
                   max_deg: int = 2) -> Cochain:
    names = ["d"] + [lam_name(i) for i in range(1, max(degree, 1))]
    table = {}
    for idx in Cochain(degree, src, dst, {}).tuples():
        v = random_vector(rng, dst.rank, names, max_deg)
        if not v.is_zero():
            table[idx] = v
    return Cochain(degree, src, dst, table)
