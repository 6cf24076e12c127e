"""O-operators and their characterizations.

A candidate operator is a rectangular matrix over the ring in ``d`` mapping
the module into the algebra.  The module provides the defining-identity
check, the graph and Nijenhuis characterizations, the graded bracket
{{f,g}} computed through lifts to the semidirect product, the induced
differential, and the pre-Lie / sub-adjacent / twisted-representation
constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .poly import D, L, MultiPoly, PolyVector, ZERO, lam
from .report import Report
from .structures import (
    HomLieConformalAlgebra,
    NEG_D_MINUS_L,
    RankMismatch,
    Representation,
    StructureMap,
    _table_at,
    action_at,
    bracket_at,
    eval_lambda,
    invert_structure_map,
    semidirect,
)
from .cochains import (
    Cochain,
    SemidirectContext,
    algebra_space,
    lift,
    module_space,
    nr_bracket,
    project_to_module_inputs,
)


class NotOOperator(ValueError):
    """The operator fails the defining identity (required as a precondition)."""


@dataclass(frozen=True)
class ModuleMap:
    """Rectangular matrix over the ring in ``d``: a map of free modules."""

    source_rank: int
    target_rank: int
    entries: tuple[tuple[MultiPoly, ...], ...]  # target_rank rows

    def __post_init__(self):
        if len(self.entries) != self.target_rank:
            raise RankMismatch("wrong number of rows")
        for row in self.entries:
            if len(row) != self.source_rank:
                raise RankMismatch("wrong number of columns")
            for p in row:
                extra = p.variables() - {"d"}
                if extra:
                    raise ValueError(f"entries may use only d: {p}")

    @staticmethod
    def from_rows(source_rank: int, target_rank: int,
                  rows: list[list[MultiPoly]]) -> "ModuleMap":
        return ModuleMap(source_rank, target_rank,
                         tuple(tuple(r) for r in rows))

    @staticmethod
    def zero(source_rank: int, target_rank: int) -> "ModuleMap":
        return ModuleMap(source_rank, target_rank,
                         tuple((ZERO,) * source_rank
                               for _ in range(target_rank)))

    @staticmethod
    def scalar(rank: int, c) -> "ModuleMap":
        v = MultiPoly.const(Fraction(c))
        return ModuleMap(rank, rank, tuple(
            tuple(v if i == j else ZERO for j in range(rank))
            for i in range(rank)))

    def apply(self, v: PolyVector) -> PolyVector:
        if len(v) != self.source_rank:
            raise RankMismatch("vector length does not match source rank")
        return PolyVector(
            sum((self.entries[i][a] * v[a] for a in range(self.source_rank)),
                start=ZERO)
            for i in range(self.target_rank))

    def column(self, a: int) -> PolyVector:
        return PolyVector(self.entries[i][a] for i in range(self.target_rank))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_shape(other)
        return ModuleMap(self.source_rank, self.target_rank, tuple(
            tuple(x + y for x, y in zip(r1, r2))
            for r1, r2 in zip(self.entries, other.entries)))

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source_rank, self.target_rank, tuple(
            tuple(p.scale(c) for p in row) for row in self.entries))

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def _check_shape(self, other: "ModuleMap") -> None:
        if (self.source_rank != other.source_rank
                or self.target_rank != other.target_rank):
            raise RankMismatch("shape mismatch")

    def compose_structure(self, s: StructureMap, side: str) -> "ModuleMap":
        """T . s (side='right', s on the source) or s . T (side='left')."""
        if side == "right":
            if s.size != self.source_rank:
                raise RankMismatch("size mismatch")
            rows = [[sum((self.entries[i][k] * s.entries[k][a]
                          for k in range(self.source_rank)), start=ZERO)
                     for a in range(self.source_rank)]
                    for i in range(self.target_rank)]
        elif side == "left":
            if s.size != self.target_rank:
                raise RankMismatch("size mismatch")
            rows = [[sum((s.entries[i][k] * self.entries[k][a]
                          for k in range(self.target_rank)), start=ZERO)
                     for a in range(self.source_rank)]
                    for i in range(self.target_rank)]
        else:
            raise ValueError("side must be 'left' or 'right'")
        return ModuleMap.from_rows(self.source_rank, self.target_rank, rows)


def module_map_as_cochain(t: ModuleMap, a: HomLieConformalAlgebra,
                          r: Representation) -> Cochain:
    """A module-to-algebra map as a degree-1 cochain."""
    if t.source_rank != r.mrank or t.target_rank != a.rank:
        raise RankMismatch("map shape does not match the context")
    table = {}
    for col in range(t.source_rank):
        v = t.column(col)
        if not v.is_zero():
            table[(col,)] = v
    return Cochain(1, module_space(r), algebra_space(a), table)


def cochain_as_module_map(f: Cochain) -> ModuleMap:
    if f.degree != 1:
        raise RankMismatch("only degree-1 cochains are module maps")
    rows = [[f.get((a,))[i] for a in range(f.src.rank)]
            for i in range(f.dst.rank)]
    return ModuleMap.from_rows(f.src.rank, f.dst.rank, rows)


@dataclass(frozen=True)
class HomPreLieConformalAlgebra:
    """A lambda-product table on a module, with its twist map."""

    rank: int
    basis: tuple[str, ...]
    table: tuple[tuple[PolyVector, ...], ...]  # table[a][b] = f_a *_l f_b
    beta: StructureMap
    name: str = "P"

    def unit(self, a: int) -> PolyVector:
        return PolyVector.unit(self.rank, a)

    def product_at(self, u: PolyVector, v: PolyVector,
                   lam_value: MultiPoly) -> PolyVector:
        return _table_at(self.table, u, v, lam_value, self.rank)


# -- characterizations -------------------------------------------------------


def _oop_residual(a: HomLieConformalAlgebra, r: Representation,
                  s: ModuleMap, t: ModuleMap, m: int, n: int) -> PolyVector:
    """[S(f_m) _l T(f_n)] - S(rho(T f_m)_l f_n - rho(T f_n)_{-d-l} f_m),
    the bilinear polarization of the defining identity."""
    fm, fn = r.unit(m), r.unit(n)
    lhs = bracket_at(a, s.column(m), t.column(n), L)
    inner = (action_at(r, t.column(m), fn, L)
             - action_at(r, t.column(n), fm, NEG_D_MINUS_L))
    return lhs - s.apply(inner)


def check_ooperator(a: HomLieConformalAlgebra, r: Representation,
                    t: ModuleMap) -> Report:
    """Intertwining, the defining identity, and the graph criterion."""
    if t.source_rank != r.mrank or t.target_rank != a.rank:
        raise RankMismatch("map shape does not match the context")
    rep = Report("check oop")
    inter = t.compose_structure(r.beta, "right") - t.compose_structure(a.alpha, "left")
    for col in range(t.source_rank):
        rep.add(f"intertwine {r.mbasis[col]}", inter.column(col),
                list(a.basis), f"({r.mbasis[col]})")
    for m in range(r.mrank):
        for n in range(r.mrank):
            rep.add(f"oop {r.mbasis[m]} {r.mbasis[n]}",
                    _oop_residual(a, r, t, t, m, n),
                    list(a.basis), f"({r.mbasis[m]}, {r.mbasis[n]})")
    # graph criterion on the semidirect product (must agree with the above)
    sd = semidirect(a, r)
    nr_ = a.rank
    for m in range(r.mrank):
        for n in range(r.mrank):
            gm = PolyVector(list(t.column(m)) + list(r.unit(m)))
            gn = PolyVector(list(t.column(n)) + list(r.unit(n)))
            w = bracket_at(sd, gm, gn, L)
            w_l = PolyVector(list(w)[:nr_])
            w_m = PolyVector(list(w)[nr_:])
            rep.add(f"graph {r.mbasis[m]} {r.mbasis[n]}",
                    w_l - t.apply(w_m), list(a.basis),
                    f"({r.mbasis[m]}, {r.mbasis[n]})")
    return rep


def require_ooperator(a: HomLieConformalAlgebra, r: Representation,
                      t: ModuleMap) -> None:
    rep = check_ooperator(a, r, t)
    if not rep.passed:
        first = rep.failures()[0]
        raise NotOOperator(f"{first.name}: {first.witness}")


def check_rota_baxter(a: HomLieConformalAlgebra, rop: ModuleMap,
                      p: int, q) -> Report:
    """[Rx _l Ry] = R([a^p(Rx) _l y] + [x _l a^p(Ry)] + q [x _l y])."""
    if rop.source_rank != a.rank or rop.target_rank != a.rank:
        raise RankMismatch("operator must be square on the algebra")
    rep = Report("check rotabaxter")
    qc = Fraction(q)
    comm = (rop.compose_structure(a.alpha, "right")
            - rop.compose_structure(a.alpha, "left"))
    for col in range(a.rank):
        rep.add(f"commute {a.basis[col]}", comm.column(col),
                list(a.basis), f"({a.basis[col]})")
    ap = a.alpha.power(p)
    for i in range(a.rank):
        for j in range(a.rank):
            ei, ej = a.unit(i), a.unit(j)
            lhs = bracket_at(a, rop.column(i), rop.column(j), L)
            inner = (bracket_at(a, ap.apply(rop.column(i)), ej, L)
                     + bracket_at(a, ei, ap.apply(rop.column(j)), L)
                     + bracket_at(a, ei, ej, L).scale(qc))
            rep.add(f"rotabaxter {a.basis[i]} {a.basis[j]}",
                    lhs - rop.apply(inner), list(a.basis),
                    f"({a.basis[i]}, {a.basis[j]})")
    return rep


def nijenhuis_check(a: HomLieConformalAlgebra, n: ModuleMap) -> Report:
    """[Nx _l Ny] = N([Nx _l y] - [Ny _{-d-l} x] - N[x _l y]), with N
    commuting with the twist."""
    if n.source_rank != a.rank or n.target_rank != a.rank:
        raise RankMismatch("operator must be square on the algebra")
    rep = Report("check nijenhuis")
    comm = (n.compose_structure(a.alpha, "right")
            - n.compose_structure(a.alpha, "left"))
    for col in range(a.rank):
        rep.add(f"commute {a.basis[col]}", comm.column(col),
                list(a.basis), f"({a.basis[col]})")
    for i in range(a.rank):
        for j in range(a.rank):
            ei, ej = a.unit(i), a.unit(j)
            lhs = bracket_at(a, n.column(i), n.column(j), L)
            inner = (bracket_at(a, n.column(i), ej, L)
                     - bracket_at(a, n.column(j), ei, NEG_D_MINUS_L)
                     - n.apply(bracket_at(a, ei, ej, L)))
            rep.add(f"nijenhuis {a.basis[i]} {a.basis[j]}",
                    lhs - n.apply(inner), list(a.basis),
                    f"({a.basis[i]}, {a.basis[j]})")
    return rep


def n_from_t(a: HomLieConformalAlgebra, r: Representation,
             t: ModuleMap) -> ModuleMap:
    """The strictly upper-triangular block operator on the semidirect sum."""
    n, m = a.rank, r.mrank
    total = n + m
    rows = []
    for i in range(total):
        row = []
        for j in range(total):
            if i < n and j >= n:
                row.append(t.entries[i][j - n])
            else:
                row.append(ZERO)
        rows.append(row)
    return ModuleMap.from_rows(total, total, rows)


# -- the graded bracket and its differential ---------------------------------


def graded_bracket(a: HomLieConformalAlgebra, r: Representation,
                   f: Cochain, g: Cochain) -> Cochain:
    """{{f, g}} = (-1)^(deg f) [[theta, lift f], lift g] projected back to
    module inputs and algebra output; nonzero components outside that block
    raise InternalConsistencyError.

    The sign uses the degree of the first argument: that is the unique
    choice making {{T, T}} the polarized defining-identity residual and
    {{T, P}} a signed coboundary over the induced structures, while keeping
    the bracket graded-antisymmetric."""
    ctx = SemidirectContext.build(a, r)
    theta = ctx.theta_hat()
    fh = lift(ctx, f)
    gh = lift(ctx, g)
    inner = nr_bracket(theta, fh)
    outer = nr_bracket(inner, gh)
    sign = -1 if f.degree % 2 else 1
    return project_to_module_inputs(ctx, outer.scale(sign))


def graded_bracket_maps(a: HomLieConformalAlgebra, r: Representation,
                        s: ModuleMap, t: ModuleMap) -> Cochain:
    return graded_bracket(a, r, module_map_as_cochain(s, a, r),
                          module_map_as_cochain(t, a, r))


def delta_t(a: HomLieConformalAlgebra, r: Representation, t: ModuleMap,
            p_cochain: Cochain, verify: bool = True) -> Cochain:
    """The induced differential {{T, -}}; on 0-cochains (elements x of the
    algebra fixed by the twist) it is the explicit one-cochain with the free
    lambda evaluated at -d."""
    if verify:
        require_ooperator(a, r, t)
    if p_cochain.degree == 0:
        x = p_cochain.get(())
        if not (a.alpha.apply(x) - x).is_zero():
            raise ValueError("0-cochain element must be fixed by the twist")
        binv = invert_structure_map(r.beta)
        table = {}
        for col in range(r.mrank):
            v = binv.apply(r.unit(col))
            w = (t.apply(action_at(r, x, v, L))
                 + bracket_at(a, t.apply(v), x, NEG_D_MINUS_L))
            w = eval_lambda(w, "l", -D)
            if not w.is_zero():
                table[(col,)] = w
        return Cochain(1, module_space(r), algebra_space(a), table)
    return graded_bracket(a, r, module_map_as_cochain(t, a, r), p_cochain)


# -- induced structures -------------------------------------------------------


def pre_lie_from(a: HomLieConformalAlgebra, r: Representation, t: ModuleMap,
                 verify: bool = True) -> HomPreLieConformalAlgebra:
    """Product f_a *_l f_b = rho(T f_a)_l f_b."""
    if verify:
        require_ooperator(a, r, t)
    table = tuple(
        tuple(action_at(r, t.column(m), r.unit(n), L)
              for n in range(r.mrank))
        for m in range(r.mrank))
    return HomPreLieConformalAlgebra(r.mrank, tuple(r.mbasis), table,
                                     r.beta, name=f"prelie({r.name})")


def check_pre_lie(p: HomPreLieConformalAlgebra) -> Report:
    """Twist multiplicativity and the defining identity on basis triples."""
    rep = Report("check prelie")
    l1, l2 = lam(1), lam(2)
    basis = list(p.basis)
    for m in range(p.rank):
        for n in range(p.rank):
            lhs = p.beta.apply(p.table[m][n])
            rhs = p.product_at(p.beta.apply(p.unit(m)),
                               p.beta.apply(p.unit(n)), L)
            rep.add(f"twist {basis[m]} {basis[n]}", lhs - rhs, basis,
                    f"({basis[m]}, {basis[n]})")
    for m in range(p.rank):
        for n in range(p.rank):
            for q in range(p.rank):
                um, un, uq = p.unit(m), p.unit(n), p.unit(q)
                bq = p.beta.apply(uq)
                t1 = p.product_at(p.product_at(um, un, l1), bq, l1 + l2)
                t2 = p.product_at(p.beta.apply(um),
                                  p.product_at(un, uq, l2), l1)
                t3 = p.product_at(p.product_at(un, um, l2), bq, l1 + l2)
                t4 = p.product_at(p.beta.apply(un),
                                  p.product_at(um, uq, l1), l2)
                rep.add(f"prelie {basis[m]} {basis[n]} {basis[q]}",
                        (t1 - t2) - (t3 - t4), basis,
                        f"({basis[m]}, {basis[n]}, {basis[q]})")
    return rep


def subadjacent(p: HomPreLieConformalAlgebra) -> HomLieConformalAlgebra:
    """Commutator bracket [m _l n] = m *_l n - n *_{-d-l} m."""
    bracket = tuple(
        tuple(p.table[m][n] - eval_lambda(p.table[n][m], "l", NEG_D_MINUS_L)
              for n in range(p.rank))
        for m in range(p.rank))
    return HomLieConformalAlgebra(p.rank, tuple(p.basis), bracket, p.beta,
                                  name=f"sub({p.name})")


def rho_t(a: HomLieConformalAlgebra, r: Representation, t: ModuleMap,
          verify: bool = True) -> Representation:
    """rho_T(m)_l(x) = [T(m) _l x] + T(rho(x)_{-d-l} m), a representation of
    the sub-adjacent algebra on the original algebra with its twist."""
    sub = subadjacent(pre_lie_from(a, r, t, verify=verify))
    action = tuple(
        tuple(bracket_at(a, t.column(m), a.unit(i), L)
              + t.apply(action_at(r, a.unit(i), r.unit(m), NEG_D_MINUS_L))
              for i in range(a.rank))
        for m in range(r.mrank))
    return Representation(algebra=sub, mrank=a.rank, mbasis=a.basis,
                          action=action, beta=a.alpha,
                          name=f"rhoT({a.name})")


def modified_coboundary(a: HomLieConformalAlgebra, r: Representation,
                        t: ModuleMap, f: Cochain,
                        verify: bool = True) -> Cochain:
    """The coboundary of the sub-adjacent algebra with coefficients in the
    twisted representation, applied to a module-to-algebra cochain."""
    from .cochains import coboundary_generic
    if verify:
        require_ooperator(a, r, t)
    sub = subadjacent(pre_lie_from(a, r, t, verify=False))
    rep_t = rho_t(a, r, t, verify=False)
    # reinterpret f as a cochain on the sub-adjacent algebra with values in L
    g = Cochain(f.degree, algebra_space(sub), algebra_space(a),
                dict(f.table))
    return coboundary_generic(sub, rep_t, g)
