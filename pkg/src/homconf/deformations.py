"""Linear and formal deformations of O-operators.

Deformations are truncated power series T_t = T0 + t T1 + ... + t^k Tk,
checked coefficient-wise.  The module provides the linear-deformation
cocycle conditions, Nijenhuis elements and the trivial deformations they
generate, order-k verification, the degree-2 obstruction cochain, extension
by exact linear solving over the rationals, the linear-order equivalence
identities, and a bounded brute-force search for O-operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .poly import D, L, MultiPoly, PolyVector, ZERO, ONE, lam
from .report import Report
from .structures import (
    HomLieConformalAlgebra,
    NEG_D_MINUS_L,
    RankMismatch,
    Representation,
    action_at,
    bracket_at,
    eval_lambda,
    invert_structure_map,
)
from .cochains import Cochain, algebra_space, module_space
from .operators import (
    ModuleMap,
    NotOOperator,
    _oop_residual,
    check_ooperator,
    cochain_as_module_map,
    delta_t,
    graded_bracket_maps,
    module_map_as_cochain,
    require_ooperator,
)


@dataclass(frozen=True)
class DeformationSequence:
    """Coefficients T0, T1, ..., Tk of a truncated deformation."""

    base: ModuleMap
    higher: tuple[ModuleMap, ...]

    def __post_init__(self):
        if not self.higher:
            raise ValueError("a deformation sequence needs order >= 1")
        for t in self.higher:
            if (t.source_rank != self.base.source_rank
                    or t.target_rank != self.base.target_rank):
                raise RankMismatch("all coefficients must share one shape")

    @property
    def order(self) -> int:
        return len(self.higher)

    def coefficient(self, i: int) -> ModuleMap:
        if i == 0:
            return self.base
        if 1 <= i <= self.order:
            return self.higher[i - 1]
        return ModuleMap.zero(self.base.source_rank, self.base.target_rank)

    def extended(self, x: ModuleMap) -> "DeformationSequence":
        return DeformationSequence(self.base, self.higher + (x,))


def _intertwine(a: HomLieConformalAlgebra, r: Representation,
                t: ModuleMap) -> ModuleMap:
    return (t.compose_structure(r.beta, "right")
            - t.compose_structure(a.alpha, "left"))


def check_linear_deformation(a: HomLieConformalAlgebra, r: Representation,
                             t: ModuleMap, d: ModuleMap,
                             verify: bool = True) -> Report:
    """The three coefficient identities of T + tD, plus the cocycle fact."""
    if verify:
        require_ooperator(a, r, t)
    rep = Report("deform check")
    basis = list(a.basis)
    inter = _intertwine(a, r, d)
    for col in range(d.source_rank):
        rep.add(f"b1 {r.mbasis[col]}", inter.column(col), basis,
                f"({r.mbasis[col]})")
    for m in range(r.mrank):
        for n in range(r.mrank):
            rep.add(f"b2 {r.mbasis[m]} {r.mbasis[n]}",
                    _oop_residual(a, r, d, d, m, n), basis,
                    f"({r.mbasis[m]}, {r.mbasis[n]})")
    for m in range(r.mrank):
        for n in range(r.mrank):
            mixed = (_oop_residual(a, r, t, d, m, n)
                     + _oop_residual(a, r, d, t, m, n))
            rep.add(f"b3 {r.mbasis[m]} {r.mbasis[n]}", mixed, basis,
                    f"({r.mbasis[m]}, {r.mbasis[n]})")
    cocycle = delta_t(a, r, t, module_map_as_cochain(d, a, r), verify=False)
    rep.add_bool("cocycle delta_T(D) = 0", cocycle.is_zero(),
                 note="mixed identity restated on the graded side")
    return rep


def nijenhuis_element_check(a: HomLieConformalAlgebra, r: Representation,
                            t: ModuleMap, x: PolyVector,
                            verify: bool = True) -> Report:
    """Fixed point of the twist plus the three vanishing identities."""
    if len(x) != a.rank:
        raise RankMismatch("element does not live in the algebra")
    if verify:
        require_ooperator(a, r, t)
    rep = Report("check nijelem")
    basis = list(a.basis)
    l1, l2 = lam(1), lam(2)
    rep.add("fixed", a.alpha.apply(x) - x, basis, "(x)")
    for i in range(a.rank):
        for j in range(a.rank):
            inner1 = bracket_at(a, x, a.unit(i), l1)
            inner2 = bracket_at(a, x, a.unit(j), l1)
            rep.add(f"bracket-square {a.basis[i]} {a.basis[j]}",
                    bracket_at(a, inner1, inner2, l2), basis,
                    f"({a.basis[i]}, {a.basis[j]})")
    for i in range(a.rank):
        for m in range(r.mrank):
            acted = action_at(r, x, r.unit(m), l1)
            outer = action_at(r, bracket_at(a, x, a.unit(i), l1),
                              acted, l1 + l2)
            rep.add(f"action-square {a.basis[i]} {r.mbasis[m]}", outer,
                    list(r.mbasis), f"({a.basis[i]}, {r.mbasis[m]})")
    for m in range(r.mrank):
        inner = (t.apply(action_at(r, x, r.unit(m), L))
                 + bracket_at(a, t.column(m), x, NEG_D_MINUS_L))
        inner = eval_lambda(inner, "l", -D)
        rep.add(f"mixed {r.mbasis[m]}", bracket_at(a, x, inner, L), basis,
                f"({r.mbasis[m]})")
    return rep


def trivial_generator(a: HomLieConformalAlgebra, r: Representation,
                      t: ModuleMap, x: PolyVector) -> ModuleMap:
    """The generator delta_T(x) of the trivial deformation attached to x."""
    zero = Cochain(0, module_space(r), algebra_space(a),
                   {(): x} if not x.is_zero() else {})
    return cochain_as_module_map(delta_t(a, r, t, zero, verify=False))


def check_order_k(a: HomLieConformalAlgebra, r: Representation,
                  s: DeformationSequence,
                  through: int | None = None) -> Report:
    """The coefficient identity of the defining equation at each order.

    Orders 0..k are checked by default (the sequence deforms modulo
    t^(k+1)); pass `through` to also inspect higher coefficients, up to the
    natural cutoff 2k.
    """
    rep = Report("deform order check")
    horizon = s.order if through is None else min(through, 2 * s.order)
    basis = list(a.basis)
    inter0 = _intertwine(a, r, s.base)
    for col in range(s.base.source_rank):
        rep.add(f"intertwine T0 {r.mbasis[col]}", inter0.column(col),
                basis, f"({r.mbasis[col]})")
    for i in range(1, s.order + 1):
        inter = _intertwine(a, r, s.coefficient(i))
        for col in range(s.base.source_rank):
            rep.add(f"intertwine T{i} {r.mbasis[col]}", inter.column(col),
                    basis, f"({r.mbasis[col]})")
    for w in range(horizon + 1):
        for m in range(r.mrank):
            for n in range(r.mrank):
                total = PolyVector.zeros(a.rank)
                for i in range(w + 1):
                    total = total + _oop_residual(
                        a, r, s.coefficient(i), s.coefficient(w - i), m, n)
                rep.add(f"order {w} {r.mbasis[m]} {r.mbasis[n]}", total,
                        basis, f"({r.mbasis[m]}, {r.mbasis[n]})")
    return rep


def obstruction(a: HomLieConformalAlgebra, r: Representation,
                s: DeformationSequence) -> Cochain:
    """-1/2 of the sum of {{Ti, Tj}} over i+j = k+1 with i, j >= 1."""
    out = Cochain(2, module_space(r), algebra_space(a), {})
    k = s.order
    for i in range(1, k + 1):
        j = k + 1 - i
        if j < 1 or j > k:
            continue
        out = out + graded_bracket_maps(a, r, s.coefficient(i),
                                        s.coefficient(j))
    return out.scale(Fraction(-1, 2))


# -- exact linear solving for extensions --------------------------------------


def _solve_exact(rows: list[list[Fraction]],
                 rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over the rationals; a particular solution with
    free unknowns set to zero, or None if inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(aug)) if aug[i][col] != 0),
                     None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = Fraction(1) / aug[rank][col]
        aug[rank] = [v * inv for v in aug[rank]]
        for i in range(len(aug)):
            if i != rank and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [v - factor * w for v, w in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(aug):
            break
    for i in range(rank, len(aug)):
        if aug[i][ncols] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for row_idx, col in enumerate(pivots):
        solution[col] = aug[row_idx][ncols]
    return solution


def _basis_maps(source_rank: int, target_rank: int,
                deg: int) -> list[ModuleMap]:
    out = []
    for row in range(target_rank):
        for col in range(source_rank):
            for k in range(deg + 1):
                rows = [[ZERO] * source_rank for _ in range(target_rank)]
                rows[row][col] = D ** k
                out.append(ModuleMap.from_rows(source_rank, target_rank, rows))
    return out


def _linear_rows(target_poly_lists: list[list[MultiPoly]],
                 rhs_polys: list[MultiPoly]):
    """Coefficient-match a list of polynomial identities that are affine in
    the unknowns; yields (row, value) pairs per monomial."""
    monomials = set()
    for polys in target_poly_lists:
        for p in polys:
            monomials.update(p.terms)
    for p in rhs_polys:
        monomials.update(p.terms)
    for mono in sorted(monomials):
        for slot in range(len(rhs_polys)):
            row = [polys[slot].terms.get(mono, Fraction(0))
                   for polys in target_poly_lists]
            yield row, rhs_polys[slot].terms.get(mono, Fraction(0))


def extend_order(a: HomLieConformalAlgebra, r: Representation,
                 s: DeformationSequence, max_deg: int,
                 verify: bool = True) -> ModuleMap | None:
    """A coefficient T_{k+1} solving delta_T(X) = obstruction, of minimal
    entry degree within the bound, or None if no solution exists there."""
    if verify:
        order_rep = check_order_k(a, r, s)
        if not order_rep.passed:
            first = order_rep.failures()[0]
            raise NotOOperator(f"sequence invalid, {first.name}: {first.witness}")
    ob = obstruction(a, r, s)
    for deg in range(max_deg + 1):
        basis_maps = _basis_maps(s.base.source_rank, s.base.target_rank, deg)
        # columns: per basis map, the polynomials of (delta_T; intertwine)
        columns = []
        for bm in basis_maps:
            delta = delta_t(a, r, s.base, module_map_as_cochain(bm, a, r),
                            verify=False)
            inter = _intertwine(a, r, bm)
            polys = []
            for m in range(r.mrank):
                for n in range(r.mrank):
                    polys.extend(delta.get((m, n)))
            for col in range(bm.source_rank):
                polys.extend(inter.column(col))
            columns.append(polys)
        rhs_polys = []
        for m in range(r.mrank):
            for n in range(r.mrank):
                rhs_polys.extend(ob.get((m, n)))
        rhs_polys.extend([ZERO] * (s.base.source_rank * a.rank))
        rows, rhs = [], []
        for row, val in _linear_rows(columns, rhs_polys):
            rows.append(row)
            rhs.append(val)
        if not rows:
            return ModuleMap.zero(s.base.source_rank, s.base.target_rank)
        coeffs = _solve_exact(
            [[rows[i][j] for j in range(len(basis_maps))]
             for i in range(len(rows))], rhs)
        if coeffs is None:
            continue
        result = ModuleMap.zero(s.base.source_rank, s.base.target_rank)
        for c, bm in zip(coeffs, basis_maps):
            if c:
                result = result + bm.scale(c)
        return result
    return None


def equivalence_check_linear(a: HomLieConformalAlgebra, r: Representation,
                             t: ModuleMap, d1: ModuleMap, d2: ModuleMap,
                             x: PolyVector, verify: bool = True) -> Report:
    """The t-coefficient identities for (id + t ad_x, id + t rho(x)) to carry
    T + tD1 to T + tD2."""
    if verify:
        require_ooperator(a, r, t)
    rep = Report("deform equivalence")
    basis = list(a.basis)
    l1, l2 = lam(1), lam(2)
    rep.add("fixed", a.alpha.apply(x) - x, basis, "(x)")
    for i in range(a.rank):
        for j in range(a.rank):
            inner1 = bracket_at(a, x, a.unit(i), l1)
            inner2 = bracket_at(a, x, a.unit(j), l1)
            rep.add(f"bracket-square {a.basis[i]} {a.basis[j]}",
                    bracket_at(a, inner1, inner2, l2), basis,
                    f"({a.basis[i]}, {a.basis[j]})")
    gen = trivial_generator(a, r, t, x)
    diff = (d2 - d1) - gen
    for col in range(diff.source_rank):
        rep.add(f"difference {r.mbasis[col]}", diff.column(col), basis,
                f"({r.mbasis[col]})")
    binv = invert_structure_map(r.beta)
    for m in range(r.mrank):
        v = binv.apply(r.unit(m))
        lhs = d1.apply(action_at(r, x, v, L))
        rhs = bracket_at(a, x, d2.apply(v), L)
        rep.add(f"cross {r.mbasis[m]}", lhs - rhs, basis,
                f"({r.mbasis[m]})")
    for i in range(a.rank):
        for m in range(r.mrank):
            ei, um = a.unit(i), r.unit(m)
            comm = (action_at(r, x, action_at(r, ei, um, l2), l1)
                    - action_at(r, ei, action_at(r, x, um, l1), l2)
                    - action_at(r, bracket_at(a, x, ei, l1), um, l1 + l2))
            rep.add(f"action-commutator {a.basis[i]} {r.mbasis[m]}", comm,
                    list(r.mbasis), f"({a.basis[i]}, {r.mbasis[m]})")
            square = action_at(r, bracket_at(a, x, ei, l1),
                               action_at(r, x, um, l1), l1 + l2)
            rep.add(f"action-square {a.basis[i]} {r.mbasis[m]}", square,
                    list(r.mbasis), f"({a.basis[i]}, {r.mbasis[m]})")
    return rep


# -- bounded search ------------------------------------------------------------


def _candidate_maps(source_rank: int, target_rank: int, max_deg: int,
                    coeffs: list[Fraction]):
    nslots = source_rank * target_rank * (max_deg + 1)
    for tup in product(coeffs, repeat=nslots):
        rows = []
        pos = 0
        for row in range(target_rank):
            cols = []
            for col in range(source_rank):
                p = ZERO
                for k in range(max_deg + 1):
                    c = tup[pos]
                    pos += 1
                    if c:
                        p = p + (D ** k).scale(c)
                cols.append(p)
            rows.append(cols)
        yield ModuleMap.from_rows(source_rank, target_rank, rows)


def _coefficient_name(row: int, col: int, k: int) -> str:
    return f"c{row}_{col}_{k}"


def constraint_system(a: HomLieConformalAlgebra, r: Representation,
                      max_deg: int) -> list[str]:
    """The polynomial constraints on unknown entry coefficients that make a
    candidate map an O-operator, as printable equations (not solved)."""
    basis_maps = _basis_maps(r.mrank, a.rank, max_deg)
    names = [_coefficient_name(row, col, k)
             for row in range(a.rank)
             for col in range(r.mrank)
             for k in range(max_deg + 1)]
    equations = []
    # linear part: intertwining
    for col in range(r.mrank):
        for out in range(a.rank):
            acc: dict[tuple, list[str]] = {}
            for nm, bm in zip(names, basis_maps):
                p = _intertwine(a, r, bm).column(col)[out]
                for mono, cval in p.terms.items():
                    acc.setdefault(mono, []).append(
                        f"{cval}*{nm}" if cval != 1 else nm)
            for mono in sorted(acc):
                equations.append(" + ".join(acc[mono]) + " = 0")
    # quadratic part: polarized defining identity
    for m in range(r.mrank):
        for n in range(r.mrank):
            for out in range(a.rank):
                acc = {}
                for ni, bi in zip(names, basis_maps):
                    for nj, bj in zip(names, basis_maps):
                        p = _oop_residual(a, r, bi, bj, m, n)[out]
                        for mono, cval in p.terms.items():
                            acc.setdefault(mono, []).append(
                                f"{cval}*{ni}*{nj}" if cval != 1
                                else f"{ni}*{nj}")
                for mono in sorted(acc):
                    equations.append(" + ".join(acc[mono]) + " = 0")
    return equations


def search_ooperators(a: HomLieConformalAlgebra, r: Representation,
                      max_deg: int, coeff_set) -> tuple[list[ModuleMap], list[str]]:
    """Brute-force candidates with bounded entry degree and coefficients from
    the given set; returns every map passing check_ooperator, plus the
    symbolic constraint system on the coefficients."""
    coeffs = sorted(Fraction(c) for c in set(coeff_set))
    found = []
    for cand in _candidate_maps(r.mrank, a.rank, max_deg, coeffs):
        if check_ooperator(a, r, cand).passed:
            found.append(cand)
    return found, constraint_system(a, r, max_deg)
