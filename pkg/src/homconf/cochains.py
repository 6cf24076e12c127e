"""Cochain calculus: spaces of multilinear maps, the coboundary, the circle
product and Nijenhuis-Richardson bracket, lifts to the semidirect product,
and the Maurer-Cartan verification.

A degree-p cochain is stored as a table on basis p-tuples with values in the
free lambda variables ``l1 .. l(p-1)``.  The lambda of the last argument is
dependent; whenever a formula addresses it, the computation runs with a
formal spare variable ``l<p>`` which is substituted by ``-(l1+...+l(p-1))-d``
at the outermost level, after all sesquilinear shifts.  This ordering is the
one under which the Virasoro-type fixtures produce a vanishing bracket-square,
and it is pinned by the oracle tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .poly import D, MultiPoly, PolyVector, ZERO, lam, lam_name
from .report import Report
from .structures import (
    HomLieConformalAlgebra,
    NotRegular,
    RankMismatch,
    Representation,
    StructureMap,
    action_at,
    adjoint_rep,
    bracket_at,
    eval_lambda,
    invert_structure_map,
    semidirect,
)

MAX_DEGREE = 9


class DegreeLimit(ValueError):
    """Operation would need a lambda index beyond the fixed universe."""


class InternalConsistencyError(RuntimeError):
    """A block-structure claim failed at runtime (e.g. an unprojected
    bracket has components outside the expected block)."""


@dataclass(frozen=True)
class Space:
    """A free module with a twist map: the domain or codomain of cochains."""

    rank: int
    basis: tuple[str, ...]
    twist: StructureMap
    name: str = ""

    def unit(self, i: int) -> PolyVector:
        return PolyVector.unit(self.rank, i)

    def compatible(self, other: "Space") -> bool:
        return self.rank == other.rank and self.twist == other.twist


def algebra_space(a: HomLieConformalAlgebra) -> Space:
    return Space(a.rank, a.basis, a.alpha, a.name)


def module_space(r: Representation) -> Space:
    return Space(r.mrank, r.mbasis, r.beta, r.name)


@dataclass
class Cochain:
    """Table of values on basis tuples; missing tuples are zero.

    Degree 0 stores a single element under the empty tuple.
    """

    degree: int
    src: Space
    dst: Space
    table: dict[tuple[int, ...], PolyVector] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= MAX_DEGREE:
            raise DegreeLimit(f"degree {self.degree} outside 0..{MAX_DEGREE}")
        allowed = {"d"} | {lam_name(i) for i in range(1, max(self.degree, 1))}
        for idx, value in self.table.items():
            if len(idx) != self.degree:
                raise RankMismatch(f"tuple {idx} has wrong length")
            if len(value) != self.dst.rank:
                raise RankMismatch(f"value at {idx} has wrong length")
            for p in value:
                extra = p.variables() - allowed
                if extra:
                    raise ValueError(
                        f"entry at {idx} uses {sorted(extra)}; allowed: d, "
                        f"l1..l{self.degree - 1}")

    def get(self, idx: tuple[int, ...]) -> PolyVector:
        return self.table.get(idx, PolyVector.zeros(self.dst.rank))

    def tuples(self):
        return product(range(self.src.rank), repeat=self.degree)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.table.values())

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_like(other)
        table = {}
        for idx in set(self.table) | set(other.table):
            v = self.get(idx) + other.get(idx)
            if not v.is_zero():
                table[idx] = v
        return Cochain(self.degree, self.src, self.dst, table)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def scale(self, c) -> "Cochain":
        table = {}
        for idx, v in self.table.items():
            w = v.scale(c)
            if not w.is_zero():
                table[idx] = w
        return Cochain(self.degree, self.src, self.dst, table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def _check_like(self, other: "Cochain") -> None:
        if (self.degree != other.degree
                or not self.src.compatible(other.src)
                or not self.dst.compatible(other.dst)):
            raise RankMismatch("cochain kind mismatch")


def _ambient(p: int) -> tuple[list[MultiPoly], str]:
    """Lambda values for the p slots of a degree-p evaluation: the free
    variables l1..l(p-1) plus the formal dependent variable l<p>."""
    if p > MAX_DEGREE:
        raise DegreeLimit(f"need lambda index {p}, universe ends at {MAX_DEGREE}")
    return [lam(i) for i in range(1, p + 1)], lam_name(p)


def _close(v: PolyVector, p: int, formal: str) -> PolyVector:
    """Substitute the formal dependent lambda at the outermost level."""
    dep = -(D + sum((lam(i) for i in range(1, p)), start=MultiPoly.zero()))
    return v.subs({formal: dep})


def eval_cochain(f: Cochain, args: list[PolyVector],
                 lams: list[MultiPoly]) -> PolyVector:
    """Evaluate on arbitrary elements, one lambda value per slot.

    Slot coefficients c(d) become c(-lam_i); the table's free lambdas take
    the first p-1 values.  The last slot's value participates only through
    the coefficient substitution: consistency (the slot values summing to
    -d) is the caller's responsibility and holds after the dependent
    substitution of `_close`.
    """
    p = f.degree
    if len(args) != p or len(lams) != p:
        raise RankMismatch(f"degree {p} cochain needs {p} arguments")
    table_sub = {lam_name(j + 1): lams[j] for j in range(p - 1)}
    prepared = []
    for arg, lv in zip(args, lams):
        shift = {"d": -lv}
        prepared.append([(i, c.subs(shift)) for i, c in enumerate(arg)
                         if not c.is_zero()])
    out = PolyVector.zeros(f.dst.rank)
    for picks in product(*prepared):
        idx = tuple(i for i, _ in picks)
        entry = f.table.get(idx)
        if entry is None or entry.is_zero():
            continue
        coeff = MultiPoly.const(1)
        for _, c in picks:
            coeff = coeff * c
        out = out + entry.subs(table_sub).scale(coeff)
    return out


def bracket_as_cochain(a: HomLieConformalAlgebra) -> Cochain:
    """The bracket table as a degree-2 cochain on L (lambda renamed l1)."""
    sp = algebra_space(a)
    table = {}
    for i in range(a.rank):
        for j in range(a.rank):
            v = a.bracket[i][j].subs({"l": lam(1)})
            if not v.is_zero():
                table[(i, j)] = v
    return Cochain(2, sp, sp, table)


# -- cochain conditions -----------------------------------------------------


def check_cochain(f: Cochain) -> Report:
    """Twist compatibility and skew-symmetry of the stored table."""
    rep = Report("check cochain")
    p = f.degree
    basis = list(f.dst.basis)
    if p == 0:
        elt = f.get(())
        rep.add("twist-fixed-point", f.dst.twist.apply(elt) - elt, basis, "()")
        return rep
    lams, formal = _ambient(p)
    twisted_units = [f.src.twist.apply(f.src.unit(i))
                     for i in range(f.src.rank)]
    for idx in f.tuples():
        where = "(" + ", ".join(f.src.basis[i] for i in idx) + ")"
        lhs = f.dst.twist.apply(f.get(idx))
        rhs = _close(eval_cochain(f, [twisted_units[i] for i in idx], lams),
                     p, formal)
        rep.add(f"twist-compat {where}", lhs - rhs, basis, where)
    for pos in range(p - 1):  # adjacent transposition (pos, pos+1), 0-based
        if pos + 2 < p:
            swap = {lam_name(pos + 1): lam(pos + 2),
                    lam_name(pos + 2): lam(pos + 1)}
        else:
            # last two slots: the permuted table sees the dependent lambda
            dep = -(D + sum((lam(i) for i in range(1, p)),
                            start=MultiPoly.zero()))
            swap = {lam_name(p - 1): dep}
        for idx in f.tuples():
            sidx = list(idx)
            sidx[pos], sidx[pos + 1] = sidx[pos + 1], sidx[pos]
            residual = f.get(idx) + f.get(tuple(sidx)).subs(swap)
            where = "(" + ", ".join(f.src.basis[i] for i in idx) + ")"
            rep.add(f"skew swap{pos + 1}{pos + 2} {where}", residual,
                    basis, where)
    return rep


# -- coboundary -------------------------------------------------------------


def coboundary_generic(alg: HomLieConformalAlgebra, rep: Representation,
                       f: Cochain) -> Cochain:
    """The coboundary of a cochain on the algebra underlying `alg` with
    values in the module of `rep`; `rep.algebra` must be `alg`."""
    if f.src.rank != alg.rank or f.dst.rank != rep.mrank:
        raise RankMismatch("cochain does not match the given context")
    p = f.degree
    if p == 0:
        ainv = invert_structure_map(alg.alpha)
        elt = f.get(())
        table = {}
        from .poly import L as _L
        for i in range(alg.rank):
            v = eval_lambda(
                action_at(rep, ainv.apply(PolyVector.unit(alg.rank, i)), elt, _L),
                "l", -D)
            if not v.is_zero():
                table[(i,)] = v
        return Cochain(1, f.src, f.dst, table)

    out_deg = p + 1
    lams, formal = _ambient(out_deg)
    ap_prev = alg.alpha.power(p - 1)
    first_slot = [ap_prev.apply(PolyVector.unit(alg.rank, i))
                  for i in range(alg.rank)]
    twisted = [alg.alpha.apply(PolyVector.unit(alg.rank, i))
               for i in range(alg.rank)]
    units = [PolyVector.unit(alg.rank, i) for i in range(alg.rank)]
    table = {}
    for idx in product(range(alg.rank), repeat=out_deg):
        total = PolyVector.zeros(rep.mrank)
        for i in range(out_deg):
            rest_args = [units[idx[k]] for k in range(out_deg) if k != i]
            rest_lams = [lams[k] for k in range(out_deg) if k != i]
            fv = eval_cochain(f, rest_args, rest_lams)
            term = action_at(rep, first_slot[idx[i]], fv, lams[i])
            total = total + term if i % 2 == 0 else total - term
        for i, j in combinations(range(out_deg), 2):
            w = bracket_at(alg, units[idx[i]], units[idx[j]], lams[i])
            args = [w] + [twisted[idx[k]] for k in range(out_deg)
                          if k not in (i, j)]
            ls = [lams[i] + lams[j]] + [lams[k] for k in range(out_deg)
                                        if k not in (i, j)]
            term = eval_cochain(f, args, ls)
            total = total + term if (i + j) % 2 == 0 else total - term
        entry = _close(total, out_deg, formal)
        if not entry.is_zero():
            table[idx] = entry
    return Cochain(out_deg, f.src, f.dst, table)


def coboundary(a: HomLieConformalAlgebra, r: Representation | None,
               f: Cochain) -> Cochain:
    """Coboundary for L-valued-on-L or module-valued cochains.

    Cochains L -> L use the bracket itself as the action (the 0-adjoint
    representation); cochains L -> M use `r`.
    """
    if f.src.compatible(algebra_space(a)) and f.dst.compatible(algebra_space(a)) \
            and (r is None or f.dst.rank != r.mrank or not f.dst.compatible(module_space(r))):
        return coboundary_generic(a, adjoint_rep(a, 0), f)
    if r is None:
        raise RankMismatch("module-valued cochain needs a representation")
    return coboundary_generic(a, r, f)


# -- circle product and NR bracket ------------------------------------------


def _shuffles(n: int, k: int):
    """(n,k)-shuffles of 0..n+k-1 with their signs."""
    total = n + k
    for first in combinations(range(total), n):
        first_set = set(first)
        second = tuple(i for i in range(total) if i not in first_set)
        inversions = sum(1 for a in first for b in second if a > b)
        yield first, second, -1 if inversions % 2 else 1


def circle(f: Cochain, g: Cochain) -> Cochain:
    """Insertion of g into the first slot of f, summed over shuffles with
    the twist applied to spectators."""
    if not (f.src.compatible(f.dst) and g.src.compatible(g.dst)
            and f.src.compatible(g.src)):
        raise RankMismatch("circle product needs endomorphism cochains on one space")
    m, n = f.degree, g.degree
    if m < 1 or n < 1:
        raise ValueError("circle product needs degrees >= 1")
    out_deg = m + n - 1
    sp = f.src
    lams, formal = _ambient(out_deg)
    spectator = sp.twist.power(n - 1)
    twisted = [spectator.apply(sp.unit(i)) for i in range(sp.rank)]
    units = [sp.unit(i) for i in range(sp.rank)]
    shuffles = list(_shuffles(n, m - 1))
    table = {}
    for idx in product(range(sp.rank), repeat=out_deg):
        total = PolyVector.zeros(sp.rank)
        for first, second, sign in shuffles:
            g_val = eval_cochain(g, [units[idx[k]] for k in first],
                                 [lams[k] for k in first])
            f_args = [g_val] + [twisted[idx[k]] for k in second]
            f_lams = [sum((lams[k] for k in first), start=MultiPoly.zero())]
            f_lams += [lams[k] for k in second]
            term = eval_cochain(f, f_args, f_lams)
            total = total + term if sign > 0 else total - term
        entry = _close(total, out_deg, formal)
        if not entry.is_zero():
            table[idx] = entry
    return Cochain(out_deg, sp, sp, table)


def nr_bracket(f: Cochain, g: Cochain) -> Cochain:
    """[f, g] = f o g - (-1)^((m-1)(n-1)) g o f."""
    m, n = f.degree, g.degree
    sign = -1 if ((m - 1) * (n - 1)) % 2 else 1
    return circle(f, g) - circle(g, f).scale(sign)


# -- lifts and Maurer-Cartan ------------------------------------------------


@dataclass(frozen=True)
class SemidirectContext:
    """The semidirect product algebra with block bookkeeping."""

    algebra: HomLieConformalAlgebra
    rep: Representation
    product: HomLieConformalAlgebra

    @staticmethod
    def build(a: HomLieConformalAlgebra, r: Representation) -> "SemidirectContext":
        return SemidirectContext(a, r, semidirect(a, r))

    @property
    def space(self) -> Space:
        return algebra_space(self.product)

    @property
    def lrank(self) -> int:
        return self.algebra.rank

    def theta_hat(self) -> Cochain:
        return bracket_as_cochain(self.product)


def lift(ctx: SemidirectContext, f: Cochain) -> Cochain:
    """Horizontal lift of an (M -> L)-cochain to the semidirect product:
    arguments project to the module block, output lands in the algebra block."""
    if f.src.rank != ctx.rep.mrank or f.dst.rank != ctx.algebra.rank:
        raise RankMismatch("lift expects a module-to-algebra cochain")
    n = ctx.lrank
    total = ctx.product.rank
    table = {}
    for idx, value in f.table.items():
        new_idx = tuple(n + a for a in idx)
        table[new_idx] = PolyVector(list(value) + [ZERO] * (total - n))
    return Cochain(f.degree, ctx.space, ctx.space, table)


def project_to_module_inputs(ctx: SemidirectContext, f: Cochain) -> Cochain:
    """Restrict a semidirect cochain to module-block inputs and algebra-block
    output, asserting that every other component vanishes."""
    n = ctx.lrank
    for idx, value in f.table.items():
        in_module = all(i >= n for i in idx)
        for k, p in enumerate(value):
            if p.is_zero():
                continue
            if not in_module or k >= n:
                raise InternalConsistencyError(
                    f"unexpected component outside the module->algebra block "
                    f"at {idx}, coordinate {k}: {p}")
    table = {}
    for idx, value in f.table.items():
        new_idx = tuple(i - n for i in idx)
        v = PolyVector(list(value)[:n])
        if not v.is_zero():
            table[new_idx] = v
    return Cochain(f.degree, module_space(ctx.rep),
                   algebra_space(ctx.algebra), table)


def mc_check(a: HomLieConformalAlgebra, r: Representation) -> Report:
    """The combined bracket-plus-action 2-cochain squares to zero under the
    NR bracket (and is genuinely skew, i.e. lies in the cochain space)."""
    ctx = SemidirectContext.build(a, r)
    theta = ctx.theta_hat()
    rep = Report(f"mc {a.name} {r.name}")
    skew = check_cochain(theta)
    for e in skew.entries:
        if e.name.startswith("skew"):
            rep.entries.append(e)
    square = nr_bracket(theta, theta)
    basis = list(ctx.space.basis)
    for idx in square.tuples():
        where = "(" + ", ".join(basis[i] for i in idx) + ")"
        rep.add(f"mc-square {where}", square.get(idx), basis, where)
    return rep
