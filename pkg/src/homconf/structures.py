"""Hom-Lie conformal algebras and their representations on free modules.

All data lives on finite-rank free modules over the polynomial ring in the
translation generator; a bracket or action table gives the value on basis
pairs as a vector of polynomials in ``d`` (the generator acting on the
output) and ``l`` (the lambda of the pairing).  Everything else is forced
by conformal sesquilinearity:

    [p(D)x _L y] = p(-L) [x _L y],      [x _L q(D)y] = q(D+L) [x _L y]

so extending a table to arbitrary module elements is polynomial
substitution.  Evaluation of a lambda slot at a dependent value such as
``-D-L`` is plain substitution in canonical form, with ``d`` always
denoting the outermost generator of the whole expression; every conformal
shift above happens before any dependent substitution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import D, L, ONE, ZERO, MultiPoly, PolyVector
from .report import Report

NEG_D_MINUS_L = -(D + L)


class NotRegular(ValueError):
    """Structure map is not invertible over the polynomial ring."""


class RankMismatch(ValueError):
    pass


@dataclass(frozen=True)
class StructureMap:
    """Square matrix over the ring in ``d``; encodes a map commuting with D."""

    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise RankMismatch("structure map must be square")
            for p in row:
                extra = p.variables() - {"d"}
                if extra:
                    raise ValueError(f"structure map entries may use only d: {p}")

    @staticmethod
    def from_rows(rows: list[list[MultiPoly]]) -> "StructureMap":
        return StructureMap(tuple(tuple(row) for row in rows))

    @staticmethod
    def identity(rank: int) -> "StructureMap":
        return StructureMap.from_rows(
            [[ONE if i == j else ZERO for j in range(rank)] for i in range(rank)]
        )

    @property
    def size(self) -> int:
        return len(self.entries)

    def apply(self, v: PolyVector) -> PolyVector:
        if len(v) != self.size:
            raise RankMismatch(f"expected rank {self.size}, got {len(v)}")
        return PolyVector(
            sum((self.entries[i][j] * v[j] for j in range(self.size)),
                start=ZERO)
            for i in range(self.size)
        )

    def compose(self, other: "StructureMap") -> "StructureMap":
        if self.size != other.size:
            raise RankMismatch("size mismatch in composition")
        n = self.size
        return StructureMap.from_rows(
            [[sum((self.entries[i][k] * other.entries[k][j] for k in range(n)),
                  start=ZERO)
              for j in range(n)] for i in range(n)]
        )

    def power(self, p: int) -> "StructureMap":
        if p < 0:
            raise ValueError("negative power; use invert_structure_map")
        out = StructureMap.identity(self.size)
        for _ in range(p):
            out = out.compose(self)
        return out

    def det(self) -> MultiPoly:
        return _det(self.entries)

    @property
    def regular(self) -> bool:
        """True iff the determinant is a nonzero rational constant."""
        dt = self.det()
        return dt.is_constant() and not dt.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureMap):
            return NotImplemented
        return self.entries == other.entries


def _det(m: tuple[tuple[MultiPoly, ...], ...]) -> MultiPoly:
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        cofactor = m[0][j] * _det(minor)
        total = total + cofactor if j % 2 == 0 else total - cofactor
    return total


def invert_structure_map(s: StructureMap) -> StructureMap:
    """Exact inverse via the adjugate; requires a unit determinant."""
    dt = s.det()
    if not (dt.is_constant() and not dt.is_zero()):
        raise NotRegular(f"determinant {dt} is not a nonzero constant")
    inv_dt = 1 / dt.constant_value()
    n = s.size
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                tuple(s.entries[r][c] for c in range(n) if c != i)
                for r in range(n) if r != j
            )
            cof = _det(minor).scale(inv_dt)
            row.append(cof if (i + j) % 2 == 0 else -cof)
        rows.append(row)
    return StructureMap.from_rows(rows)


@dataclass(frozen=True)
class HomLieConformalAlgebra:
    """Bracket table on basis pairs plus a twist map commuting with D."""

    rank: int
    basis: tuple[str, ...]
    bracket: tuple[tuple[PolyVector, ...], ...]  # bracket[i][j] = [e_i _l e_j]
    alpha: StructureMap
    name: str = "L"

    def __post_init__(self):
        if len(self.basis) != self.rank:
            raise RankMismatch("basis names do not match rank")
        if len(self.bracket) != self.rank:
            raise RankMismatch("bracket table has wrong number of rows")
        for row in self.bracket:
            if len(row) != self.rank:
                raise RankMismatch("bracket table has wrong number of columns")
            for v in row:
                if len(v) != self.rank:
                    raise RankMismatch("bracket value has wrong length")
                for p in v:
                    extra = p.variables() - {"d", "l"}
                    if extra:
                        raise ValueError(
                            f"bracket entries may use only d and l: {p}")
        if self.alpha.size != self.rank:
            raise RankMismatch("alpha size does not match rank")

    def unit(self, i: int) -> PolyVector:
        return PolyVector.unit(self.rank, i)


@dataclass(frozen=True)
class Representation:
    """Action table rho(e_i)_l f_a on basis pairs, plus the module twist."""

    algebra: HomLieConformalAlgebra
    mrank: int
    mbasis: tuple[str, ...]
    action: tuple[tuple[PolyVector, ...], ...]  # action[i][a] = rho(e_i)_l f_a
    beta: StructureMap
    name: str = "M"

    def __post_init__(self):
        if len(self.mbasis) != self.mrank:
            raise RankMismatch("module basis names do not match rank")
        if len(self.action) != self.algebra.rank:
            raise RankMismatch("action table has wrong number of rows")
        for row in self.action:
            if len(row) != self.mrank:
                raise RankMismatch("action table has wrong number of columns")
            for v in row:
                if len(v) != self.mrank:
                    raise RankMismatch("action value has wrong length")
        if self.beta.size != self.mrank:
            raise RankMismatch("beta size does not match module rank")

    def unit(self, a: int) -> PolyVector:
        return PolyVector.unit(self.mrank, a)


def _table_at(table, u: PolyVector, v: PolyVector, lam: MultiPoly,
              out_rank: int) -> PolyVector:
    """Extend a basis-pair table bilinearly with sesquilinear shifts.

    The generator in first-slot coefficients becomes ``-lam``, in second-slot
    coefficients ``d + lam``; the table's ``l`` becomes ``lam``.  Any other
    lambda variables in the coefficients are scalars and pass through.
    """
    shift_first = {"d": -lam}
    shift_second = {"d": D + lam}
    out = PolyVector.zeros(out_rank)
    for i, ui in enumerate(u):
        if ui.is_zero():
            continue
        pi = ui.subs(shift_first)
        for j, vj in enumerate(v):
            if vj.is_zero():
                continue
            base = table[i][j]
            if base.is_zero():
                continue
            qj = vj.subs(shift_second)
            out = out + base.subs({"l": lam}).scale(pi * qj)
    return out


def bracket_at(a: HomLieConformalAlgebra, u: PolyVector, v: PolyVector,
               lam: MultiPoly) -> PolyVector:
    """[u _lam v] for arbitrary module elements and lambda value."""
    if len(u) != a.rank or len(v) != a.rank:
        raise RankMismatch("element rank does not match algebra rank")
    return _table_at(a.bracket, u, v, lam, a.rank)


def action_at(r: Representation, x: PolyVector, m: PolyVector,
              lam: MultiPoly) -> PolyVector:
    """rho(x)_lam (m) for arbitrary elements and lambda value."""
    if len(x) != r.algebra.rank:
        raise RankMismatch("element rank does not match algebra rank")
    if len(m) != r.mrank:
        raise RankMismatch("element rank does not match module rank")
    return _table_at(r.action, x, m, lam, r.mrank)


def extend_bracket(a: HomLieConformalAlgebra, x: PolyVector,
                   y: PolyVector) -> PolyVector:
    """[x _l y] with the lone lambda variable ``l``."""
    return bracket_at(a, x, y, L)


def extend_action(r: Representation, x: PolyVector,
                  m: PolyVector) -> PolyVector:
    """rho(x)_l (m) with the lone lambda variable ``l``."""
    return action_at(r, x, m, L)


def eval_lambda(v: PolyVector, lvar: str, value: MultiPoly) -> PolyVector:
    """Substitute one lambda variable componentwise (canonical result)."""
    return v.subs({lvar: value})


def _tuple_name(basis: tuple[str, ...], idx: tuple[int, ...]) -> str:
    return "(" + ", ".join(basis[i] for i in idx) + ")"


def check_hom_lie(a: HomLieConformalAlgebra) -> Report:
    """Skew-symmetry and Hom-Jacobi on all basis tuples; twist
    multiplicativity over the bracket is reported as advisory only."""
    rep = Report(f"check algebra {a.name}")
    basis = list(a.basis)
    l1, l2 = MultiPoly.var("l1"), MultiPoly.var("l2")
    for i in range(a.rank):
        for j in range(a.rank):
            residual = a.bracket[i][j] + eval_lambda(
                a.bracket[j][i], "l", NEG_D_MINUS_L)
            rep.add(f"skew {basis[i]} {basis[j]}", residual, basis,
                    _tuple_name(a.basis, (i, j)))
    for i in range(a.rank):
        for j in range(a.rank):
            for k in range(a.rank):
                ei, ej, ek = a.unit(i), a.unit(j), a.unit(k)
                t1 = bracket_at(a, a.alpha.apply(ei),
                                bracket_at(a, ej, ek, l2), l1)
                t2 = bracket_at(a, bracket_at(a, ei, ej, l1),
                                a.alpha.apply(ek), l1 + l2)
                t3 = bracket_at(a, a.alpha.apply(ej),
                                bracket_at(a, ei, ek, l1), l2)
                rep.add(f"jacobi {basis[i]} {basis[j]} {basis[k]}",
                        t1 - t2 - t3, basis,
                        _tuple_name(a.basis, (i, j, k)))
    for i in range(a.rank):
        for j in range(a.rank):
            lhs = a.alpha.apply(a.bracket[i][j])
            rhs = bracket_at(a, a.alpha.apply(a.unit(i)),
                             a.alpha.apply(a.unit(j)), L)
            rep.add(f"mult {basis[i]} {basis[j]}", lhs - rhs, basis,
                    _tuple_name(a.basis, (i, j)), advisory=True)
    return rep


def check_representation(a: HomLieConformalAlgebra, r: Representation) -> Report:
    """The twisted composition axiom on basis triples; the untwisted variant
    from the definition's third line is reported as advisory."""
    rep = Report(f"check rep {r.name}")
    l1, l2 = MultiPoly.var("l1"), MultiPoly.var("l2")
    for i in range(a.rank):
        for j in range(a.rank):
            w = bracket_at(a, a.unit(i), a.unit(j), l1)
            for b in range(r.mrank):
                fb = r.unit(b)
                lhs = action_at(r, w, r.beta.apply(fb), l1 + l2)
                t1 = action_at(r, a.alpha.apply(a.unit(i)),
                               action_at(r, a.unit(j), fb, l2), l1)
                t2 = action_at(r, a.alpha.apply(a.unit(j)),
                               action_at(r, a.unit(i), fb, l1), l2)
                rep.add(
                    f"composition {a.basis[i]} {a.basis[j]} {r.mbasis[b]}",
                    lhs - (t1 - t2), list(r.mbasis),
                    f"({a.basis[i]}, {a.basis[j]}, {r.mbasis[b]})")
                untwisted = action_at(r, w, fb, l1 + l2)
                rep.add(
                    f"composition-untwisted {a.basis[i]} {a.basis[j]} {r.mbasis[b]}",
                    untwisted - (t1 - t2), list(r.mbasis),
                    f"({a.basis[i]}, {a.basis[j]}, {r.mbasis[b]})",
                    advisory=True)
    return rep


def semidirect(a: HomLieConformalAlgebra, r: Representation,
               name: str | None = None) -> HomLieConformalAlgebra:
    """Block bracket [(x+m) _l (y+n)] = [x_l y] + rho(x)_l n - rho(y)_{-D-l} m
    with twist alpha (+) beta."""
    n, m = a.rank, r.mrank
    total = n + m

    def embed_l(v: PolyVector) -> PolyVector:
        return PolyVector(list(v) + [ZERO] * m)

    def embed_m(v: PolyVector) -> PolyVector:
        return PolyVector([ZERO] * n + list(v))

    table: list[list[PolyVector]] = [
        [PolyVector.zeros(total) for _ in range(total)] for _ in range(total)]
    for i in range(n):
        for j in range(n):
            table[i][j] = embed_l(a.bracket[i][j])
        for b in range(m):
            table[i][n + b] = embed_m(r.action[i][b])
            table[n + b][i] = embed_m(
                -eval_lambda(r.action[i][b], "l", NEG_D_MINUS_L))
    alpha_beta = StructureMap.from_rows(
        [[a.alpha.entries[i][j] if i < n and j < n
          else r.beta.entries[i - n][j - n] if i >= n and j >= n
          else ZERO
          for j in range(total)] for i in range(total)])
    return HomLieConformalAlgebra(
        rank=total,
        basis=tuple(a.basis) + tuple(r.mbasis),
        bracket=tuple(tuple(row) for row in table),
        alpha=alpha_beta,
        name=name or f"{a.name}(x){r.name}",
    )


def adjoint_rep(a: HomLieConformalAlgebra, p: int) -> Representation:
    """The p-adjoint representation: action [alpha^p(e_i) _l e_j] on L itself."""
    ap = a.alpha.power(p)
    action = tuple(
        tuple(bracket_at(a, ap.apply(a.unit(i)), a.unit(j), L)
              for j in range(a.rank))
        for i in range(a.rank))
    return Representation(
        algebra=a, mrank=a.rank, mbasis=a.basis, action=action,
        beta=a.alpha, name=f"ad{p}({a.name})")
