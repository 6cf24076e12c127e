"""Exact multivariate polynomial arithmetic over the rationals.

The variable universe is fixed: ``d`` (the translation generator acting on
outputs), ``l`` (a lone lambda) and ``l1`` .. ``l9`` (indexed lambdas).  A
polynomial is a map from exponent tuples (one entry per variable, in that
order) to nonzero Fraction coefficients; the zero polynomial has an empty
term map.  Two polynomials are equal iff their term maps are identical, so
equality testing never needs normalization beyond what the constructor does.

Printing sorts monomials by descending lexicographic exponent order and
always writes explicit coefficients (``-1*d - 2*l``), which the parser in
:mod:`homconf.parser` accepts back unchanged.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

VARS: tuple[str, ...] = ("d", "l", "l1", "l2", "l3", "l4", "l5", "l6", "l7", "l8", "l9")
VAR_INDEX: dict[str, int] = {name: i for i, name in enumerate(VARS)}
NVARS = len(VARS)

_ZERO_EXP = (0,) * NVARS

Scalar = Union[int, Fraction]


class MultiPoly:
    """A polynomial with rational coefficients in the fixed variable set."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                c = Fraction(coeff)
                if c:
                    clean[exp] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return MultiPoly()

    @staticmethod
    def const(value: Scalar) -> "MultiPoly":
        c = Fraction(value)
        if not c:
            return MultiPoly()
        return MultiPoly({_ZERO_EXP: c})

    @staticmethod
    def var(name: str) -> "MultiPoly":
        if name not in VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}")
        exp = [0] * NVARS
        exp[VAR_INDEX[name]] = 1
        return MultiPoly({tuple(exp): Fraction(1)})

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return MultiPoly(out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({exp: -c for exp, c in self.terms.items()})

    def __mul__(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, Fraction(0)) + ca * cb
        return MultiPoly(out)

    def __rmul__(self, other: Scalar) -> "MultiPoly":
        return self.scale(other)

    def scale(self, c: Scalar) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly()
        return MultiPoly({exp: coeff * c for exp, coeff in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative exponent")
        out = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(exp == _ZERO_EXP for exp in self.terms)

    def constant_value(self) -> Fraction:
        """Value as a rational; raises if any variable appears."""
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms[_ZERO_EXP]

    def variables(self) -> set[str]:
        used: set[str] = set()
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used.add(VARS[i])
        return used

    def degree_in(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = VAR_INDEX[name]
        if not self.terms:
            return -1
        return max(exp[i] for exp in self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- substitution ---------------------------------------------------

    def subs(self, mapping: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Simultaneous substitution of variables by polynomial values.

        Variables absent from the mapping are left alone (substituting an
        absent variable is the identity).
        """
        if not mapping:
            return self
        idx_map = {VAR_INDEX[name]: value for name, value in mapping.items()}
        out = MultiPoly()
        for exp, coeff in self.terms.items():
            factor = MultiPoly.const(coeff)
            rest = [0] * NVARS
            for i, e in enumerate(exp):
                if not e:
                    continue
                if i in idx_map:
                    factor = factor * (idx_map[i] ** e)
                else:
                    rest[i] = e
            if any(rest):
                factor = factor * MultiPoly({tuple(rest): Fraction(1)})
            out = out + factor
        return out

    def subs1(self, name: str, value: "MultiPoly") -> "MultiPoly":
        return self.subs({name: value})

    # -- printing --------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exp in sorted(self.terms, reverse=True):
            coeff = self.terms[exp]
            mono = "*".join(
                VARS[i] if e == 1 else f"{VARS[i]}^{e}"
                for i, e in enumerate(exp)
                if e
            )
            if mono:
                body = f"{abs(coeff)}*{mono}"
            else:
                body = f"{abs(coeff)}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


ZERO = MultiPoly.zero()
ONE = MultiPoly.const(1)
D = MultiPoly.var("d")
L = MultiPoly.var("l")


def lam(i: int) -> MultiPoly:
    """The indexed lambda variable l<i>, 1 <= i <= 9."""
    if not 1 <= i <= 9:
        raise ValueError(f"lambda index {i} out of range 1..9")
    return MultiPoly.var(f"l{i}")


def lam_name(i: int) -> str:
    if not 1 <= i <= 9:
        raise ValueError(f"lambda index {i} out of range 1..9")
    return f"l{i}"


class PolyVector:
    """Fixed-length vector of polynomials; coordinates in a free module."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[MultiPoly]):
        self.entries = tuple(entries)

    @staticmethod
    def zeros(rank: int) -> "PolyVector":
        return PolyVector([ZERO] * rank)

    @staticmethod
    def unit(rank: int, i: int) -> "PolyVector":
        if not 0 <= i < rank:
            raise ValueError(f"unit index {i} out of range for rank {rank}")
        return PolyVector([ONE if j == i else ZERO for j in range(rank)])

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> MultiPoly:
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "PolyVector") -> "PolyVector":
        self._check_rank(other)
        return PolyVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        self._check_rank(other)
        return PolyVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "PolyVector":
        return PolyVector(-a for a in self.entries)

    def scale(self, p: Union[MultiPoly, Scalar]) -> "PolyVector":
        if isinstance(p, (int, Fraction)):
            p = MultiPoly.const(p)
        return PolyVector(p * a for a in self.entries)

    def subs(self, mapping: Mapping[str, MultiPoly]) -> "PolyVector":
        return PolyVector(a.subs(mapping) for a in self.entries)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def _check_rank(self, other: "PolyVector") -> None:
        if len(self.entries) != len(other.entries):
            raise ValueError(
                f"rank mismatch: {len(self.entries)} vs {len(other.entries)}"
            )

    def __str__(self) -> str:
        return " | ".join(str(a) for a in self.entries)

    def __repr__(self) -> str:
        return f"PolyVector({self})"
