"""Line-oriented workspace files: named algebras, modules, maps, cochains,
and deformation sequences.

The grammar is line-based with ``#`` comments.  Blocks start with one of the
keywords ``algebra``, ``module``, ``map``, ``cochain``, ``deformation`` and
collect their body lines until the next block.  All indices in files are
1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .poly import MultiPoly, PolyVector, ZERO, lam_name
from .parser import PolyParseError, parse_poly
from .structures import (
    HomLieConformalAlgebra,
    Representation,
    StructureMap,
)
from .cochains import Cochain, Space, algebra_space, module_space
from .operators import ModuleMap
from .deformations import DeformationSequence


class WorkspaceError(ValueError):
    """A problem in a workspace file, annotated with its line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class WorkspaceSyntaxError(WorkspaceError):
    pass


class UnresolvedReference(WorkspaceError):
    pass


class DuplicateName(WorkspaceError):
    pass


class WorkspaceRankMismatch(WorkspaceError):
    pass


@dataclass(frozen=True)
class MapEntry:
    name: str
    source: str           # module or algebra name
    target: str           # algebra name
    source_is_module: bool
    matrix: ModuleMap


@dataclass(frozen=True)
class CochainEntry:
    name: str
    source: str
    target: str
    source_is_module: bool
    target_is_module: bool
    cochain: Cochain


@dataclass
class Workspace:
    algebras: dict[str, HomLieConformalAlgebra] = field(default_factory=dict)
    modules: dict[str, Representation] = field(default_factory=dict)
    maps: dict[str, MapEntry] = field(default_factory=dict)
    cochains: dict[str, CochainEntry] = field(default_factory=dict)
    deformations: dict[str, DeformationSequence] = field(default_factory=dict)
    # deformation name -> (module name, algebra name) of its coefficients
    deformation_contexts: dict[str, tuple[str, str]] = field(default_factory=dict)

    def algebra(self, name: str, line_no: int = 0) -> HomLieConformalAlgebra:
        if name not in self.algebras:
            raise UnresolvedReference(line_no, f"unknown algebra '{name}'")
        return self.algebras[name]

    def module(self, name: str, line_no: int = 0) -> Representation:
        if name not in self.modules:
            raise UnresolvedReference(line_no, f"unknown module '{name}'")
        return self.modules[name]

    def map_entry(self, name: str, line_no: int = 0) -> MapEntry:
        if name not in self.maps:
            raise UnresolvedReference(line_no, f"unknown map '{name}'")
        return self.maps[name]

    def cochain_entry(self, name: str, line_no: int = 0) -> CochainEntry:
        if name not in self.cochains:
            raise UnresolvedReference(line_no, f"unknown cochain '{name}'")
        return self.cochains[name]

    def deformation(self, name: str, line_no: int = 0) -> DeformationSequence:
        if name not in self.deformations:
            raise UnresolvedReference(line_no, f"unknown deformation '{name}'")
        return self.deformations[name]


def _poly(text: str, allowed: set[str], line_no: int) -> MultiPoly:
    try:
        return parse_poly(text, allowed)
    except PolyParseError as exc:
        raise WorkspaceSyntaxError(line_no, str(exc)) from exc


def _vector(text: str, allowed: set[str], rank: int,
            line_no: int) -> PolyVector:
    parts = [p.strip() for p in text.split("|")]
    if len(parts) != rank:
        raise WorkspaceRankMismatch(
            line_no, f"expected {rank} slot(s), got {len(parts)}")
    return PolyVector(_poly(p, allowed, line_no) for p in parts)


def _matrix(text: str, allowed: set[str], line_no: int) -> list[list[MultiPoly]]:
    rows = [r.strip() for r in text.split(";")]
    out = []
    for r in rows:
        out.append([_poly(e.strip(), allowed, line_no)
                    for e in r.split(",")])
    width = {len(r) for r in out}
    if len(width) != 1:
        raise WorkspaceRankMismatch(line_no, "ragged matrix rows")
    return out


def _default_basis(prefix: str, rank: int) -> tuple[str, ...]:
    if rank == 1:
        return (prefix,)
    return tuple(f"{prefix}{i + 1}" for i in range(rank))


def _index(token: str, rank: int, line_no: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise WorkspaceSyntaxError(line_no, f"bad {what} index '{token}'")
    if not 1 <= value <= rank:
        raise WorkspaceRankMismatch(
            line_no, f"{what} index {value} outside 1..{rank}")
    return value - 1


class _AlgebraBuilder:
    def __init__(self, name: str, line_no: int):
        self.name = name
        self.line_no = line_no
        self.rank: int | None = None
        self.alpha: list[list[MultiPoly]] | None = None
        self.bracket: dict[tuple[int, int], PolyVector] = {}

    def feed(self, key: str, rest: str, line_no: int) -> None:
        if key == "rank":
            try:
                self.rank = int(rest)
            except ValueError:
                raise WorkspaceSyntaxError(line_no, f"bad rank '{rest}'")
            if self.rank < 1:
                raise WorkspaceRankMismatch(line_no, "rank must be positive")
        elif key == "alpha":
            self.alpha = _matrix(rest, {"d"}, line_no)
        elif key == "bracket":
            if self.rank is None:
                raise WorkspaceSyntaxError(line_no, "rank must come first")
            head, sep, body = rest.partition(":")
            if not sep:
                raise WorkspaceSyntaxError(line_no, "bracket needs ':'")
            tokens = head.split()
            if len(tokens) != 2:
                raise WorkspaceSyntaxError(
                    line_no, "bracket needs two basis indices")
            i = _index(tokens[0], self.rank, line_no, "basis")
            j = _index(tokens[1], self.rank, line_no, "basis")
            if (i, j) in self.bracket:
                raise DuplicateName(line_no, f"bracket {i+1} {j+1} repeated")
            self.bracket[(i, j)] = _vector(body.strip(), {"d", "l"},
                                           self.rank, line_no)
        else:
            raise WorkspaceSyntaxError(line_no, f"unexpected '{key}' in algebra")

    def finish(self) -> HomLieConformalAlgebra:
        if self.rank is None:
            raise WorkspaceSyntaxError(self.line_no, "algebra needs a rank")
        rank = self.rank
        if self.alpha is None:
            alpha = StructureMap.identity(rank)
        else:
            if len(self.alpha) != rank or any(len(r) != rank for r in self.alpha):
                raise WorkspaceRankMismatch(self.line_no, "alpha shape mismatch")
            alpha = StructureMap(tuple(tuple(r) for r in self.alpha))
        zero = PolyVector.zeros(rank)
        table = tuple(tuple(self.bracket.get((i, j), zero)
                            for j in range(rank)) for i in range(rank))
        return HomLieConformalAlgebra(rank, _default_basis("e", rank),
                                      table, alpha, name=self.name)


class _ModuleBuilder:
    def __init__(self, name: str, over: str, line_no: int):
        self.name = name
        self.over = over
        self.line_no = line_no
        self.rank: int | None = None
        self.beta: list[list[MultiPoly]] | None = None
        self.action: dict[tuple[int, int], PolyVector] = {}

    def feed(self, key: str, rest: str, line_no: int,
             ws: Workspace) -> None:
        if key == "rank":
            try:
                self.rank = int(rest)
            except ValueError:
                raise WorkspaceSyntaxError(line_no, f"bad rank '{rest}'")
            if self.rank < 1:
                raise WorkspaceRankMismatch(line_no, "rank must be positive")
        elif key == "beta":
            self.beta = _matrix(rest, {"d"}, line_no)
        elif key == "action":
            if self.rank is None:
                raise WorkspaceSyntaxError(line_no, "rank must come first")
            alg = ws.algebra(self.over, line_no)
            head, sep, body = rest.partition(":")
            if not sep:
                raise WorkspaceSyntaxError(line_no, "action needs ':'")
            tokens = head.split()
            if len(tokens) != 2:
                raise WorkspaceSyntaxError(
                    line_no, "action needs algebra and module indices")
            i = _index(tokens[0], alg.rank, line_no, "basis")
            a = _index(tokens[1], self.rank, line_no, "module basis")
            if (i, a) in self.action:
                raise DuplicateName(line_no, f"action {i+1} {a+1} repeated")
            self.action[(i, a)] = _vector(body.strip(), {"d", "l"},
                                          self.rank, line_no)
        else:
            raise WorkspaceSyntaxError(line_no, f"unexpected '{key}' in module")

    def finish(self, ws: Workspace) -> Representation:
        alg = ws.algebra(self.over, self.line_no)
        if self.rank is None:
            raise WorkspaceSyntaxError(self.line_no, "module needs a rank")
        rank = self.rank
        if self.beta is None:
            beta = StructureMap.identity(rank)
        else:
            if len(self.beta) != rank or any(len(r) != rank for r in self.beta):
                raise WorkspaceRankMismatch(self.line_no, "beta shape mismatch")
            beta = StructureMap(tuple(tuple(r) for r in self.beta))
        zero = PolyVector.zeros(rank)
        table = tuple(tuple(self.action.get((i, a), zero)
                            for a in range(rank)) for i in range(alg.rank))
        return Representation(algebra=alg, mrank=rank,
                              mbasis=_default_basis("f", rank),
                              action=table, beta=beta, name=self.name)


class _MapBuilder:
    def __init__(self, name: str, source: str, target: str, line_no: int):
        self.name = name
        self.source = source
        self.target = target
        self.line_no = line_no
        self.matrix: list[list[MultiPoly]] | None = None

    def feed(self, key: str, rest: str, line_no: int) -> None:
        if key == "matrix":
            self.matrix = _matrix(rest, {"d"}, line_no)
        else:
            raise WorkspaceSyntaxError(line_no, f"unexpected '{key}' in map")

    def finish(self, ws: Workspace) -> MapEntry:
        target = ws.algebra(self.target, self.line_no)
        if self.source in ws.modules:
            src_rank = ws.modules[self.source].mrank
            is_module = True
        elif self.source in ws.algebras:
            src_rank = ws.algebras[self.source].rank
            is_module = False
        else:
            raise UnresolvedReference(
                self.line_no, f"unknown source '{self.source}'")
        if self.matrix is None:
            raise WorkspaceSyntaxError(self.line_no, "map needs a matrix")
        if (len(self.matrix) != target.rank
                or any(len(r) != src_rank for r in self.matrix)):
            raise WorkspaceRankMismatch(self.line_no, "matrix shape mismatch")
        mm = ModuleMap.from_rows(src_rank, target.rank, self.matrix)
        return MapEntry(self.name, self.source, self.target, is_module, mm)


class _CochainBuilder:
    def __init__(self, name: str, degree: int, source: str, target: str,
                 line_no: int):
        self.name = name
        self.degree = degree
        self.source = source
        self.target = target
        self.line_no = line_no
        self.values: dict[tuple[int, ...], PolyVector] = {}
        self.src_rank: int | None = None
        self.dst_rank: int | None = None

    def _space(self, name: str, ws: Workspace, line_no: int) -> tuple[Space, bool]:
        if name in ws.modules:
            return module_space(ws.modules[name]), True
        if name in ws.algebras:
            return algebra_space(ws.algebras[name]), False
        raise UnresolvedReference(line_no, f"unknown space '{name}'")

    def feed(self, key: str, rest: str, line_no: int, ws: Workspace) -> None:
        if key != "value":
            raise WorkspaceSyntaxError(line_no, f"unexpected '{key}' in cochain")
        src, _ = self._space(self.source, ws, line_no)
        dst, _ = self._space(self.target, ws, line_no)
        head, sep, body = rest.partition(":")
        if not sep:
            raise WorkspaceSyntaxError(line_no, "value needs ':'")
        tokens = head.split()
        if len(tokens) != self.degree:
            raise WorkspaceSyntaxError(
                line_no, f"degree {self.degree} cochain needs "
                f"{self.degree} indices")
        idx = tuple(_index(t, src.rank, line_no, "basis") for t in tokens)
        if idx in self.values:
            raise DuplicateName(line_no, f"value {head.strip()} repeated")
        allowed = {"d"} | {lam_name(i) for i in range(1, max(self.degree, 1))}
        self.values[idx] = _vector(body.strip(), allowed, dst.rank, line_no)

    def finish(self, ws: Workspace) -> CochainEntry:
        src, src_mod = self._space(self.source, ws, self.line_no)
        dst, dst_mod = self._space(self.target, ws, self.line_no)
        table = {idx: v for idx, v in self.values.items() if not v.is_zero()}
        cochain = Cochain(self.degree, src, dst, table)
        return CochainEntry(self.name, self.source, self.target,
                            src_mod, dst_mod, cochain)


def parse_workspace(text: str) -> Workspace:
    ws = Workspace()
    builder = None

    def finalize(line_no: int) -> None:
        nonlocal builder
        if builder is None:
            return
        if isinstance(builder, _AlgebraBuilder):
            ws.algebras[builder.name] = builder.finish()
        elif isinstance(builder, _ModuleBuilder):
            ws.modules[builder.name] = builder.finish(ws)
        elif isinstance(builder, _MapBuilder):
            ws.maps[builder.name] = builder.finish(ws)
        elif isinstance(builder, _CochainBuilder):
            ws.cochains[builder.name] = builder.finish(ws)
        builder = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "algebra":
            finalize(line_no)
            name = rest
            if not name or " " in name:
                raise WorkspaceSyntaxError(line_no, "algebra needs one name")
            if name in ws.algebras:
                raise DuplicateName(line_no, f"algebra '{name}' redefined")
            builder = _AlgebraBuilder(name, line_no)
        elif key == "module":
            finalize(line_no)
            tokens = rest.split()
            if len(tokens) != 3 or tokens[1] != "over":
                raise WorkspaceSyntaxError(
                    line_no, "expected: module <name> over <algebra>")
            if tokens[0] in ws.modules:
                raise DuplicateName(line_no, f"module '{tokens[0]}' redefined")
            builder = _ModuleBuilder(tokens[0], tokens[2], line_no)
        elif key == "map":
            finalize(line_no)
            head, sep, arrow = rest.partition(":")
            name = head.strip()
            if not sep or "->" not in arrow:
                raise WorkspaceSyntaxError(
                    line_no, "expected: map <name> : <source> -> <algebra>")
            src, _, dst = arrow.partition("->")
            if name in ws.maps:
                raise DuplicateName(line_no, f"map '{name}' redefined")
            builder = _MapBuilder(name, src.strip(), dst.strip(), line_no)
        elif key == "cochain":
            finalize(line_no)
            head, sep, arrow = rest.partition(":")
            tokens = head.split()
            if (not sep or len(tokens) != 3 or tokens[1] != "degree"
                    or "->" not in arrow):
                raise WorkspaceSyntaxError(
                    line_no, "expected: cochain <name> degree <p> : "
                    "<source> -> <target>")
            try:
                degree = int(tokens[2])
            except ValueError:
                raise WorkspaceSyntaxError(line_no, f"bad degree '{tokens[2]}'")
            if degree < 0:
                raise WorkspaceSyntaxError(line_no, "degree must be >= 0")
            if tokens[0] in ws.cochains:
                raise DuplicateName(line_no, f"cochain '{tokens[0]}' redefined")
            src, _, dst = arrow.partition("->")
            builder = _CochainBuilder(tokens[0], degree, src.strip(),
                                      dst.strip(), line_no)
        elif key == "deformation":
            finalize(line_no)
            head, sep, body = rest.partition(":")
            name = head.strip()
            if not sep or not name:
                raise WorkspaceSyntaxError(
                    line_no, "expected: deformation <name> : <map> + <map> ...")
            if name in ws.deformations:
                raise DuplicateName(line_no, f"deformation '{name}' redefined")
            parts = [p.strip() for p in body.split("+")]
            if len(parts) < 2:
                raise WorkspaceSyntaxError(
                    line_no, "deformation needs at least two maps")
            entries = [ws.map_entry(p, line_no) for p in parts]
            first = entries[0]
            if not first.source_is_module:
                raise WorkspaceRankMismatch(
                    line_no, "deformation maps must go from a module")
            for e in entries[1:]:
                if e.source != first.source or e.target != first.target:
                    raise WorkspaceRankMismatch(
                        line_no, "deformation maps must share one context")
            ws.deformations[name] = DeformationSequence(
                entries[0].matrix, tuple(e.matrix for e in entries[1:]))
            ws.deformation_contexts[name] = (first.source, first.target)
        elif builder is not None:
            if isinstance(builder, (_ModuleBuilder, _CochainBuilder)):
                builder.feed(key, rest, line_no, ws)
            else:
                builder.feed(key, rest, line_no)
        else:
            raise WorkspaceSyntaxError(line_no, f"unexpected '{key}'")
    finalize(len(text.splitlines()) + 1)
    return ws


def serialize_workspace(ws: Workspace) -> str:
    """Render a workspace back to the file grammar (round-trips)."""
    lines: list[str] = []

    def matrix_text(rows) -> str:
        return "; ".join(", ".join(str(p) for p in row) for row in rows)

    for name, a in ws.algebras.items():
        lines.append(f"algebra {name}")
        lines.append(f"rank {a.rank}")
        lines.append(f"alpha {matrix_text(a.alpha.entries)}")
        for i in range(a.rank):
            for j in range(a.rank):
                if not a.bracket[i][j].is_zero():
                    slots = " | ".join(str(p) for p in a.bracket[i][j])
                    lines.append(f"bracket {i + 1} {j + 1} : {slots}")
        lines.append("")
    for name, r in ws.modules.items():
        lines.append(f"module {name} over {r.algebra.name}")
        lines.append(f"rank {r.mrank}")
        lines.append(f"beta {matrix_text(r.beta.entries)}")
        for i in range(r.algebra.rank):
            for a_ in range(r.mrank):
                if not r.action[i][a_].is_zero():
                    slots = " | ".join(str(p) for p in r.action[i][a_])
                    lines.append(f"action {i + 1} {a_ + 1} : {slots}")
        lines.append("")
    for name, m in ws.maps.items():
        lines.append(f"map {name} : {m.source} -> {m.target}")
        lines.append(f"matrix {matrix_text(m.matrix.entries)}")
        lines.append("")
    for name, c in ws.cochains.items():
        lines.append(f"cochain {name} degree {c.cochain.degree} : "
                     f"{c.source} -> {c.target}")
        for idx in sorted(c.cochain.table):
            slots = " | ".join(str(p) for p in c.cochain.table[idx])
            head = " ".join(str(i + 1) for i in idx)
            lines.append(f"value {head} : {slots}")
        lines.append("")
    for name, s in ws.deformations.items():
        member_names = []
        for mm in (s.base,) + s.higher:
            found = next((n for n, e in ws.maps.items()
                          if e.matrix.entries == mm.entries), None)
            member_names.append(found if found is not None else "?")
        lines.append(f"deformation {name} : " + " + ".join(member_names))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
