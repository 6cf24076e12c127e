"""Command-line front end.

Reads a workspace file, runs one command against it, and prints a
deterministic report (text or JSON).  Exit codes: 0 when every check
passes, 1 when a check fails, 2 on input errors (bad file, unknown
name, malformed command line).
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .cochains import (
    Cochain,
    check_cochain,
    circle,
    coboundary,
    mc_check,
    nr_bracket,
)
from .deformations import (
    check_linear_deformation,
    check_order_k,
    extend_order,
    obstruction,
    search_ooperators,
)
from .operators import (
    ModuleMap,
    check_ooperator,
    check_pre_lie,
    check_rota_baxter,
    delta_t,
    graded_bracket,
    nijenhuis_check,
    pre_lie_from,
)
from .report import Report
from .structures import check_hom_lie, check_representation
from .workspace import MapEntry, Workspace, parse_workspace


USAGE = ("usage: homconf [--report text|json] [--all-witnesses] "
         "<workspace-file> <command> [args...]")


class CommandError(ValueError):
    """A malformed or unknown command line."""


@dataclass
class ReportDocument:
    """What one invocation prints: version, echoed command, check entries,
    overall status, and any computed result lines."""

    version: str
    command: str
    entries: list[dict]
    overall: str
    results: list[str] = field(default_factory=list)

    @staticmethod
    def build(command: list[str], report: Report,
              results: Optional[list[str]] = None) -> "ReportDocument":
        entries = []
        for e in report.entries:
            witness = None
            if e.witness is not None:
                witness = {"where": e.witness.where,
                           "component": e.witness.component,
                           "poly": e.witness.poly}
            entries.append({"id": e.name, "status": e.status,
                            "witness": witness})
        return ReportDocument(__version__, " ".join(command), entries,
                              "pass" if report.passed else "fail",
                              list(results or []))

    def to_json(self) -> str:
        payload = {"version": self.version, "command": self.command,
                   "entries": self.entries, "overall": self.overall,
                   "results": self.results}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_text(self, all_witnesses: bool = False) -> str:
        lines = [f"homconf {self.version}", f"command: {self.command}"]
        shown = 0
        suppressed = 0
        for e in self.entries:
            line = f"[{e['status']:8s}] {e['id']}"
            w = e["witness"]
            if w is not None:
                if all_witnesses or shown == 0:
                    line += f"  at {w['where']}: ({w['poly']}) * {w['component']}"
                    shown += 1
                else:
                    suppressed += 1
            lines.append(line)
        if suppressed:
            lines.append(f"({suppressed} further witness(es) suppressed; "
                         "use --all-witnesses)")
        if self.results:
            lines.append("result:")
            lines.extend(f"  {r}" for r in self.results)
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines) + "\n"


# -- rendering helpers --------------------------------------------------------


def _matrix_line(m: ModuleMap) -> str:
    return "matrix " + "; ".join(
        ", ".join(str(p) for p in row) for row in m.entries)


def _cochain_lines(c: Cochain) -> list[str]:
    lines = [f"degree {c.degree}"]
    nonzero = {idx: v for idx, v in c.table.items() if not v.is_zero()}
    if not nonzero:
        lines.append("zero")
        return lines
    for idx in sorted(nonzero):
        head = " ".join(str(i + 1) for i in idx)
        slots = " | ".join(str(p) for p in nonzero[idx])
        lines.append(f"value {head} : {slots}".replace("value  :", "value :"))
    return lines


def _computed(title: str) -> Report:
    rep = Report(title)
    rep.add_bool("computed", True)
    return rep


# -- command plumbing ---------------------------------------------------------


def _take_option(tokens: list[str], flag: str) -> Optional[str]:
    """Remove `flag value` from the token list and return the value."""
    if flag not in tokens:
        return None
    i = tokens.index(flag)
    if i + 1 >= len(tokens):
        raise CommandError(f"{flag} needs a value")
    value = tokens[i + 1]
    del tokens[i:i + 2]
    return value

def _require_option(tokens: list[str], flag: str) -> str:
    value = _take_option(tokens, flag)
    if value is None:
        raise CommandError(f"missing required option {flag}")
    return value


def _positional(tokens: list[str], count: int, shape: str) -> list[str]:
    if len(tokens) != count:
        raise CommandError(f"expected: {shape}")
    return tokens


def _map_context(ws: Workspace, entry: MapEntry, module_override=None):
    """The (algebra, module) pair a module-to-algebra map lives over."""
    if module_override is None and not entry.source_is_module:
        raise CommandError(
            f"map '{entry.name}' has an algebra source; this command needs "
            "a module-to-algebra map")
    module_name = module_override or entry.source
    r = ws.module(module_name)
    a = ws.algebra(entry.target)
    return a, r


def _square_operator(ws: Workspace, entry: MapEntry):
    if entry.source_is_module or entry.source != entry.target:
        raise CommandError(
            f"map '{entry.name}' must go from the algebra to itself")
    return ws.algebra(entry.target)


def _module_cochain(ws: Workspace, name: str):
    entry = ws.cochain_entry(name)
    if not entry.source_is_module or entry.target_is_module:
        raise CommandError(
            f"cochain '{name}' must go from a module to an algebra")
    a = ws.algebra(entry.target)
    r = ws.module(entry.source)
    return a, r, entry.cochain


def _deformation_context(ws: Workspace, name: str):
    s = ws.deformation(name)
    module_name, algebra_name = ws.deformation_contexts[name]
    return ws.algebra(algebra_name), ws.module(module_name), s


# -- commands -----------------------------------------------------------------


def _cmd_check(ws: Workspace, tokens: list[str]):
    if not tokens:
        raise CommandError("expected: check <kind> <name> [options]")
    kind = tokens[0]
    rest = tokens[1:]
    if kind == "algebra":
        (name,) = _positional(rest, 1, "check algebra <name>")
        return check_hom_lie(ws.algebra(name)), []
    if kind == "rep":
        (name,) = _positional(rest, 1, "check rep <name>")
        r = ws.module(name)
        return check_representation(r.algebra, r), []
    if kind == "oop":
        module_override = _take_option(rest, "--module")
        (name,) = _positional(rest, 1, "check oop <map> [--module <m>]")
        entry = ws.map_entry(name)
        a, r = _map_context(ws, entry, module_override)
        return check_ooperator(a, r, entry.matrix), []
    if kind == "rotabaxter":
        p = _require_option(rest, "--p")
        q = _require_option(rest, "--q")
        (name,) = _positional(rest, 1,
                              "check rotabaxter <map> --p <int> --q <rat>")
        entry = ws.map_entry(name)
        a = _square_operator(ws, entry)
        return check_rota_baxter(a, entry.matrix, int(p), Fraction(q)), []
    if kind == "nijenhuis":
        (name,) = _positional(rest, 1, "check nijenhuis <map>")
        entry = ws.map_entry(name)
        a = _square_operator(ws, entry)
        return nijenhuis_check(a, entry.matrix), []
    if kind == "cochain":
        (name,) = _positional(rest, 1, "check cochain <name>")
        return check_cochain(ws.cochain_entry(name).cochain), []
    raise CommandError(f"unknown check kind '{kind}'")


def _cmd_cobound(ws: Workspace, tokens: list[str]):
    (name,) = _positional(tokens, 1, "cobound <cochain>")
    entry = ws.cochain_entry(name)
    if entry.source_is_module:
        raise CommandError(
            f"cochain '{name}' must be defined on an algebra")
    a = ws.algebra(entry.source)
    r = ws.module(entry.target) if entry.target_is_module else None
    out = coboundary(a, r, entry.cochain)
    return _computed(f"cobound {name}"), _cochain_lines(out)


def _cmd_binary(ws: Workspace, op, tokens: list[str], shape: str):
    f_name, g_name = _positional(tokens, 2, shape)
    f = ws.cochain_entry(f_name).cochain
    g = ws.cochain_entry(g_name).cochain
    out = op(f, g)
    return _computed(shape.split()[0]), _cochain_lines(out)


def _cmd_gbracket(ws: Workspace, tokens: list[str]):
    f_name, g_name = _positional(tokens, 2, "gbracket <cochain> <cochain>")
    a, r, f = _module_cochain(ws, f_name)
    _, _, g = _module_cochain(ws, g_name)
    out = graded_bracket(a, r, f, g)
    return _computed("gbracket"), _cochain_lines(out)


def _cmd_delta_t(ws: Workspace, tokens: list[str]):
    map_name, cochain_name = _positional(tokens, 2, "deltaT <map> <cochain>")
    entry = ws.map_entry(map_name)
    a, r = _map_context(ws, entry)
    _, _, f = _module_cochain(ws, cochain_name)
    out = delta_t(a, r, entry.matrix, f)
    return _computed("deltaT"), _cochain_lines(out)


def _cmd_prelie(ws: Workspace, tokens: list[str]):
    (name,) = _positional(tokens, 1, "prelie <map>")
    entry = ws.map_entry(name)
    a, r = _map_context(ws, entry)
    product = pre_lie_from(a, r, entry.matrix)
    results = []
    for m in range(product.rank):
        for n in range(product.rank):
            value = product.table[m][n]
            if not value.is_zero():
                slots = " | ".join(str(p) for p in value)
                results.append(f"product {m + 1} {n + 1} : {slots}")
    return check_pre_lie(product), results


def _cmd_deform(ws: Workspace, tokens: list[str]):
    if not tokens:
        raise CommandError("expected: deform <check|obstruct|extend> <name>")
    sub = tokens[0]
    rest = tokens[1:]
    if sub == "check":
        (name,) = _positional(rest, 1, "deform check <name>")
        a, r, s = _deformation_context(ws, name)
        if s.order == 1:
            return check_linear_deformation(a, r, s.base, s.higher[0]), []
        return check_order_k(a, r, s), []
    if sub == "obstruct":
        (name,) = _positional(rest, 1, "deform obstruct <name>")
        a, r, s = _deformation_context(ws, name)
        report = check_order_k(a, r, s)
        if not report.passed:
            return report, []
        ob = obstruction(a, r, s)
        closed = delta_t(a, r, s.base, ob, verify=False)
        report.add_bool("delta_T(obstruction) = 0", closed.is_zero())
        return report, _cochain_lines(ob)
    if sub == "extend":
        max_deg = _require_option(rest, "--max-deg")
        (name,) = _positional(rest, 1, "deform extend <name> --max-deg <n>")
        a, r, s = _deformation_context(ws, name)
        report = check_order_k(a, r, s)
        if not report.passed:
            return report, []
        x = extend_order(a, r, s, int(max_deg), verify=False)
        if x is None:
            report.add_bool("extension found within degree bound", False,
                            note="no solution within bound", advisory=True)
            return report, ["no solution within degree bound"]
        report.add_bool("extension found within degree bound", True)
        extended = check_order_k(a, r, s.extended(x))
        report.add_bool("extended sequence passes", extended.passed)
        return report, [_matrix_line(x)]
    raise CommandError(f"unknown deform command '{sub}'")


def _cmd_search(ws: Workspace, tokens: list[str]):
    max_deg = _require_option(tokens, "--max-deg")
    coeffs_text = _require_option(tokens, "--coeffs")
    (name,) = _positional(tokens, 1,
                          "search-oop <module> --max-deg <n> --coeffs <list>")
    r = ws.module(name)
    coeffs = [Fraction(c) for c in coeffs_text.split(",") if c.strip()]
    if not coeffs:
        raise CommandError("--coeffs needs at least one rational")
    found, constraints = search_ooperators(r.algebra, r, int(max_deg), coeffs)
    report = Report(f"search-oop {name}")
    report.add_bool(f"{len(found)} candidate(s) found", True)
    results = [f"candidate {i + 1}: " + _matrix_line(m)
               for i, m in enumerate(found)]
    results.extend(f"constraint: {c}" for c in constraints)
    return report, results


def run(command: list[str], ws: Workspace) -> tuple[ReportDocument, int]:
    """Dispatch one command against a parsed workspace."""
    if not command:
        raise CommandError("missing command")
    head, rest = command[0], list(command[1:])
    if head == "check":
        report, results = _cmd_check(ws, rest)
    elif head == "cobound":
        report, results = _cmd_cobound(ws, rest)
    elif head == "circle":
        report, results = _cmd_binary(ws, circle, rest,
                                      "circle <cochain> <cochain>")
    elif head == "nrbracket":
        report, results = _cmd_binary(ws, nr_bracket, rest,
                                      "nrbracket <cochain> <cochain>")
    elif head == "mc":
        (name,) = _positional(rest, 1, "mc <module>")
        r = ws.module(name)
        report, results = mc_check(r.algebra, r), []
    elif head == "gbracket":
        report, results = _cmd_gbracket(ws, rest)
    elif head == "deltaT":
        report, results = _cmd_delta_t(ws, rest)
    elif head == "prelie":
        report, results = _cmd_prelie(ws, rest)
    elif head == "deform":
        report, results = _cmd_deform(ws, rest)
    elif head == "search-oop":
        report, results = _cmd_search(ws, rest)
    else:
        raise CommandError(f"unknown command '{head}'")
    doc = ReportDocument.build(command, report, results)
    return doc, 0 if report.passed else 1


def main(argv: Optional[list[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    report_format = "text"
    all_witnesses = False
    try:
        fmt = _take_option(args, "--report")
        if fmt is not None:
            if fmt not in ("text", "json"):
                raise CommandError("--report must be 'text' or 'json'")
            report_format = fmt
        if "--all-witnesses" in args:
            all_witnesses = True
            args.remove("--all-witnesses")
        if not args:
            raise CommandError(USAGE)
        path, command = args[0], args[1:]
        with open(path, encoding="utf-8") as handle:
            ws = parse_workspace(handle.read())
        doc, code = run(command, ws)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if report_format == "json":
        sys.stdout.write(doc.to_json())
    else:
        sys.stdout.write(doc.to_text(all_witnesses))
    return code


if __name__ == "__main__":
    sys.exit(main())
