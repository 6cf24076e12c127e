"""Check reports: ordered pass/fail entries with polynomial witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .poly import PolyVector


@dataclass(frozen=True)
class Witness:
    """First nonvanishing component of a failed identity at a basis tuple."""

    where: str        # basis tuple, e.g. "(e, e)"
    component: str    # basis name of the failing coordinate
    poly: str         # canonical polynomial string

    def __str__(self) -> str:
        return f"at {self.where}: ({self.poly}) * {self.component}"


@dataclass(frozen=True)
class CheckEntry:
    name: str
    status: str  # "pass" | "fail" | "advisory" (advisory = failed, non-fatal)
    witness: Optional[Witness] = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass
class Report:
    """Ordered list of named checks; overall pass iff no non-advisory fail."""

    title: str
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.status == "fail"]

    def add(self, name: str, residual: PolyVector, basis_names: list[str],
            where: str, advisory: bool = False) -> None:
        """Record a zero-residual check; a nonzero component becomes the witness."""
        for k, p in enumerate(residual):
            if not p.is_zero():
                status = "advisory" if advisory else "fail"
                self.entries.append(
                    CheckEntry(name, status, Witness(where, basis_names[k], str(p)))
                )
                return
        self.entries.append(CheckEntry(name, "pass"))

    def add_bool(self, name: str, ok: bool, note: str = "",
                 advisory: bool = False) -> None:
        if ok:
            self.entries.append(CheckEntry(name, "pass"))
        else:
            status = "advisory" if advisory else "fail"
            witness = Witness(note, "-", "-") if note else None
            self.entries.append(CheckEntry(name, status, witness))

    def extend(self, other: "Report") -> None:
        self.entries.extend(other.entries)

    def __str__(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for e in self.entries:
            line = f"  [{e.status:8s}] {e.name}"
            if e.witness is not None:
                line += f"  {e.witness}"
            lines.append(line)
        return "\n".join(lines)
