"""
Service layer for the tetrahedral group listing and table verification.
"""

from __future__ import annotations

import numpy as np

from core import symmetry
from services.export import build_unified_diff
from services.models import OperationResult


def _format_matrix(m: np.ndarray) -> list[str]:
    return ["  [" + " ".join(f"{v:+.6f}" for v in row) + "]" for row in m]


def format_table(table: np.ndarray) -> str:
    header = "     " + " ".join(f"{j:>2d}" for j in range(1, table.shape[1] + 1))
    rows = [f"{i:>3d}: " + " ".join(f"{int(v):>2d}" for v in row) for i, row in enumerate(table, start=1)]
    return "\n".join([header, *rows]) + "\n"


class GroupService:
    def __init__(self):
        self.group = symmetry

    def describe(self) -> OperationResult:
        lines = ["Elements (M13..M24 = diag(-1, 1, 1) M1..M12):"]
        for g in self.group.td_elements():
            lines.append(f"M{g.id} (det {g.det:+d})")
            lines.extend(_format_matrix(g.matrix))
        lines.append("")
        lines.append("Multiplication table, entry (i, j) = id of Mi Mj:")
        lines.append(format_table(self.group.multiplication_table()))

        lattice = self.group.subgroup_lattice()
        lines.append(f"Subgroups ({len(lattice)}):")
        for sub in lattice:
            normal = " normal" if self.group.is_normal(sub.elements) else ""
            free = " free" if self.group.acts_freely(sub.elements) else ""
            fixed = self.group.fixed_subspace(sub.elements).shape[0]
            ids = ", ".join(str(i) for i in sorted(sub.elements))
            lines.append(f"  {sub.name:<3} order {sub.order:>2} {sub.parity:<6} dim F={fixed}{normal}{free}: {{{ids}}}")

        lines.append("")
        lines.append("Listed subgroup sets closed under the table:")
        for family, entries in self.group.listed_subgroup_closure().items():
            closed = sum(1 for _, ok in entries if ok)
            lines.append(f"  {family}: {closed}/{len(entries)}")
        return OperationResult(True, "\n".join(lines), details={"subgroups": len(lattice)})

    def verify(self) -> OperationResult:
        check = self.group.verify_multiplication_table()
        diff = build_unified_diff(
            format_table(self.group.transcribed_table()),
            format_table(self.group.multiplication_table()),
            fromfile="transcribed",
            tofile="computed",
        )
        message = f"{check.matches}/{check.total} entries match"
        return OperationResult(
            check.ok,
            message if check.ok else f"{message}\n{diff}",
            details={"check": check, "diff": diff},
        )
