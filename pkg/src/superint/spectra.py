"""Spectrum containers shared by the solver, the catalog and the oracles."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional


@dataclass(frozen=True)
class SpectrumEntry:
    energy: float
    degeneracy: int
    family_id: str


@dataclass(frozen=True)
class Level:
    """One distinct energy with its merged degeneracy."""

    energy: float
    degeneracy: int
    families: tuple


@dataclass
class Spectrum:
    entries: list
    parameters: dict = field(default_factory=dict)
    flagged: list = field(default_factory=list)  # retained but not physical
    tol: float = 1e-8
    solutions: list = field(default_factory=list)  # raw solver output, when available

    def __post_init__(self):
        self.entries = sorted(self.entries, key=lambda e: (e.energy, e.family_id))
        self.flagged = sorted(self.flagged, key=lambda e: (e.energy, e.family_id))

    def levels(self, tol: Optional[float] = None, relative: bool = False) -> list:
        """Entries merged by energy; degeneracies from different families add up."""
        return merge_levels(self.entries, self.tol if tol is None else tol, relative)

    def energies(self) -> list:
        return [lv.energy for lv in self.levels()]

    def expanded(self) -> list:
        """Every state listed once, i.e. each energy repeated by its degeneracy."""
        out = []
        for lv in self.levels():
            out.extend([lv.energy] * lv.degeneracy)
        return out

    def families(self) -> dict:
        fams: dict = {}
        for e in self.entries:
            fams.setdefault(e.family_id, []).append(e)
        return fams


def merge_levels(entries: Iterable[SpectrumEntry], tol: float = 1e-8, relative: bool = False) -> list:
    ents = sorted(entries, key=lambda e: e.energy)
    levels: list = []
    for e in ents:
        if levels:
            last = levels[-1]
            thr = tol * max(1.0, abs(last[0])) if relative else tol
            if abs(e.energy - last[0]) <= thr:
                last[1] += e.degeneracy
                if e.family_id not in last[2]:
                    last[2].append(e.family_id)
                continue
        levels.append([e.energy, e.degeneracy, [e.family_id]])
    return [Level(float(E) + 0.0, int(d), tuple(f)) for E, d, f in levels]
