"""Synthetic curve corpora: planted congruence families plus random filler.

Labels follow the database convention ``<conductor><class letter><index>``
with class letters assigned per conductor in order of appearance.
"""

from __future__ import annotations

import random
from fractions import Fraction
from string import ascii_lowercase

from .curve import RationalEC, conductor, minimal_model, quadratic_twist, sextic_twist
from .pipeline import CurveRecord

__all__ = ["CorpusBuilder", "theorem_j0_family", "twist_pair", "random_curves", "write_allcurves", "write_csv"]


def _letters(n: int) -> str:
    s = ""
    n += 1
    while n:
        n, r = divmod(n - 1, 26)
        s = ascii_lowercase[r] + s
    return s


class CorpusBuilder:
    """Accumulate isogeny classes (lists of curves) and emit CurveRecords."""

    def __init__(self):
        self.records: list[CurveRecord] = []
        self._per_conductor: dict[int, int] = {}
        self._seen: set[tuple] = set()

    def add_class(self, curves) -> str:
        curves = [minimal_model(E) for E in curves]
        N = conductor(curves[0])
        k = self._per_conductor.get(N, 0)
        self._per_conductor[N] = k + 1
        cls = _letters(k)
        for i, E in enumerate(curves, 1):
            if E.ainvs in self._seen:
                raise ValueError(f"duplicate curve {E.ainvs}")
            self._seen.add(E.ainvs)
            self.records.append(CurveRecord(f"{N}{cls}{i}", N, cls, i, E.ainvs))
        return f"{N}{cls}"

    def conductors(self) -> set[int]:
        return set(self._per_conductor)


def theorem_j0_family(b) -> tuple[list[RationalEC], list[RationalEC]]:
    """The two 3-isogeny classes {E_b, E_-27b} and {E_-28/b, E_756/b} of a j = 0 family."""
    b = Fraction(b)
    first = [sextic_twist(b, 1), sextic_twist(b, -27)]
    second = [sextic_twist(b, Fraction(-28) / (b * b)), sextic_twist(b, Fraction(756) / (b * b))]
    return first, second


def random_curves(n: int, seed: int = 0, avoid_conductors=(), coeff: int = 30, max_conductor: int = 10**7) -> list[RationalEC]:
    """n minimal curves with j not in {0, 1728}, pairwise distinct conductors.

    Distinct conductors keep accidental isogenies out of the corpus, so the
    only congruences present are the planted ones plus genuine coincidences.
    """
    rng = random.Random(seed)
    used = set(avoid_conductors)
    out = []
    while len(out) < n:
        a = [rng.randint(-1, 1), rng.randint(-1, 1), rng.randint(0, 1), rng.randint(-coeff, coeff), rng.randint(-coeff, coeff)]
        try:
            E = minimal_model(RationalEC(*a))
        except ValueError:
            continue
        if E.j in (0, 1728):
            continue
        N = conductor(E)
        if N in used or N > max_conductor:
            continue
        used.add(N)
        out.append(E)
    return out


def write_allcurves(records, path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(f"{r.conductor} {r.iso_class} {r.class_index} [{','.join(map(str, r.ainvs))}] 0 1\n")


def write_csv(records, path) -> None:
    with open(path, "w") as fh:
        fh.write("label,conductor,iso_class,class_index,a1,a2,a3,a4,a6\n")
        for r in records:
            fh.write(f"{r.label},{r.conductor},{r.iso_class},{r.class_index},{','.join(map(str, r.ainvs))}\n")


def twist_pair(E: RationalEC, d: int) -> list[RationalEC]:
    return [E, quadratic_twist(E, d)]
