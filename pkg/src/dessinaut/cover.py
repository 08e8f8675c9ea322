"""Epimorphisms from the surface subgroup onto A, voltages, and the
covering dessin of the kernel.

Darts of the cover are pairs (i, a) of a base coset i and an element a of
A, stored as ``i * |A| + a``.  Voltages multiply the fibre coordinate on
the right, deck transformations on the left, so the two commute.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .fpgroup import Ledger, Presentation, SchreierData
from .perm import GroupTable, Perm, PermGroup, generating_tuple


class SearchBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Hom:
    target: GroupTable
    images: tuple[int, ...]

    def value(self, w: Sequence[int]) -> int:
        return word_value(self.target, w, self.images)

    def kills(self, pres: Presentation) -> bool:
        return all(self.value(r) == 0 for r in pres.relators)

    def is_surjective(self) -> bool:
        return self.target.generates(self.images)


def word_value(a: GroupTable, w: Sequence[int], images: Sequence[int]) -> int:
    mul, inv = a.mul, a.inv
    x = 0
    for s in w:
        x = mul[x][images[s - 1] if s > 0 else inv[images[-s - 1]]]
    return x


def find_epimorphism(spres: Presentation, a: GroupTable, seed: int = 0,
                     budget: int = 10**6, structured_limit: int = 20_000) -> Hom:
    """Epimorphism from the simplified presentation onto ``a``.

    Structured attempts first: a minimum generating tuple placed on every
    choice of d generators (in lexicographic order) with the rest sent to
    the identity.  Then seeded uniform random assignments.
    """
    ngens = spres.ngens
    if a.order == 1:
        return Hom(a, (0,) * ngens)

    def good(images):
        h = Hom(a, tuple(images))
        return h if h.kills(spres) and h.is_surjective() else None

    gen = generating_tuple(a, seed=seed)
    d = len(gen)
    tried = 0
    if d <= ngens:
        for tup in _generating_tuples(a, gen):
            for pos in itertools.combinations(range(ngens), d):
                images = [0] * ngens
                for p, v in zip(pos, tup):
                    images[p] = v
                h = good(images)
                if h is not None:
                    return h
                tried += 1
                if tried >= structured_limit:
                    break
            if tried >= structured_limit:
                break
    rng = random.Random(seed)
    for _ in range(budget):
        h = good([rng.randrange(a.order) for _ in range(ngens)])
        if h is not None:
            return h
    raise SearchBudgetExhausted("no epimorphism onto a group of order %d within budget"
                                % a.order)


def _generating_tuples(a: GroupTable, first: tuple[int, ...]):
    yield first
    for t in itertools.product(range(1, a.order), repeat=len(first)):
        if t != first and a.generates(t):
            yield t


def theta_on_schreier_generators(theta: Hom, ledger: Ledger) -> list[int]:
    a = theta.target
    return ledger.evaluate(theta.images, lambda x, y: a.mul[x][y],
                           lambda x: a.inv[x], 0)


def verify_theta(theta: Hom, rs: Presentation, ledger: Ledger) -> bool:
    """Every original Reidemeister-Schreier relator maps to the identity."""
    if len(theta.images) != len(ledger.final_generators):
        return False
    vals = theta_on_schreier_generators(theta, ledger)
    return all(word_value(theta.target, r, vals) == 0 for r in rs.relators)


@dataclass(frozen=True)
class VoltageAssignment:
    # table[i][s]: element id on the edge from coset i along generator s
    table: tuple[tuple[int, ...], ...]


def voltages(sd: SchreierData, ledger: Ledger, theta: Hom) -> VoltageAssignment:
    vals = theta_on_schreier_generators(theta, ledger)
    rows = []
    for i in range(sd.index):
        rows.append(tuple(0 if k < 0 else vals[k] for k in sd.sgen[i]))
    return VoltageAssignment(tuple(rows))


@dataclass(frozen=True)
class CoverStructure:
    group: GroupTable
    base: tuple[Perm, ...]
    lifts: tuple[Perm, ...]

    @property
    def darts(self) -> int:
        return self.lifts[0].degree

    def dart(self, i: int, a: int) -> int:
        return i * self.group.order + a

    def deck(self, b: int) -> Perm:
        """Left multiplication by b on every fibre."""
        n = self.group.order
        row = self.group.mul[b]
        return Perm(tuple(i * n + row[a] for i in range(len(self.base[0]))
                          for a in range(n)))

    def monodromy(self) -> PermGroup:
        return PermGroup(self.lifts)


def build_cover(base: Sequence[Perm], va: VoltageAssignment, a: GroupTable) -> CoverStructure:
    n = a.order
    lifts = []
    for s, g in enumerate(base):
        img = [0] * (g.degree * n)
        for i in range(g.degree):
            j = g[i]
            v = va.table[i][s]
            for x in range(n):
                img[i * n + x] = j * n + a.mul[x][v]
        lifts.append(Perm(tuple(img)))
    return CoverStructure(a, tuple(base), tuple(lifts))
