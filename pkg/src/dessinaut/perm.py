"""Permutations, permutation groups and small finite groups.

Conventions used everywhere in the package:

* points are ``0 .. n-1``;
* permutations act on the right, ``i ^ p == p[i]``;
* ``p * q`` applies ``p`` first, then ``q``.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class NonTransitive(ValueError):
    pass


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.images, tuple):
            object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a permutation: %r" % (self.images,))

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Perm":
        img = list(range(n))
        for c in cycles:
            for a, b in zip(c, list(c[1:]) + [c[0]]):
                img[a] = b
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Perm":
        """Parse ``[1,0,2]`` (image list) or ``(0 1)(2 3)`` (cycles).

        Cycle notation needs the degree ``n`` unless it can be read off the
        largest point mentioned.
        """
        text = text.strip()
        if text.startswith("["):
            return cls(tuple(int(t) for t in re.findall(r"-?\d+", text)))
        cycles = [
            [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            for body in re.findall(r"\(([^)]*)\)", text)
        ]
        if n is None:
            n = 1 + max((max(c) for c in cycles if c), default=-1)
        return cls.from_cycles([c for c in cycles if c], n)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __getitem__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        o = other.images
        return Perm(tuple([o[i] for i in self.images]))

    def inverse(self) -> "Perm":
        return Perm(_inv(self.images))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Perm.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            c = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                c.append(j)
                j = self.images[j]
            if include_fixed or len(c) > 1:
                out.append(tuple(c))
        return out

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def __str__(self):
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(%s)" % " ".join(map(str, c)) for c in cs)

    def __repr__(self):
        return "Perm(%s)" % str(self)


def _inv(img: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(img)
    for i, j in enumerate(img):
        out[j] = i
    return tuple(out)


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple([q[i] for i in p])


def cycle_type(p: Perm) -> list[int]:
    """Cycle lengths of ``p`` (fixed points included), sorted descending."""
    return sorted((len(c) for c in p.cycles(include_fixed=True)), reverse=True)


def perm_order(p: Perm) -> int:
    return math.lcm(*cycle_type(p)) if p.degree else 1


def is_semiregular(p: Perm) -> bool:
    ct = cycle_type(p)
    return len(set(ct)) <= 1


# ---------------------------------------------------------------------------
# stabilizer chains


class StabChain:
    """Deterministic Schreier-Sims stabilizer chain.

    Base points are taken in natural order as they are needed, generators
    are processed in the order given, and Schreier generators are scanned
    in (orbit point, generator) order, so the chain is reproducible.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]]):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.base: list[int] = []
        # strong generators, each tagged with the deepest level it fixes
        self.strong: list[tuple[tuple[int, ...], int]] = []
        self.transversals: list[dict[int, tuple[tuple, tuple]]] = []
        self._checked: list[set] = []
        for g in generators:
            g = tuple(g)
            if g != self.identity and not self.contains(g):
                self._add(g, 0)
                self._complete()

    def _level_gens(self, level: int) -> list[tuple]:
        return [g for g, lvl in self.strong if lvl >= level]

    def _extend_base(self, h: tuple) -> None:
        for i in range(self.degree):
            if h[i] != i and i not in self.base:
                self.base.append(i)
                b = i
                self.transversals.append({b: (self.identity, self.identity)})
                self._checked.append(set())
                return
        raise AssertionError("identity cannot extend the base")

    def _add(self, h: tuple, level: int) -> None:
        # h fixes base[:level]; it is a strong generator for levels 0..level
        if level == len(self.base):
            self._extend_base(h)
        self.strong.append((h, level))
        for lvl in range(level + 1):
            self._grow_orbit(lvl)

    def _grow_orbit(self, level: int) -> None:
        trans = self.transversals[level]
        gens = self._level_gens(level)
        queue = deque(trans)
        while queue:
            pt = queue.popleft()
            u, _ = trans[pt]
            for g in gens:
                im = g[pt]
                if im not in trans:
                    v = _mul(u, g)
                    trans[im] = (v, _inv(v))
                    queue.append(im)

    def sift(self, h: tuple, start: int = 0) -> tuple[tuple, int]:
        for level in range(start, len(self.base)):
            b = h[self.base[level]]
            entry = self.transversals[level].get(b)
            if entry is None:
                return h, level
            h = _mul(h, entry[1])
        return h, len(self.base)

    def contains(self, g: Sequence[int]) -> bool:
        h, _ = self.sift(tuple(g))
        return h == self.identity

    def _complete(self) -> None:
        level = len(self.base) - 1
        while level >= 0:
            restart = False
            trans = self.transversals[level]
            checked = self._checked[level]
            gens = [(k, g) for k, (g, lvl) in enumerate(self.strong) if lvl >= level]
            for pt in list(trans):
                u = trans[pt][0]
                for k, g in gens:
                    key = (pt, k)
                    if key in checked:
                        continue
                    checked.add(key)
                    im = g[pt]
                    sg = _mul(_mul(u, g), trans[im][1])
                    if sg == self.identity:
                        continue
                    h, j = self.sift(sg, level + 1)
                    if h != self.identity:
                        self._add(h, j)
                        level = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                level -= 1

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)


@dataclass(frozen=True)
class PermGroup:
    generators: tuple[Perm, ...]
    degree: int = -1
    _chain: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if self.degree < 0:
            if not gens:
                raise ValueError("degree required for a group without generators")
            object.__setattr__(self, "degree", gens[0].degree)
        if any(g.degree != self.degree for g in gens):
            raise ValueError("generators must have a common degree")

    @property
    def chain(self) -> StabChain:
        if not self._chain:
            self._chain.append(
                StabChain(self.degree, (g.images for g in self.generators))
            )
        return self._chain[0]

    def order(self) -> int:
        return self.chain.order()

    def contains(self, p: Perm) -> bool:
        return self.chain.contains(p.images)

    def orbit(self, point: int) -> list[int]:
        return _orbit([g.images for g in self.generators], point)

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i not in seen:
                orb = self.orbit(i)
                seen.update(orb)
                out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit(0)) == self.degree


def _orbit(gens: Sequence[Sequence[int]], point: int) -> list[int]:
    seen = {point}
    out = [point]
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for g in gens:
            im = g[p]
            if im not in seen:
                seen.add(im)
                out.append(im)
                queue.append(im)
    return out


def group_order(g: PermGroup) -> int:
    return g.order()


def is_transitive(g: PermGroup) -> bool:
    return g.is_transitive()


def closure(generators: Sequence[Perm], degree: int | None = None) -> list[Perm]:
    """All elements of the generated group, identity first, in BFS order."""
    if degree is None:
        degree = generators[0].degree
    e = tuple(range(degree))
    gens = [g.images for g in generators]
    seen = {e: 0}
    out = [e]
    queue = deque([e])
    while queue:
        p = queue.popleft()
        for g in gens:
            h = _mul(p, g)
            if h not in seen:
                seen[h] = len(out)
                out.append(h)
                queue.append(h)
    return [Perm(p) for p in out]


# ---------------------------------------------------------------------------
# centralizers


def centralizer_in_sym(g: PermGroup, chunk: int = 2048) -> PermGroup:
    """Centralizer of a transitive group in the symmetric group on its points.

    A centralizing element is determined by the image ``c`` of point 0:
    follow a BFS spanning tree of the Schreier graph from 0 and carry the
    same generator steps from ``c``.  Every candidate ``c`` is tried; the
    candidates are processed as numpy blocks, one row per candidate.
    """
    n = g.degree
    if not g.is_transitive():
        raise NonTransitive("centralizer_in_sym needs a transitive group")
    gens = [np.asarray(p.images, dtype=np.int64) for p in g.generators]
    # BFS tree: order of discovery, with (parent, generator index)
    parent = [-1] * n
    via = [-1] * n
    order = [0]
    seen = [False] * n
    seen[0] = True
    for p in order:
        for k, gk in enumerate(gens):
            im = int(gk[p])
            if not seen[im]:
                seen[im] = True
                parent[im] = p
                via[im] = k
                order.append(im)
    found = []
    for start in range(0, n, chunk):
        cand = np.arange(start, min(n, start + chunk), dtype=np.int64)
        phi = np.empty((len(cand), n), dtype=np.int64)
        phi[:, 0] = cand
        for p in order[1:]:
            phi[:, p] = gens[via[p]][phi[:, parent[p]]]
        ok = np.ones(len(cand), dtype=bool)
        for gk in gens:
            # phi(p ^ g) == phi(p) ^ g
            ok &= np.all(phi[:, gk] == gk[phi], axis=1)
        for row in phi[ok]:
            found.append(Perm(tuple(int(v) for v in row)))
    nontrivial = [p for p in found if not p.is_identity()]
    return PermGroup(tuple(_small_generating_set(nontrivial, n)), degree=n)


def _small_generating_set(elements: list[Perm], degree: int) -> list[Perm]:
    gens: list[Perm] = []
    chain = StabChain(degree, [])
    for p in elements:
        if not chain.contains(p.images):
            gens.append(p)
            chain = StabChain(degree, [q.images for q in gens])
    return gens


# ---------------------------------------------------------------------------
# small finite groups with a multiplication table


class GroupTable:
    """A finite permutation group with all elements enumerated.

    Element 0 is the identity; ``mul[a][b]`` is the id of ``a * b``.
    """

    def __init__(self, group: PermGroup, cap: int = 2000, name: str = ""):
        order = group.order() if group.generators else 1
        if order > cap:
            raise CapExceeded("group of order %d exceeds cap %d" % (order, cap))
        self.group = group
        self.name = name
        if group.generators:
            self.elements = closure(group.generators, group.degree)
        else:
            self.elements = [Perm.identity(group.degree)]
        assert len(self.elements) == order
        self.index = {p.images: i for i, p in enumerate(self.elements)}
        self.mul = [
            [self.index[_mul(a.images, b.images)] for b in self.elements]
            for a in self.elements
        ]
        self.inv = [row.index(0) for row in self.mul]
        self.generator_ids = [self.index[g.images] for g in group.generators]

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def id_of(self, p: Perm) -> int:
        return self.index[p.images]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul[x][a]
            k += 1
        return k

    def subgroup(self, ids: Iterable[int]) -> set[int]:
        ids = [i for i in ids if i != 0]
        out = {0}
        queue = deque([0])
        while queue:
            a = queue.popleft()
            for s in ids:
                b = self.mul[a][s]
                if b not in out:
                    out.add(b)
                    queue.append(b)
        return out

    def generates(self, ids: Iterable[int]) -> bool:
        return len(self.subgroup(ids)) == self.order

    def product(self, ids: Iterable[int]) -> int:
        x = 0
        for a in ids:
            x = self.mul[x][a]
        return x

    def conjugacy_class_reps(self) -> list[int]:
        seen: set[int] = set()
        reps = []
        for a in range(self.order):
            if a in seen:
                continue
            reps.append(a)
            for g in range(self.order):
                seen.add(self.mul[self.mul[self.inv[g]][a]][g])
        return reps


def generating_tuple(a: GroupTable, seed: int = 0, samples: int = 200,
                     cap: int = 2000) -> tuple[int, ...]:
    """A generating tuple of minimum length (the rank of ``a``)."""
    if a.order > cap:
        raise CapExceeded("rank search capped at order %d" % cap)
    if a.order == 1:
        return ()
    rng = random.Random(seed)
    for d in itertools.count(1):
        for _ in range(samples):
            t = tuple(rng.randrange(1, a.order) for _ in range(d))
            if a.generates(t):
                return t
        # up to simultaneous conjugation the first entry is a class rep
        for first in a.conjugacy_class_reps()[1:]:
            for rest in itertools.product(range(1, a.order), repeat=d - 1):
                t = (first,) + rest
                if a.generates(t):
                    return t
    raise AssertionError("unreachable")


def min_generating_size(a: GroupTable, seed: int = 0, cap: int = 2000) -> int:
    return len(generating_tuple(a, seed=seed, cap=cap))
