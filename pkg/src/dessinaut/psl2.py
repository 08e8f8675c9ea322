"""PSL(2, q) for prime q and its action on the projective line."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

from .perm import Perm, PermGroup
from .triangle import is_prime


class NotUnimodular(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Fq:
    """Prime field arithmetic, elements are plain ints in ``0 .. q-1``."""

    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise ValueError("q must be prime, got %d" % self.q)

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.q)
        return pow(a, -1, self.q)


@dataclass(frozen=True, order=True)
class PSL2Elt:
    """A sign-normalized unimodular 2x2 matrix ``[[a, b], [c, d]]`` mod q."""

    q: int
    a: int
    b: int
    c: int
    d: int

    def __mul__(self, other: "PSL2Elt") -> "PSL2Elt":
        q = self.q
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return _normal(q, (a * e + b * g) % q, (a * f + b * h) % q,
                       (c * e + d * g) % q, (c * f + d * h) % q)

    def inverse(self) -> "PSL2Elt":
        q = self.q
        return _normal(q, self.d, (-self.b) % q, (-self.c) % q, self.a)

    def __pow__(self, k: int) -> "PSL2Elt":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = identity(self.q)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def trace(self) -> int:
        return (self.a + self.d) % self.q


def _normal(q, a, b, c, d) -> PSL2Elt:
    for v in (a, b, c, d):
        if v:
            if v > (q - 1) // 2:
                a, b, c, d = (-a) % q, (-b) % q, (-c) % q, (-d) % q
            break
    return PSL2Elt(q, a, b, c, d)


def psl2_normalize(q: int, a: int, b: int, c: int, d: int) -> PSL2Elt:
    a, b, c, d = a % q, b % q, c % q, d % q
    if (a * d - b * c) % q != 1:
        raise NotUnimodular("det(%d %d; %d %d) != 1 mod %d" % (a, b, c, d, q))
    return _normal(q, a, b, c, d)


def identity(q: int) -> PSL2Elt:
    return PSL2Elt(q, 1, 0, 0, 1)


def psl2_order(e: PSL2Elt) -> int:
    t, x = 1, e
    while not x.is_identity():
        x = x * e
        t += 1
    return t


def psl2_group_order(q: int) -> int:
    return q * (q * q - 1) // 2


def projective_point(q: int, u: int, v: int) -> int:
    """Index of ``[u : v]``: ``[i : 1]`` is i, ``[1 : 0]`` (infinity) is q."""
    u, v = u % q, v % q
    if v == 0:
        if u == 0:
            raise ValueError("[0 : 0] is not a projective point")
        return q
    return u * pow(v, -1, q) % q


def projective_perm(e: PSL2Elt) -> Perm:
    """Right action of ``e`` on the q+1 points of the projective line.

    The point ``z`` goes to the Moebius image of ``z`` under the inverse
    matrix, ``z -> (d z - b) / (-c z + a)``.  This is a right action, the
    translation ``[[1, 1], [0, 1]]`` is a q-cycle fixing infinity, and the
    stabilizer of infinity is the upper triangular subgroup.
    """
    q = e.q
    a, b, c, d = e.entries()
    img = [0] * (q + 1)
    for z in range(q):
        img[z] = projective_point(q, d * z - b, -c * z + a)
    img[q] = projective_point(q, d, -c)
    return Perm(tuple(img))


def elements(q: int) -> Iterator[PSL2Elt]:
    """All elements of PSL(2, q) in lexicographic (a, b, c, d) order."""
    half = (q - 1) // 2
    for a in range(q):
        for b in range(q):
            if a == 0 and (b == 0 or b > half):
                continue
            for c in range(q):
                if a == 0:
                    if (b * c) % q != q - 1:
                        continue
                    for d in range(q):
                        yield PSL2Elt(q, 0, b, c, d)
                else:
                    if a > half:
                        continue
                    d = (1 + b * c) * pow(a, -1, q) % q
                    yield PSL2Elt(q, a, b, c, d)


def random_element(q: int, rng: random.Random) -> PSL2Elt:
    while True:
        a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
        if a:
            return _normal(q, a, b, c, (1 + b * c) * pow(a, -1, q) % q)


def _has_order(e: PSL2Elt, n: int) -> bool:
    x = e
    for t in range(1, n):
        if x.is_identity():
            return False
        x = x * e
    return x.is_identity()


@dataclass(frozen=True)
class GeneratingTriple:
    x: PSL2Elt
    y: PSL2Elt
    z: PSL2Elt
    orders: tuple[int, int, int]

    @property
    def q(self) -> int:
        return self.x.q

    def perms(self) -> tuple[Perm, Perm, Perm]:
        return projective_perm(self.x), projective_perm(self.y), projective_perm(self.z)

    def generated_order(self) -> int:
        px, py, _ = self.perms()
        return PermGroup((px, py)).order()

    def is_valid(self) -> bool:
        l, m, n = self.orders
        return ((self.x * self.y * self.z).is_identity()
                and psl2_order(self.x) == l and psl2_order(self.y) == m
                and psl2_order(self.z) == n
                and self.generated_order() == psl2_group_order(self.q))


def search_generating_triple(q: int, l: int, m: int, n: int, seed: int = 0,
                             random_tries: int = 200_000) -> GeneratingTriple:
    """Triple (x, y, z) of PSL(2, q) with orders (l, m, n), xyz = 1,
    generating the whole group.

    x is the lexicographically first element of order l; y is searched at
    random (seeded), then exhaustively in lexicographic order.
    """
    full = psl2_group_order(q)
    x = next((e for e in elements(q) if _has_order(e, l)), None)
    if x is None:
        raise SearchExhausted("no element of order %d in PSL(2,%d)" % (l, q))
    px = projective_perm(x)

    def accept(y):
        if not _has_order(y, m):
            return None
        z = (x * y).inverse()
        if not _has_order(z, n):
            return None
        if PermGroup((px, projective_perm(y))).order() != full:
            return None
        return GeneratingTriple(x, y, z, (l, m, n))

    rng = random.Random(seed)
    for _ in range(random_tries):
        t = accept(random_element(q, rng))
        if t is not None:
            return t
    for y in elements(q):
        t = accept(y)
        if t is not None:
            return t
    raise SearchExhausted("no generating triple of type (%d,%d,%d) in PSL(2,%d)"
                          % (l, m, n, q))


def find_generating_triple(q: int, l: int, m: int, n: int, seed: int = 0) -> GeneratingTriple:
    """Smooth generating triple for q = -1 mod lcm(2l, 2m, 2n)."""
    k = math.lcm(2 * l, 2 * m, 2 * n)
    if not is_prime(q):
        raise ValueError("q = %d is not prime" % q)
    if (q + 1) % k:
        raise ValueError("q = %d is not -1 mod %d" % (q, k))
    return search_generating_triple(q, l, m, n, seed=seed)
