"""Dessins (oriented hypermaps) as transitive pairs of permutations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from .perm import (GroupTable, Perm, PermGroup, centralizer_in_sym, cycle_type,
                   is_semiregular, perm_order)
from .triangle import Triple


class Disconnected(ValueError):
    pass


@dataclass(frozen=True)
class Dessin:
    sigma0: Perm
    sigma1: Perm

    @property
    def darts(self) -> int:
        return self.sigma0.degree

    @property
    def sigma2(self) -> Perm:
        return (self.sigma0 * self.sigma1).inverse()

    def monodromy(self) -> PermGroup:
        return PermGroup((self.sigma0, self.sigma1))

    def is_connected(self) -> bool:
        return self.monodromy().is_transitive()

    def to_json(self, triple: Triple | None = None) -> dict:
        out = {
            "darts": self.darts,
            "sigma0": list(self.sigma0.images),
            "sigma1": list(self.sigma1.images),
            "genus": euler_genus(self),
            "passport": passport(self),
        }
        if triple is not None:
            out["type"] = list(triple)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Dessin":
        return dessin_from_pair(Perm(tuple(data["sigma0"])), Perm(tuple(data["sigma1"])))


def dessin_from_pair(s0: Perm, s1: Perm) -> Dessin:
    if s0.degree != s1.degree:
        raise ValueError("sigma0 and sigma1 have different degrees")
    d = Dessin(s0, s1)
    if not d.is_connected():
        raise Disconnected("monodromy group is not transitive")
    return d


def euler_genus(d: Dessin) -> int:
    chi = sum(len(s.cycles(include_fixed=True)) for s in (d.sigma0, d.sigma1, d.sigma2)) - d.darts
    if chi % 2:
        raise ValueError("odd Euler characteristic %d" % chi)
    return (2 - chi) // 2


def passport(d: Dessin) -> list[list[int]]:
    return [cycle_type(s) for s in (d.sigma0, d.sigma1, d.sigma2)]


def passport_str(d: Dessin) -> str:
    parts = []
    for ct in passport(d):
        c = Counter(ct)
        parts.append(" ".join("%d^%d" % (k, c[k]) for k in sorted(c, reverse=True)))
    return "[" + " | ".join(parts) + "]"


def verify_type(d: Dessin, t: Triple | Sequence[int]) -> bool:
    """Orders of (sigma0, sigma1, sigma2) are exactly ``t`` and each sigma is
    semiregular."""
    sig = (d.sigma0, d.sigma1, d.sigma2)
    return (tuple(perm_order(s) for s in sig) == tuple(t)
            and all(is_semiregular(s) for s in sig))


def automorphism_group(d: Dessin) -> PermGroup:
    return centralizer_in_sym(d.monodromy())


@dataclass(frozen=True)
class AutCertificate:
    deck_commutes: bool
    deck_injective_hom: bool
    aut_order: int
    group_order: int

    @property
    def ok(self) -> bool:
        return self.deck_commutes and self.deck_injective_hom and self.aut_order == self.group_order


def certify_aut_equals(d: Dessin, a: GroupTable, deck: Callable[[int], Perm],
                       aut_order: int | None = None) -> AutCertificate:
    """Check Aut(d) is isomorphic to A through the deck maps.

    ``deck(b)`` is left multiplication by b on fibres, so with the
    apply-left-first product ``deck(b) * deck(c) == deck(c b)``: b -> deck(b)
    is an anti-homomorphism, and b -> deck(b^-1) an injective homomorphism.
    Together with |Aut(d)| == |A| this certifies Aut(d) = deck(A) = A.
    """
    maps = [deck(b) for b in range(a.order)]
    commutes = all(m * s == s * m for m in maps for s in (d.sigma0, d.sigma1))
    injective = len({m.images for m in maps}) == a.order and maps[0].is_identity()
    check = range(a.order) if a.order <= 200 else a.generator_ids
    hom = injective and all(
        maps[b] * maps[c] == maps[a.mul[c][b]] for b in check for c in range(a.order)
    )
    free = all(not m.fixed_points() for m in maps[1:])
    if aut_order is None:
        aut_order = automorphism_group(d).order()
    return AutCertificate(commutes, hom and free, aut_order, a.order)
