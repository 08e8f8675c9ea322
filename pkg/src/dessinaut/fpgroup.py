"""Finitely presented groups: Schreier transversals, Reidemeister-Schreier
rewriting, Tietze simplification and abelianization.

A word is a tuple of nonzero ints; generator ``i`` is the letter ``i + 1``
and its inverse is ``-(i + 1)``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

from .perm import NonTransitive, Perm

Word = tuple


class NotInStabilizer(ValueError):
    pass


def letter(gen: int, inverse: bool = False) -> int:
    return -(gen + 1) if inverse else gen + 1


def gen_of(x: int) -> int:
    return abs(x) - 1


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def canonical_cyclic(w: Word) -> Word:
    """Least rotation of w or its inverse; identifies equivalent relators."""
    if not w:
        return w
    cands = []
    for v in (w, inverse_word(w)):
        cands.extend(v[i:] + v[:i] for i in range(len(v)))
    return min(cands)


def word_root(w: Word) -> tuple[Word, int]:
    """(r, k) with w == r * k as sequences and k maximal."""
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p], n // p
    return w, 1


def evaluate(w: Sequence[int], images: Sequence, mul: Callable, inv: Callable, one):
    x = one
    for a in w:
        v = images[a - 1] if a > 0 else inv(images[-a - 1])
        x = mul(x, v)
    return x


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse e.g. ``X^4``, ``(XY)^12``, ``X Y^-1`` over single-letter names."""
    import re

    idx = {n: i for i, n in enumerate(names)}

    def parse(s, pos):
        out = []
        while pos < len(s) and s[pos] != ")":
            if s[pos] == "(":
                inner, pos = parse(s, pos + 1)
                pos += 1
                unit = inner
            else:
                unit = (letter(idx[s[pos]]),)
                pos += 1
            m = re.match(r"\^(-?\d+)", s[pos:])
            if m:
                e = int(m.group(1))
                pos += m.end()
                unit = (unit if e > 0 else inverse_word(unit)) * abs(e)
            out.extend(unit)
        return tuple(out), pos

    w, _ = parse(text.replace(" ", ""), 0)
    return free_reduce(w)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(tuple(r) for r in self.relators))

    @property
    def deficiency(self) -> int:
        return self.ngens - len(self.relators)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


def triangle_presentation(l: int, m: int, n: int) -> Presentation:
    """Triangle group on generators X, Y with Z = (XY)^-1 eliminated."""
    X, Y = letter(0), letter(1)
    return Presentation(2, ((X,) * l, (Y,) * m, (X, Y) * n))


# ---------------------------------------------------------------------------
# Schreier transversals and rewriting


@dataclass(frozen=True)
class SchreierData:
    action: tuple[Perm, ...]
    basepoint: int
    transversal: tuple[Word, ...]
    # sgen[i][s]: index of the Schreier generator for edge (i, s), -1 on tree edges
    sgen: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def index(self) -> int:
        return len(self.transversal)

    @cached_property
    def inverse_action(self) -> tuple[Perm, ...]:
        return tuple(g.inverse() for g in self.action)

    def table(self) -> list[list[int]]:
        return [[g[i] for g in self.action] for i in range(self.index)]

    def schreier_word(self, k: int) -> Word:
        """sigma(i, s) = U_i s U_{i s}^-1 as a word in the ambient generators."""
        i, s = self.edges[k]
        j = self.action[s][i]
        return free_reduce(self.transversal[i] + (letter(s),)
                           + inverse_word(self.transversal[j]))


def schreier_transversal(action: Sequence[Perm], basepoint: int = 0) -> SchreierData:
    """Shortlex transversal by BFS over positive generator letters."""
    action = tuple(action)
    n = action[0].degree
    if not 0 <= basepoint < n:
        raise ValueError("basepoint %d out of range" % basepoint)
    words: list = [None] * n
    words[basepoint] = ()
    tree = set()
    queue = deque([basepoint])
    while queue:
        i = queue.popleft()
        for s, g in enumerate(action):
            j = g[i]
            if words[j] is None:
                words[j] = words[i] + (letter(s),)
                tree.add((i, s))
                queue.append(j)
    if any(w is None for w in words):
        raise NonTransitive("action is not transitive")
    sgen = []
    edges = []
    for i in range(n):
        row = []
        for s in range(len(action)):
            if (i, s) in tree:
                row.append(-1)
            else:
                row.append(len(edges))
                edges.append((i, s))
        sgen.append(tuple(row))
    return SchreierData(action, basepoint, tuple(words), tuple(sgen), tuple(edges))


def _rewrite_from(w: Sequence[int], sd: SchreierData, start: int) -> tuple[Word, int]:
    out = []
    c = start
    for a in w:
        s = gen_of(a)
        if a > 0:
            k = sd.sgen[c][s]
            if k >= 0:
                out.append(k + 1)
            c = sd.action[s][c]
        else:
            c = sd.inverse_action[s][c]
            k = sd.sgen[c][s]
            if k >= 0:
                out.append(-(k + 1))
    return free_reduce(out), c


def rewrite_word(w: Sequence[int], sd: SchreierData) -> Word:
    """Reidemeister rewriting of a word fixing the basepoint."""
    out, end = _rewrite_from(w, sd, sd.basepoint)
    if end != sd.basepoint:
        raise NotInStabilizer("word moves the basepoint to %d" % end)
    return out


def reidemeister_schreier(pres: Presentation, sd: SchreierData) -> Presentation:
    """Presentation of the basepoint stabilizer on the Schreier generators.

    One relator per cycle of each relator's root on the cosets.
    """
    if pres.ngens != len(sd.action):
        raise ValueError("presentation and action disagree on generator count")
    rels = []
    for r in pres.relators:
        root, _ = word_root(r)
        rp = Perm.identity(sd.index)
        for a in root:
            g = sd.action[gen_of(a)]
            rp = rp * (g if a > 0 else g.inverse())
        for cyc in rp.cycles(include_fixed=True):
            w, end = _rewrite_from(r, sd, cyc[0])
            if end != cyc[0]:
                raise ValueError("relator does not act trivially on cosets")
            rels.append(cyclic_reduce(w))
    return Presentation(len(sd.edges), tuple(rels))


# ---------------------------------------------------------------------------
# Tietze simplification


@dataclass
class Ledger:
    """Record of Tietze eliminations.

    ``eliminations`` holds (generator, word) pairs in the order performed;
    each word is over the generators still present at that stage, in the
    original numbering.  ``final_generators[j]`` is the original index of
    generator j of the simplified presentation.
    """

    ngens: int
    eliminations: list[tuple[int, Word]] = field(default_factory=list)
    final_generators: list[int] = field(default_factory=list)
    dropped_relators: int = 0

    def evaluate(self, final_images: Sequence, mul, inv, one) -> list:
        """Values of all original generators given values of the final ones."""
        vals: list = [None] * self.ngens
        for j, g in enumerate(self.final_generators):
            vals[g] = final_images[j]
        for g, w in reversed(self.eliminations):
            vals[g] = evaluate(w, vals, mul, inv, one)
        return vals

    def rewrite_map(self, max_length: int = 10**6) -> list[Word]:
        """Every original generator as a word in the final generators."""
        pos = {g: j for j, g in enumerate(self.final_generators)}
        words: list = [None] * self.ngens
        for g, j in pos.items():
            words[g] = (j + 1,)
        for g, w in reversed(self.eliminations):
            out = []
            for a in w:
                sub = words[gen_of(a)]
                out.extend(sub if a > 0 else inverse_word(sub))
            words[g] = free_reduce(out)
            if len(words[g]) > max_length:
                raise OverflowError("rewritten word exceeds %d letters" % max_length)
        return words

    def apply(self, w: Sequence[int], words: list[Word] | None = None) -> Word:
        words = words if words is not None else self.rewrite_map()
        out = []
        for a in w:
            sub = words[gen_of(a)]
            out.extend(sub if a > 0 else inverse_word(sub))
        return free_reduce(out)


@dataclass(frozen=True)
class TietzeResult:
    presentation: Presentation
    ledger: Ledger
    stuck: bool
    steps: int


def _substitute(w: Word, g: int, sub: Word, sub_inv: Word) -> Word:
    out = []
    for a in w:
        if gen_of(a) == g:
            out.extend(sub if a > 0 else sub_inv)
        else:
            out.append(a)
    return cyclic_reduce(out)


def tietze_simplify(pres: Presentation, blowup: int = 10_000) -> TietzeResult:
    """Eliminate generators that occur exactly once in some relator.

    At every step the shortest such relator is used (ties: earliest
    relator), and within it the lowest generator index.  Relators that
    become trivial or duplicate are dropped and counted in the ledger.
    Returns a flagged ``stuck`` result if no elimination is possible while
    more than one relator remains, or if the total relator length exceeds
    ``blowup`` times the input length.
    """
    limit = blowup * max(1, pres.total_length())
    ledger = Ledger(pres.ngens)
    rels: list[Word] = []
    _add_relators(rels, (cyclic_reduce(r) for r in pres.relators), ledger)
    alive = set(range(pres.ngens))
    stuck = False
    steps = 0
    while True:
        best = None
        for ri, r in enumerate(rels):
            if best is not None and len(r) >= best[0]:
                continue
            counts = Counter(gen_of(a) for a in r)
            once = [g for g, c in counts.items() if c == 1]
            if once:
                best = (len(r), ri, min(once))
        if best is None:
            stuck = len(rels) > 1
            break
        _, ri, g = best
        r = rels.pop(ri)
        pos = next(i for i, a in enumerate(r) if gen_of(a) == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        sub = inverse_word(rest) if rot[0] > 0 else rest
        ledger.eliminations.append((g, sub))
        alive.discard(g)
        sub_inv = inverse_word(sub)
        new = [_substitute(w, g, sub, sub_inv) if any(gen_of(a) == g for a in w) else w
               for w in rels]
        rels = []
        _add_relators(rels, new, ledger)
        steps += 1
        if sum(len(w) for w in rels) > limit:
            stuck = True
            break
    final = sorted(alive)
    ledger.final_generators = final
    renum = {g: j for j, g in enumerate(final)}
    out = tuple(tuple(letter(renum[gen_of(a)], a < 0) for a in w) for w in rels)
    return TietzeResult(Presentation(len(final), out), ledger, stuck, steps)


def _add_relators(rels: list[Word], new, ledger: Ledger) -> None:
    seen = {canonical_cyclic(w) for w in rels}
    for w in new:
        if not w:
            ledger.dropped_relators += 1
            continue
        c = canonical_cyclic(w)
        if c in seen:
            ledger.dropped_relators += 1
            continue
        seen.add(c)
        rels.append(w)


# ---------------------------------------------------------------------------
# abelianization


def relation_matrix(pres: Presentation) -> list[list[int]]:
    rows = []
    for r in pres.relators:
        row = [0] * pres.ngens
        for a in r:
            row[gen_of(a)] += 1 if a > 0 else -1
        rows.append(row)
    return rows


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    a = [list(r) for r in matrix if any(r)]
    if not a:
        return []
    nrows, ncols = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(nrows, ncols):
        # smallest nonzero entry in the remaining block
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = a[i][j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv and piv[0] == 1:
                break
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    f = a[i][t] // p
                    if f:
                        ri, rt = a[i], a[t]
                        for j in range(t, ncols):
                            if rt[j]:
                                ri[j] -= f * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    f = a[t][j] // p
                    if f:
                        for i in range(t, nrows):
                            if a[i][t]:
                                a[i][j] -= f * a[i][t]
                    if a[t][j]:
                        done = False
            if done:
                # pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                i, _ = bad
                for j in range(t, ncols):
                    a[t][j] += a[i][j]
                continue
            # move the smallest entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, nrows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, ncols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def abelianization(pres: Presentation) -> tuple[int, list[int]]:
    """(free rank, torsion invariants) of the abelianized group."""
    diag = smith_diagonal(relation_matrix(pres))
    return pres.ngens - len(diag), [d for d in diag if d != 1]
