"""Hyperbolic triples: admissible primes, classification and genus formulas."""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .perm import Perm, PermGroup, perm_order


class NotHyperbolic(ValueError):
    pass


class NonIntegralGenus(ValueError):
    pass


class SearchBoundExceeded(RuntimeError):
    pass


class BoundTooSmall(ValueError):
    pass


class BadPrime(ValueError):
    pass


# deterministic for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power_base(n: int) -> int | None:
    """The prime p with n = p^e (e >= 1), or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    while n % p == 0:
        n //= p
    return p if n == 1 else None


@dataclass(frozen=True, order=True)
class Triple:
    l: int
    m: int
    n: int

    def __post_init__(self):
        vals = sorted((self.l, self.m, self.n))
        if vals[0] < 2:
            raise ValueError("triple entries must be >= 2")
        object.__setattr__(self, "l", vals[0])
        object.__setattr__(self, "m", vals[1])
        object.__setattr__(self, "n", vals[2])

    @classmethod
    def parse(cls, text: str) -> "Triple":
        parts = [int(p) for p in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != 3:
            raise ValueError("expected l,m,n, got %r" % text)
        return cls(*parts)

    def __iter__(self):
        return iter((self.l, self.m, self.n))

    def __str__(self):
        return "(%d,%d,%d)" % (self.l, self.m, self.n)

    @property
    def defect(self) -> Fraction:
        """1 - 1/l - 1/m - 1/n."""
        return 1 - Fraction(1, self.l) - Fraction(1, self.m) - Fraction(1, self.n)


def is_hyperbolic(t: Triple) -> bool:
    return t.defect > 0


def modulus_k(t: Triple) -> int:
    return math.lcm(2 * t.l, 2 * t.m, 2 * t.n)


def genus_rh(index: int, t: Triple) -> int:
    """Genus of a torsion-free subgroup of the given index in the triangle group."""
    g = Fraction(index, 2) * t.defect + 1
    if g.denominator != 1:
        raise NonIntegralGenus("index %d gives genus %s for %s" % (index, g, t))
    return int(g)


def cover_genus(g_base: int, order_a: int) -> int:
    return order_a * (g_base - 1) + 1


# ---------------------------------------------------------------------------
# classification


YES, NO, UNCERTIFIED = "yes", "no", "uncertified"

# triples named explicitly as maximal and non-arithmetic
PAPER_TRIPLES = frozenset(
    Triple(*t) for t in [(2, 3, 21), (2, 4, 9), (4, 6, 12), (7, 11, 13), (8, 9, 10)]
)


@dataclass(frozen=True)
class TripleClassification:
    is_maximal: str
    is_arithmetic: str
    certified_by: str

    @property
    def accepted(self) -> bool:
        return self.is_maximal == YES and self.is_arithmetic == NO


def in_paper_allowlist(t: Triple) -> bool:
    if t in PAPER_TRIPLES:
        return True
    if (t.l, t.m) == (2, 3):
        return (t.n >= 13 and is_prime(t.n)) or t.n > 30
    return False


def _verified_rows(text: str) -> list[list[str]] | None:
    """Rows of a tab-separated table whose last line is ``# sha256 <hex>``
    over all preceding lines; None if the checksum does not match."""
    lines = text.rstrip("\n").split("\n")
    if not lines or not lines[-1].startswith("# sha256 "):
        return None
    body = "\n".join(lines[:-1]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split()[-1]:
        return None
    return [ln.split("\t") for ln in lines[:-1] if ln and not ln.startswith("#")]


def table_checksum(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()


def _read_data(name: str, path: str | Path | None) -> str | None:
    if path is not None:
        p = Path(path)
        return p.read_text() if p.exists() else None
    try:
        return resources.files("dessinaut.data").joinpath(name).read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        return None


def _eval_entry(expr: str, env: dict[str, int]) -> int:
    expr = expr.strip()
    if expr.isdigit():
        return int(expr)
    coef = expr[:-1]
    return (int(coef) if coef else 1) * env[expr[-1]]


def _match_pattern(pattern: list[str], t: Triple) -> bool:
    names = sorted({e.strip()[-1] for e in pattern if not e.strip().isdigit()})
    candidates = set()
    for e in pattern:
        e = e.strip()
        if e.isdigit():
            continue
        coef = int(e[:-1]) if e[:-1] else 1
        for v in t:
            if v % coef == 0:
                candidates.add(v // coef)
    for values in itertools.product(sorted(candidates), repeat=len(names)):
        env = dict(zip(names, values))
        try:
            trip = sorted(_eval_entry(e, env) for e in pattern)
        except KeyError:
            continue
        if trip == [t.l, t.m, t.n]:
            return True
    return False


def singerman_non_maximal(t: Triple, path=None) -> bool | None:
    """True if t occurs as a subgroup in the inclusion table, None if the
    table is missing or fails its checksum."""
    text = _read_data("singerman_inclusions.tsv", path)
    rows = _verified_rows(text) if text else None
    if rows is None:
        return None
    return any(_match_pattern(row[0].split(","), t) for row in rows)


def takeuchi_arithmetic(t: Triple, path=None) -> bool | None:
    text = _read_data("takeuchi_arithmetic.tsv", path)
    rows = _verified_rows(text) if text else None
    if rows is None:
        return None
    return any(Triple.parse(row[0]) == t for row in rows)


def classify_triple(t: Triple, tables: bool = False, singerman_path=None,
                    takeuchi_path=None) -> TripleClassification:
    if in_paper_allowlist(t):
        return TripleClassification(YES, NO, "paper-allowlist")
    if not tables:
        return TripleClassification(UNCERTIFIED, UNCERTIFIED, "none")
    maximal, arith, sources = UNCERTIFIED, UNCERTIFIED, []
    nm = singerman_non_maximal(t, singerman_path)
    if nm is not None:
        maximal = NO if nm else YES
        sources.append("singerman-table")
    ar = takeuchi_arithmetic(t, takeuchi_path)
    if ar is not None:
        arith = YES if ar else NO
        sources.append("takeuchi-table")
    return TripleClassification(maximal, arith, "+".join(sources) or "none")


# ---------------------------------------------------------------------------
# choice of q


@dataclass(frozen=True)
class QSearchResult:
    triple: Triple
    q: int
    k: int
    g: int
    d_required: int


def admissible_primes(t: Triple, bound: int = 10**7):
    """Primes q = -1 mod k in increasing order."""
    k = modulus_k(t)
    q = k - 1
    while q <= bound:
        if is_prime(q):
            yield q
        q += k


def find_q(t: Triple, d: int = 0, bound: int = 10**7) -> QSearchResult:
    if not is_hyperbolic(t):
        raise NotHyperbolic("%s is not hyperbolic" % (t,))
    need = max(d, 2)
    for q in admissible_primes(t, bound):
        g = genus_rh(q + 1, t)
        if g >= need:
            return QSearchResult(t, q, modulus_k(t), g, d)
    raise SearchBoundExceeded("no admissible prime below %d for %s" % (bound, t))


def smallest_prime_power_residue(k: int, bound: int) -> int:
    """Smallest prime power congruent to -1 mod k, scanning up to ``bound``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    for v in range(k - 1, bound + 1, k):
        if prime_power_base(v) is not None:
            return v
    raise BoundTooSmall("no prime power = -1 mod %d below %d" % (k, bound))


# ---------------------------------------------------------------------------
# the A4 and S_p variants


def remark3_eligible(q: int, t: Triple) -> bool:
    """q > 3, q = +-3 or +-13 mod 40 and l, m, n coprime to 6."""
    return (q > 3 and q % 40 in (3, 13, 27, 37)
            and all(math.gcd(v, 6) == 1 for v in t))


@dataclass(frozen=True)
class CycleTriple:
    p: int
    x: Perm
    y: Perm
    z: Perm

    @property
    def orders(self) -> tuple[int, int, int]:
        return perm_order(self.x), perm_order(self.y), perm_order(self.z)

    def fixed_point_counts(self) -> tuple[int, int, int]:
        return tuple(len(s.fixed_points()) for s in (self.x, self.y, self.z))


def remark4_cycle_triple(p: int, check_generation: bool = True) -> CycleTriple:
    """x = (1..l), y = (4,3,2,1,l+1,..,p), z = (xy)^-1 with p = 2l - 3.

    Points are shifted to 0-based, so x = (0 .. l-1) and
    y = (3 2 1 0 l .. p-1).  Generation of S_p is checked by group order
    when ``check_generation`` is set.
    """
    if p < 5 or not is_prime(p):
        raise BadPrime("p must be a prime >= 5, got %d" % p)
    l = (p + 3) // 2
    x = Perm.from_cycles([list(range(l))], p)
    y = Perm.from_cycles([[3, 2, 1, 0] + list(range(l, p))], p)
    z = (x * y).inverse()
    ct = CycleTriple(p, x, y, z)
    if check_generation and PermGroup((x, y)).order() != math.factorial(p):
        raise AssertionError("cycle triple does not generate S_%d" % p)
    return ct
