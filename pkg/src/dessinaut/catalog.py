"""Named small groups and JSON group files."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .perm import CapExceeded, GroupTable, Perm, PermGroup


class ParseError(ValueError):
    pass


class NotAGroupWithinCap(ValueError):
    pass


def _cycle(n: int, pts=None) -> Perm:
    pts = list(range(n)) if pts is None else pts
    return Perm.from_cycles([pts], n)


def _quaternion() -> PermGroup:
    # elements (sign, unit), unit 0..3 = 1, i, j, k; index = 4 * (sign < 0) + unit
    table = {
        (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mult(x, y):
        (sx, ux), (sy, uy) = x, y
        if ux == 0:
            s, u = 1, uy
        elif uy == 0:
            s, u = 1, ux
        else:
            s, u = table[ux, uy]
        return sx * sy * s, u

    elems = [(1, u) for u in range(4)] + [(-1, u) for u in range(4)]
    idx = {e: i for i, e in enumerate(elems)}
    gens = []
    for g in [(1, 1), (1, 2)]:
        gens.append(Perm(tuple(idx[mult(e, g)] for e in elems)))
    return PermGroup(tuple(gens))


def named_group(name: str) -> PermGroup:
    """``trivial``, ``C<n>``, ``D<n>`` (order 2n), ``S<n>``, ``A<n>``, ``Q8``."""
    if name in ("trivial", "1", "C1"):
        return PermGroup((), degree=1)
    if name == "Q8":
        return _quaternion()
    m = re.fullmatch(r"([CDSA])(\d+)", name)
    if not m:
        raise ParseError("unknown group name %r" % name)
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ParseError("bad group size in %r" % name)
    if kind == "C":
        return PermGroup((_cycle(n),)) if n > 1 else PermGroup((), degree=1)
    if kind == "D":
        if n == 1:
            return PermGroup((_cycle(2),))
        if n == 2:
            return PermGroup((Perm.parse("(0 1)(2 3)"), Perm.parse("(0 2)(1 3)")))
        refl = Perm.from_cycles([[i, n - i] for i in range(1, (n + 1) // 2)], n)
        return PermGroup((_cycle(n), refl))
    if kind == "S":
        if n <= 1:
            return PermGroup((), degree=1)
        if n == 2:
            return PermGroup((_cycle(2),))
        return PermGroup((Perm.from_cycles([[0, 1]], n), _cycle(n)))
    if n <= 2:
        return PermGroup((), degree=max(n, 1))
    if n == 3:
        return PermGroup((_cycle(3),))
    big = _cycle(n) if n % 2 else _cycle(n, list(range(1, n)))
    return PermGroup((_cycle(n, [0, 1, 2]), big))


def group_from_json(data: dict) -> PermGroup:
    try:
        degree = int(data["degree"])
        gens = tuple(Perm(tuple(int(v) for v in g)) for g in data["generators"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("bad group JSON: %s" % exc) from exc
    if any(g.degree != degree for g in gens):
        raise ParseError("generator degree does not match 'degree'")
    return PermGroup(gens, degree=degree)


def load_group(source: str, cap: int = 500) -> GroupTable:
    """A catalog name or the path of a JSON file of permutation generators."""
    path = Path(source)
    if source.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError("cannot read group file %s: %s" % (source, exc)) from exc
        group, name = group_from_json(data), data.get("name", path.stem)
    else:
        group, name = named_group(source), source
    try:
        return GroupTable(group, cap=cap, name=name)
    except CapExceeded as exc:
        raise NotAGroupWithinCap(str(exc)) from exc


CATALOG_EXAMPLES = ["trivial", "C2", "C3", "C5", "C6", "S3", "D4", "Q8", "D5", "A4", "S4", "A5"]
