import functools

import pytest

from dessinaut.catalog import load_group
from dessinaut.cover import build_cover, find_epimorphism, voltages
from dessinaut.fpgroup import (reidemeister_schreier, schreier_transversal,
                               tietze_simplify, triangle_presentation)
from dessinaut.psl2 import find_generating_triple
from dessinaut.triangle import Triple


@functools.lru_cache(maxsize=None)
def base_setup(q, l, m, n, seed=0):
    """Generating triple, Schreier data, RS presentation and Tietze result."""
    gt = find_generating_triple(q, l, m, n, seed=seed)
    px, py, pz = gt.perms()
    sd = schreier_transversal((px, py), q)
    rs = reidemeister_schreier(triangle_presentation(l, m, n), sd)
    return gt, (px, py, pz), sd, rs, tietze_simplify(rs)


@functools.lru_cache(maxsize=None)
def cover_setup(group, q, l, m, n):
    a = load_group(group)
    gt, perms, sd, rs, tz = base_setup(q, l, m, n)
    theta = find_epimorphism(tz.presentation, a)
    va = voltages(sd, tz.ledger, theta)
    return a, theta, va, build_cover(perms[:2], va, a)


@pytest.fixture
def q23():
    return base_setup(23, 4, 6, 12)


@pytest.fixture
def t4612():
    return Triple(4, 6, 12)


# one summary line per acceptance criterion
_CRITERIA: dict[int, tuple[str, bool]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    ok = _CRITERIA.get(num, (title, True))[1]
    if rep.failed or (rep.when == "call" and not rep.passed):
        ok = False
    _CRITERIA[num] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line("criterion %2d  %-34s %s" % (num, title, "PASS" if ok else "FAIL"))
