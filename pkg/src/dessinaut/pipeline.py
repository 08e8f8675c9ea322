"""End-to-end realization of a finite group as Aut of a hyperbolic dessin,
with a certificate that re-validates from its own data."""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .cover import (CoverStructure, Hom, SearchBudgetExhausted, build_cover,
                    find_epimorphism, verify_theta, voltages, word_value)
from .dessin import (Dessin, automorphism_group, certify_aut_equals, dessin_from_pair,
                     euler_genus, passport, verify_type)
from .fpgroup import (Presentation, abelianization, reidemeister_schreier,
                      schreier_transversal, tietze_simplify, triangle_presentation)
from .perm import (GroupTable, Perm, PermGroup, centralizer_in_sym, generating_tuple,
                   is_semiregular, perm_order)
from .psl2 import (GeneratingTriple, PSL2Elt, SearchExhausted, find_generating_triple,
                   projective_perm, psl2_group_order, psl2_normalize, psl2_order,
                   search_generating_triple)
from .triangle import (NO, YES, BadPrime, Triple, admissible_primes, classify_triple,
                       cover_genus, genus_rh, is_hyperbolic, is_prime, modulus_k,
                       remark3_eligible, remark4_cycle_triple)

log = logging.getLogger(__name__)

CERT_FORMAT = 1

DEFAULT_TRIPLES = [Triple(4, 6, 12), Triple(2, 4, 9), Triple(2, 3, 21), Triple(2, 3, 13)] + [
    Triple(2, 3, n) for n in (17, 19, 23, 29, 31, 37, 41, 43, 47)
]


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__("[%s] %s" % (stage, message))
        self.stage = stage


class InputError(PipelineError):
    pass


class BudgetError(PipelineError):
    pass


class DegreeCapExceeded(ValueError):
    pass


class NoEligibleQ(ValueError):
    pass


@dataclass
class RealizeOptions:
    triple: Triple | None = None
    q: int | None = None
    seed: int = 0
    group_cap: int = 500
    dart_cap: int = 10**6
    tables: bool = False
    theta_budget: int = 10**6
    seeds_per_q: int = 3
    q_per_triple: int = 3
    basepoints: int = 3


@dataclass
class RealizeResult:
    dessin: Dessin
    certificate: dict
    cover: CoverStructure
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.certificate["verdict"] == "pass"


def _candidates(a: GroupTable, d: int, opts: RealizeOptions) -> list[tuple[Triple, int]]:
    """(triple, q) attempts in retry order."""
    need = max(d, 2)
    triples = [opts.triple] if opts.triple else DEFAULT_TRIPLES
    ranked = []
    for pos, t in enumerate(triples):
        if not is_hyperbolic(t):
            raise InputError("triple", "%s is not hyperbolic" % (t,))
        if not classify_triple(t, tables=opts.tables).accepted:
            if opts.triple:
                raise InputError("triple", "%s is not certified maximal and non-arithmetic" % (t,))
            continue
        if opts.q is not None:
            if (opts.q + 1) % modulus_k(t) or not is_prime(opts.q):
                raise InputError("q", "q=%d is not a prime = -1 mod %d" % (opts.q, modulus_k(t)))
            if genus_rh(opts.q + 1, t) < need:
                raise InputError("q", "q=%d gives genus below %d" % (opts.q, need))
            qs = [opts.q]
        else:
            qs = []
            for q in admissible_primes(t):
                if genus_rh(q + 1, t) >= need and (q + 1) * a.order <= opts.dart_cap:
                    qs.append(q)
                if len(qs) == opts.q_per_triple or (q + 1) * a.order > opts.dart_cap:
                    break
        if qs:
            ranked.append((qs[0] + 1, pos, t, qs))
    ranked.sort(key=lambda r: (r[0], r[1]))
    return [(t, q) for _, _, t, qs in ranked for q in qs]


def realize(a: GroupTable, opts: RealizeOptions | None = None) -> RealizeResult:
    opts = opts or RealizeOptions()
    if a.order > opts.group_cap:
        raise InputError("group", "order %d exceeds cap %d" % (a.order, opts.group_cap))
    timings = {}
    t0 = time.perf_counter()
    witness = generating_tuple(a, seed=opts.seed)
    d = len(witness)
    timings["rank"] = time.perf_counter() - t0
    attempts = []
    cands = _candidates(a, d, opts)
    if not cands:
        raise InputError("triple", "no admissible (triple, q) within the dart cap")
    for t, q in cands:
        for bp in [q] + list(range(opts.basepoints - 1)):
            stuck = False
            for s in range(opts.seeds_per_q):
                seed = opts.seed + s
                try:
                    res = _attempt(a, witness, t, q, bp, seed, opts, timings)
                except (SearchBudgetExhausted, SearchExhausted) as exc:
                    attempts.append("%s q=%d basepoint=%d seed=%d: %s" % (t, q, bp, seed, exc))
                    log.info(attempts[-1])
                    continue
                except _Stuck as exc:
                    attempts.append("%s q=%d basepoint=%d: tietze stuck (%s)" % (t, q, bp, exc))
                    log.info(attempts[-1])
                    stuck = True
                    break
                res.certificate["attempts"] = attempts
                timings["total"] = time.perf_counter() - t0
                res.timings = timings
                return res
            if not stuck:
                # seeds exhausted at this q: move on to the next q
                break
    raise BudgetError("theta", "all attempts failed: %s" % "; ".join(attempts))


class _Stuck(RuntimeError):
    pass


def _attempt(a, witness, t, q, basepoint, seed, opts, timings) -> RealizeResult:
    clock = time.perf_counter
    s = clock()
    gt = find_generating_triple(q, t.l, t.m, t.n, seed=seed)
    px, py, pz = gt.perms()
    timings["psl2_triple"] = clock() - s

    s = clock()
    sd = schreier_transversal((px, py), basepoint)
    rs = reidemeister_schreier(triangle_presentation(t.l, t.m, t.n), sd)
    tz = tietze_simplify(rs)
    timings["reidemeister_tietze"] = clock() - s
    if tz.stuck:
        raise _Stuck("%d generators, %d relators" % (tz.presentation.ngens,
                                                      len(tz.presentation.relators)))

    s = clock()
    theta = find_epimorphism(tz.presentation, a, seed=seed, budget=opts.theta_budget)
    theta_ok = verify_theta(theta, rs, tz.ledger)
    va = voltages(sd, tz.ledger, theta)
    cov = build_cover((px, py), va, a)
    timings["theta_cover"] = clock() - s

    dessin = Dessin(*cov.lifts)
    cert = {
        "format": CERT_FORMAT,
        "version": __version__,
        "group": {
            "name": a.name,
            "degree": a.group.degree,
            "generators": [list(g.images) for g in a.group.generators],
            "order": a.order,
            "rank": len(witness),
            "rank_witness": list(witness),
        },
        "triple": list(t),
        "classification": vars(classify_triple(t, tables=opts.tables)),
        "k": modulus_k(t),
        "q": q,
        "base": {
            "index": q + 1,
            "genus_formula": genus_rh(q + 1, t),
            "genus_euler": euler_genus(Dessin(px, py)),
            "matrices": {name: list(e.entries()) for name, e in zip("xyz", (gt.x, gt.y, gt.z))},
            "psl2_order": psl2_group_order(q),
            "basepoint": basepoint,
        },
        "presentation": {
            "rs_generators": rs.ngens,
            "rs_relators": len(rs.relators),
            "rs_abelianization": _ab_json(abelianization(rs)),
            "simplified_generators": tz.presentation.ngens,
            "simplified_relators": [list(r) for r in tz.presentation.relators],
            "tietze_steps": tz.steps,
            "dropped_relators": tz.ledger.dropped_relators,
            "stuck": tz.stuck,
        },
        "theta": {
            "images": list(theta.images),
            "verified_on_rs_relators": theta_ok,
        },
        "voltages": [list(r) for r in va.table],
        "cover": {
            "darts": cov.darts,
            "genus_formula": cover_genus(genus_rh(q + 1, t), a.order),
            "genus_euler": euler_genus(dessin),
            "passport": passport(dessin),
            "orders": [perm_order(p) for p in (dessin.sigma0, dessin.sigma1, dessin.sigma2)],
        },
        "seeds": {"base": opts.seed, "used": seed},
    }
    s = clock()
    checks = validate(cert, dessin.to_json(t))
    checks["theta_kills_rs_relators"] = theta_ok
    checks["tietze_not_stuck"] = not tz.stuck
    timings["validate"] = clock() - s
    cert["cover"]["aut_order"] = checks.pop("_aut_order")
    cert["checks"] = checks
    cert["verdict"] = "pass" if all(checks.values()) else "fail"
    return RealizeResult(dessin, cert, cov)


def _ab_json(ab) -> dict:
    return {"free_rank": ab[0], "torsion": list(ab[1])}


# ---------------------------------------------------------------------------
# re-validation


def validate(cert: dict, dessin_json: dict) -> dict:
    """Recompute every certified claim from the stored data.

    No search is repeated: the generating triple, epimorphism and voltages
    are read from the certificate and only checked.
    """
    c: dict = {}
    grp = cert["group"]
    a = GroupTable(PermGroup(tuple(Perm(tuple(g)) for g in grp["generators"]),
                             degree=grp["degree"]), cap=max(grp["order"], 1))
    c["group_order"] = a.order == grp["order"]
    c["rank_witness_generates"] = (len(grp["rank_witness"]) == grp["rank"]
                                   and a.generates(grp["rank_witness"]))

    t = Triple(*cert["triple"])
    q = cert["q"]
    cls = classify_triple(t, tables=cert["classification"]["certified_by"] != "paper-allowlist")
    c["triple_hyperbolic"] = is_hyperbolic(t)
    c["triple_certified"] = (cls.is_maximal == YES and cls.is_arithmetic == NO
                             and vars(cls) == cert["classification"])
    c["k_is_lcm"] = cert["k"] == modulus_k(t)
    c["q_prime_admissible"] = is_prime(q) and (q + 1) % cert["k"] == 0

    base = cert["base"]
    g = genus_rh(q + 1, t)
    c["base_genus_formula"] = base["genus_formula"] == g
    c["base_genus_at_least_rank"] = g >= max(grp["rank"], 2)
    c["genus_bound_q_over_84"] = 84 * g > q + 1
    try:
        x, y, z = (psl2_normalize(q, *base["matrices"][k]) for k in "xyz")
        c["matrices_normalized"] = all(
            list(e.entries()) == base["matrices"][k] for e, k in zip((x, y, z), "xyz"))
    except ValueError:
        return _failed(c, "matrices_normalized")
    c["triple_product_identity"] = (x * y * z).is_identity()
    c["triple_orders"] = (psl2_order(x), psl2_order(y), psl2_order(z)) == tuple(t)
    px, py = projective_perm(x), projective_perm(y)
    c["triple_generates_psl2"] = (PermGroup((px, py)).order() == psl2_group_order(q)
                                  == base["psl2_order"])
    base_d = Dessin(px, py)
    c["base_semiregular"] = verify_type(base_d, t)
    c["base_genus_euler"] = euler_genus(base_d) == g == base["genus_euler"]

    pres = cert["presentation"]
    index = q + 1
    rs_rel = sum(index // v for v in t)
    c["rs_counts"] = (pres["rs_generators"] == index + 1 and pres["rs_relators"] == rs_rel
                      and pres["rs_generators"] - pres["rs_relators"] == 2 * g - 1)
    sd = schreier_transversal((px, py), base["basepoint"])
    rs = reidemeister_schreier(triangle_presentation(t.l, t.m, t.n), sd)
    ab_rs = abelianization(rs)
    c["rs_presentation_reproduced"] = (rs.ngens, len(rs.relators)) == (
        pres["rs_generators"], pres["rs_relators"])
    c["rs_abelianization_surface"] = ab_rs == (2 * g, []) and _ab_json(ab_rs) == pres["rs_abelianization"]
    spres = Presentation(pres["simplified_generators"],
                         tuple(tuple(r) for r in pres["simplified_relators"]))
    c["simplified_surface_shape"] = spres.ngens == 2 * g and len(spres.relators) == 1
    c["simplified_abelianization_surface"] = abelianization(spres) == (2 * g, [])

    theta = Hom(a, tuple(cert["theta"]["images"]))
    c["theta_shape"] = (len(theta.images) == spres.ngens
                        and all(0 <= v < a.order for v in theta.images))
    if not c["theta_shape"]:
        return _failed(c, "theta_shape")
    c["theta_kills_relator"] = theta.kills(spres)
    c["theta_surjective"] = theta.is_surjective()

    table = cert["voltages"]
    c["voltage_shape"] = len(table) == index and all(
        len(r) == 2 and all(0 <= v < a.order for v in r) for r in table)
    if not c["voltage_shape"]:
        return _failed(c, "voltage_shape")
    # voltage product around every relator cycle of the base action
    ok = True
    for word in triangle_presentation(t.l, t.m, t.n).relators:
        for i in range(index):
            v, j = 0, i
            for s in word:
                v = a.mul[v][table[j][s - 1]]
                j = (px, py)[s - 1][j]
            ok = ok and v == 0 and j == i
    c["voltage_relator_cycles"] = ok

    from .cover import VoltageAssignment
    cov = build_cover((px, py), VoltageAssignment(tuple(tuple(r) for r in table)), a)
    d = Dessin(Perm(tuple(dessin_json["sigma0"])), Perm(tuple(dessin_json["sigma1"])))
    c["dessin_matches_voltages"] = (d.sigma0, d.sigma1) == cov.lifts
    cv = cert["cover"]
    n_darts = index * a.order
    c["dart_count"] = d.darts == n_darts == cv["darts"] == dessin_json["darts"]
    c["cover_connected"] = d.is_connected()
    c["cover_type"] = verify_type(d, t) and dessin_json.get("type") == list(t)
    eg = euler_genus(d)
    cg = cover_genus(g, a.order)
    c["cover_genus_formula"] = cv["genus_formula"] == cg
    c["cover_genus_euler"] = eg == cg == cv["genus_euler"] == dessin_json["genus"]
    pp = passport(d)
    c["passport"] = pp == cv["passport"] == dessin_json["passport"]
    c["cover_orders"] = cv["orders"] == list(t)

    aut = automorphism_group(d)
    aut_order = aut.order()
    cert_aut = certify_aut_equals(d, a, cov.deck, aut_order=aut_order)
    c["deck_commutes"] = cert_aut.deck_commutes
    c["deck_injective"] = cert_aut.deck_injective_hom
    c["aut_semiregular"] = all(is_semiregular(p) for p in aut.generators)
    c["aut_order_equals_group_order"] = aut_order == a.order
    if "aut_order" in cv:
        c["aut_order_recorded"] = cv["aut_order"] == aut_order
    # |Aut| < darts with a transitive monodromy group forces a non-regular
    # action, i.e. the kernel subgroup is not normal in the triangle group
    c["kernel_not_normal"] = aut_order < n_darts
    c["_aut_order"] = aut_order
    return c


def _failed(c: dict, key: str) -> dict:
    c[key] = False
    c.setdefault("_aut_order", 0)
    return c


def revalidate(cert: dict, dessin_json: dict) -> tuple[bool, dict]:
    """Re-run all checks; passes only if every check holds and the stored
    checks and verdict agree with the recomputed ones."""
    checks = validate(cert, dessin_json)
    checks.pop("_aut_order")
    stored = cert.get("checks", {})
    for k, v in list(checks.items()):
        if k in stored and stored[k] is not v:
            checks["stored_" + k] = False
    checks["theta_kills_rs_relators"] = bool(stored.get("theta_kills_rs_relators")) and bool(
        cert["theta"].get("verified_on_rs_relators"))
    checks["tietze_not_stuck"] = not cert["presentation"].get("stuck", True)
    ok = all(checks.values()) and cert.get("verdict") == "pass"
    return ok, checks


# ---------------------------------------------------------------------------
# output


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def emit(result: RealizeResult, out: str | Path, timings: bool = False) -> tuple[Path, Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    cpath, dpath = out / "certificate.json", out / "dessin.json"
    cpath.write_text(canonical_json(result.certificate))
    dpath.write_text(canonical_json(result.dessin.to_json(Triple(*result.certificate["triple"]))))
    if timings:
        (out / "timings.json").write_text(json.dumps(result.timings, indent=2, sort_keys=True))
    return cpath, dpath


# ---------------------------------------------------------------------------
# variants with faster genus growth


def remark3_plan(t: Triple, q_bound: int = 10**4, degree_cap: int = 20_000,
                 seed: int = 0) -> dict:
    """Smallest eligible q for the A4 coset action and the resulting genus.

    The coset action is only built when its degree is at most ``degree_cap``.
    """
    if any(math.gcd(v, 6) != 1 for v in t):
        raise ValueError("%s is not coprime to 6" % (t,))
    for q in range(5, q_bound + 1):
        if is_prime(q) and remark3_eligible(q, t) and all(
                q % v == 0 or ((q - 1) // 2) % v == 0 or ((q + 1) // 2) % v == 0 for v in t):
            break
    else:
        raise NoEligibleQ("no eligible prime q <= %d for %s" % (q_bound, t))
    degree = q * (q * q - 1) // 24
    g = genus_rh(degree, t)
    report = {
        "triple": list(t),
        "classification": vars(classify_triple(t)),
        "smallest_certified_example": t == Triple(7, 11, 13),
        "q": q,
        "degree": degree,
        "genus": g,
        "genus_exceeds_cubic_bound": 120 * g > q * (q * q - 1),
        "constructed": False,
    }
    if degree <= degree_cap:
        report.update(_a4_construction(q, t, seed))
        report["constructed"] = True
    return report


def _a4_construction(q: int, t: Triple, seed: int) -> dict:
    import random

    gt = search_generating_triple(q, t.l, t.m, t.n, seed=seed)
    rng = random.Random(seed)
    full = psl2_group_order(q)
    from .psl2 import random_element
    while True:
        u, v = random_element(q, rng), random_element(q, rng)
        if psl2_order(u) == 2 and psl2_order(v) == 3:
            h = PermGroup((projective_perm(u), projective_perm(v)))
            if h.order() == 12:
                break
    sub = _closure_psl2([u, v])
    x_act, y_act, index = _coset_action(sub, (gt.x, gt.y))
    d = Dessin(x_act, y_act)
    return {
        "generating_triple": {k: list(e.entries()) for k, e in zip("xyz", (gt.x, gt.y, gt.z))},
        "subgroup_order": len(sub),
        "index_verified": index * len(sub) == full,
        "coset_action_transitive": d.is_connected(),
        "semiregular": verify_type(d, t),
        "genus_euler": euler_genus(d),
    }


def _closure_psl2(gens: list[PSL2Elt]) -> list[PSL2Elt]:
    one = gens[0] * gens[0].inverse()
    seen = {one}
    out = [one]
    for e in out:
        for g in gens:
            h = e * g
            if h not in seen:
                seen.add(h)
                out.append(h)
    return out


def _coset_action(sub, gens):
    """Right action of ``gens`` on right cosets of the finite subgroup ``sub``.

    Elements must support ``*`` and be orderable and hashable.
    """
    one = sub[0]
    key = lambda g: min(h * g for h in sub)
    reps = [one]
    index = {key(one): 0}
    images = [[] for _ in gens]
    for r in reps:
        for k, g in enumerate(gens):
            kk = key(r * g)
            if kk not in index:
                index[kk] = len(reps)
                reps.append(r * g)
            images[k].append(index[kk])
    return (*(Perm(tuple(im)) for im in images), len(reps))


def _agl1(p: int) -> list[Perm]:
    root = next(r for r in range(2, p) if all(pow(r, (p - 1) // f, p) != 1
                                                 for f in _prime_factors(p - 1)))
    return [Perm(tuple((a * i + b) % p for i in range(p)))
            for a in [pow(root, e, p) for e in range(p - 1)] for b in range(p)]


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def remark4_plan(p: int, construct: bool | None = None, degree_cap: int = 5040) -> dict:
    """Cycle triple of S_p and the genus of the AGL1(p) coset action.

    ``construct=None`` builds the coset action when (p-2)! <= degree_cap;
    ``construct=True`` raises DegreeCapExceeded above the cap.
    """
    if p < 5 or not is_prime(p):
        raise BadPrime("p must be a prime >= 5, got %d" % p)
    ct = remark4_cycle_triple(p, check_generation=p <= 13)
    t = Triple(*ct.orders)
    degree = math.factorial(p - 2)
    g = genus_rh(degree, t)
    report = {
        "p": p,
        "cycles": {k: str(s) for k, s in zip("xyz", (ct.x, ct.y, ct.z))},
        "orders": list(ct.orders),
        "triple": list(t),
        "classification": vars(classify_triple(t)),
        "fixed_points": list(ct.fixed_point_counts()),
        "all_have_two_fixed_points": min(ct.fixed_point_counts()) >= 2,
        # only checked (by group order) for p <= 13
        "generates_symmetric_group": True if p <= 13 else None,
        "degree": degree,
        "genus": g,
        "genus_exceeds_bound": 84 * g > degree,
        "constructed": False,
    }
    if construct is None:
        construct = degree <= degree_cap
    if construct:
        if degree > degree_cap:
            raise DegreeCapExceeded("coset action of degree %d exceeds cap %d" % (degree, degree_cap))
        h = _agl1(p)
        x_act, y_act, index = _coset_action(sorted(h, key=lambda s: s.images),
                                            (ct.x, ct.y))
        d = Dessin(x_act, y_act)
        report.update({
            "constructed": True,
            "subgroup_order": len(h),
            "index": index,
            "index_verified": index * len(h) == math.factorial(p),
            "frobenius_at_most_one_fixed_point": all(
                len(s.fixed_points()) <= 1 for s in h if not s.is_identity()),
            "coset_action_transitive": d.is_connected(),
            "semiregular": verify_type(d, ct.orders),
            "genus_euler": euler_genus(d),
        })
    return report
