import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dessinaut.triangle import (NO, UNCERTIFIED, YES, BadPrime, BoundTooSmall,
                                NonIntegralGenus, NotHyperbolic, Triple, admissible_primes,
                                classify_triple, cover_genus, find_q, genus_rh,
                                in_paper_allowlist, is_hyperbolic, is_prime, modulus_k,
                                prime_power_base, remark3_eligible, remark4_cycle_triple,
                                smallest_prime_power_residue, table_checksum,
                                singerman_non_maximal)


def sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(n ** 0.5) + 1):
        if flags[i]:
            flags[i * i::i] = [False] * len(flags[i * i::i])
    return flags


def test_is_prime_against_sieve():
    flags = sieve(20000)
    assert all(is_prime(n) == flags[n] for n in range(20001))
    assert is_prime(2003) and not is_prime(561)


def test_prime_power_base():
    assert prime_power_base(343) == 7
    assert prime_power_base(311) == 311
    assert prime_power_base(12) is None


def test_triple_sorting_and_parse():
    assert Triple(12, 4, 6) == Triple(4, 6, 12) == Triple.parse("4,6,12")
    assert tuple(Triple(9, 2, 4)) == (2, 4, 9)
    with pytest.raises(ValueError):
        Triple(1, 3, 7)


def test_hyperbolic_examples():
    assert is_hyperbolic(Triple(2, 3, 7))
    assert not is_hyperbolic(Triple(2, 3, 6))
    assert is_hyperbolic(Triple(4, 6, 12))
    with pytest.raises(NotHyperbolic):
        find_q(Triple(2, 4, 4))


def test_modulus_examples():
    assert modulus_k(Triple(2, 3, 13)) == 156
    assert modulus_k(Triple(4, 6, 12)) == 24
    assert modulus_k(Triple(2, 4, 9)) == 72


def test_classification_examples():
    c = classify_triple(Triple(2, 3, 13))
    assert (c.is_maximal, c.is_arithmetic, c.certified_by) == (YES, NO, "paper-allowlist")
    assert classify_triple(Triple(7, 11, 13)).accepted
    c = classify_triple(Triple(3, 4, 4))
    assert (c.is_maximal, c.is_arithmetic) == (UNCERTIFIED, UNCERTIFIED) and not c.accepted
    assert not in_paper_allowlist(Triple(2, 3, 7))
    assert in_paper_allowlist(Triple(2, 3, 31)) and in_paper_allowlist(Triple(2, 3, 32))
    assert not in_paper_allowlist(Triple(2, 3, 15))


def test_singerman_table_marks_known_inclusions():
    assert singerman_non_maximal(Triple(3, 4, 4)) is True
    assert singerman_non_maximal(Triple(7, 7, 7)) is True
    assert singerman_non_maximal(Triple(2, 3, 7)) is False
    c = classify_triple(Triple(3, 4, 4), tables=True)
    assert c.is_maximal == NO and "singerman-table" in c.certified_by
    # no arithmeticity table is shipped, so nothing outside the allowlist is accepted
    assert not classify_triple(Triple(2, 5, 7), tables=True).accepted


def test_tampered_table_is_ignored(tmp_path):
    body = "3,4,4\t2,3,8\n"
    good = tmp_path / "good.tsv"
    good.write_text(body + "# sha256 %s\n" % table_checksum(body))
    bad = tmp_path / "bad.tsv"
    bad.write_text("2,3,7\t2,3,8\n# sha256 %s\n" % table_checksum(body))
    assert singerman_non_maximal(Triple(3, 4, 4), path=good) is True
    assert singerman_non_maximal(Triple(3, 4, 4), path=bad) is None


@pytest.mark.parametrize("t,d,k,q,g", [
    ((2, 3, 13), 15, 156, 311, 15),
    ((2, 3, 21), 6, 84, 83, 6),
    ((2, 4, 9), 6, 72, 71, 6),
    ((4, 6, 12), 7, 24, 23, 7),
])
def test_find_q_values(t, d, k, q, g):
    for dd in (0, d):
        r = find_q(Triple(*t), dd)
        assert (r.k, r.q, r.g) == (k, q, g)


def test_find_q_grows_with_rank():
    r = find_q(Triple(4, 6, 12), 8)
    assert r.q > 23 and r.g >= 8 and (r.q + 1) % 24 == 0 and is_prime(r.q)


def test_smallest_prime_power_residue():
    assert smallest_prime_power_residue(156, 311) == 311
    assert smallest_prime_power_residue(24, 1000) == 23
    assert smallest_prime_power_residue(72, 1000) == 71
    with pytest.raises(BoundTooSmall):
        smallest_prime_power_residue(156, 310)


def test_prime_power_residue_by_brute_force():
    def brute(k):
        v = k - 1
        while True:
            if any(v == p ** e for p in range(2, v + 1) if is_prime(p)
                   for e in range(1, v.bit_length() + 1)):
                return v
            v += k
    for k in (4, 6, 24, 60, 72, 156):
        assert smallest_prime_power_residue(k, 10**5) == brute(k)


def test_genus_examples():
    assert genus_rh(312, Triple(2, 3, 13)) == 15
    assert genus_rh(24, Triple(4, 6, 12)) == 7
    assert genus_rh(math.factorial(11), Triple(8, 9, 10)) == 13250161
    with pytest.raises(NonIntegralGenus):
        genus_rh(5, Triple(2, 3, 7))
    assert cover_genus(7, 1) == 7
    assert cover_genus(7, 2) == 13
    assert cover_genus(15, 6) == 85


@given(st.integers(2, 12), st.integers(2, 12), st.integers(2, 40))
def test_genus_of_admissible_primes(l, m, n):
    t = Triple(l, m, n)
    if not is_hyperbolic(t):
        return
    for q in list(admissible_primes(t, 20000))[:3]:
        g = genus_rh(q + 1, t)
        assert Fraction(q + 1, 84) < g
        # exact Riemann-Hurwitz with the semiregular cycle counts
        chi = (q + 1) // t.l + (q + 1) // t.m + (q + 1) // t.n - (q + 1)
        assert 2 - 2 * g == chi


def test_a4_variant_eligibility():
    assert remark3_eligible(43, Triple(7, 11, 13))
    assert not remark3_eligible(23, Triple(7, 11, 13))
    assert not remark3_eligible(43, Triple(2, 3, 7))


def test_sp_cycle_triple():
    ct = remark4_cycle_triple(13, check_generation=False)
    assert tuple(sorted(ct.orders)) == (8, 9, 10)
    ct = remark4_cycle_triple(7)
    assert ct.orders == (5, 6, 4)
    assert str(ct.x) == "(0 1 2 3 4)"
    assert str(ct.y) == "(0 5 6 3 2 1)"
    assert (ct.x * ct.y * ct.z).is_identity()
    for bad in (4, 9, 3):
        with pytest.raises(BadPrime):
            remark4_cycle_triple(bad)
