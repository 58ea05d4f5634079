"""Prime systems, counting axioms, and density fits against direct oracles."""
import math

import pytest
from hypothesis import given, settings, strategies as st

from monoidldp.errors import DegenerateGrid, ParameterError, SourceError
from monoidldp.systems import (
    Beurling,
    Integers,
    PolyOverFq,
    QuadraticField,
    count_elements,
    density_fit,
    kronecker_at_prime,
    list_primes,
    mertens_sum,
    prime_count_check,
    primes_upto,
)


def test_integer_primes():
    assert [e.norm for e in list_primes(Integers(), 30)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert [e.label for e in list_primes(Integers(), 10)] == ["2", "3", "5", "7"]
    assert list_primes(Integers(), 1) == ()
    with pytest.raises(ParameterError):
        list_primes(Integers(), 0)


def test_primes_upto_against_trial_division():
    def is_prime(n):
        return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))

    assert [int(p) for p in primes_upto(200)] == [n for n in range(2, 201) if is_prime(n)]


def test_poly_primes_gf2():
    entries = list_primes(PolyOverFq(2), 8)
    assert [e.norm for e in entries] == [2, 2, 4, 8, 8]
    assert [e.label for e in entries] == ["t", "t+1", "t^2+t+1", "t^3+t+1", "t^3+t^2+1"]


def test_poly_primes_counts_match_necklace():
    from monoidldp.gfpoly import necklace_count

    for q in (2, 3, 5):
        entries = list_primes(PolyOverFq(q), q**4)
        for d in range(1, 5):
            assert sum(1 for e in entries if e.norm == q**d) == necklace_count(q, d)


def test_quadratic_entries_gaussian():
    # Q(i): 2 ramifies, p = 1 mod 4 splits, p = 3 mod 4 is inert with norm p^2
    entries = list_primes(QuadraticField(-4), 25)
    assert [(e.norm, e.label) for e in entries] == [
        (2, "(2,r)"),
        (5, "(5,s1)"), (5, "(5,s2)"),
        (9, "(3,i)"),
        (13, "(13,s1)"), (13, "(13,s2)"),
        (17, "(17,s1)"), (17, "(17,s2)"),
    ]


def test_quadratic_rejects_bad_discriminant():
    for D in (0, 1, 2, 3, -3 * 4, 10**4, 101, -101):  # 101 is fundamental but over the size cap
        with pytest.raises(ParameterError):
            QuadraticField(D)
    # these are fundamental
    for D in (-4, -8, -3, 5, 8, -7, 12, 13, 97):
        QuadraticField(D)


FUNDAMENTAL = (-3, -4, -7, -8, -11, -15, -19, -20, 5, 8, 12, 13, 17, 21, 24, 97)


@pytest.mark.parametrize("D", FUNDAMENTAL)
def test_kronecker_against_square_counting(D):
    for p in [int(v) for v in primes_upto(200)]:
        chi = kronecker_at_prime(D, p)
        if p == 2:
            if D % 2 == 0:
                assert chi == 0
            else:
                assert chi == (1 if D % 8 in (1, 7) else -1)
            continue
        if D % p == 0:
            assert chi == 0
        else:
            squares = {(x * x) % p for x in range(1, p)}
            assert chi == (1 if D % p in squares else -1)


def test_quadratic_splitting_matches_character():
    # ideal count above odd unramified p: 2 if chi = 1 else 0 at norm p
    for D in (-4, 5, -7):
        entries = list_primes(QuadraticField(D), 1000)
        for p in [int(v) for v in primes_upto(1000)]:
            if p == 2 or D % p == 0:
                continue
            at_p = [e for e in entries if e.norm == p]
            chi = kronecker_at_prime(D, p)
            assert len(at_p) == (2 if chi == 1 else 0)


def test_beurling_file_parsing(tmp_path):
    f = tmp_path / "norms.txt"
    f.write_text("# toy system\n\n2\n3\n\n# another comment\n2\n")
    b = Beurling.from_file(str(f))
    assert b.norms == (2, 3, 2)
    entries = list_primes(b, 10)
    assert [(e.norm, e.label) for e in entries] == [
        (2, "beurling#1"), (2, "beurling#3"), (3, "beurling#2"),
    ]

    bad = tmp_path / "bad.txt"
    bad.write_text("2\nxyz\n")
    with pytest.raises(SourceError, match=r"bad\.txt:2"):
        Beurling.from_file(str(bad))

    low = tmp_path / "low.txt"
    low.write_text("2\n1\n")
    with pytest.raises(SourceError, match=r"low\.txt:2"):
        Beurling.from_file(str(low))

    with pytest.raises(SourceError):
        Beurling.from_file(str(tmp_path / "missing.txt"))

    with pytest.raises(SourceError):
        Beurling((2, 1))


def test_mertens_examples():
    s10, _ = mertens_sum(Integers(), 10)
    assert math.isclose(s10, 1 / 2 + 1 / 3 + 1 / 5 + 1 / 7, rel_tol=0, abs_tol=1e-15)
    s100, d100 = mertens_sum(Integers(), 100)
    assert math.isclose(s100, 1.802817201048871, abs_tol=1e-12)
    assert math.isclose(d100, s100 - math.log(math.log(100)), abs_tol=1e-12)
    with pytest.raises(ParameterError):
        mertens_sum(Integers(), 2)


def test_prime_count_check():
    # pi(X) log X / X: 1.1043 at 1e5 per the prime counting function
    assert math.isclose(prime_count_check(Integers(), 10**5), 9592 * math.log(10**5) / 10**5, rel_tol=1e-12)
    v = prime_count_check(Beurling((2, 3, 5)), 10)
    assert math.isclose(v, 3 * math.log(10) / 10, rel_tol=1e-12)


def test_count_elements_integers_and_poly():
    assert count_elements(Integers(), 1000) == 1000
    # monic polynomials of degree <= n over F_2, unit included
    assert count_elements(PolyOverFq(2), 2**6) == 2**7 - 1
    assert count_elements(Beurling(()), 100) == 1


def test_density_integers_exact():
    fit = density_fit(Integers(), [100, 1000, 10000, 100000])
    assert fit.status == "EXACT"
    assert fit.a_hat == 1.0
    assert fit.b_hat == 0.0
    assert all(r == 0.0 for _, r in fit.residuals)


def test_density_poly_snaps_to_powers():
    grid = sorted([2**k for k in range(4, 17)] + [1000])  # 1000 is not a power of 2
    fit = density_fit(PolyOverFq(2), grid)
    assert fit.unsupported == (1000,)
    assert fit.status == "OK"
    assert abs(fit.a_hat - 2.0) < 1e-3
    assert 0.0 <= fit.b_hat < 1.0


def test_density_quadratic_gaussian():
    fit = density_fit(QuadraticField(-4), [100, 1000, 10000, 100000])
    assert fit.status == "OK"
    assert abs(fit.a_hat - math.pi / 4) < 0.01


def test_density_beurling_23():
    fit = density_fit(Beurling((2, 3)), [100, 1000, 10000, 100000])
    # the {2,3}-smooth counting function is (log X)^2-ish, far from linear
    assert fit.status == "FAILED"


def test_density_beurling_222_fails():
    fit = density_fit(Beurling((2, 2, 2)), [16, 64, 256, 1024])
    assert fit.status == "FAILED"


def test_density_grid_validation():
    with pytest.raises(DegenerateGrid):
        density_fit(Integers(), [10, 100, 1000])
    with pytest.raises(DegenerateGrid):
        density_fit(Integers(), [10, 100, 100, 1000])
    with pytest.raises(DegenerateGrid):
        density_fit(PolyOverFq(2), [10, 100, 1000, 10000])  # no powers of 2


@settings(max_examples=40, deadline=None)
@given(
    x1=st.integers(min_value=2, max_value=300),
    x2=st.integers(min_value=2, max_value=300),
)
def test_list_primes_prefix_stability(x1, x2):
    lo, hi = sorted((x1, x2))
    sys_ = QuadraticField(-4)
    small = list_primes(sys_, lo)
    big = list_primes(sys_, hi)
    assert small == tuple(e for e in big if e.norm <= lo)


def test_list_primes_sorted_and_immutable():
    entries = list_primes(Integers(), 100)
    assert list(entries) == sorted(entries)
    assert isinstance(entries, tuple)
