import math
import random

import pytest

from abprime import (
    FactorFound,
    ModPoly,
    NonUnit,
    Unit,
    count_operations,
    poly_is_unit_mod,
    poly_mul_mod,
    poly_pow_mod,
    random_poly,
)
from abprime.polyring import _mul_kronecker, _mul_schoolbook, _reducer_for


def P(m, *coeffs):
    return ModPoly(m, coeffs)


def test_canonical_form():
    assert P(5, 1, 2, 0, 0).coeffs == (1, 2)
    assert P(5, 6, 7).coeffs == (1, 2)
    assert P(5).degree == -1
    assert P(5, 0).is_zero()
    assert P(5, 0, 0, 1).is_monic()
    with pytest.raises(ValueError):
        ModPoly(1, [1])


def test_mul_mod_examples():
    f = P(5, 1, 0, 1)  # x^2 + 1
    x = ModPoly.x(5)
    assert poly_mul_mod(x, x, f) == P(5, 4)
    x1 = P(5, 1, 1)
    assert poly_mul_mod(x1, x1, f) == P(5, 0, 2)
    # (2x+1)(3x+4) mod (x^2+x+1) over Z/7: 6x^2+4x+4, x^2 = -x-1 -> 5x+5
    got = poly_mul_mod(P(7, 1, 2), P(7, 4, 3), P(7, 1, 1, 1))
    assert got == P(7, 5, 5)


def test_mul_mod_validation():
    f_nonmonic = P(5, 1, 2)
    with pytest.raises(ValueError):
        poly_mul_mod(P(5, 1), P(5, 1), f_nonmonic)
    with pytest.raises(ValueError):
        poly_mul_mod(P(5, 1), P(7, 1), P(5, 1, 0, 1))
    with pytest.raises(ValueError):
        poly_mul_mod(P(5, 1, 1, 1), P(5, 1), P(5, 1, 0, 1))


def test_pow_mod_examples():
    # x^7 mod (x^2+1) over Z/7: x^2 = -1, so x^7 = -x = 6x
    assert poly_pow_mod(ModPoly.x(7), 7, P(7, 1, 0, 1)) == P(7, 0, 6)
    assert poly_pow_mod(P(13, 5, 3), 0, P(13, 1, 1, 1)) == ModPoly.one(13)
    # (x+1)^6 over Z/6 mod x^7: binomial row C(6,k) mod 6
    f = ModPoly(6, [0] * 7 + [1])
    got = poly_pow_mod(P(6, 1, 1), 6, f)
    assert got == ModPoly(6, [math.comb(6, k) for k in range(7)])
    assert got.coeffs == (1, 0, 3, 2, 3, 0, 1)


def test_pow_additivity():
    rng = random.Random(10)
    for _ in range(100):
        m = rng.randint(2, 50)
        d = rng.randint(1, 5)
        f = ModPoly(m, [rng.randrange(m) for _ in range(d)] + [1])
        a = ModPoly(m, [rng.randrange(m) for _ in range(d)])
        e1, e2 = rng.randint(0, 40), rng.randint(0, 40)
        lhs = poly_pow_mod(a, e1 + e2, f)
        rhs = poly_mul_mod(poly_pow_mod(a, e1, f), poly_pow_mod(a, e2, f), f)
        assert lhs == rhs


def test_pow_multiplication_bound():
    rng = random.Random(11)
    for _ in range(50):
        m = rng.randint(2, 1000)
        f = ModPoly(m, [rng.randrange(m), rng.randrange(m), 1])
        a = ModPoly(m, [rng.randrange(m), rng.randrange(m)])
        e = rng.randint(1, 10**9)
        with count_operations() as ops:
            poly_pow_mod(a, e, f)
        assert ops.poly_mults <= 2 * e.bit_length()


def test_ring_laws():
    rng = random.Random(12)
    for _ in range(100):
        m = rng.randint(2, 30)
        d = rng.randint(1, 4)
        f = ModPoly(m, [rng.randrange(m) for _ in range(d)] + [1])
        a, b, c = (ModPoly(m, [rng.randrange(m) for _ in range(d)]) for _ in range(3))
        assert poly_mul_mod(a, b, f) == poly_mul_mod(b, a, f)
        assert poly_mul_mod(poly_mul_mod(a, b, f), c, f) == \
            poly_mul_mod(a, poly_mul_mod(b, c, f), f)
        assert poly_mul_mod(a + b, c, f) == \
            poly_mul_mod(a, c, f) + poly_mul_mod(b, c, f)


def test_multiplication_paths_agree():
    rng = random.Random(13)
    for _ in range(40):
        m = rng.randint(2, 10**6)
        la, lb = rng.randint(1, 80), rng.randint(1, 80)
        a = [rng.randrange(m) for _ in range(la)]
        b = [rng.randrange(m) for _ in range(lb)]
        assert _mul_schoolbook(a, b, m) == _mul_kronecker(a, b, m)


def test_reduction_paths_agree():
    rng = random.Random(14)
    for _ in range(20):
        m = rng.randint(2, 10**6)
        d = rng.randint(50, 90)  # above the Newton threshold
        f = ModPoly(m, [rng.randrange(m) for _ in range(d)] + [1])
        a = ModPoly(m, [rng.randrange(m) for _ in range(d)])
        b = ModPoly(m, [rng.randrange(m) for _ in range(d)])
        prod = _mul_schoolbook(list(a.coeffs), list(b.coeffs), m)
        school = prod[:]
        dd = f.degree
        fl = list(f.coeffs)
        for i in range(len(school) - 1, dd - 1, -1):
            t = school[i]
            if t:
                school[i] = 0
                for j in range(dd):
                    school[i - dd + j] = (school[i - dd + j] - t * fl[j]) % m
        assert poly_mul_mod(a, b, f) == ModPoly(m, school[:dd])
        _reducer_for.cache_clear()


def test_random_poly_determinism_and_support():
    a = random_poly(5, 97, 12345)
    b = random_poly(5, 97, 12345)
    assert a == b
    assert a.degree < 5
    for seed in range(50):
        p = random_poly(1, 2, seed)
        assert p.coeffs in ((), (1,))


def test_random_poly_distribution_multinomial():
    # 10^4 draws of a pair of coefficients mod 3; each of the 9 outcomes
    # within 5 sigma of n/9, checked in exact integer arithmetic:
    # |9*count - n| <= 5*sqrt(8n)  <=>  (9*count - n)^2 <= 200n
    n = 10**4
    counts = {}
    for seed in range(n):
        p = random_poly(2, 3, seed)
        key = (p.coefficient(0), p.coefficient(1))
        counts[key] = counts.get(key, 0) + 1
    assert sum(counts.values()) == n
    assert len(counts) == 9
    for key, c in counts.items():
        assert (9 * c - n) ** 2 <= 200 * n, (key, c)


def test_unit_classification_examples():
    f = P(5, 1, 0, 1)
    out = poly_is_unit_mod(P(5, 2), f)
    assert isinstance(out, Unit)
    assert poly_mul_mod(P(5, 2), out.inverse, f) == ModPoly.one(5)
    assert isinstance(poly_is_unit_mod(ModPoly.x(5), P(5, 0, 0, 1)), NonUnit)
    assert isinstance(poly_is_unit_mod(ModPoly.zero(5), f), NonUnit)
    # leading coefficient sharing a factor with 15 surfaces that factor
    out = poly_is_unit_mod(P(15, 1, 5), P(15, 1, 1, 1))
    assert out == FactorFound(5)


def test_unit_certificates_randomized():
    rng = random.Random(15)
    for _ in range(300):
        m = rng.randint(2, 200)
        d = rng.randint(1, 4)
        f = ModPoly(m, [rng.randrange(m) for _ in range(d)] + [1])
        u = ModPoly(m, [rng.randrange(m) for _ in range(d)])
        out = poly_is_unit_mod(u, f)
        if isinstance(out, Unit):
            assert poly_mul_mod(u, out.inverse, f) == ModPoly.one(m)
        elif isinstance(out, FactorFound):
            assert 1 < out.divisor < m and m % out.divisor == 0


def brute_force_irreducible(f):
    # tiny-field irreducibility: no monic divisor of degree 1..d-1
    p, d = f.modulus, f.degree
    import itertools
    for deg in range(1, d):
        for tail in itertools.product(range(p), repeat=deg):
            g = ModPoly(p, list(tail) + [1])
            # trial divide f by g
            rem = list(f.coeffs)
            while len(rem) - 1 >= g.degree and any(rem):
                t = rem[-1]
                shift = len(rem) - 1 - g.degree
                for j, c in enumerate(g.coeffs):
                    rem[shift + j] = (rem[shift + j] - t * c) % p
                while rem and rem[-1] == 0:
                    rem.pop()
            if not rem:
                return False
    return True


def test_units_in_prime_field_quotients():
    # over a true field with irreducible f, every nonzero u is a unit
    rng = random.Random(16)
    for p in (2, 3, 5):
        import itertools
        irreducibles = [
            ModPoly(p, list(tail) + [1])
            for tail in itertools.product(range(p), repeat=2)
            if brute_force_irreducible(ModPoly(p, list(tail) + [1]))
        ]
        assert irreducibles
        for f in irreducibles:
            for _ in range(20):
                u = ModPoly(p, [rng.randrange(p) for _ in range(2)])
                if u.is_zero():
                    continue
                assert isinstance(poly_is_unit_mod(u, f), Unit)


def test_serialization_round_trip():
    rng = random.Random(17)
    for _ in range(200):
        m = rng.randint(2, 10**9)
        d = rng.randint(0, 8)
        p = ModPoly(m, [rng.randrange(m) for _ in range(d)])
        assert ModPoly.from_line(p.to_line()) == p
    z = ModPoly.zero(41)
    assert z.to_line() == "41; "
    assert ModPoly.from_line(z.to_line()) == z


def test_serialization_rejects_bad_input():
    with pytest.raises(ValueError):
        ModPoly.from_line("10; 3,10")  # coefficient == modulus
    with pytest.raises(ValueError):
        ModPoly.from_line("10; 3,-1")
    with pytest.raises(ValueError):
        ModPoly.from_line("10: 3,1")
    with pytest.raises(ValueError):
        ModPoly.from_line("1; 0")
