import random

import pytest

from abprime import (
    FactorFound,
    Inverse,
    count_operations,
    decompose_two_power,
    floor_log2,
    gcd,
    mod_pow,
    try_invert,
)


def naive_pow(a, e, m):
    # independent oracle: repeated multiplication
    out = 1 % m
    for _ in range(e):
        out = out * a % m
    return out


def test_mod_pow_examples():
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(7, 0, 13) == 1
    assert mod_pow(123, 0, 2) == 1
    # 341 is a base-2 Fermat pseudoprime
    assert naive_pow(2, 340, 341) == 1
    assert mod_pow(2, 340, 341) == 1


def test_mod_pow_matches_oracle_randomized():
    rng = random.Random(1)
    for _ in range(300):
        m = rng.randint(2, 1000)
        a = rng.randint(0, 2 * m)
        e = rng.randint(0, 200)
        assert mod_pow(a, e, m) == naive_pow(a, e, m)


def test_mod_pow_counted_path_matches_builtin():
    rng = random.Random(2)
    for _ in range(200):
        m = rng.randint(2, 10**6)
        a = rng.randint(0, m - 1)
        e = rng.randint(0, 10**6)
        with count_operations():
            counted = mod_pow(a, e, m)
        assert counted == pow(a, e, m)


def test_mod_pow_multiplication_bound():
    rng = random.Random(3)
    for _ in range(200):
        m = rng.randint(2, 10**9)
        a = rng.randint(0, m - 1)
        e = rng.randint(0, 10**12)
        with count_operations() as ops:
            mod_pow(a, e, m)
        assert ops.int_mults <= 2 * e.bit_length()


def test_mod_pow_additivity():
    rng = random.Random(4)
    for _ in range(200):
        m = rng.randint(2, 500)
        a = rng.randint(0, m - 1)
        e1 = rng.randint(0, 500)
        e2 = rng.randint(0, 500)
        assert mod_pow(a, e1 + e2, m) == mod_pow(a, e1, m) * mod_pow(a, e2, m) % m


def test_mod_pow_domain_errors():
    with pytest.raises(ValueError):
        mod_pow(2, 3, 1)
    with pytest.raises(ValueError):
        mod_pow(2, 3, 0)


def test_gcd():
    assert gcd(12, 18) == 6
    assert gcd(1, 999) == 1
    assert gcd(85, 340) == 85
    assert gcd(0, 5) == 5
    with pytest.raises(ValueError):
        gcd(0, 0)


def test_try_invert_examples():
    assert try_invert(3, 10) == Inverse(7)
    assert try_invert(5, 15) == FactorFound(5)
    out = try_invert(2, 341)
    assert out == Inverse(171)
    assert 2 * 171 % 341 == 1


def test_try_invert_invariants():
    rng = random.Random(5)
    for _ in range(500):
        m = rng.randint(2, 10**6)
        a = rng.randint(1, m - 1)
        out = try_invert(a, m)
        if isinstance(out, Inverse):
            assert a * out.value % m == 1
        else:
            assert 1 < out.divisor < m
            assert m % out.divisor == 0


def test_try_invert_domain_errors():
    with pytest.raises(ValueError):
        try_invert(0, 7)
    with pytest.raises(ValueError):
        try_invert(7, 7)


def test_decompose_two_power():
    assert decompose_two_power(340) == (2, 85)
    assert decompose_two_power(1) == (0, 1)
    assert decompose_two_power(8) == (3, 1)
    with pytest.raises(ValueError):
        decompose_two_power(0)


def test_decompose_round_trip():
    rng = random.Random(6)
    for _ in range(500):
        n = rng.randint(1, 10**12)
        s, t = decompose_two_power(n)
        assert t % 2 == 1
        assert (2**s) * t == n


def test_floor_log2():
    assert floor_log2(1) == 0
    assert floor_log2(25) == 4
    assert floor_log2(1024) == 10
    with pytest.raises(ValueError):
        floor_log2(0)
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 10**15)
        k = floor_log2(n)
        assert 2**k <= n < 2 ** (k + 1)
