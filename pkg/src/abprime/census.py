"""Exhaustive, exact censuses of the error events the tests bound.

Every probability the library's accuracy analysis relies on is backed here
by brute-force enumeration at desk scale: the fraction of Miller-Rabin
nonwitness bases, the fraction of polynomials h passing the identity
(h+1)^N = h^N + 1 mod (p, f) (and mod (N, f) for tiny instances), root
counts of (x+1)^N - x^N - 1 in small extension fields, and the scan of the
p = 2k+1, q = 6k+1 semiprime family whose nonwitness fraction stays above
a constant.

Counts are exact integers and fractions are exact rationals; a report also
carries the applicable analytic bound so callers can flag any violation
(the falsification signal).  Enumerations accept a shard count and sum
shard counts exactly, so totals are identical for any sharding.

Size limits are configuration: each operation takes an explicit limit, and
the PSEUDO_DESK_LIMIT environment variable overrides the defaults.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .intarith import decompose_two_power
from .periodsys import is_small_prime
from .polyring import ModPoly, poly_pow_mod
from .pseudofield import is_irreducible_mod_p

__all__ = [
    "DeskLimitError",
    "BoundViolation",
    "CensusReport",
    "factorize_desk",
    "mr_nonwitness_census",
    "root_count_in_extension",
    "ab_failure_census_mod_p",
    "ab_failure_census_mod_N",
    "heuristic_class_scan",
]

ENV_DESK_LIMIT = "PSEUDO_DESK_LIMIT"

FACTOR_LIMIT_DEFAULT = 10**12
MR_LIMIT_DEFAULT = 10**6
EXTENSION_LIMIT_DEFAULT = 10**6
MOD_N_LIMIT_DEFAULT = 10**7


class DeskLimitError(ValueError):
    """The instance is too large for exhaustive desk-scale enumeration."""


class BoundViolation(Exception):
    """A proven bound failed on an exhaustively computed value."""


def _limit(explicit: Optional[int], default: int) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(ENV_DESK_LIMIT)
    return int(env) if env else default


@dataclass(frozen=True)
class CensusReport:
    """Exact enumeration result plus the bound it is measured against."""

    subject: int
    total: int
    failing: int
    fraction: Fraction
    bound: Fraction
    factorization: tuple[tuple[int, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "n": self.subject,
            "total": self.total,
            "failing": self.failing,
            "fraction": f"{self.fraction.numerator}/{self.fraction.denominator}",
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "factors": [[p, e] for p, e in self.factorization],
        }


def factorize_desk(n: int, limit: Optional[int] = None) -> list[tuple[int, int]]:
    """Complete factorization by trial division; refuses n above the limit."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    cap = _limit(limit, FACTOR_LIMIT_DEFAULT)
    if n > cap:
        raise DeskLimitError(f"{n} exceeds the desk factorization limit {cap}")
    out = []
    for d in (2, 3):
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
    d = 5
    while d * d <= n:
        for cand in (d, d + 2):
            if n % cand == 0:
                e = 0
                while n % cand == 0:
                    n //= cand
                    e += 1
                out.append((cand, e))
        d += 6
    if n > 1:
        out.append((n, 1))
    return out


def _shard_ranges(lo: int, hi: int, jobs: int) -> list[tuple[int, int]]:
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    span = hi - lo
    step = (span + jobs - 1) // jobs if span else 1
    return [(lo + i * step, min(lo + (i + 1) * step, hi)) for i in range(jobs)
            if lo + i * step < hi]


def _count_nonwitnesses_range(n: int, s: int, t: int, lo: int, hi: int) -> int:
    """Nonwitness bases a in [lo, hi) counted exhaustively.

    Vectorized when the intermediate products fit in int64; the plain loop
    handles moduli beyond that (reachable only with a raised size limit).
    """
    if hi <= lo:
        return 0
    if (n - 1) * (n - 1) >= 2**63:
        return _count_nonwitnesses_plain(n, s, t, lo, hi)
    a = np.arange(lo, hi, dtype=np.int64)
    x = np.ones_like(a)
    base = a.copy()
    e = t
    while e:
        if e & 1:
            x = x * base % n
        e >>= 1
        if e:
            base = base * base % n
    nonwit = x == 1
    for _ in range(s):
        nonwit |= x == n - 1
        x = x * x % n
    return int(nonwit.sum())


def _count_nonwitnesses_plain(n: int, s: int, t: int, lo: int, hi: int) -> int:
    count = 0
    for a in range(lo, hi):
        x = pow(a, t, n)
        if x == 1:
            count += 1
            continue
        for _ in range(s):
            if x == n - 1:
                count += 1
                break
            x = x * x % n
    return count


def mr_nonwitness_census(
    n: int, limit: Optional[int] = None, jobs: int = 1
) -> CensusReport:
    """Exact count of Miller-Rabin nonwitness bases a in [1, n-1].

    n must be odd and composite.  The bound is min(1/4, the group-theoretic
    bound 1 / (2^(r-1) * prod p_i^(e_i - 1))) over the factorization
    n = prod p_i^e_i.
    """
    cap = _limit(limit, MR_LIMIT_DEFAULT)
    if n > cap:
        raise DeskLimitError(f"{n} exceeds the census limit {cap}")
    if n < 3 or n % 2 == 0:
        raise ValueError(f"need odd n >= 3, got {n}")
    factors = factorize_desk(n)
    if len(factors) == 1 and factors[0][1] == 1:
        raise ValueError(f"{n} is prime; the census needs a composite")
    s, t = decompose_two_power(n - 1)
    failing = sum(
        _count_nonwitnesses_range(n, s, t, lo, hi)
        for lo, hi in _shard_ranges(1, n, jobs)
    )
    group_bound = Fraction(1)
    for p, e in factors:
        group_bound /= p ** (e - 1)
    group_bound /= 2 ** (len(factors) - 1)
    return CensusReport(
        subject=n,
        total=n - 1,
        failing=failing,
        fraction=Fraction(failing, n - 1),
        bound=min(Fraction(1, 4), group_bound),
        factorization=tuple(factors),
    )


def _check_extension_args(
    n: int, p: int, f: ModPoly, limit: Optional[int]
) -> tuple[ModPoly, int]:
    if not is_small_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if n % p != 0:
        raise ValueError(f"{p} does not divide {n}")
    fp = ModPoly(p, f.coeffs)
    d = fp.degree
    if d < 1:
        raise ValueError("f must have degree >= 1")
    cap = _limit(limit, EXTENSION_LIMIT_DEFAULT)
    if p**d > cap:
        raise DeskLimitError(f"field size {p}^{d} exceeds the limit {cap}")
    if not is_irreducible_mod_p(fp, p):
        raise ValueError(f"f is reducible mod {p}; the residue ring is not a field")
    return fp, d


def root_count_in_extension(
    n: int, p: int, f: ModPoly, limit: Optional[int] = None
) -> int:
    """Number of roots of (x+1)^n - x^n - 1 in the field F_p[x]/(f).

    Every element beta is enumerated and the polynomial is evaluated
    pointwise as (beta+1)^n - beta^n - 1 with binary exponentiation; the
    degree-n polynomial itself is never materialized.
    """
    fp, d = _check_extension_args(n, p, f, limit)
    count = 0
    for coeffs in itertools.product(range(p), repeat=d):
        beta = ModPoly(p, coeffs)
        lhs = poly_pow_mod(beta.add_constant(1), n, fp)
        rhs = poly_pow_mod(beta, n, fp).add_constant(1)
        if lhs == rhs:
            count += 1
    return count


def _identity_count_shard(
    n: int, base: int, d: int, f: ModPoly, lo: int, hi: int
) -> int:
    """Count h (coefficient tuples over [0, base), indices [lo, hi) of the
    lexicographic enumeration) with (h+1)^n = h^n + 1 mod f."""
    space = itertools.islice(itertools.product(range(base), repeat=d), lo, hi)
    count = 0
    for coeffs in space:
        h = ModPoly(base, coeffs)
        lhs = poly_pow_mod(h.add_constant(1), n, f)
        rhs = poly_pow_mod(h, n, f).add_constant(1)
        if lhs == rhs:
            count += 1
    return count


def _deg_g_mod_p(n: int, p: int) -> int:
    """Degree of (x+1)^n - x^n - 1 over F_p (p | n), via Lucas' theorem.

    binom(n, k) is nonzero mod p iff every base-p digit of k is at most the
    corresponding digit of n, so the top surviving term is k = n - p^v with
    v the p-adic valuation of n.
    """
    v = 0
    m = n
    while m % p == 0:
        m //= p
        v += 1
    if m == 1:
        raise ValueError(f"(x+1)^n - x^n - 1 vanishes mod {p} for n = {n}")
    return n - p**v


def ab_failure_census_mod_p(
    n: int, p: int, f: ModPoly, limit: Optional[int] = None, jobs: int = 1
) -> CensusReport:
    """Exact count of h over F_p, deg h < deg f, with (h+1)^n = h^n + 1 mod (p, f).

    The bound recorded is deg g / p^d for g = (x+1)^n - x^n - 1 reduced
    mod p (its true degree, from Lucas' theorem), the quantity the
    root-counting argument actually controls.
    """
    fp, d = _check_extension_args(n, p, f, limit)
    total = p**d
    failing = sum(
        _identity_count_shard(n, p, d, fp, lo, hi)
        for lo, hi in _shard_ranges(0, total, jobs)
    )
    return CensusReport(
        subject=n,
        total=total,
        failing=failing,
        fraction=Fraction(failing, total),
        bound=Fraction(_deg_g_mod_p(n, p), total),
        factorization=tuple(factorize_desk(n)),
    )


def ab_failure_census_mod_N(
    n: int, f: ModPoly, limit: Optional[int] = None, jobs: int = 1
) -> CensusReport:
    """Exact count of h over Z/NZ, deg h < deg f, passing the identity mod (N, f).

    Tiny instances only (N^deg f capped).  The bound is the multi-factor
    form N^r / prod p_i^(deg f) over the r distinct prime factors.
    """
    if f.modulus != n:
        raise ValueError("f must be a polynomial over Z/nZ")
    d = f.degree
    if d < 1:
        raise ValueError("f must have degree >= 1")
    if not f.is_monic():
        raise ValueError("f must be monic")
    factors = factorize_desk(n)
    if len(factors) == 1 and factors[0][1] == 1:
        raise ValueError(f"{n} is prime; the census needs a composite")
    cap = _limit(limit, MOD_N_LIMIT_DEFAULT)
    if n**d > cap:
        raise DeskLimitError(f"search space {n}^{d} exceeds the limit {cap}")
    total = n**d
    failing = sum(
        _identity_count_shard(n, n, d, f, lo, hi)
        for lo, hi in _shard_ranges(0, total, jobs)
    )
    r = len(factors)
    bound = Fraction(n**r)
    for p, _ in factors:
        bound /= p**d
    return CensusReport(
        subject=n,
        total=total,
        failing=failing,
        fraction=Fraction(failing, total),
        bound=bound,
        factorization=tuple(factors),
    )


def heuristic_class_scan(
    k_max: int, limit: Optional[int] = None
) -> list[CensusReport]:
    """Census the family N = (2k+1)(6k+1), k odd, both factors prime.

    For each instance the nonwitness fraction must be at least
    (1/12)(1 - 1/p)(1 - 1/q) >= 1/21, and N - 1 = 2^s t must have s = 2,
    t = (N-1)/4; a violation raises BoundViolation.  Reports carry the
    class lower bound in the bound field.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    reports = []
    for k in range(1, k_max + 1, 2):
        p, q = 2 * k + 1, 6 * k + 1
        if not (is_small_prime(p) and is_small_prime(q)):
            continue
        n = p * q
        census = mr_nonwitness_census(n, limit=limit)
        lower = Fraction(1, 12) * Fraction(p - 1, p) * Fraction(q - 1, q)
        if lower < Fraction(1, 21):
            raise BoundViolation(
                f"class bound below 1/21 at k={k}: {lower}")
        if census.fraction < lower:
            raise BoundViolation(
                f"nonwitness fraction {census.fraction} < class bound {lower} "
                f"for N={n} (k={k})")
        s, t = decompose_two_power(n - 1)
        if s != 2 or t != (n - 1) // 4:
            raise BoundViolation(
                f"N-1 = 2^s t decomposition off for N={n}: s={s}, t={t}")
        reports.append(CensusReport(
            subject=n,
            total=census.total,
            failing=census.failing,
            fraction=census.fraction,
            bound=lower,
            factorization=((p, 1), (q, 1)),
        ))
    return reports
