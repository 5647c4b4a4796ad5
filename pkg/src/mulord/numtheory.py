"""Exact number-theoretic kernels over the integers and the positive rationals.

Rationals are :class:`fractions.Fraction`, which is always reduced with a
positive denominator.  Everything here is a pure function.

Factorization is plain trial division on a 2-3-5 wheel.  That is adequate for
the numbers this package meets (user-written constants and fuzz parameters
built from small primes); the elimination itself never factors anything.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Rational = Fraction
Valuation = Dict[int, int]

__all__ = [
    "Rational",
    "Valuation",
    "CongruenceSystem",
    "UnitCombination",
    "gcd_ext",
    "lcm",
    "unit_combination",
    "solve_congruences",
    "factor_int",
    "factor_rational",
    "rational_from_valuation",
    "iroot",
    "nth_root",
    "is_nth_power",
    "primes",
    "next_prime_avoiding",
]


@dataclass(frozen=True)
class CongruenceSystem:
    """The system ``residues[k] + x == 0 (mod moduli[k])`` for all k."""

    residues: Tuple[int, ...]
    moduli: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.residues) != len(self.moduli) or not self.moduli:
            raise ValueError("residues and moduli must be nonempty and of equal length")
        if any(n < 1 for n in self.moduli):
            raise ValueError("moduli must be >= 1")


@dataclass(frozen=True)
class UnitCombination:
    modulus_lcm: int
    coefficients: Tuple[int, ...]
    exponents: Tuple[int, ...]


def gcd_ext(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``g = gcd(a, b) >= 0`` and ``u*a + v*b == g``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def lcm(values: Iterable[int]) -> int:
    result = 1
    for v in values:
        result = result * v // math.gcd(result, v)
    return result


def unit_combination(moduli: Sequence[int]) -> Optional[UnitCombination]:
    """Coefficients ``c`` with ``sum(c[k] * N // moduli[k]) == 1``, ``N = lcm(moduli)``.

    The cofactors ``N // n`` are coprime as a family, so the extended gcd
    folded over them always reaches 1.  Returns None only for an empty list.
    """
    if not moduli:
        return None
    if any(n < 1 for n in moduli):
        raise ValueError("moduli must be >= 1")
    big_n = lcm(moduli)
    cofactors = [big_n // n for n in moduli]
    g, coeffs = cofactors[0], [1]
    for d in cofactors[1:]:
        g, u, v = gcd_ext(g, d)
        coeffs = [c * u for c in coeffs] + [v]
    if g != 1 or sum(c * d for c, d in zip(coeffs, cofactors)) != 1:
        raise ArithmeticError(f"unit combination failed for moduli {list(moduli)}")
    exponents = tuple(c * d for c, d in zip(coeffs, cofactors))
    return UnitCombination(big_n, tuple(coeffs), exponents)


def solve_congruences(system: CongruenceSystem) -> Optional[Tuple[int, int]]:
    """Solve ``t_k + x == 0 (mod n_k)`` for all k.

    Returns ``(x0, period)`` with ``0 <= x0 < period = lcm(n_k)``, or None when
    some pair of congruences is incompatible modulo the gcd of their moduli.
    """
    x0, period = 0, 1
    for t, n in zip(system.residues, system.moduli):
        target = -t
        g = math.gcd(period, n)
        if (target - x0) % g:
            return None
        step = period // g
        k = ((target - x0) // g) * pow(step, -1, n // g) % (n // g)
        x0 += period * k
        period = period * n // g
        x0 %= period
    return x0, period


def _wheel() -> Iterator[int]:
    yield from (2, 3, 5)
    gaps = (4, 2, 4, 2, 4, 6, 2, 6)
    d = 7
    for gap in itertools.cycle(gaps):
        yield d
        d += gap


def factor_int(n: int) -> Valuation:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: Valuation = {}
    for d in _wheel():
        if d * d > n:
            break
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factor_rational(r: Rational) -> Valuation:
    """p-adic valuations of a positive rational; denominator primes are negative."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError(f"valuation needs a positive rational, got {r}")
    out = factor_int(r.numerator)
    for p, e in factor_int(r.denominator).items():
        out[p] = -e
    return dict(sorted(out.items()))


def rational_from_valuation(val: Valuation) -> Rational:
    num, den = 1, 1
    for p, e in val.items():
        if e > 0:
            num *= p**e
        elif e < 0:
            den *= p ** (-e)
    return Fraction(num, den)


def iroot(a: int, n: int) -> int:
    """Floor of the real n-th root of a nonnegative integer."""
    if a < 0 or n < 1:
        raise ValueError("iroot needs a >= 0 and n >= 1")
    if a < 2 or n == 1:
        return a
    x = 1 << -(-a.bit_length() // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def nth_root(r: Rational, n: int) -> Optional[Rational]:
    """The positive rational y with ``y**n == r``, or None when there is none."""
    if n < 1:
        raise ValueError(f"root index must be >= 1, got {n}")
    r = Fraction(r)
    if r <= 0:
        raise ValueError(f"nth_root needs a positive rational, got {r}")
    # A reduced p/q is an n-th power iff p and q are, since y = a/b reduced
    # gives the reduced fraction a**n / b**n.
    a = iroot(r.numerator, n)
    if a**n != r.numerator:
        return None
    b = iroot(r.denominator, n)
    if b**n != r.denominator:
        return None
    return Fraction(a, b)


def is_nth_power(r: Rational, n: int) -> bool:
    return nth_root(r, n) is not None


def primes() -> Iterator[int]:
    """All primes in increasing order."""
    found: List[int] = []
    for c in itertools.count(2):
        if all(c % p for p in itertools.takewhile(lambda p: p * p <= c, found)):
            found.append(c)
            yield c


def next_prime_avoiding(vals: Iterable[Valuation]) -> int:
    """Smallest prime that is a key of none of the given valuations."""
    used = set()
    for v in vals:
        used.update(v)
    for p in primes():
        if p not in used:
            return p
    raise AssertionError("unreachable")
