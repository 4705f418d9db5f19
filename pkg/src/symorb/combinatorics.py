"""Exact counting of distinct m-party entanglements: Cauchy-Frobenius
averaging over subset actions, the closed-form dihedral (bracelet) count,
the published cyclic (necklace) formula, and supporting number theory.

Everything here is exact integer arithmetic; Burnside divisions assert
exactness because a remainder can only mean a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError
from .perm import Permutation, PermGroup


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def tau(n: int) -> int:
    """Number of divisors of n."""
    return len(divisors(n))


def totient(n: int) -> int:
    """Euler's totient: count of 1 <= k <= n coprime to n."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def moebius(n: int) -> int:
    """Mobius function: 0 on square factors, else (-1)^(number of primes)."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    count = 0
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            count += 1
        p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def fixed_subsets(g: Permutation, m: int) -> int:
    """Number of m-element label subsets fixed setwise by g.

    A fixed subset is a union of whole cycles of g, so the count is the
    number of sub-multisets of g's cycle lengths summing to m (subset-sum
    DP over cycles)."""
    n = g.n
    if not 0 <= m <= n:
        raise InvalidInputError(f"m={m} out of range 0..{n}")
    counts = [0] * (m + 1)
    counts[0] = 1
    for length in g.cycle_type():
        if length > m:
            continue
        for j in range(m, length - 1, -1):
            counts[j] += counts[j - length]
    return counts[m]


def burnside_count(G: PermGroup, m: int) -> int:
    """|X_m/G| by Cauchy-Frobenius: average number of fixed m-subsets."""
    total = sum(fixed_subsets(g, m) for g in G.elements)
    order = G.order()
    if total % order:
        raise AssertionError(
            f"Burnside sum {total} not divisible by |G|={order}; "
            "fixed-point counting is broken"
        )
    return total // order


def subset_orbit_total(G: PermGroup) -> int:
    """Orbit count of G on all subsets of [n] (2^cycles fixed points)."""
    total = sum(2 ** len(g.cycle_type()) for g in G.elements)
    order = G.order()
    if total % order:
        raise AssertionError("Burnside sum over all subsets not divisible")
    return total // order


def gupta_dihedral_count(n: int, m: int) -> int:
    """Distinct m-of-n vertex polygons up to rotation and reflection,
    i.e. |X_m/D_n|, by the closed form

        1/2 * ( binom(floor((n-h)/2), floor(m/2))
                + (1/m) * sum_{d | gcd(m,n)} phi(d) binom(n/d - 1, m/d - 1) )

    with h = m mod 2.  For m = 0 there is a single (empty) configuration."""
    if n < 3:
        raise InvalidInputError("n must be >= 3")
    if not 0 <= m <= n:
        raise InvalidInputError(f"m={m} out of range 0..{n}")
    if m == 0:
        return 1
    h = m % 2
    reflect_term = math.comb((n - h) // 2, m // 2)
    rotate_term = Fraction(0)
    for d in divisors(math.gcd(m, n)):
        rotate_term += totient(d) * math.comb(n // d - 1, m // d - 1)
    value = Fraction(reflect_term) / 2 + rotate_term / (2 * m)
    if value.denominator != 1:
        raise AssertionError(f"dihedral count not integral for n={n}, m={m}")
    return int(value)


@dataclass(frozen=True)
class ShevelevResult:
    """Published necklace formula evaluated verbatim, next to the Burnside
    ground truth.  Callers must treat ``burnside`` as authoritative; the
    printed formula disagrees with direct counts (see ``consistent``)."""

    n: int
    m: int
    value: int
    burnside: int

    @property
    def consistent(self) -> bool:
        return self.value == self.burnside


def shevelev_cyclic_count(n: int, m: int) -> ShevelevResult:
    """Evaluate the published 2-colour necklace expression

        |X_m/C_n| = - sum_{d <= 2, d | gcd(n,m)} mu(d) |X_{m/d}/D_{n/d}|

    exactly as printed, together with the Burnside count for C_n."""
    if n < 3:
        raise InvalidInputError("n must be >= 3")
    if not 0 <= m <= n:
        raise InvalidInputError(f"m={m} out of range 0..{n}")
    printed = 0
    for d in (1, 2):
        g = math.gcd(n, m)
        if d <= 2 and g % d == 0 and (m // d) <= (n // d) and n // d >= 3:
            printed -= moebius(d) * gupta_dihedral_count(n // d, m // d)
    from .perm import preset

    exact = burnside_count(preset(f"C{n}"), m)
    return ShevelevResult(n=n, m=m, value=printed, burnside=exact)
