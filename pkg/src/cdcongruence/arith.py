"""Exact integer kernel: factorization, modular powers, multiplicative order, CRT."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DomainError",
    "Factorization",
    "is_prime",
    "factor",
    "mod_pow",
    "multiplicative_order",
    "carmichael",
    "crt_solve",
    "is_square_free",
]

TRIAL_DIVISION_BOUND = 1 << 20

# Strong-pseudoprime bases; deterministic for n < 3317044064679887385961981.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * TRIAL_DIVISION_BOUND
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(TRIAL_DIVISION_BOUND) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, TRIAL_DIVISION_BOUND, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test.

    Deterministic below 3.3e24 (first 13 prime bases). Above that bound the
    test uses 25 prime bases and is probabilistic in principle, though no
    composite passing all of them is known.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_DETERMINISTIC_LIMIT else _MR_BASES + _MR_EXTRA_BASES
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


def _pollard_brent(n: int) -> int:
    """Return a non-trivial factor of the odd composite ``n``."""
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # batch overshot: step one at a time from the last checkpoint
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed on {n}")


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    r = int(round(n ** (1.0 / k))) if n < 1 << 1000 else 1 << (n.bit_length() // k + 1)
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    # n has no prime factor below 2**20, so only roots up to bit_length/20 matter
    for k in range(2, n.bit_length() // 20 + 1):
        r = _iroot(n, k)
        if r**k == n:
            for _ in range(k):
                _split(r, out)
            return
    g = _pollard_brent(n)
    _split(g, out)
    _split(n // g, out)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        entries = tuple((int(p), int(a)) for p, a in self.entries)
        object.__setattr__(self, "entries", entries)
        prev = 1
        for p, a in entries:
            if p <= prev:
                raise ValueError("primes must be strictly ascending")
            if a < 1:
                raise ValueError(f"exponent of {p} must be >= 1, got {a}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prev = p

    @classmethod
    def from_dict(cls, mapping: dict[int, int]) -> "Factorization":
        return cls(tuple(sorted((p, a) for p, a in mapping.items() if a)))

    @property
    def value(self) -> int:
        return math.prod(p**a for p, a in self.entries)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def exponent(self, p: int) -> int:
        for q, a in self.entries:
            if q == p:
                return a
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return " * ".join(f"{p}^{a}" if a > 1 else str(p) for p, a in self.entries)


def factor(n: int) -> Factorization:
    """Factor ``n >= 1``.

    Trial division by primes below 2**20, then Pollard-Brent on whatever
    cofactor remains.

    >>> factor(360).entries
    ((2, 3), (3, 2), (5, 1))
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"factor() needs n >= 1, got {n}")
    found: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            found[p] = a
    if n > 1:
        if n < TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND:
            # no factor below 2**20 and n < 2**40: n is prime
            found[n] = found.get(n, 0) + 1
        else:
            _split(n, found)
    return Factorization.from_dict(found)


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    if exp < 0:
        raise DomainError("negative exponents are not supported")
    return pow(base, exp, modulus)


def carmichael(m: int | Factorization) -> int:
    """Carmichael function: exponent of the unit group mod ``m``."""
    f = m if isinstance(m, Factorization) else factor(m)
    parts = []
    for p, a in f:
        if p == 2:
            parts.append(1 if a == 1 else 2 if a == 2 else 1 << (a - 2))
        else:
            parts.append(p ** (a - 1) * (p - 1))
    return reduce(math.lcm, parts, 1)


def multiplicative_order(a: int, m: int) -> int:
    """Least ``f >= 1`` with ``a**f == 1 (mod m)``.

    Starts from the Carmichael exponent and strips prime factors while the
    power stays 1.

    Raises:
        DomainError: if ``m < 2`` or ``gcd(a, m) != 1``.
    """
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise DomainError(f"{a} is not a unit modulo {m}")
    order = carmichael(m)
    for q, _ in factor(order):
        while order % q == 0 and pow(a, order // q, m) == 1:
            order //= q
    return order


def crt_solve(congruences: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Solve ``x = r_i (mod n_i)`` for pairwise coprime moduli.

    Returns ``(x, N)`` with ``N = prod(n_i)`` and ``0 <= x < N``. The empty
    system gives ``(0, 1)``.
    """
    system: Sequence[tuple[int, int]] = list(congruences)
    for _, n in system:
        if n < 1:
            raise DomainError(f"moduli must be >= 1, got {n}")
    for i, (_, ni) in enumerate(system):
        for _, nj in system[i + 1 :]:
            if math.gcd(ni, nj) != 1:
                raise DomainError(f"moduli {ni} and {nj} are not coprime")
    modulus = math.prod(n for _, n in system)
    x = 0
    for r, n in system:
        if n == 1:
            continue
        rest = modulus // n
        x += r * rest * pow(rest, -1, n)
    return x % modulus, modulus


def is_square_free(f: Factorization) -> bool:
    return all(a == 1 for _, a in f)
