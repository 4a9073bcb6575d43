"""Congruence-system decision procedure for ``d`` in cd(G), |G| = d(d+e).

A *witness* partitions the primes of ``d`` into blocks; each block with
modulus ``b`` is paired with a prime power ``p**f`` dividing ``d+e`` such that
``p**f == 1 (mod b)``, and the prime powers used must jointly divide ``d+e``.
Such a witness exists exactly when some solvable group of order ``d(d+e)``
has an irreducible character of degree ``d`` (for square-free ``d`` coprime to
``d+e``).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .arith import DomainError, Factorization, factor, is_square_free, mod_pow, multiplicative_order

__all__ = [
    "HypothesisError",
    "SearchSpaceExceeded",
    "Instance",
    "WitnessPair",
    "Witness",
    "WitnessCheck",
    "minimal_exponent",
    "decide",
    "verify_witness",
    "enumerate_witnesses",
    "oracle_decide",
    "oracle_cost",
    "DEFAULT_ORACLE_CEILING",
]

FLAG_NOT_SQUARE_FREE = "d_not_square_free"
FLAG_NOT_COPRIME = "not_coprime"
FLAG_SMALL_E = "e_le_1"

# Flags that reject an instance unless forced; FLAG_SMALL_E is informational.
_BLOCKING_FLAGS = frozenset({FLAG_NOT_SQUARE_FREE, FLAG_NOT_COPRIME})

DEFAULT_ORACLE_CEILING = 10**8


class HypothesisError(ValueError):
    """Instance is outside the square-free / coprime setting and was not forced."""

    def __init__(self, flags):
        self.flags = frozenset(flags)
        super().__init__("hypothesis violated: " + ", ".join(sorted(self.flags)))


class SearchSpaceExceeded(RuntimeError):
    """The brute-force oracle refused an instance above its cost ceiling."""


@dataclass(frozen=True)
class Instance:
    """A candidate order ``d * (d+e)`` with both factors factored.

    ``d`` is normally square-free; a forced instance may carry a
    non-square-free ``d``, in which case a block's modulus is the full prime
    power part of ``d`` over that block.
    """

    d_factorization: Factorization
    cofactor: Factorization
    force: bool = False
    hypothesis_flags: frozenset = field(init=False, compare=False)

    def __post_init__(self) -> None:
        flags = set()
        if not is_square_free(self.d_factorization):
            flags.add(FLAG_NOT_SQUARE_FREE)
        if math.gcd(self.d, self.cofactor_value) != 1:
            flags.add(FLAG_NOT_COPRIME)
        if self.e <= 1:
            flags.add(FLAG_SMALL_E)
        object.__setattr__(self, "hypothesis_flags", frozenset(flags))
        if not self.force and flags & _BLOCKING_FLAGS:
            raise HypothesisError(flags & _BLOCKING_FLAGS)

    @classmethod
    def from_ints(cls, d: int, cofactor: int, force: bool = False) -> "Instance":
        if d < 1 or cofactor < 1:
            raise ValueError(f"d and d+e must be positive, got d={d}, d+e={cofactor}")
        return cls(factor(d), factor(cofactor), force=force)

    @classmethod
    def from_primes(cls, d_primes, cofactor: int, force: bool = False) -> "Instance":
        d_primes = sorted(d_primes)
        return cls(Factorization(tuple((p, 1) for p in d_primes)), factor(cofactor), force=force)

    @property
    def d_primes(self) -> tuple[int, ...]:
        return self.d_factorization.primes

    @property
    def d(self) -> int:
        return self.d_factorization.value

    @property
    def cofactor_value(self) -> int:
        return self.cofactor.value

    @property
    def e(self) -> int:
        return self.cofactor_value - self.d

    @property
    def order(self) -> int:
        return self.d * self.cofactor_value

    @property
    def in_hypothesis(self) -> bool:
        return not self.hypothesis_flags

    def block_modulus(self, block) -> int:
        exps = self.d_factorization.as_dict()
        return math.prod(q ** exps[q] for q in block)

    def __str__(self) -> str:
        return f"d={self.d}, d+e={self.cofactor_value}"


@dataclass(frozen=True, order=True)
class WitnessPair:
    """One congruence: ``prime**exponent == 1`` modulo the product of ``block``.

    ``block`` holds primes of ``d`` (not positions), sorted ascending.
    """

    block: tuple[int, ...]
    prime: int
    exponent: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "block", tuple(sorted(self.block)))


@dataclass(frozen=True, order=True)
class Witness:
    pairs: tuple[WitnessPair, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def kernel_powers(self) -> dict[int, int]:
        """Total exponent used per kernel prime."""
        used: dict[int, int] = {}
        for pair in self.pairs:
            used[pair.prime] = used.get(pair.prime, 0) + pair.exponent
        return used

    def to_document(self, instance: Instance) -> dict:
        doc = {
            "pairs": [
                {"block": list(pr.block), "b": instance.block_modulus(pr.block), "p": pr.prime, "f": pr.exponent}
                for pr in self.pairs
            ],
            "d": instance.d,
            "cofactor": instance.cofactor_value,
        }
        if instance.hypothesis_flags:
            doc["flags"] = sorted(instance.hypothesis_flags)
        return doc

    def to_json(self, instance: Instance) -> str:
        return json.dumps(self.to_document(instance), separators=(",", ":"))

    @classmethod
    def from_document(cls, doc: dict) -> "Witness":
        return cls(tuple(WitnessPair(tuple(p["block"]), int(p["p"]), int(p["f"])) for p in doc["pairs"]))

    def describe(self) -> str:
        if not self.pairs:
            return "{}"
        return " ".join("{%s}:%d^%d" % (",".join(map(str, pr.block)), pr.prime, pr.exponent) for pr in self.pairs)


def instance_from_document(doc: dict, force: bool = False) -> Instance:
    return Instance.from_ints(int(doc["d"]), int(doc["cofactor"]), force=force or bool(doc.get("flags")))


@dataclass(frozen=True)
class WitnessCheck:
    """Outcome of :func:`verify_witness`; truthy iff every clause holds."""

    failures: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def reasons(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(code for code, _ in self.failures))

    def __bool__(self) -> bool:
        return self.ok


def minimal_exponent(p: int, block, instance: Instance) -> int:
    """Least ``f >= 1`` with ``p**f == 1`` modulo the block's modulus.

    This is the lcm of the orders of ``p`` modulo each prime (power) in the
    block, and it divides every exponent that works.
    """
    exps = instance.d_factorization.as_dict()
    f = 1
    for q in block:
        if q not in exps:
            raise DomainError(f"{q} is not a prime of d={instance.d}")
        if p % q == 0:
            raise DomainError(f"{p} is not coprime to block prime {q}")
        f = math.lcm(f, multiplicative_order(p, q ** exps[q]))
    return f


def verify_witness(instance: Instance, w: Witness) -> WitnessCheck:
    """Check the partition, congruence and divisibility clauses of ``w``."""
    failures: list[tuple[str, str]] = []
    d_primes = set(instance.d_primes)
    seen: set[int] = set()
    for pr in w.pairs:
        if not pr.block:
            failures.append(("partition", "empty block"))
        for q in pr.block:
            if q not in d_primes:
                failures.append(("partition", f"{q} is not a prime of d"))
            elif q in seen:
                failures.append(("partition", f"{q} appears in two blocks"))
            seen.add(q)
    missing = d_primes - seen
    if missing:
        failures.append(("partition", f"primes not covered: {sorted(missing)}"))

    for pr in w.pairs:
        b = instance.block_modulus(q for q in pr.block if q in d_primes)
        if pr.exponent < 1:
            failures.append(("congruence", f"exponent {pr.exponent} < 1"))
        elif mod_pow(pr.prime, pr.exponent, b) != 1 % b:
            failures.append(("congruence", f"{pr.prime}^{pr.exponent} != 1 mod {b}"))

    budget = instance.cofactor.as_dict()
    for p, used in sorted(w.kernel_powers().items()):
        have = budget.get(p, 0)
        if have == 0:
            failures.append(("divisibility", f"{p} does not divide d+e"))
        elif used > have:
            failures.append(("divisibility", f"{p}^{used} does not divide d+e (max {p}^{have})"))
    return WitnessCheck(tuple(failures))


def _blocks_through(first: int, rest: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All blocks containing ``first`` plus a subset of ``rest``, lexicographic."""
    blocks = [
        (first,) + combo for r in range(len(rest) + 1) for combo in itertools.combinations(rest, r)
    ]
    blocks.sort()
    return blocks


def _search(instance: Instance) -> Iterator[Witness]:
    """Yield canonical witnesses in lexicographic order.

    Blocks are chosen through the least uncovered prime of ``d``; each block
    tries kernel primes in ascending order, always at the minimal exponent
    (any valid exponent is a multiple of it). Failed (uncovered, budget)
    states are remembered for the duration of the call.
    """
    kernel = instance.cofactor.primes
    exp_cache: dict[tuple[tuple[int, ...], int], Optional[int]] = {}
    dead: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()

    def exponent_for(block, p):
        key = (block, p)
        if key not in exp_cache:
            try:
                exp_cache[key] = minimal_exponent(p, block, instance)
            except DomainError:
                exp_cache[key] = None
        return exp_cache[key]

    def walk(uncovered: tuple[int, ...], budget: tuple[int, ...]) -> Iterator[tuple[WitnessPair, ...]]:
        if not uncovered:
            yield ()
            return
        state = (uncovered, budget)
        if state in dead:
            return
        found = False
        for block in _blocks_through(uncovered[0], uncovered[1:]):
            remaining = tuple(q for q in uncovered if q not in block)
            for i, p in enumerate(kernel):
                f = exponent_for(block, p)
                if f is None or f > budget[i]:
                    continue
                next_budget = budget[:i] + (budget[i] - f,) + budget[i + 1 :]
                for tail in walk(remaining, next_budget):
                    found = True
                    yield (WitnessPair(block, p, f),) + tail
        if not found:
            dead.add(state)

    budget0 = tuple(a for _, a in instance.cofactor)
    for pairs in walk(instance.d_primes, budget0):
        yield Witness(pairs)


def decide(instance: Instance) -> Optional[Witness]:
    """Return the lexicographically least canonical witness, or ``None``.

    ``None`` means no congruence system exists, so no solvable group of
    order ``d(d+e)`` has ``d`` as a character degree.

    >>> decide(Instance.from_ints(15, 32))
    Witness(pairs=(WitnessPair(block=(3, 5), prime=2, exponent=4),))
    >>> decide(Instance.from_ints(5, 9)) is None
    True
    """
    return next(_search(instance), None)


def enumerate_witnesses(instance: Instance, limit: int) -> list[Witness]:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(itertools.islice(_search(instance), limit))


def _stirling2_row(m: int) -> list[int]:
    row = [1]
    for n in range(1, m + 1):
        new = [0] * (n + 1)
        for k in range(1, n + 1):
            new[k] = k * (row[k] if k < len(row) else 0) + row[k - 1]
        row = new
    return row


def oracle_cost(instance: Instance) -> int:
    """Raw brute-force space: sum over partitions of (#prime-power divisors)**blocks."""
    n_divisors = sum(a for _, a in instance.cofactor)
    return sum(s * n_divisors**k for k, s in enumerate(_stirling2_row(len(instance.d_primes))))


def _set_partitions(items: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    """Set partitions via restricted growth strings."""
    m = len(items)
    if m == 0:
        yield []
        return
    for labels in itertools.product(range(m), repeat=m - 1):
        rgs = (0,) + labels
        if any(rgs[i] > max(rgs[:i]) + 1 for i in range(1, m)):
            continue
        k = max(rgs) + 1
        yield [tuple(items[i] for i in range(m) if rgs[i] == j) for j in range(k)]


def oracle_decide(instance: Instance, ceiling: int = DEFAULT_ORACLE_CEILING) -> bool:
    """Exhaustive check of the congruence system, independent of :func:`decide`.

    Tries every set partition of the primes of ``d`` and every assignment of
    prime-power divisors of ``d+e`` to its blocks, testing the congruence and
    joint-divisibility clauses directly.

    Raises:
        SearchSpaceExceeded: if :func:`oracle_cost` exceeds ``ceiling``.
    """
    cost = oracle_cost(instance)
    if cost > ceiling:
        raise SearchSpaceExceeded(f"{instance}: oracle space {cost} exceeds ceiling {ceiling}")
    n = instance.cofactor_value
    exps = instance.d_factorization.as_dict()
    prime_powers = [p**f for p, a in instance.cofactor for f in range(1, a + 1)]
    for partition in _set_partitions(instance.d_primes):
        moduli = [math.prod(q ** exps[q] for q in block) for block in partition]
        options = [[q for q in prime_powers if q % b == 1 % b] for b in moduli]
        for choice in itertools.product(*options):
            if n % math.prod(choice) == 0:
                return True
    return False
