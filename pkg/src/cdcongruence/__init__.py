"""Decide when d is a character degree of a solvable group of order d(d+e).

For square-free ``d`` coprime to ``d+e`` the question reduces to a system of
congruences between prime-power divisors of ``d+e`` and a partition of the
primes of ``d``. This package searches for such systems, checks them against
a brute-force oracle, and builds the corresponding direct product of
Frobenius groups with its exact character-degree multiset.
"""
from .arith import (
    DomainError,
    Factorization,
    crt_solve,
    factor,
    is_prime,
    is_square_free,
    mod_pow,
    multiplicative_order,
)
from .criterion import (
    HypothesisError,
    Instance,
    SearchSpaceExceeded,
    Witness,
    WitnessPair,
    decide,
    enumerate_witnesses,
    minimal_exponent,
    oracle_decide,
    verify_witness,
)
from .group_model import (
    AbelianBlock,
    DegreeMultiset,
    FrobeniusBlock,
    GroupBlueprint,
    block_degrees,
    blueprint_from_witness,
    degrees_of_product,
    verify_blueprint,
)
from .scanner import ScanRecord, cross_check, scan

__version__ = "0.1.0"
