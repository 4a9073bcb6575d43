"""Symbolic groups realizing a witness, and their character-degree multisets.

A witness pair ``(block, p, f)`` with modulus ``b`` becomes the Frobenius
group ``F_q ⋊ C_b`` (``q = p**f``): the additive group of the field with ``q``
elements, acted on by the order-``b`` subgroup of its multiplicative group.
That action is fixed-point-free exactly when ``b | q - 1``. The full group is
the direct product of these blocks with abelian groups making up the rest of
``d+e``.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Optional

from .arith import Factorization, factor, is_prime
from .criterion import Instance, Witness, verify_witness

__all__ = [
    "InvariantError",
    "FrobeniusBlock",
    "AbelianBlock",
    "GroupBlueprint",
    "DegreeMultiset",
    "BlueprintReport",
    "blueprint_from_witness",
    "block_degrees",
    "degrees_of_product",
    "verify_blueprint",
    "blueprint_document",
]


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class FrobeniusBlock:
    """``F_q ⋊ C_b`` with ``q = kernel_prime ** kernel_exponent``.

    Only the shape is checked on construction; the Frobenius condition
    ``b | q - 1`` is reported by :meth:`is_frobenius` so that a bad block can
    still be represented and flagged.
    """

    complement_order: int
    kernel_prime: int
    kernel_exponent: int

    def __post_init__(self) -> None:
        if self.complement_order < 2:
            raise InvariantError(f"complement order must be >= 2, got {self.complement_order}")
        if self.kernel_exponent < 1:
            raise InvariantError(f"kernel exponent must be >= 1, got {self.kernel_exponent}")
        if not is_prime(self.kernel_prime):
            raise InvariantError(f"{self.kernel_prime} is not prime")

    @property
    def kernel_order(self) -> int:
        return self.kernel_prime**self.kernel_exponent

    @property
    def order(self) -> int:
        return self.complement_order * self.kernel_order

    def is_frobenius(self) -> bool:
        q, b = self.kernel_order, self.complement_order
        return (q - 1) % b == 0 and math.gcd(b, q) == 1

    def to_document(self) -> dict:
        return {"b": self.complement_order, "p": self.kernel_prime, "f": self.kernel_exponent}


@dataclass(frozen=True)
class AbelianBlock:
    order_factorization: Factorization

    @property
    def order(self) -> int:
        return self.order_factorization.value


@dataclass(frozen=True)
class GroupBlueprint:
    frobenius_blocks: tuple[FrobeniusBlock, ...] = ()
    abelian_blocks: tuple[AbelianBlock, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "frobenius_blocks", tuple(self.frobenius_blocks))
        object.__setattr__(self, "abelian_blocks", tuple(self.abelian_blocks))

    @property
    def order(self) -> int:
        return math.prod(b.order for b in self.frobenius_blocks) * math.prod(
            a.order for a in self.abelian_blocks
        )

    def to_document(self, degrees: Optional["DegreeMultiset"] = None) -> dict:
        if degrees is None:
            degrees = degrees_of_product(self)
        return {
            "pairs": [b.to_document() for b in self.frobenius_blocks],
            "abelian": [a.order for a in self.abelian_blocks],
            "order": self.order,
            "degrees": degrees.to_document(),
        }


class DegreeMultiset(Mapping):
    """Immutable map ``degree -> multiplicity`` (multiplicities are Python ints)."""

    __slots__ = ("_entries",)

    def __init__(self, entries=()):
        data = dict(entries)
        for deg, mult in data.items():
            if deg < 1 or mult < 1:
                raise InvariantError(f"bad entry {deg} -> {mult}")
        self._entries = dict(sorted(data.items()))

    def __getitem__(self, degree: int) -> int:
        return self._entries[degree]

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"DegreeMultiset({self._entries!r})"

    def __mul__(self, other: "DegreeMultiset") -> "DegreeMultiset":
        """Degrees of a direct product: pairwise degree products."""
        out: dict[int, int] = {}
        for d1, m1 in self._entries.items():
            for d2, m2 in other.items():
                out[d1 * d2] = out.get(d1 * d2, 0) + m1 * m2
        return DegreeMultiset(out)

    @property
    def sum_of_squares(self) -> int:
        return sum(deg * deg * mult for deg, mult in self._entries.items())

    @property
    def class_count(self) -> int:
        return sum(self._entries.values())

    def to_document(self) -> dict[str, str]:
        return {str(deg): str(mult) for deg, mult in self._entries.items()}


_TRIVIAL = DegreeMultiset({1: 1})


def block_degrees(blk: FrobeniusBlock) -> DegreeMultiset:
    """Degrees of ``F_q ⋊ C_b``.

    ``b`` linear characters come from the cyclic quotient; the ``q - 1``
    non-trivial kernel characters fall into regular orbits of size ``b``, each
    inducing irreducibly to degree ``b``.
    """
    if not blk.is_frobenius():
        raise InvariantError(
            f"{blk.complement_order} does not divide {blk.kernel_order} - 1; not a Frobenius block"
        )
    b, q = blk.complement_order, blk.kernel_order
    return DegreeMultiset({1: b, b: (q - 1) // b})


def degrees_of_product(bp: GroupBlueprint) -> DegreeMultiset:
    parts = [block_degrees(blk) for blk in bp.frobenius_blocks]
    parts += [DegreeMultiset({1: a.order}) for a in bp.abelian_blocks]
    return reduce(lambda x, y: x * y, parts, _TRIVIAL)


def blueprint_from_witness(instance: Instance, w: Witness) -> GroupBlueprint:
    """One Frobenius block per witness pair; abelian blocks for what's left of ``d+e``.

    The leftover ``(d+e) / prod(p**f)`` is split into one abelian block per
    prime power.
    """
    check = verify_witness(instance, w)
    if not check:
        raise InvariantError("witness does not verify: " + ", ".join(check.reasons))
    frob = tuple(
        FrobeniusBlock(instance.block_modulus(pr.block), pr.prime, pr.exponent) for pr in w.pairs
    )
    used = math.prod(pr.prime**pr.exponent for pr in w.pairs)
    rest = factor(instance.cofactor_value // used)
    abelian = tuple(AbelianBlock(Factorization(((p, a),))) for p, a in rest)
    return GroupBlueprint(frob, abelian)


@dataclass(frozen=True)
class BlueprintReport:
    order_ok: bool
    sum_of_squares_ok: bool
    frobenius_ok: bool
    contains_d: bool
    details: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.order_ok and self.sum_of_squares_ok and self.frobenius_ok and self.contains_d

    def __bool__(self) -> bool:
        return self.ok

    def to_document(self) -> dict:
        return {
            "order": self.order_ok,
            "sum_of_squares": self.sum_of_squares_ok,
            "frobenius_congruence": self.frobenius_ok,
            "d_in_degrees": self.contains_d,
            "ok": self.ok,
        }


def verify_blueprint(
    bp: GroupBlueprint, instance: Instance, degrees: Optional[DegreeMultiset] = None
) -> BlueprintReport:
    """Check the blueprint against the instance, each clause independently.

    Clauses: order equals ``d(d+e)``; degrees square-sum to the order; every
    block satisfies ``q == 1 (mod b)``; ``d`` occurs as a degree. Pass
    ``degrees`` to audit an externally supplied multiset instead of the
    recomputed one.
    """
    details = []
    order_ok = bp.order == instance.order
    if not order_ok:
        details.append(f"blueprint order {bp.order} != d(d+e) = {instance.order}")

    bad = [b for b in bp.frobenius_blocks if not b.is_frobenius()]
    frobenius_ok = not bad
    for b in bad:
        details.append(f"{b.kernel_order} != 1 mod {b.complement_order}")

    if degrees is None and frobenius_ok:
        degrees = degrees_of_product(bp)
    if degrees is None:
        sos_ok = contains_d = False
        details.append("degrees unavailable: non-Frobenius block")
    else:
        sos_ok = degrees.sum_of_squares == bp.order
        if not sos_ok:
            details.append(f"sum of squared degrees {degrees.sum_of_squares} != order {bp.order}")
        contains_d = instance.d in degrees
        if not contains_d:
            details.append(f"{instance.d} is not a degree")
    return BlueprintReport(order_ok, sos_ok, frobenius_ok, contains_d, tuple(details))


def blueprint_document(bp: GroupBlueprint, instance: Instance, witness: Optional[Witness] = None) -> dict:
    """Witness-shaped document plus ``abelian`` orders and the ``degrees`` map."""
    degrees = degrees_of_product(bp)
    if witness is not None:
        doc = witness.to_document(instance)
    else:
        doc = {"pairs": [b.to_document() for b in bp.frobenius_blocks], "d": instance.d,
               "cofactor": instance.cofactor_value}
    doc["abelian"] = [a.order for a in bp.abelian_blocks]
    doc["order"] = bp.order
    doc["degrees"] = degrees.to_document()
    return doc
