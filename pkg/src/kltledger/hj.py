"""Hirzebruch-Jung continued fractions and cyclic singularity types.

A cyclic quotient singularity of type (n, q; m1, m2) has a minimal resolution
whose exceptional curves form a chain with self-intersections -b1, ..., -bk,
where n/q = b1 - 1/(b2 - 1/(...)) is the unique expansion with every bi >= 2.
The boundary branches at the two chain ends carry standard coefficients
1 - 1/m1 and 1 - 1/m2 (m = 1 meaning no branch).  The smooth point is the
formal type (1, 0), with the conventions E^2 = -2 and
delta = -2 - 4/(m1*m2) so that the ledger identities hold uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _kernels
from .errors import NotKltError

__all__ = [
    "CyclicType",
    "HJExpansion",
    "hj_expand",
    "hj_evaluate",
    "dual_q",
    "delta_cyclic",
]


@dataclass(frozen=True)
class HJExpansion:
    """A negative-regular continued fraction [b1, ..., bk], all bi >= 2."""

    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("expansion must be nonempty")
        for b in self.weights:
            if not isinstance(b, int) or b < 2:
                raise ValueError(f"expansion entries must be integers >= 2, got {b!r}")


@dataclass(frozen=True)
class CyclicType:
    """Cyclic singularity type (n, q; m1, m2); (1, 0) is the smooth point."""

    n: int
    q: int
    m1: int = 1
    m2: int = 1

    def __post_init__(self):
        if self.n < 1 or self.q < 0:
            raise ValueError(f"need n >= 1 and q >= 0, got ({self.n}, {self.q})")
        if (self.n, self.q) != (1, 0):
            if not 0 < self.q < self.n:
                raise ValueError(f"need 0 < q < n, got ({self.n}, {self.q})")
            if gcd(self.n, self.q) != 1:
                raise ValueError(f"need gcd(n, q) = 1, got ({self.n}, {self.q})")
        for m in (self.m1, self.m2):
            if not isinstance(m, int) or m < 1:
                raise ValueError(f"boundary indices must be integers >= 1, got {m!r}")

    @property
    def is_smooth(self) -> bool:
        return self.n == 1


def hj_expand(n: int, q: int) -> HJExpansion:
    """Expand n/q as [b1, ..., bk] with every bi >= 2.

    Recursion: bi = ceil(n/q), then (n, q) <- (q, bi*q - n).
    """
    if not (0 < q < n):
        raise ValueError(f"need 0 < q < n, got ({n}, {q})")
    if gcd(n, q) != 1:
        raise ValueError(f"need gcd(n, q) = 1, got ({n}, {q})")
    weights = []
    while q > 0:
        b = -(-n // q)
        weights.append(b)
        n, q = q, b * q - n
    return HJExpansion(tuple(weights))


def hj_evaluate(e: HJExpansion) -> tuple[int, int]:
    """Exact value of the expansion as a coprime pair (n, q)."""
    return _kernels.cf_evaluate(e.weights)


def dual_q(n: int, q: int) -> int:
    """The q' with n/q' = [bk, ..., b1]; satisfies q*q' = 1 (mod n).

    dual_q(1, 0) = 0 by convention (empty expansion).
    """
    if (n, q) == (1, 0):
        return 0
    expansion = hj_expand(n, q)
    n_rev, q_prime = _kernels.cf_evaluate(tuple(reversed(expansion.weights)))
    if n_rev != n:
        raise AssertionError(f"reversed expansion of {n}/{q} evaluated to {n_rev}/...")
    return q_prime


def delta_cyclic(t: CyclicType) -> Fraction:
    """Contribution number of a cyclic type.

    For (n, q) != (1, 0):
        q/(n*m1^2) + q'/(n*m2^2) - (2/(n*m1*m2)) * (1 + n*m1 + n*m2)
    and for the formal smooth type (1, 0; m1, m2):
        -2 - 4/(m1*m2).
    """
    n, q, m1, m2 = t.n, t.q, t.m1, t.m2
    if t.is_smooth:
        return Fraction(-2) - Fraction(4, m1 * m2)
    qp = dual_q(n, q)
    return (
        Fraction(q, n * m1 * m1)
        + Fraction(qp, n * m2 * m2)
        - Fraction(2, n * m1 * m2) * (1 + n * m1 + n * m2)
    )


def require_finite(m, what: str = "boundary index") -> int:
    """Reject the m = infinity marker on klt-only code paths."""
    if isinstance(m, int) and m >= 1:
        return m
    raise NotKltError(f"{what} must be a finite integer >= 1, got {m!r}")
