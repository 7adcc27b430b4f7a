"""Divisor lattices, the logarithmic valuation and degrees of divisibility.

Joins and meets are derived from the divisibility order alone; lcm and gcd
never enter the construction, so agreement with integer arithmetic is a
genuine check.
"""
from __future__ import annotations

import math

import numpy as np

from .bivaluation import BiValuation, bayes, bival
from .builders import DEFAULT_MAX_ELEMENTS
from .errors import NotDistributiveError, SizeLimitError
from .poset import Lattice, Poset, _certify, is_distributive
from .valuation import Valuation, extend_from_irreducibles

MAX_MODULUS = 10**6


def factorize(n: int) -> dict[int, int]:
    factors = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> list[int]:
    out = [1]
    for p, k in factorize(n).items():
        out = [d * p**e for d in out for e in range(k + 1)]
    return sorted(out)


def prime_powers(n: int) -> list[int]:
    """Prime powers dividing ``n`` (excluding 1)."""
    return sorted(p**e for p, k in factorize(n).items() for e in range(1, k + 1))


class DivisorLattice(Lattice):
    """Divisors of ``modulus`` ordered by division; elements are decimal labels."""

    def __init__(self, modulus: int, base: Lattice):
        super().__init__(
            base.elements,
            base.leq_matrix,
            base.cover_matrix,
            join=base.join_table,
            meet=base.meet_table,
            data=base.data,
        )
        self.modulus = modulus
        self._log = None

    def value(self, label) -> int:
        return int(self.elements[self.idx(label)])

    def label(self, x) -> str:
        lab = str(int(x))
        self.idx(lab)
        return lab


def divisor_lattice(n: int, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> DivisorLattice:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    if n > MAX_MODULUS:
        raise SizeLimitError("modulus", n, MAX_MODULUS)
    ds = divisors(n)
    if len(ds) > max_elements:
        raise SizeLimitError("divisor count", len(ds), max_elements)
    arr = np.array(ds, dtype=np.int64)
    leq = (arr[None, :] % arr[:, None]) == 0
    lat = _certify(Poset([str(d) for d in ds], leq))
    if not isinstance(lat, Lattice):  # pragma: no cover - divisibility always yields a lattice
        raise AssertionError(lat.describe())
    ok, witness = is_distributive(lat)
    if not ok:  # pragma: no cover
        raise NotDistributiveError(", ".join(witness))
    return DivisorLattice(n, lat)


def _as_label(d: DivisorLattice, x) -> str:
    return d.label(x) if isinstance(x, (int, np.integer)) else d.elements[d.idx(x)]


def log_valuation(d: DivisorLattice) -> Valuation:
    """Extension of v(p^k) = ln p^k from the join-irreducibles."""
    if d._log is None:
        seed = {j: math.log(int(j)) for j in d.join_irreducibles()}
        d._log = extend_from_irreducibles(d, seed)
    return d._log


def _bivaluation(d: DivisorLattice) -> BiValuation:
    return BiValuation(log_valuation(d))


def divisibility_degree(d: DivisorLattice, m, n) -> float:
    """Degree d(m | n) = ln gcd(m, n) / ln n, exactly 1 when n divides m."""
    return bival(_bivaluation(d), _as_label(d, m), _as_label(d, n))


def divisibility_bayes(d: DivisorLattice, m, n) -> float:
    """d(m | n) recovered through the Bayes quotient with the top as context."""
    return bayes(_bivaluation(d), _as_label(d, m), _as_label(d, n), d.top)
