"""Finite posets and lattices over opaque string identifiers.

Elements are stored in a canonical order (natural sort of their labels unless
a builder supplies its own deterministic order). That order is only used for
iteration and for choosing witnesses; it carries no order-theoretic meaning.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    CycleError,
    DuplicateElementError,
    EmptyPosetError,
    NotALatticeError,
    NotComparableError,
    UnknownElementError,
)

_DIGITS = re.compile(r"(\d+)")


def natural_key(label: str):
    """Sort key that orders embedded integers numerically ("2" < "12")."""
    parts = _DIGITS.split(label)
    return tuple((0, int(p), p) if p.isdigit() else (1, 0, p) for p in parts if p != "")


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


class Poset:
    """Immutable finite poset with precomputed reachability."""

    def __init__(self, elements, leq, covers=None, *, data=None, notices=()):
        # trusted constructor; use from_covers for untrusted input
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.leq_matrix = _frozen(np.asarray(leq, dtype=bool))
        if covers is None:
            covers = kernels.transitive_reduction(self.leq_matrix)
        self.cover_matrix = _frozen(np.asarray(covers, dtype=bool))
        self.data = dict(data or {})
        self.notices = tuple(notices)
        self._linear = None
        self._mobius = None

    # -- basic queries -------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"{type(self).__name__}({len(self)} elements, {int(self.cover_matrix.sum())} covers)"

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElementError(x) from None

    def leq(self, x, y) -> bool:
        return bool(self.leq_matrix[self.idx(x), self.idx(y)])

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x, y) -> bool:
        i, j = self.idx(x), self.idx(y)
        return bool(self.leq_matrix[i, j] or self.leq_matrix[j, i])

    @property
    def covers(self) -> frozenset:
        lo, hi = np.nonzero(self.cover_matrix)
        return frozenset((self.elements[a], self.elements[b]) for a, b in zip(lo, hi))

    def sorted_covers(self) -> list:
        lo, hi = np.nonzero(self.cover_matrix)
        return [(self.elements[a], self.elements[b]) for a, b in zip(lo, hi)]

    def lower_covers(self, x) -> tuple:
        col = self.cover_matrix[:, self.idx(x)]
        return tuple(self.elements[i] for i in np.flatnonzero(col))

    def upper_covers(self, x) -> tuple:
        row = self.cover_matrix[self.idx(x)]
        return tuple(self.elements[i] for i in np.flatnonzero(row))

    def upset(self, x) -> tuple:
        return tuple(self.elements[i] for i in np.flatnonzero(self.leq_matrix[self.idx(x)]))

    def downset(self, x) -> tuple:
        return tuple(self.elements[i] for i in np.flatnonzero(self.leq_matrix[:, self.idx(x)]))

    def minimal(self) -> tuple:
        return tuple(e for e, c in zip(self.elements, self.cover_matrix.any(axis=0)) if not c)

    def maximal(self) -> tuple:
        return tuple(e for e, c in zip(self.elements, self.cover_matrix.any(axis=1)) if not c)

    def linear_extension(self) -> np.ndarray:
        """Indices sorted so that every element precedes those above it."""
        if self._linear is None:
            up = self.leq_matrix.sum(axis=1)
            self._linear = _frozen(np.lexsort((np.arange(len(self)), -up)))
        return self._linear

    def heights(self) -> np.ndarray:
        """Length of the longest chain from a minimal element to each element."""
        h = np.zeros(len(self), dtype=np.int64)
        for i in self.linear_extension():
            below = np.flatnonzero(self.cover_matrix[:, i])
            if below.size:
                h[i] = h[below].max() + 1
        return h

    def mobius_matrix(self) -> np.ndarray:
        """Integer Möbius function as a matrix in canonical index order."""
        if self._mobius is None:
            order = self.linear_extension()
            sub = np.ascontiguousarray(self.leq_matrix[np.ix_(order, order)])
            mu_le = kernels.mobius_matrix(sub)
            mu = np.empty_like(mu_le)
            mu[np.ix_(order, order)] = mu_le
            self._mobius = _frozen(mu)
        return self._mobius

    def mobius(self, x, y) -> int:
        i, j = self.idx(x), self.idx(y)
        if not self.leq_matrix[i, j]:
            raise NotComparableError(f"mobius({x!r}, {y!r}) needs {x!r} <= {y!r}")
        return int(self.mobius_matrix()[i, j])

    def subposet(self, elements: Iterable[str]) -> "Poset":
        ids = [self.idx(e) for e in elements]
        sub = self.leq_matrix[np.ix_(ids, ids)]
        return Poset([self.elements[i] for i in ids], sub)

    def classify(self) -> str:
        return classify(self)


class Lattice(Poset):
    """A poset certified to have all pairwise joins and meets."""

    def __init__(self, elements, leq, covers=None, *, join, meet, data=None, notices=()):
        super().__init__(elements, leq, covers, data=data, notices=notices)
        self.join_table = _frozen(np.asarray(join, dtype=np.int64))
        self.meet_table = _frozen(np.asarray(meet, dtype=np.int64))
        self.bottom_index = int(np.flatnonzero(self.leq_matrix.all(axis=1))[0])
        self.top_index = int(np.flatnonzero(self.leq_matrix.all(axis=0))[0])
        self._distributive = None

    @property
    def bottom(self) -> str:
        return self.elements[self.bottom_index]

    @property
    def top(self) -> str:
        return self.elements[self.top_index]

    def join(self, x, y) -> str:
        return self.elements[self.join_table[self.idx(x), self.idx(y)]]

    def meet(self, x, y) -> str:
        return self.elements[self.meet_table[self.idx(x), self.idx(y)]]

    def join_irreducibles(self) -> tuple:
        return join_irreducibles(self)

    def is_distributive(self):
        return is_distributive(self)


@dataclass(frozen=True)
class BoundFailure:
    pair: tuple
    kind: str  # "join" or "meet"
    bounds: tuple  # minimal upper / maximal lower bounds; empty if none

    def describe(self) -> str:
        x, y = self.pair
        if self.kind == "join":
            what, which = "least upper bound", "minimal upper bounds"
        else:
            what, which = "greatest lower bound", "maximal lower bounds"
        if not self.bounds:
            return f"{x} and {y} have no common {'upper' if self.kind == 'join' else 'lower'} bound"
        return f"{x} and {y} have no unique {what}; {which}: {', '.join(self.bounds)}"


@dataclass(frozen=True)
class LatticeDiagnostic:
    is_lattice: bool
    is_distributive: bool
    failure_witness: BoundFailure | None = None
    distributivity_witness: tuple | None = None

    def __post_init__(self):
        assert (self.failure_witness is not None) == (not self.is_lattice)
        assert (self.distributivity_witness is not None) == (self.is_lattice and not self.is_distributive)


def from_covers(elements: Sequence[str], covers: Iterable[tuple], *, data=None) -> Poset:
    """Build a poset from a cover list; redundant pairs are reduced away."""
    elements = list(elements)
    seen = set()
    for e in elements:
        if e in seen:
            raise DuplicateElementError(e)
        seen.add(e)
    if not elements:
        raise EmptyPosetError("a poset needs at least one element")
    elements.sort(key=natural_key)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    adj = np.zeros((n, n), dtype=bool)
    given = set()
    for lo, hi in covers:
        for e in (lo, hi):
            if e not in index:
                raise UnknownElementError(e)
        if lo == hi:
            raise CycleError([lo])
        adj[index[lo], index[hi]] = True
        given.add((lo, hi))
    leq = kernels.transitive_closure(adj)
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        raise CycleError(_find_cycle(adj, elements))
    cov = kernels.transitive_reduction(leq)
    notices = []
    dropped = len(given) - int(cov.sum())
    if dropped:
        notices.append(f"reduced {dropped} redundant cover pair(s) implied by transitivity")
    return Poset(elements, leq, cov, data=data, notices=notices)


def _find_cycle(adj, elements):
    n = len(elements)
    color = [0] * n
    stack_pos = {}
    path = []

    def visit(u):
        color[u] = 1
        stack_pos[u] = len(path)
        path.append(u)
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if color[v] == 1:
                return path[stack_pos[v] :]
            if color[v] == 0:
                found = visit(v)
                if found:
                    return found
        color[u] = 2
        path.pop()
        return None

    for s in range(n):
        if color[s] == 0:
            cyc = visit(s)
            if cyc:
                return [elements[i] for i in cyc]
    return []  # pragma: no cover


def _pack_rows(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    n_words = max(1, (n + 63) // 64)
    packed = np.packbits(rows, axis=1, bitorder="little")
    buf = np.zeros((rows.shape[0], n_words * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return buf.view("<u8").astype(np.uint64)


def _bound_table(leq: np.ndarray) -> np.ndarray:
    """Least upper bound table (-1 where not unique) for a reachability matrix."""
    up = leq.sum(axis=1)
    order = np.lexsort((np.arange(len(up)), -up))
    sub = leq[np.ix_(order, order)]
    table_le = kernels.bound_table(_pack_rows(sub))
    table = np.full_like(table_le, -1)
    mapped = np.where(table_le >= 0, order[np.maximum(table_le, 0)], -1)
    table[np.ix_(order, order)] = mapped
    return table


def _bounds_failure(p: Poset, i: int, j: int, kind: str) -> BoundFailure:
    leq = p.leq_matrix if kind == "join" else p.leq_matrix.T
    common = np.flatnonzero(leq[i] & leq[j])
    extreme = [a for a in common if not any(b != a and leq[b, a] for b in common)]
    return BoundFailure((p.elements[i], p.elements[j]), kind, tuple(p.elements[a] for a in extreme))


def diagnose(p: Poset) -> LatticeDiagnostic:
    """Full structural verdict: lattice or not, distributive or not, with witnesses."""
    result = _certify(p)
    if isinstance(result, BoundFailure):
        return LatticeDiagnostic(False, False, failure_witness=result)
    ok, witness = is_distributive(result)
    return LatticeDiagnostic(True, ok, distributivity_witness=witness)


def _certify(p: Poset):
    if isinstance(p, Lattice):
        return p
    if len(p) == 0:
        raise EmptyPosetError("cannot certify an empty poset")
    join = _bound_table(p.leq_matrix)
    meet = _bound_table(np.ascontiguousarray(p.leq_matrix.T))
    bad = (join < 0) | (meet < 0)
    if bad.any():
        n = len(p)
        iu = np.triu_indices(n, 1)
        k = int(np.argmax(bad[iu]))
        i, j = int(iu[0][k]), int(iu[1][k])
        kind = "join" if join[i, j] < 0 else "meet"
        return _bounds_failure(p, i, j, kind)
    return Lattice(p.elements, p.leq_matrix, p.cover_matrix, join=join, meet=meet, data=p.data, notices=p.notices)


def certify_lattice(p: Poset) -> Lattice | LatticeDiagnostic:
    result = _certify(p)
    if isinstance(result, BoundFailure):
        return LatticeDiagnostic(False, False, failure_witness=result)
    return result


def require_lattice(p: Poset) -> Lattice:
    result = certify_lattice(p)
    if isinstance(result, LatticeDiagnostic):
        raise NotALatticeError(result.failure_witness.describe())
    return result


def is_distributive(lat: Lattice):
    """Return ``(True, None)`` or ``(False, (x, y, z))`` for the first violating triple."""
    if lat._distributive is None:
        x, y, z = kernels.distributive_violation(lat.join_table, lat.meet_table)
        if x < 0:
            lat._distributive = (True, None)
        else:
            e = lat.elements
            lat._distributive = (False, (e[x], e[y], e[z]))
    return lat._distributive


def join_irreducibles(lat: Lattice) -> tuple:
    """Elements with exactly one lower cover (equivalently, non-bottom and join-prime to pairs)."""
    counts = lat.cover_matrix.sum(axis=0)
    return tuple(lat.elements[i] for i in np.flatnonzero(counts == 1))


def classify(p: Poset) -> str:
    n = len(p)
    if n == 0:
        raise EmptyPosetError("cannot classify an empty poset")
    leq = p.leq_matrix
    if (leq | leq.T).all():
        return "chain"
    if not (leq & ~np.eye(n, dtype=bool)).any():
        return "antichain"
    return "mixed"
