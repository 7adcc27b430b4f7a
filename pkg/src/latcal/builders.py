"""Derived structures: downset, powerset and question lattices, partitions, products."""
from __future__ import annotations

from typing import Sequence

import networkx as nx
import numpy as np

from .errors import DuplicateElementError, LatticeError, SizeLimitError
from .poset import Lattice, Poset, natural_key

DEFAULT_MAX_ELEMENTS = 4096
MAX_BASE_ELEMENTS = 20
MAX_STATEMENTS = 16
MAX_PARTITION_N = 8


def _popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)


def _set_label(names) -> str:
    return "{" + ",".join(names) + "}"


def _antichain_label(names) -> str:
    return "dn(" + ";".join(names) + ")"


def _from_masks(masks, labels, members, *, union_closed=True):
    """Lattice (or poset) of bitmask sets ordered by inclusion."""
    masks = np.asarray(masks, dtype=np.int64)
    pc = _popcount(masks)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    covers = leq & ((pc[None, :] - pc[:, None]) == 1)
    data = {"members": dict(zip(labels, members))}
    n = len(masks)
    order = np.argsort(masks)
    ordered = masks[order]

    def locate(u):
        pos = np.minimum(np.searchsorted(ordered, u), n - 1)
        return np.where(ordered[pos] == u, order[pos], -1)

    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        join[i] = locate(masks | masks[i])
        meet[i] = locate(masks & masks[i])
    if (join < 0).any() or (meet < 0).any():
        return Poset(labels, leq, covers, data=data)
    return Lattice(labels, leq, covers, join=join, meet=meet, data=data)


def _downset_masks(p: Poset, include_empty: bool, limit: int) -> list[int]:
    order = p.linear_extension()
    below = np.zeros(len(p), dtype=np.int64)
    for i in range(len(p)):
        strictly = p.leq_matrix[:, i].copy()
        strictly[i] = False
        below[i] = int(sum(1 << int(k) for k in np.flatnonzero(strictly)))
    masks = [0]
    cap = limit + (0 if include_empty else 1)
    for i in order:
        need, bit = int(below[i]), 1 << int(i)
        masks += [m | bit for m in masks if m & need == need]
        if len(masks) > cap:
            raise SizeLimitError("downset count", f"more than {limit}", limit)
    if not include_empty:
        masks = masks[1:]
    return masks


def downset_lattice(
    p: Poset,
    include_empty: bool = True,
    *,
    labels: str = "members",
    max_elements: int = DEFAULT_MAX_ELEMENTS,
):
    """All downsets of ``p`` ordered by inclusion.

    With ``include_empty=False`` the result may lose its bottom (e.g. two
    minimal base elements); a plain :class:`Poset` is returned in that case.
    ``labels`` picks "members" (``{L,R}``) or "antichain" (maximal members,
    ``dn(L;R)``).
    """
    if len(p) > MAX_BASE_ELEMENTS:
        raise SizeLimitError("base poset size", len(p), MAX_BASE_ELEMENTS)
    masks = _downset_masks(p, include_empty, max_elements)
    elems = p.elements
    pc = [bin(m).count("1") for m in masks]
    masks = [m for _, m in sorted(zip(pc, masks), key=lambda t: (t[0], _bits(t[1])))]
    members = [frozenset(elems[k] for k in _bits(m)) for m in masks]
    names = []
    for m in masks:
        ids = _bits(m)
        if labels == "antichain":
            ids = [k for k in ids if not any(k2 != k and p.leq_matrix[k, k2] for k2 in ids)]
            names.append(_antichain_label(elems[k] for k in ids))
        else:
            names.append(_set_label(elems[k] for k in ids))
    return _from_masks(masks, names, members)


def _bits(m: int) -> list[int]:
    out, k = [], 0
    while m:
        if m & 1:
            out.append(k)
        m >>= 1
        k += 1
    return out


def powerset_lattice(states: Sequence[str], *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Lattice:
    """Boolean lattice of all subsets of ``states``; bottom is the empty statement."""
    states = list(states)
    if len(set(states)) != len(states):
        dup = next(s for s in states if states.count(s) > 1)
        raise DuplicateElementError(dup)
    n = len(states)
    if n > MAX_BASE_ELEMENTS:
        raise SizeLimitError("state count", n, MAX_BASE_ELEMENTS)
    if 2**n > max_elements:
        raise SizeLimitError("statement count", 2**n, max_elements)
    masks = sorted(range(2**n), key=lambda m: (bin(m).count("1"), _bits(m)))
    members = [frozenset(states[k] for k in _bits(m)) for m in masks]
    names = [_set_label(states[k] for k in _bits(m)) for m in masks]
    return _from_masks(masks, names, members)


def question_lattice(statements: Lattice, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> Lattice:
    """Nonempty downsets of a statement lattice, labelled by their maximal statements."""
    if len(statements) > MAX_STATEMENTS:
        raise SizeLimitError("statement lattice size", len(statements), MAX_STATEMENTS)
    return downset_lattice(statements, include_empty=False, labels="antichain", max_elements=max_elements)


def _set_partitions(n: int):
    # restricted growth strings
    def grow(prefix, k):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(k + 1):
            yield from grow(prefix + [b], max(k, b + 1))

    yield from grow([0], 1) if n else iter(())


def _partition_label(rgs, letters) -> str:
    blocks = {}
    for i, b in enumerate(rgs):
        blocks.setdefault(b, []).append(letters[i])
    parts = sorted(("".join(bl) for bl in blocks.values()), key=lambda s: (len(s), s))
    return "|".join(parts)


def partition_poset(n: int) -> Poset:
    """Set partitions of ``n`` letters ordered by refinement; the single block is top."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_PARTITION_N:
        raise SizeLimitError("partition size n", n, MAX_PARTITION_N)
    letters = "abcdefgh"[:n]
    parts = list(_set_partitions(n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    masks = np.array(
        [sum(1 << k for k, (i, j) in enumerate(pairs) if r[i] == r[j]) for r in parts], dtype=np.int64
    )
    nblocks = np.array([max(r) + 1 for r in parts], dtype=np.int64)
    labels = [_partition_label(r, letters) for r in parts]
    rank = sorted(range(len(parts)), key=lambda i: (-nblocks[i], natural_key(labels[i])))
    masks, nblocks = masks[rank], nblocks[rank]
    labels = [labels[i] for i in rank]
    leq = (masks[:, None] & ~masks[None, :]) == 0
    covers = leq & ((nblocks[:, None] - nblocks[None, :]) == 1)
    blocks = {lab: tuple(lab.split("|")) for lab in labels}
    return Poset(labels, leq, covers, data={"blocks": blocks})


def components(lat: Poset, label: str) -> tuple:
    """Flattened factor labels of a product element (a 1-tuple for plain elements)."""
    return lat.data.get("components", {}).get(label, (label,))


class ProductLattice(Lattice):
    """Componentwise product of two lattices; element ``i * len(right) + j`` is ``(left[i], right[j])``."""

    def __init__(self, left: Lattice, right: Lattice, **kw):
        super().__init__(**kw)
        self.factors = (left, right)
        ny = len(right)
        idx = np.arange(len(left) * ny)
        self.left_index = idx // ny
        self.right_index = idx % ny

    def pair(self, label) -> tuple:
        i = self.idx(label)
        left, right = self.factors
        return left.elements[self.left_index[i]], right.elements[self.right_index[i]]

    def element(self, x, y) -> str:
        left, right = self.factors
        return self.elements[left.idx(x) * len(right) + right.idx(y)]


def lattice_product(x: Lattice, y: Lattice, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> ProductLattice:
    nx_, ny = len(x), len(y)
    if nx_ * ny > max_elements:
        raise SizeLimitError("product size", nx_ * ny, max_elements)
    comps = {}
    labels = []
    for a in x.elements:
        for b in y.elements:
            c = components(x, a) + components(y, b)
            lab = "(" + ",".join(c) + ")"
            labels.append(lab)
            comps[lab] = c
    if len(set(labels)) != len(labels):
        raise LatticeError("product labels collide; factor labels are ambiguous after flattening")
    leq = np.kron(x.leq_matrix, y.leq_matrix).astype(bool)
    eye_x = np.eye(nx_, dtype=bool)
    eye_y = np.eye(ny, dtype=bool)
    covers = np.kron(x.cover_matrix, eye_y).astype(bool) | np.kron(eye_x, y.cover_matrix).astype(bool)

    def table(tx, ty):
        t = tx[:, None, :, None] * ny + ty[None, :, None, :]
        return t.reshape(nx_ * ny, nx_ * ny)

    return ProductLattice(
        x,
        y,
        elements=labels,
        leq=leq,
        covers=covers,
        join=table(x.join_table, y.join_table),
        meet=table(x.meet_table, y.meet_table),
        data={"components": comps},
    )


def _cover_graph(p: Poset) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(p)))
    lo, hi = np.nonzero(p.cover_matrix)
    g.add_edges_from(zip(lo.tolist(), hi.tolist()))
    return g


def find_isomorphism(a: Poset, b: Poset) -> dict | None:
    """Order isomorphism ``a -> b`` as a label mapping, or None."""
    if len(a) != len(b) or int(a.cover_matrix.sum()) != int(b.cover_matrix.sum()):
        return None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(_cover_graph(a), _cover_graph(b))
    for mapping in matcher.isomorphisms_iter():
        return {a.elements[i]: b.elements[j] for i, j in mapping.items()}
    return None


def is_isomorphic(a: Poset, b: Poset) -> bool:
    return find_isomorphism(a, b) is not None


def chain_poset(n: int) -> Poset:
    """The integers 1..n under the usual order."""
    labels = [str(i) for i in range(1, n + 1)]
    leq = np.triu(np.ones((n, n), dtype=bool))
    return Poset(labels, leq)


def antichain_poset(labels: Sequence[str]) -> Poset:
    labels = sorted(labels, key=natural_key)
    return Poset(labels, np.eye(len(labels), dtype=bool))
