"""Valuations on lattices: extension from join-irreducibles and rule checks."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .errors import (
    InvalidSeedError,
    LatticeMismatchError,
    MissingSeedError,
    NotDistributiveError,
)
from .poset import Lattice, is_distributive, join_irreducibles

DEFAULT_TOLERANCE = 1e-9


def default_tolerance() -> float:
    """Absolute tolerance for rule checks; ``LATCAL_TOLERANCE`` overrides."""
    raw = os.environ.get("LATCAL_TOLERANCE")
    return float(raw) if raw else DEFAULT_TOLERANCE


@dataclass(frozen=True)
class RuleReport:
    """Outcome of checking one rule over every applicable tuple."""

    rule: str
    tuples_checked: int
    max_residual: float
    passed: bool
    witness: tuple | None
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "tuplesChecked": self.tuples_checked,
            "maxResidual": self.max_residual,
            "passed": self.passed,
            "witness": list(self.witness) if self.witness is not None else None,
            "tolerance": self.tolerance,
        }


def make_report(rule, lat, best, count, witness_idx, tolerance) -> RuleReport:
    tol = default_tolerance() if tolerance is None else tolerance
    if count == 0:
        return RuleReport(rule, 0, 0.0, True, None, tol)
    witness = tuple(lat.elements[i] for i in witness_idx)
    return RuleReport(rule, int(count), float(best), bool(best <= tol), witness, tol)


@dataclass(frozen=True, eq=False)
class Valuation:
    """Real values on every element of a lattice, bottom pinned at zero.

    ``increments`` are the Möbius-inverted generators on the join-irreducibles;
    for an extended valuation they are exactly the additive pieces the values
    are summed from.
    """

    lattice: Lattice
    values: np.ndarray
    increments: Mapping[str, float]
    monotone: bool
    nonnegative_increments: bool
    seed: Mapping[str, float] = field(default_factory=dict)

    def __getitem__(self, x) -> float:
        return float(self.values[self.lattice.idx(x)])

    def as_dict(self) -> dict:
        return {e: float(v) for e, v in zip(self.lattice.elements, self.values)}

    @property
    def scale(self) -> float:
        """Magnitude used to normalise residuals (1 for an all-zero valuation)."""
        m = float(np.abs(self.values).max()) if self.values.size else 0.0
        return m if m > 0 else 1.0


def _increments(lat: Lattice, values: np.ndarray) -> dict:
    irr = join_irreducibles(lat)
    if not irr:
        return {}
    sub = lat.subposet(irr)
    mu = sub.mobius_matrix()
    ids = [lat.idx(j) for j in irr]
    m = mu.T.astype(float) @ values[ids]
    return dict(zip(irr, (float(x) for x in m)))


def _finish(lat, values, increments, seed=None) -> Valuation:
    values = np.asarray(values, dtype=float) + 0.0
    values[lat.bottom_index] = 0.0
    values.setflags(write=False)
    probe = Valuation(lat, values, increments, True, True, dict(seed or {}))
    mono = check_monotone(probe).passed
    tol = default_tolerance() * probe.scale
    nonneg = all(m >= -tol for m in increments.values())
    return Valuation(lat, values, dict(increments), mono, nonneg, dict(seed or {}))


def extend_from_irreducibles(lat: Lattice, seed: Mapping[str, float]) -> Valuation:
    """The unique sum-rule valuation agreeing with ``seed`` on the join-irreducibles."""
    ok, witness = is_distributive(lat)
    if not ok:
        raise NotDistributiveError(
            "extension needs a distributive lattice; x ^ (y v z) != (x ^ y) v (x ^ z) at " + ", ".join(witness)
        )
    irr = join_irreducibles(lat)
    missing = [j for j in irr if j not in seed]
    if missing:
        raise MissingSeedError(missing)
    extra = sorted(map(str, set(seed) - set(irr)))
    if extra:
        raise InvalidSeedError("seed keys are not join-irreducible elements: " + ", ".join(map(str, extra)))
    n = len(lat)
    if not irr:
        return _finish(lat, np.zeros(n), {}, seed)
    sub = lat.subposet(irr)
    mu = sub.mobius_matrix().astype(float)
    s = np.array([float(seed[j]) for j in irr])
    gen = mu.T @ s
    ids = [lat.idx(j) for j in irr]
    below = lat.leq_matrix[ids, :].astype(float)  # below[k, x]: irreducible k <= x
    values = gen @ below
    return _finish(lat, values, dict(zip(irr, gen.tolist())), seed)


def from_values(lat: Lattice, values: Mapping[str, float]) -> Valuation:
    """Hand-assigned valuation; bottom defaults to 0 and must be 0 if given."""
    missing = [e for e in lat.elements if e not in values and e != lat.bottom]
    if missing:
        raise InvalidSeedError("valuation misses element(s): " + ", ".join(missing))
    unknown = [k for k in values if k not in lat]
    if unknown:
        raise InvalidSeedError("valuation names unknown element(s): " + ", ".join(map(str, unknown)))
    if float(values.get(lat.bottom, 0.0)) != 0.0:
        raise InvalidSeedError(f"bottom {lat.bottom} must have value 0")
    arr = np.array([float(values.get(e, 0.0)) for e in lat.elements])
    return _finish(lat, arr, _increments(lat, arr))


def check_sum_rule(v: Valuation, tolerance: float | None = None, *, swap: bool = False) -> RuleReport:
    """|v(x v y) + v(x ^ y) - v(x) - v(y)| over unordered pairs, normalised by ``v.scale``.

    ``swap`` exchanges the join and meet tables; the residual is unchanged.
    """
    lat = v.lattice
    join, meet = (lat.meet_table, lat.join_table) if swap else (lat.join_table, lat.meet_table)
    best, count, i, j = kernels.sum_rule_residual(np.ascontiguousarray(v.values), join, meet)
    return make_report("sum", lat, best / v.scale, count, (i, j), tolerance)


def check_monotone(v: Valuation, tolerance: float | None = None) -> RuleReport:
    lat = v.lattice
    lt = lat.leq_matrix & ~np.eye(len(lat), dtype=bool)
    r = np.maximum(0.0, v.values[:, None] - v.values[None, :])
    count = int(lt.sum())
    if count == 0:
        return make_report("monotone", lat, 0.0, 0, (), tolerance)
    r = np.where(lt, r, -1.0)
    k = int(r.argmax())
    n = len(lat)
    return make_report("monotone", lat, float(r.flat[k]) / v.scale, count, (k // n, k % n), tolerance)


def product_valuation(vx: Valuation, vy: Valuation, product: Lattice) -> Valuation:
    """v((x, y)) = vx(x) * vy(y) on a lattice built by ``lattice_product``."""
    factors = getattr(product, "factors", None)
    if factors is None or factors[0] is not vx.lattice or factors[1] is not vy.lattice:
        raise LatticeMismatchError("product lattice was not built from these valuations' lattices")
    values = np.outer(vx.values, vy.values).reshape(-1)
    return _finish(product, values, _increments(product, values))


def check_lattice_product_rule(vx: Valuation, vy: Valuation, vp: Valuation, tolerance: float | None = None) -> RuleReport:
    """|vp((x, y)) - vx(x) vy(y)| over every product element."""
    prod = vp.lattice
    factors = getattr(prod, "factors", None)
    if factors is None or factors[0] is not vx.lattice or factors[1] is not vy.lattice:
        raise LatticeMismatchError("valuation does not live on the product of the given factors")
    expected = np.outer(vx.values, vy.values).reshape(-1)
    r = np.abs(vp.values - expected)
    k = int(r.argmax()) if r.size else 0
    return make_report("product", prod, float(r[k]) / vp.scale, r.size, (k,), tolerance)
