"""Context-dependent bi-valuations and the rules relating them.

The bi-valuation is realised as ``w(x | y) = v(x ^ y) / v(y)``, overridden to
exactly 1 whenever ``y <= x``. A context ``y`` with ``v(y)`` indistinguishable
from zero is null: queries against it are undefined unless the override
applies.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from . import kernels
from .builders import lattice_product
from .errors import (
    DivisionByZeroError,
    LatticeMismatchError,
    NotDistributiveError,
    UndefinedContextError,
)
from .poset import is_distributive
from .valuation import (
    RuleReport,
    Valuation,
    check_lattice_product_rule,
    check_monotone,
    check_sum_rule,
    default_tolerance,
    make_report,
    product_valuation,
)

NULL_RTOL = 1e-12

ALL_CHECKS = ("sum", "monotone", "chain", "context-product", "contextual-sum", "bayes", "product", "product-spaces")


class BiValuation:
    def __init__(self, base: Valuation, null_rtol: float = NULL_RTOL):
        self.base = base
        self.null_rtol = null_rtol
        self._matrix = None

    @property
    def lattice(self):
        return self.base.lattice

    def null_contexts(self) -> np.ndarray:
        return np.abs(self.base.values) <= self.null_rtol * self.base.scale

    def matrix(self) -> np.ndarray:
        """``W[x, y] = w(x | y)``, NaN where undefined."""
        if self._matrix is None:
            lat = self.lattice
            v = self.base.values
            null = self.null_contexts()
            safe = np.where(null, 1.0, v)
            ratio = v[lat.meet_table] / safe[None, :]
            w = np.where(null[None, :], np.nan, ratio)
            w = np.where(lat.leq_matrix.T, 1.0, w)
            w.setflags(write=False)
            self._matrix = w
        return self._matrix

    def __call__(self, x, y) -> float:
        return bival(self, x, y)


def bival(b: BiValuation, x, y) -> float:
    """Degree to which context ``y`` includes ``x``."""
    lat = b.lattice
    i, j = lat.idx(x), lat.idx(y)
    if lat.leq_matrix[j, i]:
        return 1.0
    if b.null_contexts()[j]:
        raise UndefinedContextError(f"w({x} | {y}) is undefined: context {y} has null valuation")
    return float(b.base.values[lat.meet_table[i, j]] / b.base.values[j])


def bayes(b: BiValuation, m, n, t) -> float:
    """``w(m | t) * w(n | m ^ t) / w(n | t)``, which should equal ``w(m | n ^ t)``."""
    lat = b.lattice
    prior = bival(b, m, t)
    likelihood = bival(b, n, lat.meet(m, t))
    evidence = bival(b, n, t)
    if evidence == 0:
        raise DivisionByZeroError(f"w({n} | {t}) = 0")
    return prior * likelihood / evidence


def _report3(rule, b, res, tolerance):
    best, count, wit = res
    return make_report(rule, b.lattice, best, count, wit, tolerance)


def check_chain_rule(b: BiValuation, tolerance: float | None = None) -> RuleReport:
    """w(x | z) = w(x | y) w(y | z) over all chains x <= y <= z."""
    return _report3("chain", b, kernels.chain_residual(b.matrix(), b.lattice.leq_matrix), tolerance)


def check_context_product_rule(b: BiValuation, tolerance: float | None = None) -> RuleReport:
    """w(y ^ z | x) = w(z | x ^ y) w(y | x) over all triples."""
    return _report3("context-product", b, kernels.context_product_residual(b.matrix(), b.lattice.meet_table), tolerance)


def check_contextual_sum_rule(b: BiValuation, tolerance: float | None = None) -> RuleReport:
    """w(x v y | t) + w(x ^ y | t) = w(x | t) + w(y | t) for every non-null context t."""
    lat = b.lattice
    ok, witness = is_distributive(lat)
    if not ok:
        raise NotDistributiveError("contextual sum rule needs a distributive lattice; violated at " + ", ".join(witness))
    ctx = np.ascontiguousarray(~b.null_contexts())
    res = kernels.contextual_sum_residual(b.matrix(), lat.join_table, lat.meet_table, ctx)
    return _report3("contextual-sum", b, res, tolerance)


def check_bayes(b: BiValuation, tolerance: float | None = None) -> RuleReport:
    """Bayes quotient against the direct bi-valuation over all triples with defined terms."""
    return _report3("bayes", b, kernels.bayes_residual(b.matrix(), b.lattice.meet_table), tolerance)


def check_product_spaces(bp: BiValuation, bx: BiValuation, by: BiValuation, tolerance: float | None = None) -> RuleReport:
    """w((x, y) | (tx, ty)) = w(x | tx) w(y | ty) over the product lattice."""
    prod = bp.lattice
    nx_, ny = len(bx.lattice), len(by.lattice)
    if getattr(prod, "factors", None) != (bx.lattice, by.lattice):
        raise LatticeMismatchError("bi-valuation does not live on the product of the given factors")
    wp = bp.matrix().reshape(nx_, ny, nx_, ny)
    wf = bx.matrix()[:, None, :, None] * by.matrix()[None, :, None, :]
    valid = np.isfinite(wp) & np.isfinite(wf)
    with np.errstate(invalid="ignore"):
        r = np.abs(wp - wf) / np.maximum(1.0, np.maximum(np.abs(wp), np.abs(wf)))
    count = int(valid.sum())
    if count == 0:
        return make_report("product-spaces", prod, 0.0, 0, (), tolerance)
    r = np.where(valid, r, -1.0).reshape(nx_ * ny, nx_ * ny)
    k = int(r.argmax())
    n = nx_ * ny
    return make_report("product-spaces", prod, float(r.flat[k]), count, (k // n, k % n), tolerance)


def run_checks(v: Valuation, checks: Iterable[str] = ALL_CHECKS, tolerance: float | None = None) -> list[RuleReport]:
    """Consolidated report over the requested rules.

    ``product`` and ``product-spaces`` are checked on the self-product of the
    lattice with ``v`` on both factors.
    """
    tol = default_tolerance() if tolerance is None else tolerance
    checks = list(checks)
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(ALL_CHECKS)}")
    b = BiValuation(v)
    reports = []
    prod = vp = None
    for name in checks:
        if name == "sum":
            reports.append(check_sum_rule(v, tol))
        elif name == "monotone":
            reports.append(check_monotone(v, tol))
        elif name == "chain":
            reports.append(check_chain_rule(b, tol))
        elif name == "context-product":
            reports.append(check_context_product_rule(b, tol))
        elif name == "contextual-sum":
            reports.append(check_contextual_sum_rule(b, tol))
        elif name == "bayes":
            reports.append(check_bayes(b, tol))
        else:
            if prod is None:
                prod = lattice_product(v.lattice, v.lattice)
                vp = product_valuation(v, v, prod)
            if name == "product":
                reports.append(check_lattice_product_rule(v, v, vp, tol))
            else:
                reports.append(check_product_spaces(BiValuation(vp), b, b, tol))
    return reports
