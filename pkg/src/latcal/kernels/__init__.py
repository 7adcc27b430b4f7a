"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba kernels are used when numba imports cleanly and the environment
variable ``LATCAL_DISABLE_NUMBA`` is unset (or ``0``). Both backends return
identical results, including witness tuples; tests check this directly.
"""
import os

from . import _numpy

BACKEND = "numpy"
_impl = _numpy

if os.environ.get("LATCAL_DISABLE_NUMBA", "0").lower() in ("", "0", "false", "no"):
    try:
        from . import _numba

        _impl = _numba
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is an optional accelerator
        pass

transitive_closure = _impl.transitive_closure
# the BLAS matmul beats the jitted triple loop at every size we benchmark
transitive_reduction = _numpy.transitive_reduction
bound_table = _impl.bound_table
distributive_violation = _impl.distributive_violation
mobius_matrix = _impl.mobius_matrix
sum_rule_residual = _impl.sum_rule_residual
chain_residual = _impl.chain_residual
context_product_residual = _impl.context_product_residual
contextual_sum_residual = _impl.contextual_sum_residual
bayes_residual = _impl.bayes_residual

__all__ = [
    "BACKEND",
    "transitive_closure",
    "transitive_reduction",
    "bound_table",
    "distributive_violation",
    "mobius_matrix",
    "sum_rule_residual",
    "chain_residual",
    "context_product_residual",
    "contextual_sum_residual",
    "bayes_residual",
]
