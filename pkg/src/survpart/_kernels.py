"""Active-backend kernel bindings; see backend module for selection rules."""

from .backend import ACTIVE_BACKEND

if ACTIVE_BACKEND == "numba":
    from ._kernels_numba import concordance_counts, nll_loss, nll_loss_grads
else:
    from ._kernels_numpy import concordance_counts, nll_loss, nll_loss_grads

__all__ = ["nll_loss", "nll_loss_grads", "concordance_counts", "ACTIVE_BACKEND"]
