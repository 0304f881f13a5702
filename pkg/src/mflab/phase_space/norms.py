"""Exponentially weighted sup norms on mode bands.

``beta_norm`` is the sup over the resolved band of |ft| weighted by
exp(rho * sum(|xi_i| + |eta_i|)).  If the maximizer sits on the band
boundary the reported value would only be a lower bound of the true
norm, so the computation raises instead.  ``sequence_norm`` adds the
geometric level weight exp(-alpha * j) over a hierarchy of bands.
"""

import numpy as np

from ..errors import UnresolvedNormError


def _weighted(F, rho):
    return np.abs(F.values) * np.exp(rho * F.modes.weight_exponent())


def beta_norm(F, rho, allow_boundary=False):
    """sup over the band of |ft(xi, eta)| * exp(rho*(|xi|+|eta|))."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    w = _weighted(F, rho)
    flat = int(np.argmax(w))
    idx = np.unravel_index(flat, w.shape)
    if not allow_boundary:
        j = F.particles
        for ax, i in enumerate(idx):
            npts = len(F.modes.xi) if ax < j else len(F.modes.eta)
            if npts > 1 and (i == 0 or i == npts - 1):
                raise UnresolvedNormError(
                    f"norm maximizer on band boundary (axis {ax}, index {i}); "
                    "the value would only be a lower bound"
                )
    return float(w[idx])


def beta_norm_maximizer(F, rho):
    w = _weighted(F, rho)
    idx = np.unravel_index(int(np.argmax(w)), w.shape)
    j = F.particles
    xi = [F.modes.xi[i] for i in idx[:j]]
    eta = [F.modes.eta[i] for i in idx[j:]]
    return float(w[idx]), xi, eta


def sequence_norm(fs, alpha, beta, allow_boundary=False):
    """sum_j exp(-alpha*j) * ||f_j||_beta over the stored levels.

    ``fs`` maps level j (1-based) to a FourierPhaseFunction; levels the
    sequence does not store contribute nothing, so for truncated
    hierarchies this is the partial sum of the full norm.
    """
    total = 0.0
    for j, fj in _level_items(fs):
        total += np.exp(-alpha * j) * beta_norm(fj, beta, allow_boundary=allow_boundary)
    return total


def _level_items(fs):
    if hasattr(fs, "items"):
        return sorted(fs.items())
    return [(j + 1, fj) for j, fj in enumerate(fs) if fj is not None]
