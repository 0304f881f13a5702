"""Reference numpy implementations of the hot kernels.

These define the semantics; the compiled extension in _nbody.pyx must
agree to rounding.  Selected automatically when the extension is not
built (see __init__).
"""

import numpy as np


def _forces(x, mode_k, mode_c, invN):
    f = np.zeros_like(x)
    for kk, ck in zip(mode_k, mode_c):
        c = np.cos(kk * x)
        s = np.sin(kk * x)
        csum = c.sum(axis=1, keepdims=True)
        ssum = s.sum(axis=1, keepdims=True)
        f += ck * kk * (s * csum - c * ssum)
    return f * invN


def verlet_batch(x, v, mode_k, mode_c, dt, nsteps, period):
    invN = 1.0 / x.shape[1]
    f = _forces(x, mode_k, mode_c, invN)
    for _ in range(nsteps):
        v += 0.5 * dt * f
        x += dt * v
        x %= period
        f = _forces(x, mode_k, mode_c, invN)
        v += 0.5 * dt * f


def _ext_force(x, mode_k, crow, srow):
    f = np.zeros_like(x)
    for kk, cc, ss in zip(mode_k, crow, srow):
        f += cc * np.sin(kk * x) - ss * np.cos(kk * x)
    return f


def external_field_steps(x, v, mode_k, ccoef, scoef, dt, period):
    nsteps = ccoef.shape[0] - 1
    f = _ext_force(x, mode_k, ccoef[0], scoef[0])
    for step in range(nsteps):
        v += 0.5 * dt * f
        x += dt * v
        x %= period
        f = _ext_force(x, mode_k, ccoef[step + 1], scoef[step + 1])
        v += 0.5 * dt * f


def phase_mode_sums(x, v, xi, eta):
    out = np.empty((x.shape[0], len(xi)), dtype=complex)
    for q in range(len(xi)):
        out[:, q] = np.exp(1j * (xi[q] * x - eta[q] * v)).mean(axis=1)
    return out
