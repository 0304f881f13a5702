"""Fourier-side hierarchy operators on mode-lattice data.

The level-j objects are symplectic-Fourier coefficients ft(xi_1..xi_j;
eta_1..eta_j) on a rectangular band (integer position modes, uniformly
spaced velocity modes).  The two interaction operators act by finite
mode shifts weighted with the bounded difference quotient

    mult_hbar(s) = 2 sin(hbar s / 2) / hbar   (-> s as hbar -> 0),

summed over the potential's signed Fourier modes:

  pair interaction inside the group (level j -> j):
      (1/2) sum_{l != r} sum_h phihat(h) mult(h*(eta_r - eta_l))
            ft(xi + h e_r - h e_l; eta)
  coupling to one extra particle (level j+1 -> j):
      sum_{r} sum_h phihat(h) mult(h*eta_r) ft(xi + h e_r, -h; eta, 0)

Free streaming acts as the argument shift eta -> eta - t*xi, realized by
modulation on the conjugate velocity grid, which is the band-limited
interpolation of the lattice samples.  hbar = 0 is first-class: the
multiplier is the exact limit, giving the classical hierarchy.
"""

import numpy as np

from ..errors import ResolutionError
from ..phase_space.spectral import FourierPhaseFunction, ModeGrid


def multiplier(s, hbar):
    if hbar == 0.0:
        return s
    return 2.0 * np.sin(hbar * s / 2.0) / hbar


def _eta_index_of_zero(modes):
    ie = int(np.argmin(np.abs(modes.eta)))
    if abs(modes.eta[ie]) > 1e-12:
        raise ResolutionError("band must contain the eta = 0 mode")
    return ie


def _xi_index(modes, value):
    ix = int(np.argmin(np.abs(modes.xi - value)))
    if abs(modes.xi[ix] - value) > 1e-9:
        raise ResolutionError(f"position mode {value} not on the band")
    return ix


def _shift_axis(values, steps, axis, edge_tol, scale):
    """Integer shift with zero fill; content pushed off the band raises."""
    if steps == 0:
        return values
    n = values.shape[axis]
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if steps > 0:
        src[axis] = slice(0, n - steps)
        dst[axis] = slice(steps, n)
        lost = [slice(None)] * values.ndim
        lost[axis] = slice(n - steps, n)
    else:
        src[axis] = slice(-steps, n)
        dst[axis] = slice(0, n + steps)
        lost = [slice(None)] * values.ndim
        lost[axis] = slice(0, -steps)
    dropped = float(np.abs(values[tuple(lost)]).max()) if n + min(0, steps) > 0 else 0.0
    if dropped > edge_tol * scale:
        raise ResolutionError(
            f"mode shift by {steps} pushes content of size {dropped:.2e} off the band"
        )
    out[tuple(dst)] = values[tuple(src)]
    return out


def apply_C(F, phi, hbar, edge_tol=1e-8):
    """Coupling operator: level j+1 input, level j output on the same axes."""
    modes = F.modes
    jp1 = modes.particles
    if jp1 < 2:
        raise ValueError("coupling input must carry at least 2 particles")
    j = jp1 - 1
    out_modes = ModeGrid(j, modes.xi, modes.eta)
    out = np.zeros(out_modes.shape, dtype=complex)
    if phi.is_zero:
        return FourierPhaseFunction(out_modes, out)
    scale = float(np.abs(F.values).max()) or 1.0
    ie0 = _eta_index_of_zero(modes)
    dxi = modes.xi[1] - modes.xi[0] if len(modes.xi) > 1 else 1.0
    for h, coeff in phi.fourier_modes():
        steps = int(round(h / dxi))
        ix_mh = _xi_index(modes, -float(h))
        for r in range(j):
            shifted = _shift_axis(F.values, steps, r, edge_tol, scale)
            # consume the last particle at (xi = -h, eta = 0)
            sl = [slice(None)] * (2 * jp1)
            sl[jp1 - 1] = ix_mh
            sl[2 * jp1 - 1] = ie0
            block = shifted[tuple(sl)]
            mult = multiplier(float(h) * modes.eta, hbar)
            sh = [1] * (2 * j)
            sh[j + r] = len(modes.eta)
            out += coeff * mult.reshape(sh) * block
    return FourierPhaseFunction(out_modes, out)


def apply_T(F, phi, hbar, edge_tol=1e-8):
    """In-group pair interaction: level j input and output."""
    modes = F.modes
    j = modes.particles
    out = np.zeros(modes.shape, dtype=complex)
    if j < 2 or phi.is_zero:
        return FourierPhaseFunction(modes, out)
    scale = float(np.abs(F.values).max()) or 1.0
    dxi = modes.xi[1] - modes.xi[0] if len(modes.xi) > 1 else 1.0
    for h, coeff in phi.fourier_modes():
        steps = int(round(h / dxi))
        for r in range(j):
            for l in range(j):
                if l == r:
                    continue
                shifted = _shift_axis(F.values, steps, r, edge_tol, scale)
                shifted = _shift_axis(shifted, -steps, l, edge_tol, scale)
                sh_r = [1] * (2 * j)
                sh_r[j + r] = len(modes.eta)
                sh_l = [1] * (2 * j)
                sh_l[j + l] = len(modes.eta)
                s = modes.eta.reshape(sh_r) - modes.eta.reshape(sh_l)
                out += 0.5 * coeff * multiplier(float(h) * s, hbar) * shifted
    return FourierPhaseFunction(modes, out)


def free_transport(F, t, edge_tol=1e-8):
    """Streaming group: output(xi, eta) = input(xi, eta - t*xi).

    Realized per particle by modulation on the conjugate velocity grid,
    i.e. exact band-limited interpolation of the eta samples; content
    reaching the eta band edge raises rather than aliasing silently.
    """
    if t == 0.0:
        return F.copy()
    modes = F.modes
    j = modes.particles
    ne = len(modes.eta)
    deta = modes.eta[1] - modes.eta[0] if ne > 1 else 1.0
    # conjugate velocity points of the eta lattice
    v = np.fft.fftfreq(ne, d=deta / (2.0 * np.pi))
    fwd = np.exp(-1j * np.outer(modes.eta, v))  # eta-transform of v-samples
    inv = np.exp(1j * np.outer(v, modes.eta)) / ne
    vals = F.values
    scale = float(np.abs(vals).max()) or 1.0
    for i in range(j):
        eta_ax = j + i
        g = np.moveaxis(np.tensordot(inv, vals, axes=([1], [eta_ax])), 0, eta_ax)
        sh_v = [1] * (2 * j)
        sh_v[eta_ax] = ne
        sh_x = [1] * (2 * j)
        sh_x[i] = len(modes.xi)
        phase = np.exp(1j * np.multiply.outer(modes.xi, t * v))
        phase_nd = phase.reshape(
            [len(modes.xi) if ax == i else (ne if ax == eta_ax else 1) for ax in range(2 * j)]
        )
        g = g * phase_nd
        vals = np.moveaxis(np.tensordot(fwd, g, axes=([1], [eta_ax])), 0, eta_ax)
    out = FourierPhaseFunction(modes, vals)
    _check_edge_content(out, edge_tol, scale)
    return out


def _check_edge_content(F, edge_tol, scale):
    j = F.particles
    for i in range(j):
        ax = j + i
        lo = np.abs(np.take(F.values, 0, axis=ax)).max()
        hi = np.abs(np.take(F.values, F.values.shape[ax] - 1, axis=ax)).max()
        if max(lo, hi) > edge_tol * scale:
            raise ResolutionError(
                f"transport left the eta band (edge content {max(lo, hi):.2e})"
            )


def transported_coupling(F, phi, hbar, t, edge_tol=1e-8):
    """S(-t) C S(t) as one lattice composition."""
    return free_transport(apply_C(free_transport(F, t, edge_tol), phi, hbar, edge_tol), -t, edge_tol)


def transported_pair(F, phi, hbar, t, edge_tol=1e-8):
    """S(-t) T S(t) as one lattice composition."""
    return free_transport(apply_T(free_transport(F, t, edge_tol), phi, hbar, edge_tol), -t, edge_tol)
