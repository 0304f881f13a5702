# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for classical many-body stepping and phase-mode
estimation.  Semantics match mflab._kernels.fallback exactly; the
fallback is the reference implementation."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, floor, M_PI


def verlet_batch(double[:, ::1] x, double[:, ::1] v,
                 double[::1] mode_k, double[::1] mode_c,
                 double dt, int nsteps, double period):
    """Velocity-Verlet for R replicas of N particles on the torus.

    Mean-field force with 1/N coupling from an even cosine potential,
    evaluated through per-replica mode sums (O(N * modes) per step).
    Arrays are updated in place.
    """
    cdef Py_ssize_t R = x.shape[0]
    cdef Py_ssize_t N = x.shape[1]
    cdef Py_ssize_t K = mode_k.shape[0]
    cdef Py_ssize_t r, i, k, step
    cdef double ck, kk, csum, ssum, xi, acc
    cdef double invN = 1.0 / N
    cdef cnp.ndarray[cnp.float64_t, ndim=2] fbuf = np.empty((R, N))
    cdef double[:, ::1] f = fbuf
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cbuf = np.empty((R, K))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sbuf = np.empty((R, K))
    cdef double[:, ::1] csums = cbuf
    cdef double[:, ::1] ssums = sbuf

    _forces(x, mode_k, mode_c, invN, csums, ssums, f)
    for step in range(nsteps):
        for r in range(R):
            for i in range(N):
                v[r, i] += 0.5 * dt * f[r, i]
                xi = x[r, i] + dt * v[r, i]
                xi -= period * floor(xi / period)
                x[r, i] = xi
        _forces(x, mode_k, mode_c, invN, csums, ssums, f)
        for r in range(R):
            for i in range(N):
                v[r, i] += 0.5 * dt * f[r, i]


cdef void _forces(double[:, ::1] x, double[::1] mode_k, double[::1] mode_c,
                  double invN, double[:, ::1] csums, double[:, ::1] ssums,
                  double[:, ::1] f) noexcept:
    cdef Py_ssize_t R = x.shape[0]
    cdef Py_ssize_t N = x.shape[1]
    cdef Py_ssize_t K = mode_k.shape[0]
    cdef Py_ssize_t r, i, k
    cdef double kk, ck, cs, ss, acc
    for r in range(R):
        for k in range(K):
            kk = mode_k[k]
            cs = 0.0
            ss = 0.0
            for i in range(N):
                cs += cos(kk * x[r, i])
                ss += sin(kk * x[r, i])
            csums[r, k] = cs
            ssums[r, k] = ss
        for i in range(N):
            acc = 0.0
            for k in range(K):
                kk = mode_k[k]
                ck = mode_c[k]
                acc += ck * kk * (sin(kk * x[r, i]) * csums[r, k]
                                  - cos(kk * x[r, i]) * ssums[r, k])
            f[r, i] = acc * invN


def external_field_steps(double[:, ::1] x, double[:, ::1] v,
                         double[::1] mode_k,
                         double[:, ::1] ccoef, double[:, ::1] scoef,
                         double dt, double period):
    """Verlet steps in a prescribed time-dependent mean-field force.

    ccoef/scoef give, per step, the cosine/sine field coefficients so
    that force(x) = sum_k ccoef[s,k]*sin(k x) - scoef[s,k]*cos(k x);
    step s uses the fields at the half/endpoints already baked in by the
    caller (one row per force evaluation, nsteps+1 rows).
    """
    cdef Py_ssize_t R = x.shape[0]
    cdef Py_ssize_t N = x.shape[1]
    cdef Py_ssize_t K = mode_k.shape[0]
    cdef Py_ssize_t nsteps = ccoef.shape[0] - 1
    cdef Py_ssize_t r, i, k, step
    cdef double acc, kk, xi
    cdef cnp.ndarray[cnp.float64_t, ndim=2] fbuf = np.empty((R, N))
    cdef double[:, ::1] f = fbuf

    _ext_force(x, mode_k, ccoef, scoef, 0, f)
    for step in range(nsteps):
        for r in range(R):
            for i in range(N):
                v[r, i] += 0.5 * dt * f[r, i]
                xi = x[r, i] + dt * v[r, i]
                xi -= period * floor(xi / period)
                x[r, i] = xi
        _ext_force(x, mode_k, ccoef, scoef, step + 1, f)
        for r in range(R):
            for i in range(N):
                v[r, i] += 0.5 * dt * f[r, i]


cdef void _ext_force(double[:, ::1] x, double[::1] mode_k,
                     double[:, ::1] ccoef, double[:, ::1] scoef,
                     Py_ssize_t row, double[:, ::1] f) noexcept:
    cdef Py_ssize_t R = x.shape[0]
    cdef Py_ssize_t N = x.shape[1]
    cdef Py_ssize_t K = mode_k.shape[0]
    cdef Py_ssize_t r, i, k
    cdef double acc, kk
    for r in range(R):
        for i in range(N):
            acc = 0.0
            for k in range(K):
                kk = mode_k[k]
                acc += ccoef[row, k] * sin(kk * x[r, i]) - scoef[row, k] * cos(kk * x[r, i])
            f[r, i] = acc


def phase_mode_sums(double[:, ::1] x, double[:, ::1] v,
                    double[::1] xi, double[::1] eta):
    """Per-replica means of exp(i(xi*x - eta*v)) over particles.

    Returns a complex array of shape (R, len(xi)); xi and eta are paired
    mode lists.
    """
    cdef Py_ssize_t R = x.shape[0]
    cdef Py_ssize_t N = x.shape[1]
    cdef Py_ssize_t Q = xi.shape[0]
    cdef Py_ssize_t r, i, q
    cdef double ph, re, im
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((R, Q), dtype=np.complex128)
    for r in range(R):
        for q in range(Q):
            re = 0.0
            im = 0.0
            for i in range(N):
                ph = xi[q] * x[r, i] - eta[q] * v[r, i]
                re += cos(ph)
                im += sin(ph)
            out[r, q] = (re + 1j * im) / N
    return out
