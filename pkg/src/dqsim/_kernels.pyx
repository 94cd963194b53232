# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state kernels.

All kernels act in place on a C-contiguous complex128 array of shape
``(batch, 2**n)``. Qubit ``q`` is bit ``n - 1 - q`` of the basis index.
"""

cimport cython
from libc.stdint cimport int64_t, int8_t

ctypedef double complex cplx


def apply_1q(cplx[:, ::1] psi, int n, int target, const cplx[:, ::1] u, int64_t ctrl_mask):
    """Apply a 2x2 matrix on ``target``, conditioned on every bit of ``ctrl_mask``."""
    cdef int64_t dim = psi.shape[1]
    cdef int64_t tbit = (<int64_t>1) << (n - 1 - target)
    cdef Py_ssize_t b, nb = psi.shape[0]
    cdef int64_t i, j
    cdef cplx a0, a1
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    with nogil:
        for b in range(nb):
            for i in range(dim):
                if (i & tbit) or (i & ctrl_mask) != ctrl_mask:
                    continue
                j = i | tbit
                a0 = psi[b, i]
                a1 = psi[b, j]
                psi[b, i] = u00 * a0 + u01 * a1
                psi[b, j] = u10 * a0 + u11 * a1


def apply_phase(cplx[:, ::1] psi, int64_t mask, cplx phase):
    """Multiply every amplitude whose index has all bits of ``mask`` set."""
    cdef int64_t dim = psi.shape[1]
    cdef Py_ssize_t b, nb = psi.shape[0]
    cdef int64_t i
    with nogil:
        for b in range(nb):
            for i in range(dim):
                if (i & mask) == mask:
                    psi[b, i] = psi[b, i] * phase


def apply_pauli_rows(cplx[:, ::1] psi, int n, int target, const int8_t[::1] choice):
    """Row ``b`` gets I, X, Y or Z on ``target`` according to ``choice[b]``."""
    cdef int64_t dim = psi.shape[1]
    cdef int64_t tbit = (<int64_t>1) << (n - 1 - target)
    cdef Py_ssize_t b, nb = psi.shape[0]
    cdef int64_t i, j
    cdef cplx a0, a1
    cdef int8_t c
    with nogil:
        for b in range(nb):
            c = choice[b]
            if c == 0:
                continue
            for i in range(dim):
                if i & tbit:
                    continue
                j = i | tbit
                a0 = psi[b, i]
                a1 = psi[b, j]
                if c == 1:
                    psi[b, i] = a1
                    psi[b, j] = a0
                elif c == 2:
                    psi[b, i] = -1j * a1
                    psi[b, j] = 1j * a0
                else:
                    psi[b, j] = -a1


def apply_kraus_1q(cplx[:, ::1] rho, int n, int target, const cplx[:, :, ::1] kraus):
    """rho <- sum_k K_k rho K_k^dagger with every K_k acting on ``target``."""
    cdef int64_t dim = rho.shape[0]
    cdef int64_t tbit = (<int64_t>1) << (n - 1 - target)
    cdef Py_ssize_t k, nk = kraus.shape[0]
    cdef int64_t r, c, r1, c1
    cdef cplx x00, x01, x10, x11, m00, m01, m10, m11
    cdef cplx y00, y01, y10, y11, t00, t01, t10, t11
    with nogil:
        for r in range(dim):
            if r & tbit:
                continue
            r1 = r | tbit
            for c in range(dim):
                if c & tbit:
                    continue
                c1 = c | tbit
                x00 = rho[r, c]
                x01 = rho[r, c1]
                x10 = rho[r1, c]
                x11 = rho[r1, c1]
                y00 = 0
                y01 = 0
                y10 = 0
                y11 = 0
                for k in range(nk):
                    m00 = kraus[k, 0, 0]
                    m01 = kraus[k, 0, 1]
                    m10 = kraus[k, 1, 0]
                    m11 = kraus[k, 1, 1]
                    # t = K x
                    t00 = m00 * x00 + m01 * x10
                    t01 = m00 * x01 + m01 * x11
                    t10 = m10 * x00 + m11 * x10
                    t11 = m10 * x01 + m11 * x11
                    # y += t K^dagger
                    y00 = y00 + t00 * m00.conjugate() + t01 * m01.conjugate()
                    y01 = y01 + t00 * m10.conjugate() + t01 * m11.conjugate()
                    y10 = y10 + t10 * m00.conjugate() + t11 * m01.conjugate()
                    y11 = y11 + t10 * m10.conjugate() + t11 * m11.conjugate()
                rho[r, c] = y00
                rho[r, c1] = y01
                rho[r1, c] = y10
                rho[r1, c1] = y11
