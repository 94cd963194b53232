"""Pure numpy implementations of the state kernels.

Same signatures and in-place semantics as the compiled ``_kernels`` module.
"""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=512)
def _pair_indices(dim, tbit, ctrl_mask):
    idx = np.arange(dim, dtype=np.int64)
    sel = idx[((idx & tbit) == 0) & ((idx & ctrl_mask) == ctrl_mask)]
    return sel, sel | tbit


@lru_cache(maxsize=512)
def _mask_indices(dim, mask):
    idx = np.arange(dim, dtype=np.int64)
    return idx[(idx & mask) == mask]


def apply_1q(psi, n, target, u, ctrl_mask):
    if not ctrl_mask and psi.flags.c_contiguous:
        # view as (rows, qubits above target, target bit, qubits below)
        v = psi.reshape(psi.shape[0], 1 << target, 2, -1)
        v[...] = np.matmul(u, v)
        return
    tbit = 1 << (n - 1 - target)
    i0, i1 = _pair_indices(psi.shape[1], tbit, int(ctrl_mask))
    a0 = psi[:, i0]
    a1 = psi[:, i1]
    psi[:, i0] = u[0, 0] * a0 + u[0, 1] * a1
    psi[:, i1] = u[1, 0] * a0 + u[1, 1] * a1


def apply_phase(psi, mask, phase):
    sel = _mask_indices(psi.shape[1], int(mask))
    psi[:, sel] *= phase


_PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def apply_pauli_rows(psi, n, target, choice):
    tbit = 1 << (n - 1 - target)
    i0, i1 = _pair_indices(psi.shape[1], tbit, 0)
    for c in (1, 2, 3):
        rows = np.flatnonzero(choice == c)
        if rows.size == 0:
            continue
        u = _PAULIS[c]
        sub0 = psi[np.ix_(rows, i0)]
        sub1 = psi[np.ix_(rows, i1)]
        psi[np.ix_(rows, i0)] = u[0, 0] * sub0 + u[0, 1] * sub1
        psi[np.ix_(rows, i1)] = u[1, 0] * sub0 + u[1, 1] * sub1


def apply_kraus_1q(rho, n, target, kraus):
    dim = rho.shape[0]
    hi = 1 << target
    lo = dim // (2 * hi)
    r = rho.reshape(hi, 2, lo, hi, 2, lo)
    out = np.einsum("kab,ibjlcm,kdc->iajldm", kraus, r, kraus.conj(), optimize=True)
    rho[...] = out.reshape(dim, dim)
