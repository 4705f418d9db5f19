"""NumPy implementations of the objective kernels.

Mirrors ``_core`` exactly; selected at import when the extension is absent
(or when SYMORB_KERNELS=python).  Also serves as the oracle the compiled
backend is tested against.
"""

from __future__ import annotations

import numpy as np

_SYSY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.float64
)


def reduced_density(tables, coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.complex128)
    padded = np.concatenate([c, [0.0 + 0.0j]])
    V = (tables.slot_amp * padded[tables.slot_coeff]).reshape(
        tables.traced_dim, tables.kept_dim
    )
    rho = V.T @ V.conj()
    trace = rho.trace().real
    if trace <= 0:
        raise ZeroDivisionError("zero-norm state in objective")
    return rho / trace


_SQRT_NOISE_REL = 1e-13  # keep in lockstep with quantum.SQRT_NOISE_REL


def _snap(w: np.ndarray) -> np.ndarray:
    top = max(float(w.max()), 0.0)
    return np.where(w > _SQRT_NOISE_REL * top, w, 0.0)


def concurrence_signed(tables, coeffs: np.ndarray) -> float:
    rho = reduced_density(tables, coeffs)
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(_snap(w))) @ v.conj().T
    herm = sqrt_rho @ _SYSY @ rho.conj() @ _SYSY @ sqrt_rho
    lam = np.sqrt(_snap(np.linalg.eigvalsh(herm)))
    return float(2.0 * lam[-1] - lam.sum())


def negativity_signed(tables, pt_map: np.ndarray, coeffs: np.ndarray) -> float:
    rho = reduced_density(tables, coeffs)
    A = tables.kept_dim
    pt = rho.reshape(-1)[pt_map].reshape(A, A)
    w = np.linalg.eigvalsh(pt)
    neg = float(np.clip(-w, 0.0, None).sum())
    # on the PPT interior all eigenvalues are positive; -lambda_min < 0
    # keeps slope toward the boundary
    return neg if neg > 0.0 else float(-w[0])


def entropy_value(tables, coeffs: np.ndarray) -> float:
    rho = reduced_density(tables, coeffs)
    w = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    w = w[w > 1e-15]
    return float(-(w * np.log2(w)).sum())
