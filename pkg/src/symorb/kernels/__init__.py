"""Hot objective kernels for the maximizer: sector coefficients -> reduced
density matrix -> measure value, evaluated millions of times per search.

Two interchangeable backends implement the same functions:

* ``_core``      - Cython extension calling LAPACK directly (built at
                   install time; optional),
* ``_reference`` - pure NumPy, always available.

The compiled backend is selected at import when present.  Set the
environment variable ``SYMORB_KERNELS=python`` to force the fallback or
``SYMORB_KERNELS=compiled`` to require the extension.

All three objectives return *signed* values: where the measure is exactly
zero on an open set (concurrence, negativity), the signed variant continues
through zero so a local search retains slope on the plateau.  The positive
part equals the measure; callers report ``max(0, value)`` recomputed through
the reference quantum layer.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
import numpy as np

from ..errors import InvalidInputError
from ..perm import Subset
from . import _reference

_COMPILED_MAX_DIM = 32

_choice = os.environ.get("SYMORB_KERNELS", "auto").lower()
if _choice not in ("auto", "compiled", "python"):
    raise InvalidInputError(f"SYMORB_KERNELS must be auto|compiled|python, got {_choice!r}")

_core = None
if _choice in ("auto", "compiled"):
    try:
        import importlib

        _core = importlib.import_module(__name__ + "._core")
    except ImportError:
        _core = None
        if _choice == "compiled":
            raise ImportError(
                "SYMORB_KERNELS=compiled but the extension is not built; "
                "reinstall with a working C toolchain"
            )

BACKEND = "compiled" if _core is not None else "python"


def compiled_available() -> bool:
    return _core is not None


@dataclass(frozen=True)
class MeasureTables:
    """Packed map from sector coefficients to the reduced state on x.

    Slot j = k*A + a holds the one basis vector (if any) supporting the
    global ket whose digits on x give a and on the complement give k:
    ``slot_coeff[j]`` is its coefficient index (-1 for none) and
    ``slot_amp[j]`` its amplitude there.  Each global ket lies in at most
    one orbit, hence at most one basis vector per slot."""

    slot_coeff: np.ndarray
    slot_amp: np.ndarray
    traced_dim: int
    kept_dim: int
    sector_dim: int


def build_measure_tables(basis, x) -> MeasureTables:
    """Precompute the coefficient->rho_x map for one sector and subset."""
    n = basis.group.n
    d = basis.d
    x = Subset(x, n=n)
    if not x:
        raise InvalidInputError("x must be nonempty")
    kept_pos = [v - 1 for v in x]
    traced_pos = [p for p in range(n) if p not in kept_pos]
    A = d ** len(kept_pos)
    K = d ** len(traced_pos)
    slot_coeff = np.full(K * A, -1, dtype=np.int64)
    slot_amp = np.zeros(K * A, dtype=np.complex128)
    strides = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for s, (indices, amps) in enumerate(basis.vectors):
        digits = (indices[:, None] // strides[None, :]) % d
        a = np.zeros(len(indices), dtype=np.int64)
        for p in kept_pos:
            a = a * d + digits[:, p]
        k = np.zeros(len(indices), dtype=np.int64)
        for p in traced_pos:
            k = k * d + digits[:, p]
        slots = k * A + a
        if np.any(slot_coeff[slots] != -1):
            raise AssertionError("overlapping sector orbits; basis is broken")
        slot_coeff[slots] = s
        slot_amp[slots] = amps
    return MeasureTables(
        slot_coeff=slot_coeff,
        slot_amp=slot_amp,
        traced_dim=K,
        kept_dim=A,
        sector_dim=basis.dim,
    )


def partial_transpose_map(x, part, d: int) -> np.ndarray:
    """Row-major index permutation realizing the partial transpose over
    ``part`` on a d^m x d^m matrix ordered by ascending labels of x:
    ``pt.flat[i] = rho.flat[map[i]]``."""
    x = Subset(x)
    part = Subset(part)
    if not part or not set(part) < set(x):
        raise InvalidInputError("part must be a nonempty proper subset of x")
    m = len(x)
    positions = [list(x).index(v) for v in part]
    A = d**m
    out = np.empty(A * A, dtype=np.int64)
    for a in range(A):
        da = [(a // d ** (m - 1 - p)) % d for p in range(m)]
        for b in range(A):
            db = [(b // d ** (m - 1 - p)) % d for p in range(m)]
            sa, sb = list(da), list(db)
            for p in positions:
                sa[p], sb[p] = sb[p], sa[p]
            src_a = 0
            src_b = 0
            for p in range(m):
                src_a = src_a * d + sa[p]
                src_b = src_b * d + sb[p]
            out[a * A + b] = src_a * A + src_b
    return out


def reduced_density(tables: MeasureTables, coeffs: np.ndarray) -> np.ndarray:
    """Trace-normalized rho_x for a sector coefficient vector (reference
    path; used for cross-checks and by the fallback backend)."""
    return _reference.reduced_density(tables, coeffs)


def concurrence_signed(tables: MeasureTables, coeffs: np.ndarray) -> float:
    """Wootters combination lambda1 - lambda2 - lambda3 - lambda4; equals
    the concurrence when positive."""
    if tables.kept_dim != 4:
        raise InvalidInputError("concurrence kernel needs a two-qubit reduction")
    if _core is not None:
        return _core.concurrence_signed(
            tables.slot_coeff, tables.slot_amp, tables.traced_dim, coeffs
        )
    return _reference.concurrence_signed(tables, coeffs)


def negativity_signed(
    tables: MeasureTables, pt_map: np.ndarray, coeffs: np.ndarray
) -> float:
    """Sum of |negative eigenvalues| of the partial transpose when any are
    negative, else the (nonpositive) least eigenvalue."""
    if _core is not None and tables.kept_dim <= _COMPILED_MAX_DIM:
        return _core.negativity_signed(
            tables.slot_coeff,
            tables.slot_amp,
            tables.traced_dim,
            tables.kept_dim,
            pt_map,
            coeffs,
        )
    return _reference.negativity_signed(tables, pt_map, coeffs)


def entropy_value(tables: MeasureTables, coeffs: np.ndarray) -> float:
    """Von Neumann entropy (base 2) of the reduced state."""
    if _core is not None and tables.kept_dim <= _COMPILED_MAX_DIM:
        return _core.entropy_value(
            tables.slot_coeff, tables.slot_amp, tables.traced_dim, tables.kept_dim, coeffs
        )
    return _reference.entropy_value(tables, coeffs)
