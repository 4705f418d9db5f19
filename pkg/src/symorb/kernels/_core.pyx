# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled objective kernels: sector coefficients -> rho_x -> measure.

Matrices are stored column-major (entry (a,b) at a + A*b) so LAPACK's zheev
can be called without copies.  Semantics match kernels._reference exactly.
"""

from libc.math cimport log2, sqrt
from scipy.linalg.cython_lapack cimport zheev

DEF MAXA = 32          # largest reduced dimension served by this backend
DEF LWORK = 4 * MAXA
DEF LRWORK = 3 * MAXA

cdef double _EIG_CLIP = 1e-15

# sigma_y (x) sigma_y, real symmetric, column-major 4x4
cdef double _SYSY[16]
_SYSY[:] = [0, 0, 0, -1,
            0, 0, 1, 0,
            0, 1, 0, 0,
            -1, 0, 0, 0]


cdef inline int _build_rho(const long long[::1] slot_coeff,
                           const double complex[::1] slot_amp,
                           int traced_dim, int kept_dim,
                           const double complex[::1] coeffs,
                           double complex *rho) except -1:
    """Accumulate the trace-normalized reduced density matrix."""
    cdef int k, a, b, base
    cdef long long s
    cdef double complex v[MAXA]
    cdef double complex vb
    cdef double trace = 0.0
    for a in range(kept_dim * kept_dim):
        rho[a] = 0
    for k in range(traced_dim):
        base = k * kept_dim
        for a in range(kept_dim):
            s = slot_coeff[base + a]
            if s >= 0:
                v[a] = slot_amp[base + a] * coeffs[s]
            else:
                v[a] = 0
        for b in range(kept_dim):
            vb = v[b].conjugate()
            for a in range(kept_dim):
                rho[a + kept_dim * b] = rho[a + kept_dim * b] + v[a] * vb
    for a in range(kept_dim):
        trace += rho[a + kept_dim * a].real
    if trace <= 0.0:
        raise ZeroDivisionError("zero-norm state in objective")
    for a in range(kept_dim * kept_dim):
        rho[a] = rho[a] / trace
    return 0


cdef inline int _eigvalsh(double complex *mat, int dim, double *w,
                          int want_vectors) except -1:
    """In-place zheev; ascending eigenvalues in w, vectors left in mat."""
    cdef char jobz = b'V' if want_vectors else b'N'
    cdef char uplo = b'L'
    cdef int n = dim, lda = dim, lwork = LWORK, info = 0
    cdef double complex work[LWORK]
    cdef double rwork[LRWORK]
    zheev(&jobz, &uplo, &n, mat, &lda, w, work, &lwork, rwork, &info)
    if info != 0:
        raise RuntimeError(f"zheev failed with info={info}")
    return 0


def concurrence_signed(const long long[::1] slot_coeff,
                       const double complex[::1] slot_amp,
                       int traced_dim,
                       const double complex[::1] coeffs):
    """lambda1 - lambda2 - lambda3 - lambda4 for the two-qubit reduction."""
    cdef double complex rho[16]
    cdef double complex vecs[16]
    cdef double complex sq[16]
    cdef double complex t1[16]
    cdef double complex t2[16]
    cdef double w[4]
    cdef double lam[4]
    cdef int i, j, k
    cdef double complex acc
    cdef double root, total

    _build_rho(slot_coeff, slot_amp, traced_dim, 4, coeffs, rho)

    for i in range(16):
        vecs[i] = rho[i]
    _eigvalsh(vecs, 4, w, 1)
    # sqrt(rho) = V diag(sqrt(w)) V^dagger, noise modes snapped to zero
    # (keep the threshold in lockstep with quantum.SQRT_NOISE_REL)
    total = w[3] if w[3] > 0.0 else 0.0
    for j in range(4):
        w[j] = sqrt(w[j]) if w[j] > 1e-13 * total else 0.0
    for i in range(4):
        for k in range(4):
            acc = 0
            for j in range(4):
                acc = acc + vecs[i + 4 * j] * w[j] * vecs[k + 4 * j].conjugate()
            sq[i + 4 * k] = acc
    # t1 = SYSY @ conj(rho); t2 = t1 @ SYSY
    for j in range(4):
        for i in range(4):
            acc = 0
            for k in range(4):
                acc = acc + _SYSY[i + 4 * k] * rho[k + 4 * j].conjugate()
            t1[i + 4 * j] = acc
    for j in range(4):
        for i in range(4):
            acc = 0
            for k in range(4):
                acc = acc + t1[i + 4 * k] * _SYSY[k + 4 * j]
            t2[i + 4 * j] = acc
    # t1 = sq @ t2; rho_tilde = t1 @ sq (reuse t2)
    for j in range(4):
        for i in range(4):
            acc = 0
            for k in range(4):
                acc = acc + sq[i + 4 * k] * t2[k + 4 * j]
            t1[i + 4 * j] = acc
    for j in range(4):
        for i in range(4):
            acc = 0
            for k in range(4):
                acc = acc + t1[i + 4 * k] * sq[k + 4 * j]
            t2[i + 4 * j] = acc
    _eigvalsh(t2, 4, w, 0)
    total = w[3] if w[3] > 0.0 else 0.0
    for j in range(4):
        lam[j] = sqrt(w[j]) if w[j] > 1e-13 * total else 0.0
    total = 0.0
    for j in range(4):
        total += lam[j]
    return 2.0 * lam[3] - total


def negativity_signed(const long long[::1] slot_coeff,
                      const double complex[::1] slot_amp,
                      int traced_dim, int kept_dim,
                      const long long[::1] pt_map,
                      const double complex[::1] coeffs):
    """Sum of |negative eigenvalues| of the partial transpose, else the
    least (nonpositive) eigenvalue."""
    if kept_dim > MAXA:
        raise ValueError("reduction too large for the compiled backend")
    cdef double complex rho[MAXA * MAXA]
    cdef double complex pt[MAXA * MAXA]
    cdef double w[MAXA]
    cdef int a, b, sa, sb
    cdef long long src
    cdef double neg = 0.0

    _build_rho(slot_coeff, slot_amp, traced_dim, kept_dim, coeffs, rho)
    for a in range(kept_dim):
        for b in range(kept_dim):
            src = pt_map[a * kept_dim + b]
            sa = <int> (src // kept_dim)
            sb = <int> (src % kept_dim)
            pt[a + kept_dim * b] = rho[sa + kept_dim * sb]
    _eigvalsh(pt, kept_dim, w, 0)
    for a in range(kept_dim):
        if w[a] < 0.0:
            neg -= w[a]
    if neg > 0.0:
        return neg
    return -w[0]


def entropy_value(const long long[::1] slot_coeff,
                  const double complex[::1] slot_amp,
                  int traced_dim, int kept_dim,
                  const double complex[::1] coeffs):
    """Von Neumann entropy (base 2) of the reduced state."""
    if kept_dim > MAXA:
        raise ValueError("reduction too large for the compiled backend")
    cdef double complex rho[MAXA * MAXA]
    cdef double w[MAXA]
    cdef int a
    cdef double total = 0.0

    _build_rho(slot_coeff, slot_amp, traced_dim, kept_dim, coeffs, rho)
    _eigvalsh(rho, kept_dim, w, 0)
    for a in range(kept_dim):
        if w[a] > _EIG_CLIP:
            total -= w[a] * log2(w[a])
    return total
