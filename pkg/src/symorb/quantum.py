"""The Hilbert-space layer: invariant character sectors of n qudits,
permutation action on states, partial traces, the three entanglement
measures, and the explicit state constructions (W, GHZ, Bell, weave).

Index convention: the ket tuple (i_1 .. i_n) with 1-based digits maps to
the flat index sum_k (i_k - 1) * d^(n-k) (big-endian).  Permutations act by
index relabeling only; no d^n x d^n matrices are ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .grouptheory import Character, PointPartition, characters
from .perm import PermGroup, Permutation, Subset

ATOL_STRUCT = 1e-12   # structural identities (norms, symmetry residuals)
ATOL_SPECTRAL = 1e-10  # spectral quantities (eigenvalues, measures)
DENSE_LIMIT = 2**20    # hard cap on dense statevector length d^n
MAP_BUDGET = 2**25     # cap on |G| * d^n index-map entries


def _check_dims(n: int, d: int):
    if n < 1 or d < 2:
        raise InvalidInputError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    if d**n > DENSE_LIMIT:
        raise ResourceLimitError(f"d^n = {d**n} exceeds dense budget {DENSE_LIMIT}")


def ket_index(ket: Sequence[int], d: int) -> int:
    """Flat index of a 1-based digit tuple."""
    ix = 0
    for v in ket:
        if not 1 <= v <= d:
            raise InvalidInputError(f"digit {v} out of range 1..{d}")
        ix = ix * d + (v - 1)
    return ix


def index_ket(ix: int, n: int, d: int) -> tuple[int, ...]:
    """Inverse of ket_index."""
    digits = []
    for _ in range(n):
        digits.append(ix % d + 1)
        ix //= d
    return tuple(reversed(digits))


@lru_cache(maxsize=512)
def _digit_table(n: int, d: int) -> np.ndarray:
    """(d^n, n) array of 0-based digits of every flat index."""
    idx = np.arange(d**n, dtype=np.int64)
    cols = [(idx // d ** (n - 1 - pos)) % d for pos in range(n)]
    return np.stack(cols, axis=1)


def permutation_index_map(g: Permutation, d: int) -> np.ndarray:
    """Array P with flat(g(ket)) = P[flat(ket)] for every ket."""
    n = g.n
    _check_dims(n, d)
    digits = _digit_table(n, d)
    ginv = g.inverse().images
    permuted = digits[:, [ginv[j] - 1 for j in range(n)]]
    strides = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return permuted @ strides


class StateVector:
    """A pure state of n qudits with a dense, unit-norm amplitude vector."""

    def __init__(self, n: int, d: int, amplitudes, normalize: bool = False):
        _check_dims(n, d)
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.size != d**n:
            raise InvalidInputError(f"expected {d**n} amplitudes, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if normalize:
            if norm == 0:
                raise InvalidInputError("cannot normalize the zero vector")
            amps /= norm
        elif abs(norm - 1.0) > 1e-9:
            raise InvalidInputError(f"state norm {norm} is not 1")
        amps.setflags(write=False)
        self.n = n
        self.d = d
        self.amplitudes = amps

    def amplitude(self, ket: Sequence[int]) -> complex:
        return complex(self.amplitudes[ket_index(ket, self.d)])

    def tensor_view(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StateVector":
        amps = [complex(re, im) for re, im in data["amplitudes"]]
        return cls(int(data["n"]), int(data["d"]), amps)

    def __repr__(self) -> str:
        return f"StateVector(n={self.n}, d={self.d})"


def permute_state(g: Permutation, psi: StateVector) -> StateVector:
    """U_g |psi>: the amplitude at index g(i) equals the input amplitude
    at i."""
    if g.n != psi.n:
        raise InvalidInputError(f"size mismatch: {g.n} vs {psi.n}")
    pmap = permutation_index_map(g, psi.d)
    out = np.empty_like(psi.amplitudes)
    out[pmap] = psi.amplitudes
    return StateVector(psi.n, psi.d, out)


class DensityMatrix:
    """Reduced state on an ascending-ordered label subset."""

    def __init__(self, labels: Subset, d: int, matrix):
        mat = np.asarray(matrix, dtype=np.complex128)
        dim = d ** len(labels)
        if mat.shape != (dim, dim):
            raise InvalidInputError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        if np.abs(mat - mat.conj().T).max() > 1e-9:
            raise InvalidInputError("matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > 1e-9:
            raise InvalidInputError(f"trace {np.trace(mat)} is not 1")
        mat.setflags(write=False)
        self.labels = Subset(labels)
        self.d = d
        self.matrix = mat

    @property
    def m(self) -> int:
        return len(self.labels)

    def eigenvalues(self) -> np.ndarray:
        w = np.linalg.eigvalsh(self.matrix)
        if w.min() < -1e-8:
            raise AssertionError(f"density matrix has eigenvalue {w.min()}")
        return np.clip(w, 0.0, None)

    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "d": self.d,
            "matrix": [
                [[float(v.real), float(v.imag)] for v in row] for row in self.matrix
            ],
        }

    def __repr__(self) -> str:
        return f"DensityMatrix(labels={tuple(self.labels)}, d={self.d})"


def partial_trace(psi: StateVector, keep) -> DensityMatrix:
    """rho_x = Tr over the complement of x of |psi><psi|, with subsystem
    order = ascending labels of x."""
    x = Subset(keep, n=psi.n)
    if not x:
        raise InvalidInputError("keep must be nonempty")
    n, d = psi.n, psi.d
    keep_axes = [v - 1 for v in x]
    other_axes = [i for i in range(n) if i not in keep_axes]
    tensor = psi.tensor_view().transpose(keep_axes + other_axes)
    mat = tensor.reshape(d ** len(x), d ** len(other_axes))
    rho = mat @ mat.conj().T
    return DensityMatrix(x, d, rho)


# --- invariant sectors ------------------------------------------------------


class SectorBasis:
    """Orthonormal basis of one character sector of the G-invariant space:
    one character-weighted orbit sum per compatible G-orbit of ket tuples.

    Vectors are stored sparsely as (flat indices, amplitudes)."""

    def __init__(self, group, d, character, vectors, orbit_reps):
        self.group = group
        self.d = d
        self.character = character
        self.vectors = vectors
        self.orbit_reps = orbit_reps

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def state_from_coefficients(self, coeffs) -> StateVector:
        c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
        if c.size != self.dim:
            raise InvalidInputError(f"expected {self.dim} coefficients")
        norm = np.linalg.norm(c)
        if norm == 0:
            raise InvalidInputError("zero coefficient vector")
        c = c / norm
        amps = np.zeros(self.d**self.group.n, dtype=np.complex128)
        for coeff, (idx, vals) in zip(c, self.vectors):
            amps[idx] += coeff * vals
        return StateVector(self.group.n, self.d, amps)

    def basis_state(self, j: int) -> StateVector:
        idx, vals = self.vectors[j]
        amps = np.zeros(self.d**self.group.n, dtype=np.complex128)
        amps[idx] = vals
        return StateVector(self.group.n, self.d, amps)


def sector_basis(G: PermGroup, d: int, chi: Character) -> SectorBasis:
    """Basis of the chi-sector: for each G-orbit of ket tuples whose
    stabilizer lies in ker(chi), the normalized sum of e^{-i theta_g}|g(k)>
    over the orbit.  Orbits with incompatible stabilizers contribute
    nothing."""
    n = G.n
    _check_dims(n, d)
    elements = G.elements
    if len(elements) * d**n > MAP_BUDGET:
        raise ResourceLimitError("group order times d^n exceeds map budget")
    maps = np.stack([permutation_index_map(g, d) for g in elements])
    # exact phases as integers modulo the common denominator
    denom = 1
    for g in elements:
        denom = denom * chi.turns(g).denominator // math.gcd(
            denom, chi.turns(g).denominator
        )
    turn_num = np.array(
        [int(chi.turns(g) * denom) % denom for g in elements], dtype=np.int64
    )
    phase_table = np.exp(-2j * np.pi * np.arange(denom) / denom)

    size = d**n
    visited = np.zeros(size, dtype=bool)
    vectors = []
    orbit_reps = []
    for rep in range(size):
        if visited[rep]:
            continue
        images = maps[:, rep]
        order = np.argsort(images, kind="stable")
        img_sorted = images[order]
        turn_sorted = turn_num[order]
        starts = np.ones(len(img_sorted), dtype=bool)
        starts[1:] = img_sorted[1:] != img_sorted[:-1]
        members = img_sorted[starts]
        visited[members] = True
        same = ~starts[1:]
        if np.any(turn_sorted[1:][same] != turn_sorted[:-1][same]):
            continue  # stabilizer not in ker(chi): orbit incompatible
        amps = phase_table[turn_sorted[starts]] / math.sqrt(len(members))
        member_order = np.argsort(members)
        vectors.append((members[member_order], amps[member_order]))
        orbit_reps.append(index_ket(rep, n, d))
    return SectorBasis(G, d, chi, vectors, orbit_reps)


def is_invariant(psi: StateVector, G: PermGroup, atol: float = ATOL_SPECTRAL) -> Optional[Character]:
    """The character chi with U_g psi = e^{i theta_g} psi for all g in G
    (within atol), or None if psi is not invariant up to phase."""
    if G.n != psi.n:
        raise InvalidInputError(f"size mismatch: {G.n} vs {psi.n}")
    # measure phases on the generators, snap to each character, verify fully
    for chi in characters(G):
        ok = True
        for g in G.elements:
            permuted = permute_state(g, psi)
            residual = permuted.amplitudes - chi.phase(g) * psi.amplitudes
            if np.abs(residual).max() > atol:
                ok = False
                break
        if ok:
            return chi
    return None


# --- measures ----------------------------------------------------------------

_SYSY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.float64
)


# Eigenvalues this far (relatively) below the top of the spectrum are
# treated as exact zeros before square roots.  sqrt amplifies level-1e-15
# noise to 3e-8, so without the snap two float paths to the same matrix can
# disagree in the Wootters lambdas at the 1e-8 scale.
SQRT_NOISE_REL = 1e-13


def _snap_spectrum(w: np.ndarray) -> np.ndarray:
    if w.min() < -1e-8:
        raise AssertionError(f"matrix has eigenvalue {w.min()}, not PSD")
    top = max(float(w.max()), 0.0)
    return np.where(w > SQRT_NOISE_REL * top, w, 0.0)


def _sqrt_psd(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    w = _snap_spectrum(w)
    return (v * np.sqrt(w)) @ v.conj().T


def wootters_lambdas(mat: np.ndarray) -> np.ndarray:
    """Descending square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy), computed through the Hermitian product
    sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho)."""
    sq = _sqrt_psd(mat)
    herm = sq @ _SYSY @ mat.conj() @ _SYSY @ sq
    w = _snap_spectrum(np.linalg.eigvalsh(herm))
    return np.sqrt(w)[::-1]


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state."""
    if rho.d != 2 or rho.m != 2:
        raise InvalidInputError("concurrence needs two qubits (d=2, m=2)")
    lam = wootters_lambdas(rho.matrix)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def partial_transpose(rho: DensityMatrix, part) -> np.ndarray:
    """Transpose over the subsystems of ``part`` (labels within rho.labels)."""
    part = Subset(part)
    labels = list(rho.labels)
    if not set(part) < set(labels) or not part:
        raise InvalidInputError(
            f"part {tuple(part)} must be a nonempty proper subset of {tuple(labels)}"
        )
    m, d = rho.m, rho.d
    positions = [labels.index(v) for v in part]
    tensor = rho.matrix.reshape((d,) * (2 * m))
    axes = list(range(2 * m))
    for p in positions:
        axes[p], axes[p + m] = axes[p + m], axes[p]
    return tensor.transpose(axes).reshape(d**m, d**m)


def negativity(rho: DensityMatrix, part) -> float:
    """Sum of |negative eigenvalues| of the partial transpose over part."""
    w = np.linalg.eigvalsh(partial_transpose(rho, part))
    return float(np.clip(-w, 0.0, None).sum())


def entropy_of_bipartition(psi: StateVector, x) -> float:
    """Von Neumann entropy (base 2) of rho_x for a pure input state."""
    rho = partial_trace(psi, x)
    w = rho.eigenvalues()
    w = w[w > ATOL_STRUCT]
    return float(-(w * np.log2(w)).sum())


@dataclass(frozen=True)
class Measure:
    """One of the three implemented entanglement measures.

    ``part`` is only meaningful for negativity: the labels (within x) on
    one side of the internal bipartition."""

    kind: str
    part: Optional[Subset] = None

    KINDS = ("concurrence", "negativity", "entropy")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidInputError(f"unknown measure {self.kind!r}")

    @staticmethod
    def concurrence() -> "Measure":
        return Measure("concurrence")

    @staticmethod
    def negativity(part) -> "Measure":
        return Measure("negativity", part=Subset(part))

    @staticmethod
    def entropy() -> "Measure":
        return Measure("entropy")

    def validate_for(self, x: Subset, d: int):
        if self.kind == "concurrence" and (d != 2 or len(x) != 2):
            raise InvalidInputError("concurrence needs d=2 and |x|=2")
        if self.kind == "negativity":
            if self.part is None:
                raise InvalidInputError("negativity needs a bipartition part")
            if not set(self.part) < set(x) or not self.part:
                raise InvalidInputError(
                    f"part {tuple(self.part)} must be a nonempty proper subset of x"
                )

    def default_part(self, x: Subset) -> Subset:
        return Subset(list(x)[: max(1, len(x) // 2)])

    def evaluate_rho(self, rho: DensityMatrix) -> float:
        if self.kind == "concurrence":
            return concurrence(rho)
        if self.kind == "negativity":
            return negativity(rho, self.part)
        w = rho.eigenvalues()
        w = w[w > ATOL_STRUCT]
        return float(-(w * np.log2(w)).sum())

    def evaluate(self, psi: StateVector, x) -> float:
        return self.evaluate_rho(partial_trace(psi, x))


# --- constructions -----------------------------------------------------------


def w_state(n: int) -> StateVector:
    """(1/sqrt n) sum over the n single-excitation kets |0..010..0>."""
    if n < 2:
        raise InvalidInputError("W state needs n >= 2")
    _check_dims(n, 2)
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n):
        amps[2**k] = 1 / math.sqrt(n)
    return StateVector(n, 2, amps)


def ghz_state(n: int, d: int = 2) -> StateVector:
    """(1/sqrt d) sum_j |j j .. j>."""
    if n < 2:
        raise InvalidInputError("GHZ state needs n >= 2")
    _check_dims(n, d)
    amps = np.zeros(d**n, dtype=np.complex128)
    stride = (d**n - 1) // (d - 1)
    for j in range(d):
        amps[j * stride] = 1 / math.sqrt(d)
    return StateVector(n, d, amps)


def bell_state() -> StateVector:
    """(|00> + |11>)/sqrt 2."""
    return ghz_state(2)


def weave_state(phi: StateVector, blocks: PointPartition, n: int) -> StateVector:
    """Place a copy of phi on the particles of each block: qubit j of phi
    goes to the j-th smallest label of the block.

    All blocks must have size phi.n and cover 1..n."""
    if blocks.n != n:
        raise InvalidInputError(f"partition covers 1..{blocks.n}, expected 1..{n}")
    sizes = blocks.block_sizes()
    if any(s != phi.n for s in sizes):
        raise InvalidInputError(f"block sizes {sizes} != state size {phi.n}")
    d = phi.d
    _check_dims(n, d)
    tensor = np.array(1.0, dtype=np.complex128)
    axis_labels: list[int] = []
    for block in blocks.blocks:
        tensor = np.tensordot(tensor, phi.tensor_view(), axes=0)
        axis_labels.extend(block)
    order = np.argsort(axis_labels, kind="stable")
    tensor = tensor.transpose(order)
    return StateVector(n, d, tensor.reshape(-1))


def permutation_matrix(g: Permutation, d: int) -> np.ndarray:
    """Dense unitary U_g on (C^d)^{tensor n}."""
    pmap = permutation_index_map(g, d)
    size = d**g.n
    mat = np.zeros((size, size), dtype=np.complex128)
    mat[pmap, np.arange(size)] = 1.0
    return mat
