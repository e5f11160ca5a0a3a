"""Bipartite state primitives.

Conventions used throughout the package:

- A bipartite system with dimensions (m, n) uses the product basis
  |i j> = |i> (x) |j| with the second index fastest, so the flat index of
  |i j> is i * n + j.  This matches the ordering of ``numpy.kron``.
- Density matrices are (m*n, m*n) complex arrays stored row-major.
- Partial transpose defaults to the first subsystem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Numerical tolerances shared by the validation and analysis routines.
TAU_HERM = 1e-10     # Hermiticity residue, max |rho - rho^dag|
TAU_TRACE = 1e-10    # |Tr rho - 1|
TAU_NORM = 1e-10     # pure-state norm residue
TAU_PSD = 1e-9       # most negative admissible eigenvalue
TAU_RANK = 1e-9      # Schmidt coefficients above this count toward the rank
TAU_UNIT = 1e-12     # unitarity residue, max |U U^dag - I|
TAU_RECON = 1e-10    # Schmidt reconstruction residue


class DensityValidationError(ValueError):
    """Raised when a candidate matrix fails density-matrix validation.

    The ``violations`` attribute lists (name, magnitude) pairs, one per
    failed invariant.
    """

    def __init__(self, violations: list[tuple[str, float]]):
        self.violations = violations
        detail = ", ".join(f"{name} (residue {mag:.3e})" for name, mag in violations)
        super().__init__(f"not a valid density matrix: {detail}")


@dataclass(frozen=True)
class BipartiteDims:
    """Subsystem dimensions (m, n) of a bipartite system, both at least 2."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ValueError(f"subsystem dimensions must be >= 2, got ({self.m}, {self.n})")

    @property
    def prod(self) -> int:
        return self.m * self.n


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """A normalized pure state on an (m, n) bipartite system.

    Parameters
    ----------
    dims : BipartiteDims
        Subsystem dimensions.
    amplitudes : np.ndarray
        Flat coefficient vector of length m * n in the |i j> basis.
    """

    dims: BipartiteDims
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = _frozen(self.amplitudes).reshape(-1)
        if vec.size != self.dims.prod:
            raise ValueError(f"amplitude vector has length {vec.size}, expected {self.dims.prod}")
        nrm = float(np.linalg.norm(vec))
        if abs(nrm - 1.0) > TAU_NORM:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", vec)

    def density(self) -> "DensityMatrix":
        """Projector |psi><psi| as a DensityMatrix."""
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Container for an (m*n, m*n) Hermitian matrix with bipartite dims.

    The container itself does not enforce positivity; use
    :func:`validate_density` as the checked entry point.
    """

    dims: BipartiteDims
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.shape != (self.dims.prod, self.dims.prod):
            raise ValueError(
                f"matrix shape {mat.shape} does not match dims ({self.dims.m}, {self.dims.n})"
            )
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt decomposition |psi> = (u (x) v) sum_k c_k |k k>.

    ``coefficients`` are non-negative and sorted in descending order;
    ``u`` and ``v`` are the local basis-change unitaries; ``rank`` counts
    coefficients above TAU_RANK.
    """

    dims: BipartiteDims
    coefficients: np.ndarray
    u: np.ndarray
    v: np.ndarray
    rank: int = field(default=0)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two vectors or two operators."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Trace out one subsystem of a bipartite density matrix.

    Parameters
    ----------
    rho : DensityMatrix
        Bipartite state with dims (m, n).
    subsystem : int
        1 traces out the first subsystem (returns an n x n matrix),
        2 traces out the second (returns m x m).
    """
    m, n = rho.dims.m, rho.dims.n
    r = rho.matrix.reshape(m, n, m, n)
    if subsystem == 1:
        return np.einsum("ijil->jl", r)
    if subsystem == 2:
        return np.einsum("ijkj->ik", r)
    raise ValueError(f"subsystem must be 1 or 2, got {subsystem}")


def partial_transpose(rho: DensityMatrix, subsystem: int = 1) -> np.ndarray:
    """Partial transpose of a bipartite matrix over one subsystem."""
    m, n = rho.dims.m, rho.dims.n
    r = rho.matrix.reshape(m, n, m, n)
    if subsystem == 1:
        return r.transpose(2, 1, 0, 3).reshape(m * n, m * n)
    if subsystem == 2:
        return r.transpose(0, 3, 2, 1).reshape(m * n, m * n)
    raise ValueError(f"subsystem must be 1 or 2, got {subsystem}")


def schmidt_decompose(psi: PureState) -> SchmidtForm:
    """Schmidt decomposition of a bipartite pure state via SVD.

    Returns local unitaries (u, v) and descending non-negative
    coefficients c_k such that (u^dag (x) v^dag)|psi> = sum_k c_k |k k>
    up to TAU_RECON.
    """
    m, n = psi.dims.m, psi.dims.n
    coeff = psi.amplitudes.reshape(m, n)
    u_mat, svals, vh = np.linalg.svd(coeff)
    v_mat = vh.T  # columns are the second-subsystem Schmidt vectors, conjugated
    rank = int(np.sum(svals > TAU_RANK))
    return SchmidtForm(psi.dims, _frozen(svals), _frozen(u_mat), _frozen(v_mat), rank)


def concurrence_pure(psi: PureState) -> float:
    """Concurrence sqrt(2 (1 - Tr rho_1^2)) of a bipartite pure state.

    For a two-term Schmidt form a|00> + b|11> this equals 2 a b.
    """
    red = partial_trace(psi.density(), 2)
    purity = float(np.trace(red @ red).real)
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def density_violations(matrix: np.ndarray, dims: BipartiteDims) -> list[tuple[str, float]]:
    """Check density-matrix invariants; return (name, magnitude) per failure.

    Checked invariants: DIMENSION, HERMITICITY (TAU_HERM), TRACE
    (TAU_TRACE) and POSITIVITY (eigenvalues above -TAU_PSD).
    """
    mat = np.asarray(matrix, dtype=complex)
    out: list[tuple[str, float]] = []
    if mat.shape != (dims.prod, dims.prod):
        return [("DIMENSION", float(abs(mat.size - dims.prod**2)))]
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    if herm > TAU_HERM:
        out.append(("HERMITICITY", herm))
    tr = float(abs(np.trace(mat) - 1.0))
    if tr > TAU_TRACE:
        out.append(("TRACE", tr))
    if herm <= TAU_HERM:
        evmin = float(np.linalg.eigvalsh(mat).min())
        if evmin < -TAU_PSD:
            out.append(("POSITIVITY", -evmin))
    return out


def validate_density(matrix: np.ndarray, dims: BipartiteDims) -> DensityMatrix:
    """Validate a candidate density matrix and wrap it.

    Raises
    ------
    DensityValidationError
        Listing every violated invariant with its magnitude.
    """
    violations = density_violations(matrix, dims)
    if violations:
        raise DensityValidationError(violations)
    return DensityMatrix(dims, np.asarray(matrix, dtype=complex))


def haar_random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a d x d unitary from the Haar measure.

    QR decomposition of a complex Ginibre matrix, with the R diagonal
    phases absorbed into Q so the distribution is exactly Haar.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return q * ph
