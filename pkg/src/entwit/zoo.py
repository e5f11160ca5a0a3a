"""Reference state families and random-state generators."""

from __future__ import annotations

import warnings

import numpy as np

from .qstate import (
    TAU_PSD,
    BipartiteDims,
    DensityMatrix,
    PureState,
    validate_density,
)


def max_entangled(n: int) -> PureState:
    """Maximally entangled state (1/sqrt(n)) sum_i |i i> on n (x) n."""
    dims = BipartiteDims(n, n)
    vec = np.zeros(n * n, dtype=complex)
    for i in range(n):
        vec[n * i + i] = 1.0 / np.sqrt(n)
    return PureState(dims, vec)


def horodecki_state(alpha: float) -> DensityMatrix:
    """One-parameter 3 (x) 3 Horodecki family, alpha in [2, 5].

    sigma_alpha = (2/7) P_+ + (alpha/7) sigma_plus + ((5 - alpha)/7) sigma_minus

    with P_+ the maximally entangled projector, sigma_plus the uniform
    mixture of |01>, |12>, |20| and sigma_minus of |10>, |21>, |02>.
    Separable for alpha <= 3, bound entangled (PPT) for 3 < alpha <= 4,
    free entangled for alpha > 4.
    """
    if not 2.0 <= alpha <= 5.0:
        raise ValueError(f"alpha must lie in [2, 5], got {alpha}")
    dims = BipartiteDims(3, 3)
    psi = max_entangled(3).amplitudes
    rho = (2.0 / 7.0) * np.outer(psi, psi.conj())
    plus = np.zeros((9, 9), dtype=complex)
    minus = np.zeros((9, 9), dtype=complex)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        plus[3 * i + j, 3 * i + j] = 1.0 / 3.0
        minus[3 * j + i, 3 * j + i] = 1.0 / 3.0
    rho = rho + (alpha / 7.0) * plus + ((5.0 - alpha) / 7.0) * minus
    return validate_density(rho, dims)


def isotropic_state(n: int, f: float) -> DensityMatrix:
    """Isotropic state on n (x) n with maximally entangled fraction f.

    rho = (1 - f)/(n^2 - 1) I + (n^2 f - 1)/(n^2 - 1) P_+, f in [0, 1].
    The overlap <psi_+|rho|psi_+> equals f exactly; the state is
    separable (and PPT) precisely when f <= 1/n.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fraction f must lie in [0, 1], got {f}")
    dims = BipartiteDims(n, n)
    psi = max_entangled(n).amplitudes
    rho = (1.0 - f) / (n * n - 1.0) * np.eye(n * n, dtype=complex)
    rho = rho + (n * n * f - 1.0) / (n * n - 1.0) * np.outer(psi, psi.conj())
    return validate_density(rho, dims)


def _swap_operator(n: int) -> np.ndarray:
    v = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            v[n * i + j, n * j + i] = 1.0
    return v


def werner_state(n: int, f: float) -> DensityMatrix:
    """Werner family on n (x) n parametrized by f in [-1, 1].

    rho = (n - f)/(n^3 - n) I + (n f - 1)/(n^3 - n) V with V the swap
    operator.  Symmetric-subspace weight per state (1 + f)/(n (n + 1)),
    antisymmetric (1 - f)/(n (n - 1)); entangled (NPT) exactly when
    f < 0.  At n = 2, f = -1 this is the singlet projector.

    Note f is a formula parameter, not the maximally entangled overlap:
    <psi_+|rho|psi_+> evaluates to (1 + f)/(n (n + 1)).
    """
    if not -1.0 <= f <= 1.0:
        raise ValueError(f"parameter f must lie in [-1, 1], got {f}")
    dims = BipartiteDims(n, n)
    rho = (n - f) / (n**3 - n) * np.eye(n * n, dtype=complex)
    rho = rho + (n * f - 1.0) / (n**3 - n) * _swap_operator(n)
    return validate_density(rho, dims)


def swap01_unitary(d: int) -> np.ndarray:
    """Unitary exchanging |0> and |1>, identity elsewhere.

    This is the scan frame under which the Werner family shows its
    closed-form violation (applied to the first subsystem, identity on
    the second).
    """
    u = np.eye(d, dtype=complex)
    u[0, 0] = u[1, 1] = 0.0
    u[0, 1] = u[1, 0] = 1.0
    return u


def example4_state(p: float) -> DensityMatrix:
    """Fixed 4 (x) 4 family used by the filtering demonstration, p in (0, 1].

    Built term by term from its defining expansion: six diagonal terms
    with weight p/6 on |00>..|12>, six off-diagonal terms with weight
    -p/6 pairing (00, 12), (01, 12), (10, 11), and weight (1 - p)/2 on
    |22> and |33>.  As written the matrix is Hermitian with unit trace
    but is not positive semidefinite for p > 0: the minimal eigenvalue
    is (p/6)(1 - sqrt(2)).  The constructor emits a warning reporting
    the offending eigenvalue instead of rejecting, so the downstream
    filtering analysis can still be carried out.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"parameter p must lie in (0, 1], got {p}")
    dims = BipartiteDims(4, 4)
    rho = np.zeros((16, 16), dtype=complex)

    def idx(i: int, j: int) -> int:
        return 4 * i + j

    for i, j in ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)):
        rho[idx(i, j), idx(i, j)] += p / 6.0
    pairs = (
        ((0, 0), (1, 2)),
        ((0, 1), (1, 2)),
        ((1, 2), (0, 0)),
        ((1, 2), (0, 1)),
        ((1, 0), (1, 1)),
        ((1, 1), (1, 0)),
    )
    for (i, j), (k, l) in pairs:
        rho[idx(i, j), idx(k, l)] += -p / 6.0
    rho[idx(2, 2), idx(2, 2)] += (1.0 - p) / 2.0
    rho[idx(3, 3), idx(3, 3)] += (1.0 - p) / 2.0

    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < -TAU_PSD:
        warnings.warn(
            f"example4_state(p={p}) is not positive semidefinite: "
            f"min eigenvalue {min_eig:.6e} (analytically (p/6)(1 - sqrt(2)))",
            UserWarning,
            stacklevel=2,
        )
    return DensityMatrix(dims, rho)


def random_pure(dims: BipartiteDims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state on the full bipartite space."""
    vec = rng.standard_normal(dims.prod) + 1j * rng.standard_normal(dims.prod)
    return PureState(dims, vec / np.linalg.norm(vec))


def random_product_pure(dims: BipartiteDims, rng: np.random.Generator) -> PureState:
    """Haar-random product pure state |a> (x) |b>."""
    a = rng.standard_normal(dims.m) + 1j * rng.standard_normal(dims.m)
    b = rng.standard_normal(dims.n) + 1j * rng.standard_normal(dims.n)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    return PureState(dims, np.kron(a, b))


def random_separable(dims: BipartiteDims, k: int, rng: np.random.Generator) -> DensityMatrix:
    """Random separable state: Dirichlet mixture of k product pure states."""
    if k < 1:
        raise ValueError(f"component count k must be >= 1, got {k}")
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((dims.prod, dims.prod), dtype=complex)
    for w in weights:
        vec = random_product_pure(dims, rng).amplitudes
        rho += w * np.outer(vec, vec.conj())
    return validate_density(rho, dims)


def random_mixture(dims: BipartiteDims, k: int, rng: np.random.Generator) -> DensityMatrix:
    """Random mixed state: Dirichlet mixture of k Haar pure states.

    States from this ensemble may be separable or entangled; pair with
    ppt_check for ground truth in 2x2 and 2x3.
    """
    if k < 1:
        raise ValueError(f"component count k must be >= 1, got {k}")
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((dims.prod, dims.prod), dtype=complex)
    for w in weights:
        vec = random_pure(dims, rng).amplitudes
        rho += w * np.outer(vec, vec.conj())
    return validate_density(rho, dims)
