"""Nonlinear entanglement witness built from local observable families.

For subsystem dimension d the observable family consists of the identity,
the d-1 diagonal observables lam_i = |0><0| - |i><i| (i >= 1), and the
off-diagonal pair mu_1 = |0><1| + |1><0|, mu_2 = i|0><1| - i|1><0|.  A
local frame (u, v) conjugates each observable.  Three correlation
operators H, P, Q are fixed weighted sums of products of these
observables; every separable state satisfies <H>^2 >= <P>^2 + <Q>^2 in
every frame, so w = <H>^2 - <P>^2 - <Q>^2 < 0 certifies entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .qstate import TAU_UNIT, BipartiteDims, DensityMatrix, _frozen

TAU_VIOL = 1e-10  # w below -TAU_VIOL counts as a violation


class NumericResidueError(RuntimeError):
    """An expectation value came out with a non-negligible imaginary part."""


@dataclass(frozen=True)
class ObservableBasis:
    """Unrotated observable family for one subsystem of dimension d.

    ``lambdas[0]`` is the identity; ``lambdas[i]`` is |0><0| - |i><i| for
    i >= 1.  ``mu1`` and ``mu2`` act on the |0>, |1> plane.  Note mu2
    equals minus the usual Pauli Y on that plane; the sign cancels in the
    mu2 (x) mu2 product, which is all the witness uses.
    """

    d: int
    lambdas: tuple[np.ndarray, ...]
    mu1: np.ndarray
    mu2: np.ndarray


@dataclass(frozen=True)
class RotatedObservables:
    """Observable family conjugated by a local unitary frame u."""

    d: int
    u: np.ndarray
    lambdas: tuple[np.ndarray, ...]
    mu1: np.ndarray
    mu2: np.ndarray


@dataclass(frozen=True)
class WitnessOperators:
    """The three correlation operators for dims (m, n) in a frame (u, v)."""

    dims: BipartiteDims
    u: np.ndarray
    v: np.ndarray
    h: np.ndarray
    p: np.ndarray
    q: np.ndarray


@dataclass(frozen=True)
class WitnessEvaluation:
    """Expectation values of H, P, Q on a state plus the witness value.

    ``w_val = h_val**2 - p_val**2 - q_val**2``; ``violated`` is true when
    w_val < -TAU_VIOL, which certifies entanglement.
    """

    h_val: float
    p_val: float
    q_val: float
    w_val: float
    violated: bool


@lru_cache(maxsize=32)
def build_base_observables(d: int) -> ObservableBasis:
    """Construct the unrotated observable family for dimension d >= 2."""
    if d < 2:
        raise ValueError(f"observable family needs dimension >= 2, got {d}")
    lambdas = [np.eye(d, dtype=complex)]
    for i in range(1, d):
        mat = np.zeros((d, d), dtype=complex)
        mat[0, 0] = 1.0
        mat[i, i] = -1.0
        lambdas.append(mat)
    mu1 = np.zeros((d, d), dtype=complex)
    mu1[0, 1] = 1.0
    mu1[1, 0] = 1.0
    mu2 = np.zeros((d, d), dtype=complex)
    mu2[0, 1] = 1j
    mu2[1, 0] = -1j
    return ObservableBasis(d, tuple(_frozen(x) for x in lambdas), _frozen(mu1), _frozen(mu2))


def _check_unitary(u: np.ndarray, d: int, name: str) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"{name} has shape {u.shape}, expected ({d}, {d})")
    residue = float(np.max(np.abs(u @ u.conj().T - np.eye(d))))
    if residue > TAU_UNIT:
        raise ValueError(f"{name} is not unitary: residue {residue:.3e}")
    return u


def rotate_observables(basis: ObservableBasis, u: np.ndarray) -> RotatedObservables:
    """Conjugate every observable in the family by a unitary frame u."""
    u = _check_unitary(u, basis.d, "frame")
    ud = u.conj().T
    lams = tuple(_frozen(u @ x @ ud) for x in basis.lambdas)
    return RotatedObservables(basis.d, _frozen(u), lams, _frozen(u @ basis.mu1 @ ud), _frozen(u @ basis.mu2 @ ud))


def build_hpq(dims: BipartiteDims, u: np.ndarray | None = None, v: np.ndarray | None = None) -> WitnessOperators:
    """Build the correlation operators H, P, Q for dims (m, n).

    H = (1/(m n)) sum_{i,j} (1 - (m/2) d_{i1} - (n/2) d_{j1}) A_i (x) B_j,
    P = (1/(2 m^2 n^2)) sum_{i,j} (m d_{i1} - n d_{j1}) A_i (x) B_j,
    Q = (1/16) (A'_1 (x) B'_1 - A'_2 (x) B'_2),

    where A_i, B_j are the diagonal family rotated by u and v, and A'_k,
    B'_k the rotated off-diagonal pair.  Identity frames when u or v is
    None.  Tr H = 1 and Tr P = Tr Q = 0.
    """
    m, n = dims.m, dims.n
    u = np.eye(m, dtype=complex) if u is None else _check_unitary(u, m, "u")
    v = np.eye(n, dtype=complex) if v is None else _check_unitary(v, n, "v")
    rot_a = rotate_observables(build_base_observables(m), u)
    rot_b = rotate_observables(build_base_observables(n), v)
    h_op = np.zeros((m * n, m * n), dtype=complex)
    p_op = np.zeros_like(h_op)
    for i in range(m):
        for j in range(n):
            kron_ij = np.kron(rot_a.lambdas[i], rot_b.lambdas[j])
            h_op += (1.0 - (m / 2.0) * (i == 1) - (n / 2.0) * (j == 1)) * kron_ij
            p_op += (m * (i == 1) - n * (j == 1)) * kron_ij
    h_op /= m * n
    p_op /= 2.0 * m * m * n * n
    q_op = (np.kron(rot_a.mu1, rot_b.mu1) - np.kron(rot_a.mu2, rot_b.mu2)) / 16.0
    return WitnessOperators(dims, _frozen(u), _frozen(v), _frozen(h_op), _frozen(p_op), _frozen(q_op))


@lru_cache(maxsize=32)
def identity_operators(m: int, n: int) -> WitnessOperators:
    """Identity-frame H, P, Q for dims (m, n), cached."""
    return build_hpq(BipartiteDims(m, n))


def _real_expectation(rho: np.ndarray, op: np.ndarray, residue_tol: float = 1e-10) -> float:
    val = complex(np.trace(rho @ op))
    if abs(val.imag) > residue_tol:
        raise NumericResidueError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def evaluate_witness(
    rho: DensityMatrix,
    u: np.ndarray | None = None,
    v: np.ndarray | None = None,
    ops: WitnessOperators | None = None,
) -> WitnessEvaluation:
    """Evaluate the witness on a state in a local frame (u, v).

    Passing a prebuilt ``ops`` skips the operator construction; otherwise
    the operators are built from (u, v), with identity frames by default.
    Imaginary residues beyond 1e-10 raise NumericResidueError since the
    operators are Hermitian by construction.
    """
    if ops is None:
        ops = build_hpq(rho.dims, u, v)
    elif ops.dims != rho.dims:
        raise ValueError(f"operator dims {ops.dims} do not match state dims {rho.dims}")
    h = _real_expectation(rho.matrix, ops.h)
    p = _real_expectation(rho.matrix, ops.p)
    q = _real_expectation(rho.matrix, ops.q)
    w = h * h - p * p - q * q
    return WitnessEvaluation(h, p, q, w, bool(w < -TAU_VIOL))


def pure_product_closed_form(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Identity-frame witness terms of a pure product state from amplitudes.

    For |xi> = |a> (x) |b> the expectation values reduce to closed forms
    in the first two amplitudes of each factor:

        h = (|a0 b1|^2 + |a1 b0|^2) / 2
        <P>^2 + <Q>^2 = (|a0 b1|^2 - |a1 b0|^2)^2 / (4 m^2 n^2)
                        + Re(a0 conj(a1) b0 conj(b1))^2 / 16

    Returns (h, <P>^2 + <Q>^2).  The bound h^2 >= <P>^2 + <Q>^2 holds for
    every product state; it follows from (x+y)^2 >= (x-y)^2 and
    Re(z)^2 <= |z|^2 = x y, and the operator prefactors only shrink the
    right-hand side further.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    m, n = a.size, b.size
    if m < 2 or n < 2:
        raise ValueError("both factors need dimension >= 2")
    x = abs(a[0] * b[1]) ** 2
    y = abs(a[1] * b[0]) ** 2
    z = a[0] * np.conj(a[1]) * b[0] * np.conj(b[1])
    h = (x + y) / 2.0
    pq_sq = (x - y) ** 2 / (4.0 * m * m * n * n) + float(np.real(z)) ** 2 / 16.0
    return float(h), float(pq_sq)


def weighted_violation(ev: WitnessEvaluation, dims: BipartiteDims) -> float:
    """Violation of the dimension-weighted inequality, positive when violated.

    Returns (m n)^2 <P>^2 + 16 <Q>^2 - <H>^2.  The weighted inequality
    <H>^2 >= (m n)^2 <P>^2 + 16 <Q>^2 also holds for every separable
    state (on pure products the right-hand side becomes
    (x - y)^2 / 4 + Re(z)^2 <= h^2) and is strictly stronger than the
    unweighted one, detecting strictly more entangled states.
    """
    mn = dims.m * dims.n
    return float(mn * mn * ev.p_val**2 + 16.0 * ev.q_val**2 - ev.h_val**2)


@lru_cache(maxsize=1)
def _qutrit_test_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    basis = build_base_observables(3)
    l0, l1, l2 = basis.lambdas
    m_op = (
        2 * np.kron(l0, l0) - np.kron(l0, l1) + 2 * np.kron(l0, l2)
        - np.kron(l1, l0) - 4 * np.kron(l1, l1) - np.kron(l1, l2)
        + 2 * np.kron(l2, l0) - np.kron(l2, l1) + 2 * np.kron(l2, l2)
    )
    n_op = np.kron(l0, l1) - np.kron(l1, l0) - np.kron(l1, l2) + np.kron(l2, l1)
    mu_op = np.kron(basis.mu1, basis.mu1) - np.kron(basis.mu2, basis.mu2)
    return _frozen(m_op), _frozen(n_op), _frozen(mu_op)


def weighted_qutrit_sides(rho: DensityMatrix) -> tuple[float, float]:
    """Sides of the dimension-weighted witness inequality for 3 (x) 3 states.

    Evaluates lhs = 4 <M>^2 and rhs = 36 <N>^2 + 81 <Y>^2 in the
    unrotated frame, where M, N are fixed integer-weighted sums of
    diagonal-observable products and Y = mu1 (x) mu1 - mu2 (x) mu2.  In
    terms of the correlation operators, M = 18 H, N = -54 P and
    Y = 16 Q, so lhs >= rhs is exactly the weighted inequality
    <H>^2 >= 81 <P>^2 + 16 <Q>^2.  Separable states satisfy it;
    lhs < rhs certifies entanglement.
    """
    if (rho.dims.m, rho.dims.n) != (3, 3):
        raise ValueError(f"weighted qutrit test needs dims (3, 3), got ({rho.dims.m}, {rho.dims.n})")
    m_op, n_op, mu_op = _qutrit_test_operators()
    m_val = _real_expectation(rho.matrix, m_op)
    n_val = _real_expectation(rho.matrix, n_op)
    y_val = _real_expectation(rho.matrix, mu_op)
    return 4.0 * m_val**2, 36.0 * n_val**2 + 81.0 * y_val**2
