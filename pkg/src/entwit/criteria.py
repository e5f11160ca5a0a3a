"""Reference entanglement criteria used as oracles: PPT and reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qstate import TAU_PSD, DensityMatrix, partial_trace, partial_transpose


@dataclass(frozen=True)
class PptResult:
    """Outcome of the positive-partial-transpose test.

    NPT (a negative eigenvalue of the partial transpose) certifies
    entanglement in any dimension.  In 2x2 and 2x3 the converse also
    holds, so is_npt doubles as an exact separability oracle.

    Attributes
    ----------
    min_eigenvalue : float
        Smallest eigenvalue of the partially transposed matrix.
    is_npt : bool
        True when min_eigenvalue < -TAU_PSD.
    negativity : float
        Sum of the absolute values of the negative eigenvalues, a
        standard quantitative entanglement measure (0 for PPT states).
    """

    min_eigenvalue: float
    is_npt: bool
    negativity: float


class ReductionResult(NamedTuple):
    """Result of the reduction criterion, unpackable as a plain tuple."""

    min_eig_a: float
    min_eig_b: float
    violated: bool


def ppt_check(rho: DensityMatrix, subsystem: int = 1) -> PptResult:
    """Spectrum test of the partial transpose over the given subsystem.

    The NPT verdict is independent of which subsystem is transposed;
    subsystem 1 is the package-wide default convention.
    """
    pt = partial_transpose(rho, subsystem)
    eigs = np.linalg.eigvalsh(pt)
    min_eig = float(eigs[0])
    negativity = float(-eigs[eigs < 0.0].sum())
    return PptResult(min_eig, min_eig < -TAU_PSD, negativity)


def reduction_check(rho: DensityMatrix) -> ReductionResult:
    """Reduction criterion: rho_A (x) I - rho >= 0 and I (x) rho_B - rho >= 0.

    Returns the smallest eigenvalue of each operator; ``violated`` is
    True when either dips below -TAU_PSD.  Violation implies
    entanglement (and in fact distillability); the test is strictly
    weaker than PPT.
    """
    m, n = rho.dims.m, rho.dims.n
    rho_a = partial_trace(rho, 2)
    rho_b = partial_trace(rho, 1)
    op_a = np.kron(rho_a, np.eye(n, dtype=complex)) - rho.matrix
    op_b = np.kron(np.eye(m, dtype=complex), rho_b) - rho.matrix
    min_a = float(np.linalg.eigvalsh(op_a)[0])
    min_b = float(np.linalg.eigvalsh(op_b)[0])
    return ReductionResult(min_a, min_b, violated=min(min_a, min_b) < -TAU_PSD)
