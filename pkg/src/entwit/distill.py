"""Distillability evidence via tensor copies and local two-dimensional filters.

A state is distillable exactly when some number of copies admits local
filters onto a 2x2 subspace whose filtered state is entangled.  This
module provides the copy/filter plumbing, a fixed demonstration on the
4x4 family from :func:`entwit.zoo.example4_state`, and a randomized
search for filter evidence.  Evidence is one-sided: a negative search
outcome never certifies non-distillability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import PptResult, ppt_check
from .qstate import BipartiteDims, DensityMatrix, haar_random_unitary, validate_density
from .search import SearchConfig, ViolationReport, max_violation
from .witness import WitnessEvaluation, evaluate_witness
from .zoo import example4_state

TAU_FILTER = 1e-12   # filtered-trace floor; below this the filter annihilates the state
DIM_CAP = 256        # largest total matrix side the copy machinery will build
MAX_COPIES = 2


class CapExceededError(ValueError):
    """CAP_EXCEEDED: the requested copy count or dimension is beyond the cap."""


class FilterAnnihilatesError(ValueError):
    """FILTER_ANNIHILATES: the filtered state has numerically zero trace."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FilterPair:
    """Local operator pair applied as (a (x) b) rho (a (x) b)^dag.

    Rows index the target space, columns the source space.  The
    operators are arbitrary nonzero local maps, not necessarily
    projectors or isometries; normalization happens in
    :func:`apply_filter`.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a)
        b = _frozen(self.b)
        for name, op in (("a", a), ("b", b)):
            if op.ndim != 2:
                raise ValueError(f"filter {name} must be a matrix, got shape {op.shape}")
            if op.shape[0] < 2:
                raise ValueError(f"filter {name} target dimension must be >= 2, got {op.shape[0]}")
            if not np.any(op):
                raise ValueError(f"filter {name} is the zero operator")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def out_dims(self) -> BipartiteDims:
        return BipartiteDims(self.a.shape[0], self.b.shape[0])


@dataclass(frozen=True)
class DistillReport:
    """Evidence record for one copy count and filter choice.

    ``eval`` is a plain WitnessEvaluation when the frame was fixed in
    advance (the demonstration path) and a ViolationReport when a frame
    search ran on the projected state.  ``distillable_evidence`` is True
    only when the projected state's witness value is below -TAU_VIOL.
    ``projected_ppt`` carries the PPT cross-check of the projected
    state, which is an exact entanglement oracle in 2x2 and 2x3.
    """

    n_copies: int
    filter: FilterPair
    projected_state: DensityMatrix
    eval: WitnessEvaluation | ViolationReport
    distillable_evidence: bool
    projected_ppt: PptResult


def n_fold_copy(rho: DensityMatrix, n_copies: int) -> DensityMatrix:
    """Tensor power rho^(x)N with subsystems regrouped to (all A, all B).

    The returned dims are (m^N, n^N).  Raises CapExceededError when
    n_copies exceeds MAX_COPIES or the resulting side exceeds DIM_CAP.
    """
    if n_copies < 1:
        raise ValueError(f"n_copies must be >= 1, got {n_copies}")
    if n_copies > MAX_COPIES:
        raise CapExceededError(f"CAP_EXCEEDED: n_copies {n_copies} > {MAX_COPIES}")
    m, n = rho.dims.m, rho.dims.n
    if (m * n) ** n_copies > DIM_CAP:
        raise CapExceededError(
            f"CAP_EXCEEDED: {n_copies} copies of a {m * n}-dimensional state "
            f"need side {(m * n) ** n_copies} > {DIM_CAP}"
        )
    out = rho.matrix
    cur_m, cur_n = m, n
    for _ in range(n_copies - 1):
        big = np.kron(out, rho.matrix)
        # regroup row/column indices (a1 b1 a2 b2) -> (a1 a2 b1 b2)
        t = big.reshape(cur_m, cur_n, m, n, cur_m, cur_n, m, n)
        t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
        cur_m *= m
        cur_n *= n
        out = t.reshape(cur_m * cur_n, cur_m * cur_n)
    return validate_density(out, BipartiteDims(cur_m, cur_n))


def apply_filter(rho: DensityMatrix, f: FilterPair, out_dims: BipartiteDims) -> DensityMatrix:
    """Filtered state (a (x) b) rho (a (x) b)^dag, renormalized to unit trace.

    The output is Hermitian with unit trace by construction; positivity
    is inherited from the input, so a non-positive input (the
    demonstration family stores one) yields a non-positive output.  Use
    validate_density on the result when a checked state is required.
    """
    if f.a.shape[1] != rho.dims.m or f.b.shape[1] != rho.dims.n:
        raise ValueError(
            f"filter source dims ({f.a.shape[1]}, {f.b.shape[1]}) do not match "
            f"state dims ({rho.dims.m}, {rho.dims.n})"
        )
    if f.out_dims != out_dims:
        raise ValueError(f"filter target dims {f.out_dims} do not match requested {out_dims}")
    op = np.kron(f.a, f.b)
    out = op @ rho.matrix @ op.conj().T
    trace = float(np.trace(out).real)
    if trace <= TAU_FILTER:
        raise FilterAnnihilatesError(
            f"FILTER_ANNIHILATES: filtered trace {trace:.3e} <= {TAU_FILTER}"
        )
    out = out / trace
    out = (out + out.conj().T) / 2.0
    return DensityMatrix(out_dims, out)


def _example4_filter() -> FilterPair:
    # a keeps first-subsystem levels {0, 1}; b maps (|0>+|1>)(<0|+<1|) + |2><2|
    # restricted to second-subsystem levels {0, 1, 2} (its range), dropping
    # the zero row.
    a = np.zeros((2, 4), dtype=complex)
    a[0, 0] = 1.0
    a[1, 1] = 1.0
    b = np.zeros((3, 4), dtype=complex)
    b[0, 0] = b[0, 1] = 1.0
    b[1, 0] = b[1, 1] = 1.0
    b[2, 2] = 1.0
    return FilterPair(a, b)


def _example4_frame_v() -> np.ndarray:
    # the fixed qutrit frame used by the demonstration:
    # v = |1><2| + (1/sqrt2)|0>(<0|+<1|) + (1/sqrt2)|2>(<0|-<1|)
    r = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [r, r, 0.0],
            [0.0, 0.0, 1.0],
            [r, -r, 0.0],
        ],
        dtype=complex,
    )


def example4_frame() -> tuple[np.ndarray, np.ndarray]:
    """The fixed (u, v) frame used by the filtering demonstration."""
    return np.eye(2, dtype=complex), _example4_frame_v()


def example4_check(p: float, grid=None):
    """Filtering demonstration on the 4x4 family at parameter p.

    Applies the fixed 2x4 / 3x4 filter pair to example4_state(p),
    evaluates the witness on the filtered 2x3 state at the fixed
    (identity, v) frame, and cross-checks with the PPT oracle, which is
    exact in 2x3.  When ``grid`` is given, returns a list with one
    report per grid value instead (p is ignored).

    Note the source family is not positive semidefinite for p > 0 (its
    constructor warns), so the filtered state need not be a physical
    state either; the report records both the witness verdict and the
    PPT spectrum as measured.
    """
    if grid is not None:
        return [example4_check(float(x)) for x in grid]
    filt = _example4_filter()
    rho = example4_state(p)
    projected = apply_filter(rho, filt, BipartiteDims(2, 3))
    u, v = example4_frame()
    ev = evaluate_witness(projected, u, v)
    return DistillReport(
        n_copies=1,
        filter=filt,
        projected_state=projected,
        eval=ev,
        distillable_evidence=ev.violated,
        projected_ppt=ppt_check(projected),
    )


def _truncation_filter(big: BipartiteDims) -> FilterPair:
    a = np.zeros((2, big.m), dtype=complex)
    a[0, 0] = a[1, 1] = 1.0
    b = np.zeros((2, big.n), dtype=complex)
    b[0, 0] = b[1, 1] = 1.0
    return FilterPair(a, b)


def distill_search(
    rho: DensityMatrix, n_copies: int, cfg: SearchConfig = SearchConfig()
) -> DistillReport:
    """Randomized search for distillability evidence at a fixed copy count.

    Draws cfg.restarts local filter pairs onto a 2x2 subspace of
    rho^(x)N: sample 0 is the canonical truncation onto the first two
    levels of each side, the rest take the leading two columns of
    Haar-random unitaries (adjoint applied, an isometric compression).
    Each filtered 2x2 state gets a max_violation run with a small fixed
    restart budget; the sample with the largest f_value wins, ties going
    to the earliest sample.  distillable_evidence reports whether the
    winner's witness value is below -TAU_VIOL; a False result only means
    no evidence at this budget.
    """
    big = n_fold_copy(rho, n_copies)
    out_dims = BipartiteDims(2, 2)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    inner = SearchConfig(
        restarts=min(cfg.restarts, 6),
        max_iters=cfg.max_iters,
        tol=cfg.tol,
        seed=cfg.seed,
    )

    best: tuple[DistillReport, float] | None = None
    for sample in range(cfg.restarts):
        if sample == 0:
            filt = _truncation_filter(big.dims)
        else:
            rng = np.random.default_rng(seeds[sample])
            wa = haar_random_unitary(big.dims.m, rng)[:, :2]
            wb = haar_random_unitary(big.dims.n, rng)[:, :2]
            filt = FilterPair(wa.conj().T, wb.conj().T)
        try:
            projected = apply_filter(big, filt, out_dims)
        except FilterAnnihilatesError:
            continue
        report = max_violation(projected, inner)
        if best is None or report.f_value > best[1]:
            best = (
                DistillReport(
                    n_copies=n_copies,
                    filter=filt,
                    projected_state=projected,
                    eval=report,
                    distillable_evidence=report.best_eval.violated,
                    projected_ppt=ppt_check(projected),
                ),
                report.f_value,
            )
    if best is None:
        raise FilterAnnihilatesError(
            "FILTER_ANNIHILATES: every sampled filter annihilated the state"
        )
    return best[0]
