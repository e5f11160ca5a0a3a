"""Violating-frame search.

Two entry points:

- :func:`constructive_pure_violation` builds the guaranteed violating
  frame for an entangled pure state from its Schmidt decomposition.
- :func:`max_violation` estimates the maximal violation F(rho) =
  max(-w, 0) over local frames (U, V) by derivative-free simplex
  minimization of w with random restarts.

Unitaries are parametrized by d^2 real numbers through the exponential
of an anti-Hermitian generator: the first d parameters fill the
imaginary diagonal, then each index pair (j, k), j < k, in row-major
order contributes (real antisymmetric, imaginary symmetric) entries.
The zero vector maps to the identity and the chart covers the whole
unitary group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .qstate import (
    DensityMatrix,
    PureState,
    SchmidtForm,
    haar_random_unitary,
    schmidt_decompose,
)
from .witness import WitnessEvaluation, build_hpq, evaluate_witness

# A unitary parameter vector is a plain real ndarray of length d**2.
UnitaryParams = np.ndarray

PURITY_TOL = 1e-10   # Tr(rho^2) > 1 - PURITY_TOL counts as pure


@dataclass(frozen=True)
class SearchConfig:
    """Budget and reproducibility knobs for the restarted search."""

    restarts: int = 50
    max_iters: int = 500
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class ViolationReport:
    """Best violation found by :func:`max_violation`.

    f_value = max(-best_eval.w_val, 0) is a lower bound on the true
    maximal violation (the optimizer is local; restarts only improve
    coverage).  ``converged`` counts restarts whose simplex met the
    tolerance within the iteration budget; the rest returned their
    best-so-far point.
    """

    f_value: float
    best_u: np.ndarray
    best_v: np.ndarray
    best_eval: WitnessEvaluation
    restarts_run: int
    evaluations: int
    converged: int
    best_restart: int


@dataclass(frozen=True)
class ProductStateReport:
    """Outcome for Schmidt-rank-1 inputs: product states admit no violation.

    Carries the rank-1 Schmidt form as the certificate.
    """

    schmidt: SchmidtForm


@lru_cache(maxsize=None)
def _index_cache(d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ju, ku = np.triu_indices(d, k=1)
    return np.arange(d), ju, ku


def _fill_generator(g: np.ndarray, p: np.ndarray, d: int) -> None:
    idx, ju, ku = _index_cache(d)
    g[..., idx, idx] = 1j * p[..., :d]
    a = p[..., d::2]
    s = p[..., d + 1::2]
    g[..., ju, ku] = a + 1j * s
    g[..., ku, ju] = -a + 1j * s


def param_to_unitary(p: UnitaryParams, d: int) -> np.ndarray:
    """Map d^2 real parameters to a d x d unitary via the exponential chart."""
    vec = np.asarray(p, dtype=float).reshape(-1)
    if vec.size != d * d:
        raise ValueError(f"parameter vector has length {vec.size}, expected {d * d}")
    g = np.zeros((d, d), dtype=complex)
    _fill_generator(g, vec, d)
    return scipy.linalg.expm(g)


def unitary_to_params(u: np.ndarray, d: int) -> UnitaryParams:
    """Inverse chart: principal logarithm projected onto the generator basis.

    param_to_unitary(unitary_to_params(u)) reproduces u up to numerical
    precision; used to seed searches at prescribed frames.
    """
    if u.shape != (d, d):
        raise ValueError(f"matrix shape {u.shape} does not match d={d}")
    # A unitary is normal, so its complex Schur form is diagonal and the
    # principal log follows from the eigenvalue phases.
    t, z = scipy.linalg.schur(np.asarray(u, dtype=complex), output="complex")
    phases = np.angle(np.diag(t))
    log = (z * (1j * phases)[None, :]) @ z.conj().T
    g = (log - log.conj().T) / 2.0
    p = np.empty(d * d)
    _, ju, ku = _index_cache(d)
    p[:d] = np.diag(g).imag
    p[d::2] = g[ju, ku].real
    p[d + 1::2] = g[ju, ku].imag
    return p


def constructive_pure_violation(phi: PureState):
    """Violating frame for an entangled pure state, from its Schmidt form.

    Returns (u, v, evaluation) where u, v are the Schmidt local
    unitaries.  In that frame the state's witness value is
    -(c0 c1)^2 / 16 with c0, c1 the two largest Schmidt coefficients,
    strictly negative whenever the Schmidt rank is at least 2.  For
    rank-1 (product) inputs a :class:`ProductStateReport` is returned
    instead, since no frame can violate the inequality on a separable
    state.
    """
    form = schmidt_decompose(phi)
    if form.rank < 2:
        return ProductStateReport(form)
    ev = evaluate_witness(phi.density(), form.u, form.v)
    return form.u, form.v, ev


def _batched_expm_antiherm(g: np.ndarray) -> np.ndarray:
    # g is anti-Hermitian, so -i g is Hermitian and eigh applies batchwise.
    w, v = np.linalg.eigh(-1j * g)
    return (v * np.exp(1j * w)[..., None, :]) @ v.conj().swapaxes(-1, -2)


def _batch_unitaries(p: np.ndarray, d: int) -> np.ndarray:
    g = np.zeros(p.shape[:-1] + (d, d), dtype=complex)
    _fill_generator(g, p, d)
    return _batched_expm_antiherm(g)


class _Objective:
    """Batched witness value w(U(x_a), V(x_b)) for stacked parameter rows."""

    def __init__(self, rho: DensityMatrix):
        self.m = rho.dims.m
        self.n = rho.dims.n
        self.rho = rho.matrix
        ops = build_hpq(rho.dims)
        self.h0 = ops.h
        self.p0 = ops.p
        self.q0 = ops.q
        self.calls = 0

    def unitaries(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        na = self.m * self.m
        u = _batch_unitaries(x[..., :na], self.m)
        v = _batch_unitaries(x[..., na:], self.n)
        return u, v

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        self.calls += x.shape[0]
        u, v = self.unitaries(x)
        uv = np.einsum("bik,bjl->bijkl", u, v).reshape(
            x.shape[0], self.m * self.n, self.m * self.n
        )
        sigma = uv.conj().swapaxes(-1, -2) @ self.rho @ uv
        h = np.einsum("bij,ji->b", sigma, self.h0).real
        p = np.einsum("bij,ji->b", sigma, self.p0).real
        q = np.einsum("bij,ji->b", sigma, self.q0).real
        return h * h - p * p - q * q


def _nelder_mead_batch(fun, x0: np.ndarray, max_iters: int, tol: float):
    """Minimize fun over a batch of independent simplexes in lockstep.

    Standard Nelder-Mead coefficients (reflect 1, expand 2, contract
    0.5, shrink 0.5) with the usual 5% / 0.00025 initial perturbation
    scheme.  Slots converge independently: a slot whose simplex spread
    falls below tol in both x and f is frozen while the rest continue.
    Returns (best points, best values, converged mask).
    """
    nslot, ndim = x0.shape
    sim = np.repeat(x0[:, None, :], ndim + 1, axis=1)
    for k in range(ndim):
        col = sim[:, k + 1, k]
        sim[:, k + 1, k] = np.where(col != 0.0, 1.05 * col, 0.00025)
    fsim = fun(sim.reshape(-1, ndim)).reshape(nslot, ndim + 1)
    converged = np.zeros(nslot, dtype=bool)

    for _ in range(max_iters):
        order = np.argsort(fsim, axis=1, kind="stable")
        sim = np.take_along_axis(sim, order[:, :, None], axis=1)
        fsim = np.take_along_axis(fsim, order, axis=1)
        xspread = np.abs(sim[:, 1:, :] - sim[:, :1, :]).max(axis=(1, 2))
        fspread = np.abs(fsim[:, 1:] - fsim[:, :1]).max(axis=1)
        converged |= (xspread <= tol) & (fspread <= tol)
        alive = np.nonzero(~converged)[0]
        if alive.size == 0:
            break

        s = sim[alive]
        f = fsim[alive]
        centroid = s[:, :-1, :].mean(axis=1)
        worst = s[:, -1, :]
        xr = 2.0 * centroid - worst
        fr = fun(xr)
        new_x = xr.copy()
        new_f = fr.copy()
        shrink = np.zeros(alive.size, dtype=bool)

        expand = np.nonzero(fr < f[:, 0])[0]
        if expand.size:
            xe = 3.0 * centroid[expand] - 2.0 * worst[expand]
            fe = fun(xe)
            take = fe < fr[expand]
            new_x[expand] = np.where(take[:, None], xe, new_x[expand])
            new_f[expand] = np.where(take, fe, new_f[expand])

        contract = np.nonzero((fr >= f[:, 0]) & (fr >= f[:, -2]))[0]
        if contract.size:
            outside = fr[contract] < f[contract, -1]
            step = np.where(outside[:, None], 0.5, -0.5)
            xc = centroid[contract] + step * (centroid[contract] - worst[contract])
            fc = fun(xc)
            accept = np.where(outside, fc <= fr[contract], fc < f[contract, -1])
            new_x[contract] = xc
            new_f[contract] = fc
            shrink[contract] = ~accept

        keep = np.nonzero(~shrink)[0]
        s[keep, -1, :] = new_x[keep]
        f[keep, -1] = new_f[keep]
        shr = np.nonzero(shrink)[0]
        if shr.size:
            s[shr, 1:, :] = s[shr, :1, :] + 0.5 * (s[shr, 1:, :] - s[shr, :1, :])
            f[shr, 1:] = fun(s[shr, 1:, :].reshape(-1, ndim)).reshape(shr.size, ndim)
        sim[alive] = s
        fsim[alive] = f

    order = np.argsort(fsim, axis=1, kind="stable")
    sim = np.take_along_axis(sim, order[:, :, None], axis=1)
    fsim = np.take_along_axis(fsim, order, axis=1)
    xspread = np.abs(sim[:, 1:, :] - sim[:, :1, :]).max(axis=(1, 2))
    fspread = np.abs(fsim[:, 1:] - fsim[:, :1]).max(axis=1)
    converged |= (xspread <= tol) & (fspread <= tol)
    return sim[:, 0, :], fsim[:, 0], converged


def _pure_vector(rho: DensityMatrix) -> np.ndarray | None:
    evals, evecs = np.linalg.eigh(rho.matrix)
    if float(np.sum(evals * evals)) <= 1.0 - PURITY_TOL:
        return None
    return evecs[:, -1]


def max_violation(rho: DensityMatrix, cfg: SearchConfig = SearchConfig()) -> ViolationReport:
    """Estimate F(rho) = max over frames of the witness violation.

    Runs cfg.restarts independent simplex minimizations of w over the
    joint (m^2 + n^2)-dimensional frame parametrization.  Restart 0
    starts at the identity frames; if rho is pure with Schmidt rank at
    least 2, restart 1 starts at the constructive Schmidt frame; all
    remaining restarts start at Haar-random frames drawn from
    per-restart substreams of cfg.seed, so results for a given restart
    index do not depend on the total number of restarts.  The best
    frame is selected by witness value with ties broken by restart
    index, and its evaluation is recomputed from the returned unitaries.
    """
    m, n = rho.dims.m, rho.dims.n
    na = m * m
    ndim = na + n * n
    starts = np.zeros((cfg.restarts, ndim))
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    first_random = 1
    if cfg.restarts >= 2:
        vec = _pure_vector(rho)
        if vec is not None:
            form = schmidt_decompose(PureState(rho.dims, vec))
            if form.rank >= 2:
                starts[1, :na] = unitary_to_params(form.u, m)
                starts[1, na:] = unitary_to_params(form.v, n)
                first_random = 2
    for i in range(first_random, cfg.restarts):
        rng = np.random.default_rng(seeds[i])
        starts[i, :na] = unitary_to_params(haar_random_unitary(m, rng), m)
        starts[i, na:] = unitary_to_params(haar_random_unitary(n, rng), n)

    objective = _Objective(rho)
    best_x, best_f, conv = _nelder_mead_batch(objective, starts, cfg.max_iters, cfg.tol)
    winner = int(np.argsort(best_f, kind="stable")[0])

    u = param_to_unitary(best_x[winner, :na], m)
    v = param_to_unitary(best_x[winner, na:], n)
    ev = evaluate_witness(rho, u, v)
    u.setflags(write=False)
    v.setflags(write=False)
    return ViolationReport(
        f_value=max(-ev.w_val, 0.0),
        best_u=u,
        best_v=v,
        best_eval=ev,
        restarts_run=cfg.restarts,
        evaluations=objective.calls,
        converged=int(np.count_nonzero(conv)),
        best_restart=winner,
    )
