"""Independent numeric rank evidence by nonlinear least squares.

Fits q as a sum of r d-th powers of complex linear forms with damped
Gauss-Newton (Levenberg-style) iterations from random restarts, at
standard double precision.  This module never feeds the exact pipeline;
it exists so tests can cross-check rank values through a code path that
shares nothing with the catalecticant computation.

The search carries two degeneracy guards (a parameter-norm ball and a
floor on the pairwise chordal separation of the fitted directions).
Rank-jump forms are approximable to arbitrary depth, but only through
diverging or collapsing configurations that no exact fit needs; the
guards keep failing fits bounded away from zero so that the 1e-9
success / 1e-3 failure residual gap separates cleanly.  A success under
the guards is still a genuine rank upper bound; the cost is that forms
whose only minimal decompositions use nearly collinear directions are
beyond the oracle's resolution (it is evidence, not proof).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, VerificationError
from .forms import BinaryForm

__all__ = [
    "FitResult",
    "numeric_fit",
    "oracle_rank_upper",
    "fit_residual",
    "jacobian_error",
]

_MAX_ITER = 80
_SUCCESS_FLOOR = 1e-13  # double precision cannot meaningfully improve past this
_GRADIENT_TOL = 1e-6

# Degeneracy guards.  A form on a secant variety but outside the secant planes
# (the rank-jump cases) is approximable to arbitrary depth by r powers, but
# only through configurations where linear forms diverge in norm or collapse
# onto each other with cancelling weights; an exact fit never needs either.
# Restricting the search to bounded, well-separated configurations keeps
# failing fits bounded away from zero residual, which is what makes the
# 1e-9 success / 1e-3 failure gap reliable.
_PARAM_BALL = 5.0  # max |c_j|, |e_j|
_NODE_SEP = 0.2  # min pairwise chordal distance between active directions
_START_SEP = 0.25  # admissibility for random starts (slightly inside the floor)
_ACTIVE_NORM = 1e-6  # below this a linear form contributes ~nothing for d >= 1


@dataclass(frozen=True)
class FitResult:
    """Best fit of q by r d-th powers over all restarts.

    `parameters` is the flattened list (c_1, e_1, ..., c_r, e_r) of
    complex linear-form coefficients for the max-normalized form;
    `best_residual` is the coefficient-wise max error, relative to the
    largest input coefficient.
    """

    r: int
    best_residual: float
    parameters: list[complex]
    restarts_used: int


def _binomials(d: int) -> np.ndarray:
    return np.array([math.comb(d, i) for i in range(d + 1)], dtype=float)


def _model(theta: np.ndarray, d: int) -> np.ndarray:
    c = theta[0::2]
    e = theta[1::2]
    i = np.arange(d + 1)
    cp = c[:, None] ** (d - i)[None, :]
    ep = e[:, None] ** i[None, :]
    return _binomials(d) * np.sum(cp * ep, axis=0)


def _jacobian(theta: np.ndarray, d: int) -> np.ndarray:
    r = theta.size // 2
    c = theta[0::2]
    e = theta[1::2]
    i = np.arange(d + 1)
    B = _binomials(d)
    # powers padded with an explicit zero where the derivative kills the term,
    # so no negative exponents ever appear
    cpow = np.zeros((r, d + 1), dtype=complex)
    cpow[:, : d] = c[:, None] ** (d - 1 - i[:d])[None, :]
    epow = np.zeros((r, d + 1), dtype=complex)
    epow[:, 1:] = e[:, None] ** (i[1:] - 1)[None, :]
    ci = c[:, None] ** (d - i)[None, :]
    ei = e[:, None] ** i[None, :]
    dc = B * (d - i)[None, :] * cpow * ei
    de = B * i[None, :] * ci * epow
    J = np.empty((d + 1, 2 * r), dtype=complex)
    J[:, 0::2] = dc.T
    J[:, 1::2] = de.T
    return J


def _finite_diff_jacobian(theta: np.ndarray, d: int, h: float = 1e-6) -> np.ndarray:
    n = theta.size
    out = np.empty((d + 1, n), dtype=complex)
    for k in range(n):
        hk = h * (1.0 + abs(theta[k]))
        step = np.zeros(n, dtype=complex)
        step[k] = hk
        out[:, k] = (_model(theta + step, d) - _model(theta - step, d)) / (2 * hk)
    return out


def _jacobian_rel_error(theta: np.ndarray, d: int) -> float:
    J = _jacobian(theta, d)
    Jfd = _finite_diff_jacobian(theta, d)
    scale = max(float(np.max(np.abs(J))), 1e-12)
    return float(np.max(np.abs(J - Jfd))) / scale


def _draw_start(rng, r: int, index: int) -> np.ndarray:
    """Restart initial point.

    Mostly unit-Gaussian entries (redrawn into the admissible region);
    every fourth restart uses a randomly rotated circular configuration
    [1, zeta^j], which seeds the maximally separated basins that matter
    for full-rank targets.
    """
    if index % 4 == 3 and r >= 2:
        rho = 0.4 + 0.8 * rng.random()
        phase = np.exp(2j * np.pi * rng.random())
        zeta = np.exp(2j * np.pi / r)
        theta = np.empty(2 * r, dtype=complex)
        for j in range(r):
            theta[2 * j] = rho
            theta[2 * j + 1] = rho * phase * zeta**j
        return theta
    best = None
    best_sep = -math.inf
    for _ in range(100):
        theta = (rng.standard_normal(2 * r) + 1j * rng.standard_normal(2 * r)) / math.sqrt(2)
        if _admissible(theta, _START_SEP):
            return theta
        sep = min(_min_node_separation(theta), _PARAM_BALL - float(np.max(np.abs(theta))))
        if sep > best_sep:
            best, best_sep = theta, sep
    return best


def jacobian_error(q: BinaryForm, r: int, seed=0) -> float:
    """Relative error between the analytic Jacobian and central finite
    differences at a random parameter point (test hook)."""
    if q.degree < 1:
        raise InvalidInputError("jacobian check needs degree >= 1")
    rng = np.random.default_rng(seed)
    theta = (rng.standard_normal(2 * r) + 1j * rng.standard_normal(2 * r)) / math.sqrt(2)
    return _jacobian_rel_error(theta, q.degree)


def _min_node_separation(theta: np.ndarray) -> float:
    """Smallest pairwise chordal distance between the active directions."""
    c = theta[0::2]
    e = theta[1::2]
    norms = np.sqrt(np.abs(c) ** 2 + np.abs(e) ** 2)
    active = np.where(norms > _ACTIVE_NORM)[0]
    best = math.inf
    for ia, a in enumerate(active):
        for b in active[ia + 1 :]:
            dist = abs(c[a] * e[b] - c[b] * e[a]) / (norms[a] * norms[b])
            if dist < best:
                best = dist
    return best


def _admissible(theta: np.ndarray, sep: float) -> bool:
    return float(np.max(np.abs(theta))) <= _PARAM_BALL and _min_node_separation(theta) >= sep


def _levenberg(target: np.ndarray, d: int, theta0: np.ndarray) -> tuple[np.ndarray, float]:
    theta = theta0.copy()
    F = _model(theta, d) - target
    cost = float(np.vdot(F, F).real)
    mu = None
    eye = np.eye(theta.size)
    for _ in range(_MAX_ITER):
        if np.max(np.abs(F)) < 1e-15:
            break
        J = _jacobian(theta, d)
        g = J.conj().T @ F
        H = J.conj().T @ J
        if mu is None:
            mu = 1e-3 * max(float(np.max(np.abs(np.diag(H)))), 1e-12)
        accepted = False
        step = 0.0
        for _ in range(40):
            try:
                delta = np.linalg.solve(H + mu * eye, -g)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            cand = theta + delta
            if not _admissible(cand, _NODE_SEP):
                mu *= 2.0
                if mu > 1e15:
                    break
                continue
            Fc = _model(cand, d) - target
            cc = float(np.vdot(Fc, Fc).real)
            if cc < cost:
                theta, F, cost = cand, Fc, cc
                mu = max(mu / 3.0, 1e-14)
                step = float(np.max(np.abs(delta)))
                accepted = True
                break
            mu *= 2.0
            if mu > 1e15:
                break
        if not accepted:
            break
        if step < 1e-13 * (1.0 + float(np.max(np.abs(theta)))):
            break
    return theta, float(np.max(np.abs(F)))


def numeric_fit(q: BinaryForm, r: int, restarts: int = 64, seed=0) -> FitResult:
    """Least-squares fit of q by r d-th powers, minimized over restarts.

    Deterministic given the seed.  The analytic Jacobian is validated
    against central finite differences at the first iterate of the first
    restart.  Failure to fit is a large residual, never an exception.
    """
    if q.is_zero:
        raise InvalidInputError("cannot fit the zero form")
    if q.degree < 1:
        raise InvalidInputError("numeric fit needs degree >= 1")
    if r < 1:
        raise InvalidInputError("need at least one power")
    if restarts < 1:
        raise InvalidInputError("need at least one restart")
    d = q.degree
    a = np.array([float(c) for c in q.coeffs], dtype=complex)
    a = a / np.max(np.abs(a))
    rng = np.random.default_rng(seed)
    best = math.inf
    best_theta = None
    used = 0
    for s in range(restarts):
        used = s + 1
        theta0 = _draw_start(rng, r, s)
        if s == 0:
            err = _jacobian_rel_error(theta0, d)
            if err > _GRADIENT_TOL:
                raise VerificationError(f"analytic Jacobian off by {err:.3e}")
        theta, resid = _levenberg(a, d, theta0)
        if resid < best:
            best, best_theta = resid, theta
        if best < _SUCCESS_FLOOR:
            break
    return FitResult(r, best, [complex(z) for z in best_theta], used)


def fit_residual(q: BinaryForm, parameters) -> float:
    """Residual the given parameters achieve on (max-normalized) q."""
    a = np.array([float(c) for c in q.coeffs], dtype=complex)
    a = a / np.max(np.abs(a))
    theta = np.asarray(parameters, dtype=complex)
    return float(np.max(np.abs(_model(theta, q.degree) - a)))


def oracle_rank_upper(q: BinaryForm, tol: float = 1e-9, seed=0, restarts: int = 64) -> int:
    """Smallest r <= d whose fit residual drops below tol.

    A rank-d representation always exists, so the search is returned
    capped at d even if every fit stalls numerically.
    """
    if q.is_zero:
        raise InvalidInputError("the zero form has no rank transition")
    d = q.degree
    if d < 1:
        raise InvalidInputError("oracle needs degree >= 1")
    for r in range(1, d + 1):
        if numeric_fit(q, r, restarts=restarts, seed=seed).best_residual < tol:
            return r
    return d
