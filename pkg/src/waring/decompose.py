"""Numeric power-sum decomposition driven by the exact rank certificate.

The exact layer decides the rank r and supplies a squarefree degree-r
witness polynomial (the apolar generator, or a random squarefree element
of the apolar space in the degenerate and middle cases, where no canonical
witness exists).  Its projective roots locate the linear forms; the
weights come from a high-precision least-squares solve against the dual
coordinates, and the reconstruction is verified coefficient by
coefficient against the exact input.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .apolarity import apolar_space, infinity_multiplicity, is_squarefree
from .errors import (
    InvalidInputError,
    NumericError,
    SamplingError,
    VerificationError,
)
from .forms import (
    BinaryForm,
    ComplexPoint,
    DualCoordinates,
    chordal_distance,
    dual_coords,
    expand_power_sum,
)
from .sylvester import RankCase, waring_rank

__all__ = [
    "Decomposition",
    "VerificationReport",
    "projective_roots",
    "solve_weights",
    "decompose",
    "verify_decomposition",
    "separation_bound",
    "working_precision",
]

_ABERTH_MAX_ITER = 200
_ROOT_SEED = 0x0A6E27  # fixed internal seed: root finding stays deterministic


def working_precision(precision_bits: int) -> int:
    """Internal precision: requested bits plus guard bits for the solves."""
    return precision_bits + max(64, precision_bits // 2)


def separation_bound(precision_bits: int):
    """Chordal distance below which two roots count as coincident."""
    return mp.mpf(2) ** (-(precision_bits // 2))


@dataclass(frozen=True)
class Decomposition:
    """q = sum_j lam_j * (t_j x + u_j y)^degree, with a verified residual.

    `residual` is the max coefficient-wise absolute error of the
    reconstruction relative to the largest input coefficient magnitude.
    `method` records how the root-locating witness was obtained:
    "apolar" (the unique generator) or "sampled" (random squarefree
    element of the apolar space; used where no canonical witness exists).
    """

    degree: int
    terms: tuple
    precision_bits: int
    residual: object
    method: str


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of re-checking a decomposition against its form."""

    max_rel_error: object
    tol: float
    separation_ok: bool
    min_separation: object
    passed: bool


def _to_mpf(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


def _integer_coeffs(f: BinaryForm) -> list[int]:
    den = math.lcm(*(c.denominator for c in f.coeffs))
    return [int(c * den) for c in f.coeffs]


def _horner_pair(coeffs, z):
    """Evaluate a polynomial (decreasing coefficients) and its derivative."""
    p = mp.mpc(coeffs[0])
    dp = mp.mpc(0)
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_phase(g: list[int], prec: int, rng: random.Random):
    """Ehrlich-Aberth sweep at moderate precision from perturbed circle points."""
    n = len(g) - 1
    with mp.workprec(prec):
        gc = [mp.mpf(c) for c in g]
        radius = mp.mpf(1) + max(abs(c) for c in gc[1:]) / abs(gc[0])
        z = [
            radius * mp.expjpi(mp.mpf(2) * (j + mp.mpf(rng.random()) / 2 + mp.mpf(1) / 4) / n)
            for j in range(n)
        ]
        eps = mp.mpf(2) ** (-(prec - 8))
        tiny = mp.mpf(2) ** (-prec)
        for _ in range(_ABERTH_MAX_ITER):
            moved = mp.mpf(0)
            for j in range(n):
                p, dp = _horner_pair(gc, z[j])
                if p == 0:
                    continue
                if dp == 0:
                    z[j] += (1 + 1j) * (abs(z[j]) + 1) * mp.mpf(2) ** (-prec // 2)
                    moved = mp.inf
                    continue
                newton = p / dp
                s = mp.mpc(0)
                for i in range(n):
                    if i == j:
                        continue
                    dz = z[j] - z[i]
                    if dz == 0:
                        dz = tiny * (1 + abs(z[j]))
                    s += 1 / dz
                denom = 1 - newton * s
                w = newton if denom == 0 else newton / denom
                z[j] -= w
                rel = abs(w) / (1 + abs(z[j]))
                if rel > moved:
                    moved = rel
            if moved <= eps:
                break
        return z


def _newton_escalate(g: list[int], roots, start_prec: int, target_prec: int):
    """Polish each root with Newton steps at doubling precision."""
    zs = list(roots)
    prec = start_prec
    while prec < target_prec:
        prec = min(2 * prec, target_prec)
        with mp.workprec(prec + 10):
            gc = [mp.mpf(c) for c in g]
            for idx, z in enumerate(zs):
                z = mp.mpc(z)
                for _ in range(2):
                    p, dp = _horner_pair(gc, z)
                    if dp == 0:
                        break
                    z = z - p / dp
                zs[idx] = z
    return zs


def _form_value(int_coeffs: list[int], pt: ComplexPoint):
    """|f(t, u)| on the normalized representative, from integer coefficients."""
    m = len(int_coeffs) - 1
    tp = [mp.mpc(1)]
    up = [mp.mpc(1)]
    for _ in range(m):
        tp.append(tp[-1] * pt.t)
        up.append(up[-1] * pt.u)
    total = mp.mpc(0)
    for i, c in enumerate(int_coeffs):
        if c:
            total += c * tp[m - i] * up[i]
    return abs(total)


def _roots_acceptable(int_coeffs, points, precision_bits) -> bool:
    with mp.workprec(working_precision(precision_bits)):
        norm = max(mp.mpf(abs(c)) for c in int_coeffs)
        res_bound = mp.mpf(2) ** (-(precision_bits // 2))
        for pt in points:
            if _form_value(int_coeffs, pt) / norm > res_bound:
                return False
        sep = separation_bound(precision_bits)
        for a in range(len(points)):
            for b in range(a + 1, len(points)):
                if chordal_distance(points[a], points[b]) <= sep:
                    return False
    return True


def _sort_points(points):
    return sorted(points, key=lambda p: (p.t.real, p.t.imag, p.u.real, p.u.imag))


def projective_roots(f: BinaryForm, precision_bits: int) -> list[ComplexPoint]:
    """All deg(f) projective roots of a squarefree binary form.

    Affine roots of g(t) = f(t, 1) come from an Ehrlich-Aberth sweep with
    perturbed initial points on a circle of the Cauchy root-bound radius,
    refined by Newton steps at escalating precision; the (single, by
    squarefreeness) root at infinity [1, 0] accounts for any degree
    deficiency of g.  Each root is verified to satisfy
    |f(t, u)| <= 2^(-precision_bits/2) relative to the coefficient norm.
    """
    if f.is_zero:
        raise InvalidInputError("the zero form has no root set")
    if f.degree < 1:
        raise InvalidInputError("root finding needs degree >= 1")
    if not is_squarefree(f):
        raise InvalidInputError("projective_roots requires a squarefree form")
    ints = _integer_coeffs(f)
    e = infinity_multiplicity(f)
    g = ints[e:]
    n = len(g) - 1
    target = working_precision(precision_bits)
    rng = random.Random(_ROOT_SEED)
    phase_prec = 64
    for _ in range(4):
        if n == 0:
            affine = []
        else:
            affine = _newton_escalate(g, _aberth_phase(g, phase_prec, rng), phase_prec, target)
        with mp.workprec(target):
            points = [ComplexPoint(z, 1, target) for z in affine]
            if e:
                points.append(ComplexPoint(1, 0, target))
        if _roots_acceptable(ints, points, precision_bits):
            return _sort_points(points)
        phase_prec *= 2
    raise NumericError("root refinement did not reach the requested accuracy")


def solve_weights(Z: DualCoordinates, roots: list[ComplexPoint], precision_bits: int):
    """Weights lam solving sum_j lam_j t_j^(d-i) u_j^i = Z_i, i = 0..d.

    Solved in high-precision least squares via the normal equations; the
    returned residual is the full-system max error relative to max |Z_i|.
    Theory guarantees an exact solution for a correct root set, so a
    residual above 10^(-0.15 * precision_bits) raises: it signals a wrong
    root set or exhausted precision.
    """
    d = Z.degree
    r = len(roots)
    if r == 0:
        raise InvalidInputError("need at least one root")
    if r > d + 1:
        raise InvalidInputError(f"{r} roots cannot be matched against {d + 1} coordinates")
    wp = working_precision(precision_bits)
    with mp.workprec(wp):
        sep = separation_bound(precision_bits)
        for a in range(r):
            for b in range(a + 1, r):
                if chordal_distance(roots[a], roots[b]) <= sep:
                    raise InvalidInputError("roots must be pairwise distinct")
        A = mp.zeros(d + 1, r)
        for j, pt in enumerate(roots):
            tp = [mp.mpc(1)]
            up = [mp.mpc(1)]
            for _ in range(d):
                tp.append(tp[-1] * pt.t)
                up.append(up[-1] * pt.u)
            for i in range(d + 1):
                A[i, j] = tp[d - i] * up[i]
        z = mp.matrix([_to_mpf(v) for v in Z.Z])
        H = mp.zeros(r, r)
        y = mp.zeros(r, 1)
        for a in range(r):
            for b in range(r):
                H[a, b] = mp.fsum(mp.conj(A[i, a]) * A[i, b] for i in range(d + 1))
            y[a] = mp.fsum(mp.conj(A[i, a]) * z[i] for i in range(d + 1))
        lam = mp.lu_solve(H, y)
        zmax = max(abs(v) for v in z)
        if zmax == 0:
            raise InvalidInputError("zero dual coordinates")
        resid = max(
            abs(mp.fsum(A[i, j] * lam[j] for j in range(r)) - z[i]) for i in range(d + 1)
        )
        rel = resid / zmax
    if rel > mp.mpf(10) ** (-0.15 * precision_bits):
        raise VerificationError(
            f"weight solve inconsistent: residual {mp.nstr(rel, 5)} at {precision_bits} bits"
        )
    return [lam[j] for j in range(r)], rel


_WITNESS_BUDGET = 64
_WITNESS_BOX = 4  # initial coefficient box; doubles every 8 failures


def _squarefree_witness(q: BinaryForm, r: int, rng: random.Random) -> BinaryForm:
    """Random squarefree element of the degree-r apolar space of q.

    Squarefree elements are dense in the space whenever rank(q) <= r, so
    small random integer combinations almost always work; the coefficient
    box doubles every 8 failures as a hedge.
    """
    basis = apolar_space(q, r).basis
    bound = _WITNESS_BOX
    for attempt in range(_WITNESS_BUDGET):
        if attempt and attempt % 8 == 0:
            bound *= 2
        weights = [rng.randint(-bound, bound) for _ in basis]
        if not any(weights):
            continue
        coeffs = [
            sum((w * b.coeffs[i] for w, b in zip(weights, basis)), Fraction(0))
            for i in range(r + 1)
        ]
        f = BinaryForm(r, tuple(coeffs))
        if f.is_zero:
            continue
        if is_squarefree(f):
            return f
    raise SamplingError("no squarefree witness found in the apolar space within budget")


def decompose(q: BinaryForm, precision_bits: int = 256, seed=0, tol: float | None = None) -> Decomposition:
    """Explicit decomposition of q into rank-many d-th powers, verified.

    Generic and power cases read the roots off the apolar generator; the
    degenerate and middle cases draw a random squarefree witness from the
    apolar space at the computed rank (recorded as method="sampled").
    The reconstruction is compared coefficient-wise against q; a residual
    above `tol` (default 10^(-0.12 * precision_bits)) raises.
    """
    if q.is_zero:
        raise InvalidInputError("cannot decompose the zero form")
    if precision_bits < 16:
        raise InvalidInputError("precision_bits must be at least 16")
    if tol is None:
        tol = 10.0 ** (-0.12 * precision_bits)
    d = q.degree
    wp = working_precision(precision_bits)
    if d == 0:
        with mp.workprec(wp):
            lam = mp.mpc(_to_mpf(q.coeffs[0]))
            term = (lam, ComplexPoint(1, 0, wp))
        return Decomposition(0, (term,), precision_bits, mp.mpf(0), "apolar")
    result = waring_rank(q)
    rng = random.Random(seed) if not isinstance(seed, random.Random) else seed
    if result.apolar is not None and result.case in (RankCase.GENERIC, RankCase.POWER):
        witness, method = result.apolar, "apolar"
    else:
        witness, method = _squarefree_witness(q, result.rank, rng), "sampled"
    roots = projective_roots(witness, precision_bits)
    lams, _ = solve_weights(dual_coords(q), roots, precision_bits)
    terms = tuple(zip(lams, roots))
    recon = expand_power_sum(d, terms, wp)
    with mp.workprec(wp):
        exact = [_to_mpf(c) for c in q.coeffs]
        scale = max(abs(v) for v in exact)
        residual = max(abs(rc - ex) for rc, ex in zip(recon, exact)) / scale
    if len(terms) != result.rank:
        raise VerificationError(
            f"decomposition has {len(terms)} terms but rank is {result.rank}"
        )
    if residual > tol:
        raise VerificationError(
            f"decomposition residual {mp.nstr(residual, 5)} above tolerance {tol:g}"
        )
    return Decomposition(d, terms, precision_bits, residual, method)


def verify_decomposition(q: BinaryForm, dec: Decomposition, tol: float) -> VerificationReport:
    """Re-expand a decomposition and compare against q, reporting errors.

    Never raises: failures are carried in the report.
    """
    wp = working_precision(dec.precision_bits)
    recon = expand_power_sum(q.degree, dec.terms, wp)
    with mp.workprec(wp):
        exact = [_to_mpf(c) for c in q.coeffs]
        scale = max(abs(v) for v in exact)
        diffs = [abs(rc - ex) for rc, ex in zip(recon, exact)]
        err = max(diffs) / scale if scale > 0 else max(diffs)
        sep = separation_bound(dec.precision_bits)
        min_sep = None
        sep_ok = True
        pts = [pt for _, pt in dec.terms]
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                dist = chordal_distance(pts[a], pts[b])
                if min_sep is None or dist < min_sep:
                    min_sep = dist
                if dist <= sep:
                    sep_ok = False
    passed = bool(err <= tol) and sep_ok
    return VerificationReport(err, tol, sep_ok, min_sep, passed)
