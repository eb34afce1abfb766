"""Exact Waring rank of a binary form, and the rank stratification.

The pipeline: border rank b = k+1 from the middle catalecticant; in the
even middle case (d = 2n, k = n) the rank equals n+1 outright; otherwise
the unique apolar generator f of degree k+1 decides between rank k+1
(f squarefree) and rank d-k+1 (f with a repeated root).  Seeded samplers
construct witnesses for both branches.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .apolarity import apolar_generator, border_rank, is_squarefree
from .errors import InvalidInputError, SamplingError
from .forms import BinaryForm, DualCoordinates, coeffs_from_dual, power_sum_form
from .linalg import RationalMatrix, nullspace

__all__ = [
    "RankCase",
    "RankResult",
    "Classification",
    "waring_rank",
    "classify",
    "closure_ranks",
    "sample_generic_rank",
    "sample_degenerate",
]


class RankCase(str, Enum):
    GENERIC = "generic"  # rank = border rank = k+1, witnessed by a squarefree apolar form
    DEGENERATE = "degenerate"  # rank jumps to d-k+1
    MIDDLE = "middle"  # d = 2n with full middle catalecticant; rank = n+1
    POWER = "power"  # rank 1: a pure d-th power
    ZERO = "zero"  # the zero form, rank 0 by convention


@dataclass(frozen=True)
class RankResult:
    """Certificate for the rank computation.

    `apolar` is the degree-(k+1) generator when it is unique (generic,
    degenerate, and power cases); it is absent for the zero form and in
    the middle case, where uniqueness fails.
    """

    rank: int
    border_rank: int
    apolar: BinaryForm | None
    case: RankCase

    @property
    def k(self) -> int:
        """Secant index: the form lies on the k-th secant variety, k = b - 1."""
        return self.border_rank - 1


@dataclass(frozen=True)
class Classification:
    """Rank certificate plus the stratum label and its closure's rank set."""

    result: RankResult
    stratum: str
    closure_ranks: frozenset[int]


def waring_rank(q: BinaryForm) -> RankResult:
    """Exact Waring rank of q with its case certificate."""
    if q.is_zero:
        return RankResult(0, 0, None, RankCase.ZERO)
    d = q.degree
    b = border_rank(q)
    k = b - 1
    if d % 2 == 0 and k == d // 2:
        rank, apolar, case = k + 1, None, RankCase.MIDDLE
    else:
        apolar = apolar_generator(q, k)
        if is_squarefree(apolar):
            rank, case = k + 1, RankCase.GENERIC
        else:
            rank, case = d - k + 1, RankCase.DEGENERATE
    if rank == 1:
        case = RankCase.POWER
    return RankResult(rank, b, apolar, case)


def closure_ranks(d: int, r: int) -> frozenset[int]:
    """Ranks occurring in the closure of the rank-r stratum: {1..r} u {d-r+2..d}."""
    if not 1 <= r <= d:
        raise InvalidInputError(f"rank {r} out of range for degree {d}")
    return frozenset(range(1, r + 1)) | frozenset(range(d - r + 2, d + 1))


def classify(q: BinaryForm) -> Classification:
    """Rank plus stratum label S_{d,r} and the closure's rank set."""
    if q.is_zero:
        raise InvalidInputError("cannot classify the zero form")
    res = waring_rank(q)
    d, r = q.degree, res.rank
    return Classification(res, f"S_{{{d},{r}}}", closure_ranks(d, r))


# ---------------------------------------------------------------------------
# seeded samplers

_RETRY_BUDGET = 64
_COEFF_RANGE = 9


def _as_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _random_linear_forms(rng: random.Random, count: int) -> list[tuple[int, int]]:
    """Pairwise non-proportional integer pairs with entries in [-9, 9]."""
    forms: list[tuple[int, int]] = []
    for _ in range(10_000):
        c = rng.randint(-_COEFF_RANGE, _COEFF_RANGE)
        e = rng.randint(-_COEFF_RANGE, _COEFF_RANGE)
        if c == 0 and e == 0:
            continue
        if any(c * e2 - e * c2 == 0 for c2, e2 in forms):
            continue
        forms.append((c, e))
        if len(forms) == count:
            return forms
    raise SamplingError("could not draw enough non-proportional linear forms")


def sample_generic_rank(d: int, r: int, seed=0) -> BinaryForm:
    """A random form of degree d with rank exactly r, built as a sum of
    r d-th powers and certified by `waring_rank` (resampled on failure)."""
    if not 1 <= r <= d // 2 + 1:
        raise InvalidInputError(f"rank {r} not reachable generically in degree {d}")
    rng = _as_rng(seed)
    for _ in range(_RETRY_BUDGET):
        points = _random_linear_forms(rng, r)
        lams = [Fraction(rng.randint(1, _COEFF_RANGE)) for _ in range(r)]
        q = power_sum_form(d, list(zip(lams, points)))
        if q.is_zero:
            continue
        if waring_rank(q).rank == r:
            return q
    raise SamplingError(f"no rank-{r} witness found in degree {d} within budget")


def _apolar_condition_matrix(f: BinaryForm, d: int) -> RationalMatrix:
    """Matrix of Z -> (phi(f*g))_g over the monomial basis of S_{d - deg f}.

    Row i has f's coefficients shifted to columns i .. i+deg f.
    """
    s = f.degree
    rows = d - s + 1
    entries = []
    for i in range(rows):
        row = [Fraction(0)] * (d + 1)
        for j, c in enumerate(f.coeffs):
            row[i + j] = c
        entries.extend(row)
    return RationalMatrix(rows, d + 1, tuple(entries))


def sample_degenerate(d: int, k: int, seed=0) -> BinaryForm:
    """A random degree-d form of border rank k+1 and rank d-k+1.

    Picks f = l0^2 * l1 * ... * l_{k-1} with a forced double root, solves
    the exact linear conditions phi(f * S_{d-k-1}) = 0 for the dual
    coordinates, draws a random element of that solution space, and
    verifies the certificate (retrying on failure).
    """
    if not 1 <= k <= (d - 1) // 2:
        raise InvalidInputError(f"secant index {k} out of range for degree {d}")
    rng = _as_rng(seed)
    for _ in range(_RETRY_BUDGET):
        lines = _random_linear_forms(rng, k)
        f = BinaryForm(1, lines[0]) ** 2
        for c, e in lines[1:]:
            f = f * BinaryForm(1, (c, e))
        basis = nullspace(_apolar_condition_matrix(f, d))
        weights = [rng.randint(-_COEFF_RANGE, _COEFF_RANGE) for _ in basis]
        if not any(weights):
            continue
        Z = [
            sum((w * v[i] for w, v in zip(weights, basis)), Fraction(0))
            for i in range(d + 1)
        ]
        q = coeffs_from_dual(DualCoordinates(d, tuple(Z)))
        if q.is_zero:
            continue
        if border_rank(q) != k + 1:
            continue
        if waring_rank(q).rank == d - k + 1:
            return q
    raise SamplingError(f"no degenerate witness found for degree {d}, k={k} within budget")
