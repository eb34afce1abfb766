"""Catalecticant (Hankel) matrices, apolar spaces, and exact root-multiplicity
tests for binary forms.

The catalecticant of level s has entry (i, j) = Z_{i+j} for i = 0..d-s,
j = 0..s; its rank profile carries the border rank, and its nullspace is
the space of degree-s forms apolar to q.  Squarefreeness is decided two
independent ways: a gcd test (primary) and the discriminant via the
resultant of the two partial derivatives (cross-check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, VerificationError
from .forms import BinaryForm, DualCoordinates, dual_coords
from .linalg import RationalMatrix, nullspace, rank_exact

__all__ = [
    "ApolarBasis",
    "catalecticant",
    "border_rank",
    "apolar_generator",
    "apolar_space",
    "is_squarefree",
    "discriminant",
    "apolar_pairing",
]


@dataclass(frozen=True)
class ApolarBasis:
    """Basis of the space of degree-s forms f with phi(f*g) = 0 for all g."""

    degree: int
    basis: tuple[BinaryForm, ...]


def catalecticant(Z: DualCoordinates, s: int) -> RationalMatrix:
    """The (d-s+1) x (s+1) Hankel matrix with entry (i, j) = Z_{i+j}."""
    d = Z.degree
    if not 0 <= s <= d:
        raise InvalidInputError(f"catalecticant level {s} out of range for degree {d}")
    rows = d - s + 1
    cols = s + 1
    return RationalMatrix(rows, cols, tuple(Z.Z[i + j] for i in range(rows) for j in range(cols)))


def border_rank(q: BinaryForm) -> int:
    """Rank of the middle catalecticant: the least r with q a limit of rank-r forms.

    For d = 2n this is the (n+1) x (n+1) matrix at level n; for d = 2n+1
    the (n+2) x (n+1) matrix at the same level.
    """
    if q.is_zero:
        raise InvalidInputError("the zero form has no border rank")
    return rank_exact(catalecticant(dual_coords(q), q.degree // 2))


def apolar_generator(q: BinaryForm, k: int) -> BinaryForm:
    """The unique (up to scalars) degree-(k+1) form apolar to q.

    Caller must ensure border_rank(q) = k+1 and, for even d, k != d/2;
    under those conditions the (d-k) x (k+2) catalecticant at level k+1
    has a one-dimensional nullspace.  A different nullspace dimension
    signals a bug or a precondition breach.
    """
    M = catalecticant(dual_coords(q), k + 1)
    basis = nullspace(M)
    if len(basis) != 1:
        raise VerificationError(
            f"apolar generator nullspace has dimension {len(basis)}, expected 1 "
            f"(degree {q.degree}, k={k})"
        )
    return BinaryForm(k + 1, basis[0])


def apolar_space(q: BinaryForm, s: int) -> ApolarBasis:
    """Exact basis of the degree-s apolar space of q."""
    M = catalecticant(dual_coords(q), s)
    return ApolarBasis(s, tuple(BinaryForm(s, v) for v in nullspace(M)))


def apolar_pairing(q: BinaryForm, f: BinaryForm) -> list[Fraction]:
    """Values phi(f * g) for g over the monomial basis of degree d - deg f.

    All-zero output means f is apolar to q.
    """
    d, s = q.degree, f.degree
    if s > d:
        raise InvalidInputError("apolar pairing needs deg f <= deg q")
    Z = dual_coords(q).Z
    out = []
    for i in range(d - s + 1):
        out.append(sum((f.coeffs[j] * Z[i + j] for j in range(s + 1)), Fraction(0)))
    return out


# ---------------------------------------------------------------------------
# squarefree test: exact gcd on the dehomogenization, with explicit handling
# of the root at infinity [1, 0]


def _strip_leading_zeros(c: list[int]) -> list[int]:
    i = 0
    while i < len(c) and c[i] == 0:
        i += 1
    return c[i:]


def _primitive(c: list[int]) -> list[int]:
    g = math.gcd(*c) if c else 0
    if g > 1:
        c = [v // g for v in c]
    return c


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (decreasing coefficients, deg a >= deg b)."""
    na, nb = len(a) - 1, len(b) - 1
    r = list(a)
    lb = b[0]
    for i in range(na - nb + 1):
        lead = r[i]
        for j in range(len(r)):
            r[j] *= lb
        for j in range(nb + 1):
            r[i + j] -= lead * b[j]
    return _strip_leading_zeros(r[na - nb + 1 :])


def _int_poly_gcd_degree(a: list[int], b: list[int]) -> int:
    """Degree of gcd(a, b) via a primitive pseudo-remainder sequence."""
    a = _strip_leading_zeros(a)
    b = _strip_leading_zeros(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _primitive(_pseudo_rem(a, b))
        a, b = b, r
    return len(a) - 1


def _integer_coeffs(f: BinaryForm) -> list[int]:
    den = math.lcm(*(c.denominator for c in f.coeffs))
    return [int(c * den) for c in f.coeffs]


def infinity_multiplicity(f: BinaryForm) -> int:
    """Multiplicity of the root [1, 0], i.e. the power of y dividing f."""
    if f.is_zero:
        raise InvalidInputError("the zero form has no roots")
    for i, c in enumerate(f.coeffs):
        if c != 0:
            return i
    raise AssertionError("unreachable")


def is_squarefree(f: BinaryForm) -> bool:
    """True iff f has no repeated root in the projective line, decided exactly.

    Let g(t) = f(t, 1).  f is squarefree iff gcd(g, g') is constant and the
    multiplicity of [1, 0] (index of the first nonzero coefficient) is <= 1.
    """
    if f.is_zero:
        raise InvalidInputError("the zero form is not a valid squarefree-test input")
    if f.degree < 1:
        raise InvalidInputError("squarefree test needs degree >= 1")
    e = infinity_multiplicity(f)
    if e >= 2:
        return False
    g = _integer_coeffs(f)[e:]
    n = len(g) - 1
    if n <= 1:
        return True
    dg = [c * (n - i) for i, c in enumerate(g[:-1])]
    return _int_poly_gcd_degree(g, dg) == 0


# ---------------------------------------------------------------------------
# discriminant via the resultant of the two partials


def _det_bareiss(a: list[list[int]]) -> int:
    """Exact determinant of a square integer matrix (destructive)."""
    n = len(a)
    sign = 1
    prev = 1
    for c in range(n):
        piv = None
        best = None
        for i in range(c, n):
            v = a[i][c]
            if v != 0:
                bits = abs(v).bit_length()
                if best is None or bits < best:
                    best, piv = bits, i
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            vi = a[i][c]
            for j in range(c + 1, n):
                a[i][j] = (p * a[i][j] - vi * a[c][j]) // prev
            a[i][c] = 0
        prev = p
    return sign * a[n - 1][n - 1]


def _resultant_partials(f: BinaryForm) -> Fraction:
    """Resultant of f_x and f_y as binary forms of degree m-1 each."""
    m = f.degree
    fx = [f.coeffs[i] * (m - i) for i in range(m)]
    fy = [f.coeffs[i + 1] * (i + 1) for i in range(m)]
    den = math.lcm(*(c.denominator for c in fx + fy))
    fxi = [int(c * den) for c in fx]
    fyi = [int(c * den) for c in fy]
    size = 2 * m - 2
    rows = []
    for i in range(m - 1):
        rows.append([0] * i + fxi + [0] * (m - 2 - i))
    for i in range(m - 1):
        rows.append([0] * i + fyi + [0] * (m - 2 - i))
    det = _det_bareiss(rows)
    # the Sylvester matrix was built from den-scaled forms of degree m-1
    return Fraction(det, den ** size)


def discriminant(f: BinaryForm) -> Fraction:
    """Discriminant of f; zero iff f has a repeated projective root.

    Computed as (-1)^(m(m-1)/2) * Res(f_x, f_y) / m^(m-2), the classical
    normalization that gives b^2 - 4ac in degree 2.
    """
    m = f.degree
    if m < 2:
        raise InvalidInputError("discriminant needs degree >= 2")
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    return sign * _resultant_partials(f) / Fraction(m) ** (m - 2)
