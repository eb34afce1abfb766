"""Binary forms with exact rational coefficients, and their dual-side view.

A form of degree d is the coefficient vector (a0, ..., ad) of
q = sum_i ai * x^(d-i) * y^i.  Everything downstream (rank decisions,
catalecticant matrices) relies on these coefficients staying exact, so
construction coerces entries to `fractions.Fraction` and refuses floats.
Complex data enters only through `ComplexPoint` and `expand_power_sum`,
which carry an explicit binary working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp

from .errors import InvalidInputError

__all__ = [
    "BinaryForm",
    "DualCoordinates",
    "ComplexPoint",
    "form_from_coeffs",
    "monomial",
    "linear_form",
    "dual_coords",
    "coeffs_from_dual",
    "evaluate",
    "power_sum_form",
    "expand_power_sum",
    "apply_gl2",
    "chordal_distance",
]


def as_fraction(value) -> Fraction:
    """Coerce an exact rational-like value (int, str, Fraction) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"not an exact rational: {value!r}") from exc
    raise InvalidInputError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class BinaryForm:
    """q = a0*x^d + a1*x^(d-1)*y + ... + ad*y^d with exact coefficients."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise InvalidInputError(f"degree must be a natural number, got {self.degree!r}")
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.degree + 1:
            raise InvalidInputError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if other.degree != self.degree:
            raise InvalidInputError("cannot add forms of different degrees")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return BinaryForm(self.degree, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            return BinaryForm(self.degree + other.degree, _convolve(self.coeffs, other.coeffs))
        scalar = as_fraction(other)
        return BinaryForm(self.degree, tuple(scalar * a for a in self.coeffs))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise InvalidInputError("exponent must be a natural number")
        out = BinaryForm(0, (Fraction(1),))
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"BinaryForm(d={self.degree}, [{terms}])"


def _convolve(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)


@dataclass(frozen=True)
class DualCoordinates:
    """Coordinates (Z0, ..., Zd) of the dual functional, Zi = phi(x^(d-i) y^i)."""

    degree: int
    Z: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise InvalidInputError(f"degree must be a natural number, got {self.degree!r}")
        Z = tuple(as_fraction(z) for z in self.Z)
        if len(Z) != self.degree + 1:
            raise InvalidInputError(
                f"degree {self.degree} needs {self.degree + 1} dual coordinates, got {len(Z)}"
            )
        object.__setattr__(self, "Z", Z)


def form_from_coeffs(degree: int, coeffs: Iterable) -> BinaryForm:
    """Build a binary form from its monomial-basis coefficient vector."""
    return BinaryForm(degree, tuple(coeffs))


def monomial(a: int, b: int) -> BinaryForm:
    """The monomial x^a * y^b as a form of degree a + b."""
    if a < 0 or b < 0:
        raise InvalidInputError("monomial exponents must be natural numbers")
    coeffs = [Fraction(0)] * (a + b + 1)
    coeffs[b] = Fraction(1)
    return BinaryForm(a + b, tuple(coeffs))


def linear_form(c, e) -> BinaryForm:
    """The linear form c*x + e*y."""
    return BinaryForm(1, (as_fraction(c), as_fraction(e)))


def dual_coords(q: BinaryForm) -> DualCoordinates:
    """Dual coordinates of q: Zi = ai / C(d, i), exactly."""
    d = q.degree
    return DualCoordinates(d, tuple(a / math.comb(d, i) for i, a in enumerate(q.coeffs)))


def coeffs_from_dual(Z: DualCoordinates) -> BinaryForm:
    """Inverse of `dual_coords`: ai = C(d, i) * Zi."""
    d = Z.degree
    return BinaryForm(d, tuple(z * math.comb(d, i) for i, z in enumerate(Z.Z)))


def evaluate(q: BinaryForm, point) -> Fraction:
    """Evaluate q at an exact rational point (t, u)."""
    t, u = (as_fraction(v) for v in point)
    d = q.degree
    total = Fraction(0)
    for i, a in enumerate(q.coeffs):
        if a != 0:
            total += a * t ** (d - i) * u**i
    return total


def power_sum_form(degree: int, terms) -> BinaryForm:
    """Exact expansion of sum_j lam_j * (c_j x + e_j y)^degree.

    `terms` is an iterable of (lam, (c, e)) with exact rational entries.
    This is the sampler-side twin of `expand_power_sum`, which works in
    complex arithmetic.
    """
    d = degree
    coeffs = [Fraction(0)] * (d + 1)
    for lam, (c, e) in terms:
        lam, c, e = as_fraction(lam), as_fraction(c), as_fraction(e)
        for i in range(d + 1):
            coeffs[i] += lam * math.comb(d, i) * c ** (d - i) * e**i
    return BinaryForm(d, tuple(coeffs))


class ComplexPoint:
    """Projective point [t, u] over the complex numbers.

    Entries are stored scaled so the entry of larger modulus equals 1
    (ties scale by t), which makes the representative deterministic and
    the scaling idempotent.  `precision_bits` is the working precision the
    entries were computed at.
    """

    __slots__ = ("t", "u", "precision_bits")

    def __init__(self, t, u, precision_bits: int = 53):
        precision_bits = int(precision_bits)
        if precision_bits < 4:
            raise InvalidInputError("precision_bits too small")
        with mp.workprec(precision_bits):
            tc = mp.mpmathify(t)
            uc = mp.mpmathify(u)
            if tc == 0 and uc == 0:
                raise InvalidInputError("projective point needs a nonzero entry")
            if abs(uc) > abs(tc):
                tc, uc = mp.mpc(tc / uc), mp.mpc(1)
            else:
                tc, uc = mp.mpc(1), mp.mpc(uc / tc)
        object.__setattr__(self, "t", tc)
        object.__setattr__(self, "u", uc)
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexPoint is immutable")

    def as_pair(self):
        return self.t, self.u

    @property
    def is_infinity(self) -> bool:
        """True for the point [1, 0]."""
        return self.u == 0

    def __repr__(self):
        return f"ComplexPoint([{mp.nstr(self.t, 8)}, {mp.nstr(self.u, 8)}])"


def chordal_distance(p: ComplexPoint, q: ComplexPoint):
    """Distance |t1 u2 - t2 u1| / (|p| |q|) between projective points."""
    prec = max(p.precision_bits, q.precision_bits) + 8
    with mp.workprec(prec):
        num = abs(p.t * q.u - q.t * p.u)
        den = mp.sqrt((abs(p.t) ** 2 + abs(p.u) ** 2) * (abs(q.t) ** 2 + abs(q.u) ** 2))
        return num / den


def _as_point(alpha, precision_bits: int) -> ComplexPoint:
    if isinstance(alpha, ComplexPoint):
        return alpha
    t, u = alpha
    return ComplexPoint(t, u, precision_bits)


def expand_power_sum(degree: int, terms, precision_bits: int | None = None):
    """Coefficients of sum_j lam_j * (t_j x + u_j y)^degree, complex.

    Entry i equals sum_j lam_j * C(degree, i) * t_j^(degree-i) * u_j^i.
    Points given as raw pairs are normalized through `ComplexPoint` first.
    Returns a list of mpmath complex numbers computed at `precision_bits`
    (default: the largest precision among the points, else 53).
    """
    d = degree
    if precision_bits is None:
        precs = [a.precision_bits for _, a in terms if isinstance(a, ComplexPoint)]
        precision_bits = max(precs) if precs else 53
    with mp.workprec(precision_bits):
        out = [mp.mpc(0)] * (d + 1)
        for lam, alpha in terms:
            pt = _as_point(alpha, precision_bits)
            lamc = mp.mpmathify(lam)
            tp = [mp.mpc(1)]
            up = [mp.mpc(1)]
            for _ in range(d):
                tp.append(tp[-1] * pt.t)
                up.append(up[-1] * pt.u)
            for i in range(d + 1):
                out[i] += lamc * math.comb(d, i) * tp[d - i] * up[i]
        return out


def apply_gl2(q: BinaryForm, A) -> BinaryForm:
    """Substitute (x, y) -> A (x, y)^T and re-expand, exactly.

    A is a 2x2 matrix of exact rationals given as ((a, b), (c, e)); the
    result is q(a x + b y, c x + e y).  A need not be invertible.
    """
    (a, b), (c, e) = A
    row1 = (as_fraction(a), as_fraction(b))
    row2 = (as_fraction(c), as_fraction(e))
    d = q.degree
    # powers of the two image linear forms, as coefficient tuples
    xpow: list[tuple[Fraction, ...]] = [(Fraction(1),)]
    ypow: list[tuple[Fraction, ...]] = [(Fraction(1),)]
    for _ in range(d):
        xpow.append(_convolve(xpow[-1], row1))
        ypow.append(_convolve(ypow[-1], row2))
    out = [Fraction(0)] * (d + 1)
    for i, ai in enumerate(q.coeffs):
        if ai == 0:
            continue
        term = _convolve(xpow[d - i], ypow[i])
        for k, v in enumerate(term):
            out[k] += ai * v
    return BinaryForm(d, tuple(out))
