"""Shared helpers for the test suite."""

import random
from fractions import Fraction

from waring import BinaryForm


def random_form(rng: random.Random, degree: int, lo: int = -9, hi: int = 9) -> BinaryForm:
    """Random nonzero integer-coefficient form of the given degree."""
    while True:
        coeffs = tuple(Fraction(rng.randint(lo, hi)) for _ in range(degree + 1))
        if any(coeffs):
            return BinaryForm(degree, coeffs)


def random_invertible_2x2(rng: random.Random, lo: int = -5, hi: int = 5):
    """Random integer 2x2 matrix with nonzero determinant."""
    while True:
        a, b, c, e = (rng.randint(lo, hi) for _ in range(4))
        if a * e - b * c != 0:
            return ((a, b), (c, e))


def inverse_2x2(A):
    """Exact inverse of a rational 2x2 matrix."""
    (a, b), (c, e) = A
    det = Fraction(a) * e - Fraction(b) * c
    return ((e / det, -b / det), (-c / det, a / det))
