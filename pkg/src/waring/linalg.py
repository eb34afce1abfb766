"""Exact linear algebra over the rationals.

`rank_exact` clears denominators row by row and runs fraction-free
Bareiss elimination on integers; `nullspace` reduces to RREF over
Fraction and returns a normalized integer basis; `rank_modular` redoes
the rank computation in GF(p) as an independent cross-check that shares
no elimination code with the exact path.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadPrimeError, InvalidInputError
from .forms import as_fraction

__all__ = [
    "RationalMatrix",
    "rank_exact",
    "nullspace",
    "rank_modular",
    "rank_modular_auto",
    "random_prime",
    "is_probable_prime",
]


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of exact rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError("matrix dimensions must be natural numbers")
        entries = tuple(as_fraction(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise InvalidInputError("ragged rows")
        return cls(n, m, tuple(v for r in rows for v in r))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def to_rows(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def __repr__(self):
        body = "; ".join(
            " ".join(str(self.at(i, j)) for j in range(self.cols)) for i in range(self.rows)
        )
        return f"RationalMatrix({self.rows}x{self.cols}: {body})"


def _integer_rows(M: RationalMatrix) -> list[list[int]]:
    """Row-scaled integer copy (row scaling preserves rank)."""
    out = []
    for i in range(M.rows):
        row = M.row(i)
        scale = math.lcm(*(f.denominator for f in row)) if row else 1
        out.append([int(f * scale) for f in row])
    return out


def _pick_pivot(a: list[list[int]], start: int, col: int) -> int | None:
    """Row index of the nonzero entry with smallest bit length, else None."""
    best_row = None
    best_bits = None
    for i in range(start, len(a)):
        v = a[i][col]
        if v != 0:
            bits = abs(v).bit_length()
            if best_bits is None or bits < best_bits:
                best_bits, best_row = bits, i
    return best_row


def rank_exact(M: RationalMatrix) -> int:
    """Exact rank over the rationals via fraction-free Bareiss elimination."""
    a = _integer_rows(M)
    m, n = M.rows, M.cols
    if m == 0 or n == 0:
        return 0
    rank = 0
    row = 0
    prev = 1
    for col in range(n):
        piv = _pick_pivot(a, row, col)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        for i in range(row + 1, m):
            vi = a[i][col]
            ai, ar = a[i], a[row]
            for j in range(col + 1, n):
                ai[j] = (p * ai[j] - vi * ar[j]) // prev
            ai[col] = 0
        prev = p
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def _rref(rows: list[list[Fraction]], cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fraction; returns (rref, pivot columns)."""
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def _normalize_vector(v: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale to integer entries with content 1 and positive leading entry."""
    den = math.lcm(*(f.denominator for f in v))
    ints = [int(f * den) for f in v]
    g = math.gcd(*ints)
    if g:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(Fraction(x) for x in ints)


def nullspace(M: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right nullspace, in reduced echelon normal form.

    Basis vectors come from the free columns of the RREF, scaled to
    integer entries with content 1 and positive first nonzero entry;
    the list is empty iff M has full column rank.
    """
    a, pivots = _rref(M.to_rows(), M.cols)
    free_cols = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * M.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(_normalize_vector(v))
    return basis


def _residue(f: Fraction, p: int) -> int:
    den = f.denominator % p
    if den == 0:
        raise BadPrimeError(f"prime {p} divides a denominator")
    return (f.numerator % p) * pow(den, -1, p) % p


def _rank_mod_p(M: RationalMatrix, p: int) -> int:
    a = [[_residue(v, p) for v in M.row(i)] for i in range(M.rows)]
    m, n = M.rows, M.cols
    rank = 0
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], -1, p)
        a[row] = [v * inv % p for v in a[row]]
        for i in range(row + 1, m):
            f = a[i][col]
            if f:
                a[i] = [(vi - f * vr) % p for vi, vr in zip(a[i], a[row])]
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def rank_modular(M: RationalMatrix, primes: Iterable[int]) -> int:
    """Max over the given primes of the rank of M reduced mod p.

    The modular rank can only drop below the true rank, so the maximum
    over a generic prime set equals `rank_exact`.  Raises `BadPrimeError`
    when a prime divides some entry's denominator.
    """
    primes = list(primes)
    if not primes:
        raise InvalidInputError("need at least one prime")
    return max(_rank_mod_p(M, p) for p in primes)


# deterministic Miller-Rabin witnesses, valid for all n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: random.Random, bits: int = 62) -> int:
    """A random prime with the given bit length."""
    while True:
        c = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(c):
            return c


def rank_modular_auto(M: RationalMatrix, rng: random.Random | None = None) -> int:
    """Modular rank with two random 62-bit primes; disagreement adds a third."""
    rng = rng if rng is not None else random.Random(0)
    p1, p2 = random_prime(rng), random_prime(rng)
    r1, r2 = _rank_mod_p(M, p1), _rank_mod_p(M, p2)
    if r1 != r2:
        return max(r1, r2, _rank_mod_p(M, random_prime(rng)))
    return r1
