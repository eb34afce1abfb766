import math
import random
from fractions import Fraction

import mpmath as mp
import pytest

from waring import (
    ComplexPoint,
    Decomposition,
    InvalidInputError,
    VerificationError,
    chordal_distance,
    decompose,
    dual_coords,
    expand_power_sum,
    form_from_coeffs,
    linear_form,
    monomial,
    projective_roots,
    sample_degenerate,
    sample_generic_rank,
    solve_weights,
    verify_decomposition,
    waring_rank,
)
from conftest import random_form


def _close(p: ComplexPoint, t, u, tol=1e-60):
    return chordal_distance(p, ComplexPoint(t, u, p.precision_bits)) < tol


def _root_residual(f, p: ComplexPoint):
    with mp.workprec(p.precision_bits + 8):
        m = f.degree
        total = mp.mpc(0)
        for i, c in enumerate(f.coeffs):
            total += mp.mpmathify(c) * p.t ** (m - i) * p.u**i
        norm = max(abs(mp.mpmathify(c)) for c in f.coeffs)
        return abs(total) / norm


class TestProjectiveRoots:
    def test_xy(self):
        roots = projective_roots(monomial(1, 1), 128)
        assert len(roots) == 2
        assert any(_close(p, 1, 0) for p in roots)
        assert any(_close(p, 0, 1) for p in roots)

    def test_x2_minus_y2(self):
        roots = projective_roots(form_from_coeffs(2, [1, 0, -1]), 128)
        assert any(_close(p, 1, 1, 1e-30) for p in roots)
        assert any(_close(p, 1, -1, 1e-30) for p in roots)

    def test_cube_roots_of_unity(self):
        f = form_from_coeffs(3, [1, 0, 0, -1])
        prec = 256
        roots = projective_roots(f, prec)
        assert len(roots) == 3
        with mp.workprec(prec + 64):
            omega = mp.expjpi(mp.mpf(2) / 3)
            targets = [(1, 1), (1, omega), (1, mp.conj(omega))]
        for t, u in targets:
            assert any(_close(p, t, u, 1e-40) for p in roots)
        # oracle: |f| residual at each root
        bound = mp.mpf(2) ** (-prec // 2)
        for p in roots:
            assert _root_residual(f, p) <= bound

    def test_residual_bound_random(self):
        rng = random.Random(3)
        checked = 0
        while checked < 15:
            d = rng.randint(1, 9)
            f = random_form(rng, d)
            if not is_sf(f):
                continue
            checked += 1
            roots = projective_roots(f, 192)
            assert len(roots) == d
            bound = mp.mpf(2) ** (-192 // 2)
            for p in roots:
                assert _root_residual(f, p) <= bound

    def test_rejects_non_squarefree(self):
        with pytest.raises(InvalidInputError):
            projective_roots(monomial(0, 2), 128)

    def test_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            projective_roots(form_from_coeffs(2, [0, 0, 0]), 128)

    def test_deterministic(self):
        f = form_from_coeffs(5, [3, -1, 0, 2, 0, -7])
        a = projective_roots(f, 200)
        b = projective_roots(f, 200)
        assert all(x.t == y.t and x.u == y.u for x, y in zip(a, b))


def is_sf(f):
    from waring import is_squarefree

    return is_squarefree(f)


class TestSolveWeights:
    def test_sum_of_cubes(self):
        Z = dual_coords(form_from_coeffs(3, [1, 0, 0, 1]))
        roots = [ComplexPoint(1, 0, 256), ComplexPoint(0, 1, 256)]
        lams, resid = solve_weights(Z, roots, 256)
        assert abs(lams[0] - 1) < 1e-70
        assert abs(lams[1] - 1) < 1e-70
        assert resid < mp.mpf(10) ** -70

    def test_xy_hand_weights(self):
        # derived by hand from (x+y)^2, (x-y)^2
        Z = dual_coords(monomial(1, 1))
        roots = [ComplexPoint(1, 1, 256), ComplexPoint(1, -1, 256)]
        lams, _ = solve_weights(Z, roots, 256)
        assert abs(lams[0] - mp.mpf(1) / 4) < 1e-70
        assert abs(lams[1] + mp.mpf(1) / 4) < 1e-70

    def test_pure_power(self):
        for d in (1, 4, 7):
            Z = dual_coords(monomial(d, 0))
            lams, _ = solve_weights(Z, [ComplexPoint(1, 0, 200)], 200)
            assert abs(lams[0] - 1) < 1e-50

    def test_wrong_roots_raise(self):
        Z = dual_coords(form_from_coeffs(3, [1, 0, 0, 1]))
        bad = [ComplexPoint(1, 2, 256), ComplexPoint(3, 1, 256)]
        with pytest.raises(VerificationError):
            solve_weights(Z, bad, 256)

    def test_coincident_roots_rejected(self):
        Z = dual_coords(form_from_coeffs(3, [1, 0, 0, 1]))
        with pytest.raises(InvalidInputError):
            solve_weights(Z, [ComplexPoint(1, 0, 256), ComplexPoint(2, 0, 256)], 256)

    def test_consistency_scales_with_precision(self):
        q = sample_generic_rank(6, 3, 5)
        res = waring_rank(q)
        for prec in (128, 256):
            roots = projective_roots(res.apolar, prec)
            _, resid = solve_weights(dual_coords(q), roots, prec)
            assert resid <= mp.mpf(10) ** (-0.3 * prec)


class TestDecompose:
    def test_sum_of_cubes(self):
        q = form_from_coeffs(3, [1, 0, 0, 1])
        dec = decompose(q, 256, 0)
        assert dec.method == "apolar"
        assert len(dec.terms) == 2
        assert dec.residual < mp.mpf(10) ** -40
        pts = [pt for _, pt in dec.terms]
        assert any(_close(p, 1, 0) for p in pts)
        assert any(_close(p, 0, 1) for p in pts)
        for lam, _ in dec.terms:
            assert abs(lam - 1) < 1e-60

    def test_x2y(self):
        dec = decompose(monomial(2, 1), 256, 0)
        assert len(dec.terms) == 3
        assert dec.method == "sampled"
        assert dec.residual < mp.mpf(10) ** -40

    def test_x2y2(self):
        dec = decompose(monomial(2, 2), 256, 0)
        assert len(dec.terms) == 3
        assert dec.residual < mp.mpf(10) ** -40

    def test_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            decompose(form_from_coeffs(1, [0, 0]), 128, 0)

    def test_degree_zero(self):
        dec = decompose(form_from_coeffs(0, [5]), 128, 0)
        assert len(dec.terms) == 1
        assert dec.terms[0][0] == 5

    def test_linear(self):
        dec = decompose(form_from_coeffs(1, [1, 2]), 128, 0)
        assert len(dec.terms) == 1
        assert dec.residual < mp.mpf(10) ** -20

    def test_term_count_matches_rank(self):
        rng = random.Random(6)
        for _ in range(10):
            d = rng.randint(2, 9)
            q = random_form(rng, d)
            dec = decompose(q, 256, 1)
            assert len(dec.terms) == waring_rank(q).rank

    def test_reconstruction_invariant(self):
        # expand_power_sum of the terms reproduces the coefficients
        q = sample_degenerate(6, 2, 7)
        dec = decompose(q, 256, 0)
        recon = expand_power_sum(q.degree, dec.terms, 320)
        with mp.workprec(320):
            scale = max(abs(mp.mpmathify(c)) for c in q.coeffs)
            for got, want in zip(recon, q.coeffs):
                assert abs(got - mp.mpmathify(want)) / scale <= dec.residual + mp.mpf(10) ** -60

    def test_deterministic(self):
        q = sample_degenerate(7, 2, 9)
        a = decompose(q, 256, 4)
        b = decompose(q, 256, 4)
        assert a.residual == b.residual
        assert all(x[0] == y[0] for x, y in zip(a.terms, b.terms))


class TestVerify:
    def test_pass(self):
        q = form_from_coeffs(3, [1, 0, 0, 1])
        dec = decompose(q, 256, 0)
        report = verify_decomposition(q, dec, 1e-30)
        assert report.passed
        assert report.separation_ok

    def test_doubled_weights_fail(self):
        q = form_from_coeffs(3, [1, 0, 0, 1])
        dec = decompose(q, 256, 0)
        corrupted = Decomposition(
            dec.degree,
            tuple((2 * lam, pt) for lam, pt in dec.terms),
            dec.precision_bits,
            dec.residual,
            dec.method,
        )
        report = verify_decomposition(q, corrupted, 1e-30)
        assert not report.passed
        assert 0.5 < report.max_rel_error < 2

    def test_single_power(self):
        q = monomial(6, 0)
        dec = decompose(q, 256, 0)
        report = verify_decomposition(q, dec, 1e-30)
        assert report.passed

    def test_precision_monotonicity(self):
        rng = random.Random(14)
        cases = []
        for i in range(50):
            d = rng.randint(2, 8)
            if i % 2 == 0:
                r = rng.randint(1, d // 2 + 1)
                cases.append(sample_generic_rank(d, r, 100 + i))
            else:
                k = rng.randint(1, (d - 1) // 2) if d >= 3 else 1
                if d < 3:
                    continue
                cases.append(sample_degenerate(d, k, 100 + i))
        from waring.decompose import working_precision

        # residuals at the finer precision's ulp level count as zero: the
        # coarser run can round to an exact 0.0 that the finer one misses
        # by one ulp
        floor = mp.mpf(2) ** (-(working_precision(256) - 16))
        for q in cases:
            lo = decompose(q, 128, 3).residual
            hi = decompose(q, 256, 3).residual
            assert hi <= lo or hi <= floor
