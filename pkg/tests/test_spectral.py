"""Closed-form spectrum of the origin Jacobian."""

import cmath
import math

import numpy as np
import pytest

from conftest import dense_spectrum, match_distance, random_lattice
from fhn_torus import (
    CellParams,
    DomainError,
    LatticeParams,
    ModeIndex,
    analytic_eigenvalues,
    analytic_eigenvector,
    assemble_jacobian_origin,
    canonical_mode,
    coupling_symbol,
    genericity_violations,
    principal_sqrt,
    project_isotypic,
    spectrum_report,
    uncoupled_eigenvalues,
)

LP_HALF = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=-0.5, delta=-0.5)


class TestPrincipalSqrt:
    def test_matches_cmath_on_random_draws(self, rng):
        for _ in range(100):
            eta = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if eta.imag == 0.0:
                continue
            assert abs(principal_sqrt(eta) - cmath.sqrt(eta)) <= 1e-12 * abs(
                cmath.sqrt(eta)
            )

    def test_negative_real_axis_takes_positive_imaginary(self):
        assert principal_sqrt(complex(-4.0, 0.0)) == 2.0j
        assert principal_sqrt(complex(9.0, 0.0)) == 3.0

    def test_square_recovers_input(self, rng):
        for _ in range(50):
            eta = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            root = principal_sqrt(eta)
            assert abs(root * root - eta) < 1e-12 * max(1.0, abs(eta))
            assert root.real >= 0.0


class TestCouplingSymbol:
    def test_zero_frequency_is_minus_a(self):
        lp = LatticeParams(n=3, a=0.8, b=1.0, c=0.1, gamma=0.4, delta=-1.2)
        assert coupling_symbol(0, 0, lp) == pytest.approx(-0.8)

    def test_worked_value(self):
        val = coupling_symbol(1, 0, LP_HALF)
        assert val.real == pytest.approx(-0.75, abs=1e-15)
        assert val.imag == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)

    def test_conjugate_frequencies(self, rng):
        lp = random_lattice(rng, n=5)
        for r in range(5):
            for s in range(5):
                lhs = coupling_symbol((5 - r) % 5, (5 - s) % 5, lp)
                assert abs(lhs - coupling_symbol(r, s, lp).conjugate()) < 1e-12


class TestAnalyticEigenvalues:
    def test_pure_rotation_at_zero_mode(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=-1.0, delta=-1.0)
        lam_p, lam_m = analytic_eigenvalues(0, 0, lp)
        assert abs(lam_p - 1j) < 1e-15
        assert abs(lam_m + 1j) < 1e-15

    def test_frozen_pair(self):
        # independently checked against the roots of
        # lambda^2 - A*lambda + b with A = A(1, 0)
        lam_p, lam_m = analytic_eigenvalues(1, 0, LP_HALF)
        assert lam_p == pytest.approx(
            complex(-0.29005151144365582, -0.73924793008432721), abs=1e-14
        )
        assert lam_m == pytest.approx(
            complex(-0.45994848855634407, 1.1722606319765465), abs=1e-14
        )

    def test_vieta(self, rng):
        for _ in range(25):
            lp = random_lattice(rng, n=3)
            r, s = int(rng.integers(3)), int(rng.integers(3))
            A = coupling_symbol(r, s, lp)
            lam_p, lam_m = analytic_eigenvalues(r, s, lp)
            assert abs(lam_p + lam_m - (A - lp.c)) < 1e-12
            assert abs(lam_p * lam_m - (lp.b - lp.c * A)) < 1e-12

    def test_conjugate_pairing(self, rng):
        # the reflected frequency carries the conjugate pair; branches
        # swap on self-conjugate frequencies, where the radicand sits
        # on the negative real axis and the root convention picks +i
        lp = random_lattice(rng, n=5)
        for r in range(5):
            for s in range(5):
                pp, mm = analytic_eigenvalues(r, s, lp)
                qp, qm = analytic_eigenvalues((5 - r) % 5, (5 - s) % 5, lp)
                self_conj = (r, s) == ((5 - r) % 5, (5 - s) % 5)
                if self_conj and pp.imag != 0.0:
                    assert abs(qp - mm.conjugate()) < 1e-12
                    assert abs(qm - pp.conjugate()) < 1e-12
                else:
                    assert abs(qp - pp.conjugate()) < 1e-12
                    assert abs(qm - mm.conjugate()) < 1e-12

    def test_real_part_bounds_without_leak(self, rng):
        # with c = 0: Re lam_- <= Re A / 2; the + branch is bounded by
        # Re A when that is nonnegative and is negative otherwise
        for _ in range(40):
            lp = random_lattice(rng, n=3, c_zero=True)
            for r in range(3):
                for s in range(3):
                    A = coupling_symbol(r, s, lp)
                    lam_p, lam_m = analytic_eigenvalues(r, s, lp)
                    assert lam_m.real <= 0.5 * A.real + 1e-12
                    if A.real >= 0.0:
                        assert lam_p.real <= A.real + 1e-12
                    else:
                        assert lam_p.real < 1e-12


class TestAnalyticEigenvector:
    def test_zero_mode_is_synchronized(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=-1.0, delta=-1.0)
        xi = analytic_eigenvector(0, 0, "+", lp)
        assert np.max(np.abs(xi[0::2] - xi[0])) < 1e-14
        assert np.max(np.abs(xi[1::2] - xi[1])) < 1e-14

    def test_residuals_against_dense_matrix(self, rng):
        for n in (3, 5):
            for _ in range(10):
                lp = random_lattice(rng, n=n)
                M = assemble_jacobian_origin(lp)
                r = int(rng.integers(n))
                s = int(rng.integers(n))
                for branch in ("+", "-"):
                    lam = analytic_eigenvalues(r, s, lp)[0 if branch == "+" else 1]
                    xi = analytic_eigenvector(r, s, branch, lp)
                    res = np.max(np.abs(M @ xi - lam * xi)) / np.max(np.abs(xi))
                    assert res <= 1e-10

    def test_first_cell_component_real_positive(self, rng):
        lp = random_lattice(rng, n=3)
        xi = analytic_eigenvector(1, 2, "+", lp)
        assert xi[0].imag == pytest.approx(0.0, abs=1e-15)
        assert xi[0].real > 0.0

    def test_real_part_lies_in_isotypic_component(self, rng):
        lp = random_lattice(rng, n=3)
        for (r, s) in [(0, 0), (1, 0), (2, 2), (1, 2)]:
            xi = analytic_eigenvector(r, s, "+", lp)
            k = canonical_mode(r, s, 3)
            re = np.real(xi)
            assert np.max(np.abs(re - project_isotypic(re, k, 3))) <= 1e-10


class TestSpectrumReport:
    def test_record_count(self, rng):
        for n in (3, 5):
            lp = random_lattice(rng, n=n)
            assert len(spectrum_report(lp, compute_residuals=False)) == 2 * n * n

    def test_uncoupled_degeneracy_flagged(self):
        lp = LatticeParams(n=3, a=0.3, b=1.0, c=0.0, gamma=0.0, delta=0.0)
        recs = spectrum_report(lp, compute_residuals=False)
        assert all(rec.coincident for rec in recs)

    def test_generic_draw_unflagged(self, rng):
        lp = LatticeParams(n=3, a=0.2, b=1.0, c=0.0, gamma=0.731, delta=-1.292)
        recs = spectrum_report(lp)
        assert all(not rec.coincident for rec in recs)
        assert all(rec.residual <= 1e-10 for rec in recs)

    def test_matches_dense_spectrum(self, rng):
        lp = random_lattice(rng, n=3)
        recs = spectrum_report(lp, compute_residuals=False)
        dist = match_distance([rec.eigenvalue for rec in recs], dense_spectrum(lp))
        assert dist < 1e-8


class TestGenericityViolations:
    def test_axis_coupling_degenerates(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=0.0, delta=-1.0)
        hits = genericity_violations(lp)
        # zero gamma makes every same-column pair coincide
        assert len(hits) == 9
        assert all(p[1] == q[1] for p, q in hits)

    def test_equal_couplings_degenerate(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=1.0, delta=1.0)
        hits = genericity_violations(lp)
        assert ((0, 1), (1, 0)) in hits
        assert len(hits) == 3

    def test_generic_ratio_clean(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.0, gamma=1.0, delta=-math.pi / 7.0)
        assert genericity_violations(lp) == []

    def test_requires_c_zero(self):
        lp = LatticeParams(n=3, a=0.0, b=1.0, c=0.1, gamma=1.0, delta=1.0)
        with pytest.raises(DomainError):
            genericity_violations(lp)


class TestUncoupledEigenvalues:
    def test_rotation(self):
        lam_p, lam_m = uncoupled_eigenvalues(CellParams(a=0.0, b=1.0, c=0.0))
        assert abs(lam_p - 1j) < 1e-15 and abs(lam_m + 1j) < 1e-15

    def test_triangular_case(self):
        lam_p, lam_m = uncoupled_eigenvalues(CellParams(a=2.0, b=0.0, c=1.0))
        assert {round(lam_p.real, 12), round(lam_m.real, 12)} == {-2.0, -1.0}
        assert lam_p.imag == 0.0 and lam_m.imag == 0.0

    def test_vieta(self, rng):
        for _ in range(50):
            p = CellParams(
                a=float(rng.uniform(-2, 3)),
                b=float(rng.uniform(0, 4)),
                c=float(rng.uniform(0, 1)),
            )
            lam_p, lam_m = uncoupled_eigenvalues(p)
            assert abs(lam_p + lam_m + (p.a + p.c)) < 1e-12
            assert abs(lam_p * lam_m - (p.a * p.c + p.b)) < 1e-12

    def test_agrees_with_zero_frequency_network_mode(self, rng):
        p = CellParams(a=0.7, b=1.3, c=0.2)
        lp = LatticeParams(n=3, a=p.a, b=p.b, c=p.c, gamma=0.9, delta=-0.4)
        want = uncoupled_eigenvalues(p)
        lp0 = LatticeParams(n=3, a=p.a, b=p.b, c=p.c, gamma=0.0, delta=0.0)
        got = analytic_eigenvalues(0, 0, lp0)
        assert abs(want[0] - got[0]) < 1e-14 and abs(want[1] - got[1]) < 1e-14
        # nonzero coupling shifts only nonzero frequencies
        got_coupled = analytic_eigenvalues(0, 0, lp)
        assert abs(want[0] - got_coupled[0]) < 1e-14
