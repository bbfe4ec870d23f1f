import math
from fractions import Fraction

import numpy as np
import pytest

from fockforge import (
    Cutoff,
    LieTriple,
    Operator,
    SpinJ,
    SpinK,
    pochhammer,
    schwinger_su2,
    schwinger_su11,
    single_mode_su11,
    su2_generators,
    su11_generators,
)
from fockforge.fock import safe_indices


def closure_residuals(triple, keep):
    """Frobenius norms of the three bracket relations on the kept block."""
    p, m, t = triple.plus.entries, triple.minus.entries, triple.third.entries
    sign = 1.0 if triple.algebra == "su2" else -1.0
    rels = [
        t @ p - p @ t - p,
        t @ m - m @ t + m,
        p @ m - m @ p - sign * 2.0 * t,
    ]
    k = np.asarray(keep)
    return [float(np.linalg.norm(r[np.ix_(k, k)], "fro")) for r in rels]


class TestSu2:
    def test_spin_half_matrices(self):
        triple = su2_generators(SpinJ(1))
        np.testing.assert_allclose(triple.plus.entries, [[0, 0], [1, 0]])
        np.testing.assert_allclose(triple.third.entries, np.diag([-0.5, 0.5]))

    def test_lowest_weight_annihilated(self):
        triple = su2_generators(SpinJ(5))
        e0 = np.zeros(6)
        e0[0] = 1.0
        assert np.all(triple.minus.entries @ e0 == 0)

    @pytest.mark.parametrize("two_j", range(1, 9))
    def test_closure_exact(self, two_j):
        triple = su2_generators(SpinJ(two_j))
        res = closure_residuals(triple, np.arange(two_j + 1))
        assert max(res) < 1e-12

    @pytest.mark.parametrize("two_j", range(1, 9))
    def test_casimir(self, two_j):
        triple = su2_generators(SpinJ(two_j))
        p, m, t = triple.plus.entries, triple.minus.entries, triple.third.entries
        casimir = t @ t + 0.5 * (p @ m + m @ p)
        j = two_j / 2
        assert np.abs(casimir - j * (j + 1) * np.eye(two_j + 1)).max() < 1e-12

    def test_dagger_pairing(self):
        triple = su2_generators(SpinJ(4))
        np.testing.assert_array_equal(triple.minus.entries, triple.plus.entries.conj().T)


class TestSu11:
    def test_quarter_spin_first_amplitude(self):
        triple = su11_generators(SpinK(Fraction(1, 2), Cutoff(8)))
        assert triple.plus.entries[1, 0] == pytest.approx(1 / math.sqrt(2))

    def test_lowest_weight_annihilated(self):
        triple = su11_generators(SpinK(Fraction(3, 2), Cutoff(8)))
        e0 = np.zeros(9)
        e0[0] = 1.0
        assert np.all(triple.minus.entries @ e0 == 0)

    @pytest.mark.parametrize("two_k", [Fraction(1, 2), Fraction(3, 2), Fraction(2)])
    def test_closure_on_bulk(self, two_k):
        cut = Cutoff(20)
        triple = su11_generators(SpinK(two_k, cut))
        res = closure_residuals(triple, np.arange(cut.dim - 1))
        assert max(res) < 1e-12

    def test_corner_violation_documented(self):
        # [K+, K-] = -2 K3 fails only at the truncation corner
        cut = Cutoff(10)
        triple = su11_generators(SpinK(Fraction(1, 2), cut))
        res_full = closure_residuals(triple, np.arange(cut.dim))
        assert res_full[2] > 1.0

    def test_rejects_nonpositive_spin(self):
        with pytest.raises(ValueError):
            SpinK(Fraction(0), Cutoff(4))


class TestSchwinger:
    def test_su2_plus_kills_double_vacuum(self):
        triple = schwinger_su2(Cutoff(4))
        vac = np.zeros(25)
        vac[0] = 1.0
        assert np.all(triple.plus.entries @ vac == 0)

    def test_su2_closure_on_bulk(self):
        cut = Cutoff(8)
        triple = schwinger_su2(cut)
        keep = safe_indices(cut, 1, modes=2)
        assert max(closure_residuals(triple, keep)) < 1e-12

    def test_su2_single_excitation_block(self):
        # the total-occupation-1 sector carries spin 1/2: |0,1> is the lowest
        # weight and |1,0> the highest
        cut = Cutoff(3)
        d = cut.dim
        triple = schwinger_su2(cut)
        lo, hi = 0 * d + 1, 1 * d + 0  # (0,1) and (1,0)
        block = np.ix_([lo, hi], [lo, hi])
        ref = su2_generators(SpinJ(1))
        np.testing.assert_allclose(triple.plus.entries[block], ref.plus.entries, atol=1e-12)
        np.testing.assert_allclose(triple.third.entries[block], ref.third.entries, atol=1e-12)

    def test_su11_lowers_nothing_from_vacuum(self):
        triple = schwinger_su11(Cutoff(4))
        vac = np.zeros(25)
        vac[0] = 1.0
        assert np.all(triple.minus.entries @ vac == 0)

    def test_su11_vacuum_weight(self):
        triple = schwinger_su11(Cutoff(4))
        vac = np.zeros(25)
        vac[0] = 1.0
        np.testing.assert_allclose(triple.third.entries @ vac, 0.5 * vac)

    def test_su11_closure_on_bulk(self):
        cut = Cutoff(8)
        triple = schwinger_su11(cut)
        keep = safe_indices(cut, 1, modes=2)
        assert max(closure_residuals(triple, keep)) < 1e-12


class TestSingleModeSu11:
    def test_vacuum_weight_quarter(self):
        triple = single_mode_su11(Cutoff(6))
        vac = np.zeros(7)
        vac[0] = 1.0
        np.testing.assert_allclose(triple.third.entries @ vac, 0.25 * vac)

    def test_even_odd_weights(self):
        # K3 eigenvalue on |2m> is 1/4 + m, on |2m+1> it is 3/4 + m
        triple = single_mode_su11(Cutoff(9))
        diag = np.real(np.diag(triple.third.entries))
        for n, w in enumerate(diag):
            k = 0.25 if n % 2 == 0 else 0.75
            assert w == pytest.approx(k + n // 2)

    def test_closure_one_ladder_step_in(self):
        # one ladder step spans two occupation levels
        cut = Cutoff(20)
        triple = single_mode_su11(cut)
        res = closure_residuals(triple, np.arange(cut.dim - 2))
        assert max(res) < 1e-12

    def test_even_block_matches_abstract_quarter_spin(self):
        fock_cut = Cutoff(20)
        triple = single_mode_su11(fock_cut)
        even = np.arange(0, fock_cut.dim, 2)
        k_cut = Cutoff(len(even) - 1)
        abstract = su11_generators(SpinK(Fraction(1, 2), k_cut))
        # compare away from the boundary where the quadratic ladder truncates
        safe = np.arange(len(even) - 1)
        for mine, ref in (
            (triple.plus, abstract.plus),
            (triple.minus, abstract.minus),
            (triple.third, abstract.third),
        ):
            block = mine.entries[np.ix_(even, even)]
            diff = (block - ref.entries)[np.ix_(safe, safe)]
            assert np.abs(diff).max() < 1e-12


class TestPochhammer:
    def test_small_values(self):
        assert pochhammer(2.0, 3) == pytest.approx(24.0)
        assert pochhammer(0.5, 2) == pytest.approx(0.75)
        assert pochhammer(3.7, 0) == 1.0

    def test_recurrence_matches_log_route(self):
        direct = pochhammer(0.5, 120)
        log_route = math.exp(math.lgamma(0.5 + 120) - math.lgamma(0.5))
        assert direct == pytest.approx(log_route, rel=1e-10)

    def test_log_space_above_guard(self):
        value = pochhammer(1.5, 150)
        assert math.isfinite(value) and value > 1e200

    def test_rejects_negative_count(self):
        with pytest.raises(ValueError):
            pochhammer(1.0, -1)


class TestLieTriple:
    def test_rejects_mismatched_adjoint(self):
        cut = Cutoff(3)
        a = np.zeros((4, 4), dtype=complex)
        a[1, 0] = 1.0
        bad = a.copy()
        bad[0, 1] = 0.5
        with pytest.raises(ValueError):
            LieTriple(
                Operator(a, 1, cut),
                Operator(bad, 1, cut),
                Operator(np.eye(4, dtype=complex), 1, cut),
                "su2",
            )
