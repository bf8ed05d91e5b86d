import numpy as np
import pytest

from barrier_resonances import resonance
from barrier_resonances.errors import (Disagreement, GridMismatch, IndexOutOfRange,
                                       PoleEvaluation)
from barrier_resonances.polefinder import ResonanceSet
from barrier_resonances.resonance import (ApproxState, SampledState, approximate_state,
                                          default_xgrid, density_distance, free_tail,
                                          gram_entry, gram_matrix, l2_distance,
                                          normalize_samples, spatial_state, weight,
                                          zero_order_norm_sq)

from conftest import MU1
from oracles import two_pole_log


class TestWeight:
    def test_zero_order(self, poles1):
        single = poles1.lowest(1)
        E = np.linspace(0.1, 30, 50)
        assert np.allclose(weight(E, 0, single), 1 / (E - single[0].mu), rtol=1e-15)

    def test_modulus(self, poles1, rng):
        E = rng.uniform(0, 120, 200)
        for j in (0, 4, 9):
            assert np.allclose(np.abs(weight(E, j, poles1)), 1 / np.abs(E - poles1[j].mu),
                               rtol=1e-13)

    def test_telescoping(self, poles1, rng):
        E = rng.uniform(0, 120, 100)
        for j, k in ((0, 1), (2, 7), (9, 3), (5, 5)):
            lhs = np.conj(weight(E, j, poles1)) * weight(E, k, poles1)
            rhs = 1 / ((E - poles1[j].mu) * (E - np.conj(poles1[k].mu)))
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=0)

    def test_pole_evaluation(self, poles1):
        with pytest.raises(PoleEvaluation):
            weight(poles1[3].mu, 0, poles1)
        with pytest.raises(IndexOutOfRange):
            weight(1.0, 10, poles1)

    def test_prefactor(self, poles1):
        assert weight(2.0, 1, poles1, prefactor=True) == pytest.approx(
            weight(2.0, 1, poles1) / (2j * np.pi))


class TestGram:
    def test_diagonal_closed_form(self, poles1):
        for j in range(len(poles1)):
            g = gram_entry(j, j, poles1)
            assert abs(g.imag) < 1e-12 * abs(g)
            assert g.real == pytest.approx(zero_order_norm_sq(poles1[j].mu), rel=1e-12)

    def test_symmetric_pole(self):
        single = ResonanceSet.from_energies([-1j])
        assert gram_entry(0, 0, single) == pytest.approx(np.pi / 2, rel=1e-13)

    def test_two_pole_oracle(self, poles1):
        for j, k in ((0, 1), (3, 8)):
            want = two_pole_log(poles1[j].mu, np.conj(poles1[k].mu))
            assert gram_entry(j, k, poles1) == pytest.approx(want, rel=1e-13)

    def test_order_invariance(self, poles1):
        small = poles1.lowest(3)
        for j in range(3):
            for k in range(3):
                assert gram_entry(j, k, small) == pytest.approx(gram_entry(j, k, poles1),
                                                                rel=1e-9)

    def test_matrix(self, poles1):
        G = gram_matrix(poles1)
        assert G.hermitian_error == 0
        assert G.min_eigenvalue > -1e-10 * G.trace
        assert np.all(np.diag(G.entries).real > 0)

    def test_disagreement(self, poles1, monkeypatch):
        monkeypatch.setattr(resonance, "two_pole_integral", lambda a, b: 1.0 + 0j)
        with pytest.raises(Disagreement):
            gram_entry(0, 1, poles1)

    def test_bad_index(self, poles1):
        with pytest.raises(IndexOutOfRange):
            gram_entry(0, 11, poles1)


class TestApproxState:
    def test_order_and_norm(self, poles1):
        st = approximate_state(poles1, 2, 5)
        assert st.order == 5 and st.mu == poles1[2].mu
        assert st.norm_sq == pytest.approx(zero_order_norm_sq(poles1[2].mu))
        assert ApproxState(st.j, st.poles, prefactor=True).norm_sq == pytest.approx(
            st.norm_sq / (4 * np.pi ** 2))

    def test_bad_order(self, poles1):
        with pytest.raises(IndexOutOfRange):
            approximate_state(poles1, 0, 10)


class TestSpatial:
    def test_vanishes_at_origin(self, states1):
        for s in states1.values():
            assert s.x[0] == 0 and abs(s.psi[0]) < 1e-12

    def test_unit_norm_and_gauge(self, states1):
        s = states1[0, 0]
        w = np.gradient(s.x)
        w[[0, -1]] = 0.5 * (s.x[1] - s.x[0])
        assert np.sum(w * s.density) == pytest.approx(1.0, rel=1e-12)
        assert abs(s.psi[1].imag) < 1e-15 * abs(s.psi[1]) and s.psi[1].real > 0

    def test_low_poles_insensitive_to_order(self, states1):
        assert density_distance(states1[0, 0], states1[0, 9]) < 0.05
        assert density_distance(states1[1, 0], states1[1, 9]) < 0.1

    def test_third_pole_changes(self, states1):
        assert density_distance(states1[2, 0], states1[2, 9]) > 0.3

    def test_error_estimate_covers_truncation(self, p1, poles1):
        x = default_xgrid(p1, 120)
        st = approximate_state(poles1, 2, 3)
        a = spatial_state(st.j, st.poles, x, p1, normalize=False, k_max=60.0)
        b = spatial_state(st.j, st.poles, x, p1, normalize=False, k_max=240.0)
        assert np.max(np.abs(a.psi - b.psi)) <= a.error + b.error

    def test_prefactor_scales(self, p1, poles1):
        x = default_xgrid(p1, 60)
        st = approximate_state(poles1, 1, 0)
        a = spatial_state(st.j, st.poles, x, p1, normalize=False)
        b = spatial_state(st.j, st.poles, x, p1, normalize=False, prefactor=True)
        assert np.allclose(b.psi, a.psi / (2j * np.pi), rtol=1e-12, atol=1e-14)

    def test_free_tail_against_quadrature(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 25
        for x in (0.02, 0.9, 6.0):
            want = 2 / mp.sqrt(2 * mp.pi) * mp.quadosc(lambda k: k ** -1.5 * mp.sin(k * x),
                                                        [60, mp.inf], omega=x)
            assert free_tail(np.array([x]), 60.0)[0] == pytest.approx(float(want), rel=1e-9)

    def test_bad_grid(self, p1, poles1):
        with pytest.raises(ValueError):
            spatial_state(0, poles1.lowest(1), np.array([1.0, 0.5]), p1)


class TestDistance:
    def test_self(self, states1):
        assert l2_distance(states1[0, 0], states1[0, 0]) == 0

    def test_phase(self, states1):
        s = states1[1, 9]
        rotated = SampledState(s.x, np.exp(0.7j) * s.psi * 3.0)
        assert l2_distance(s, rotated) < 1e-13

    def test_grid_mismatch(self, states1):
        s = states1[0, 0]
        other = SampledState(s.x[:-1], s.psi[:-1])
        with pytest.raises(GridMismatch):
            l2_distance(s, other)
        with pytest.raises(GridMismatch):
            density_distance(s, other)

    def test_narrow_barrier_sequence(self, mu3_prime_sequence):
        d = [l2_distance(a, b) for a, b in zip(mu3_prime_sequence, mu3_prime_sequence[1:])]
        assert all(b < a for a, b in zip(d[2:], d[3:]))
        assert d[-1] < 0.5 * max(d)

    def test_normalize_zero(self):
        x = np.linspace(0, 1, 5)
        assert np.all(normalize_samples(x, np.zeros(5)) == 0)


def test_published_pole_weight():
    rs = ResonanceSet.from_energies([MU1])
    assert abs(weight(MU1.real, 0, rs)) == pytest.approx(1 / abs(MU1.imag))
