"""Tests for the sparse exterior-algebra layer."""

import itertools
import math

import numpy as np
import pytest

from conftest import random_fermion_amplitudes
from freudenthal.fermion import (
    FermionState,
    ShapeError,
    apply_matrix,
    decomposability_oracle,
    from_freudenthal,
    idempotency_defect,
    is_decomposable,
    one_particle_rdm,
    pluecker_relation,
    pluecker_scan,
    pluecker_violations,
    sort_sign,
    to_freudenthal,
    wedge,
    wedge_of_vectors,
    wedge_power_norm,
)
from freudenthal.triple import FreudenthalVector, quartic_form, rank

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


def ghz6() -> FermionState:
    return FermionState(3, 6, {(1, 2, 3): 1 / SQRT2, (4, 5, 6): 1 / SQRT2})


def w6() -> FermionState:
    return FermionState.from_terms(
        3,
        6,
        [
            ((2, 3, 4), 1 / SQRT3),
            ((1, 3, 5), -1 / SQRT3),
            ((1, 2, 6), 1 / SQRT3),
        ],
    )


def random_state(k, n, rng, sparsity=None) -> FermionState:
    return FermionState(k, n, random_fermion_amplitudes(k, n, rng))


def random_plane_state(k, n, rng) -> FermionState:
    vecs = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
    P = wedge_of_vectors(vecs)
    return (1.0 / P.norm()) * P


class TestStateBasics:
    def test_sort_sign(self):
        assert sort_sign((1, 2, 3)) == (1, (1, 2, 3))
        assert sort_sign((2, 1, 3)) == (-1, (1, 2, 3))
        assert sort_sign((3, 1, 2)) == (1, (1, 2, 3))
        assert sort_sign((1, 1, 2))[0] == 0

    def test_signed_lookup(self):
        P = FermionState(3, 6, {(1, 2, 3): 2.0})
        assert P.amplitude((1, 2, 3)) == 2.0
        assert P.amplitude((2, 1, 3)) == -2.0
        assert P.amplitude((3, 1, 2)) == 2.0
        assert P.amplitude((1, 1, 3)) == 0.0
        assert P.amplitude((1, 2, 4)) == 0.0

    def test_from_terms_folds_parity(self):
        P = FermionState.from_terms(2, 4, [((2, 1), 1.0), ((1, 2), 1.0)])
        assert P.is_zero()
        Q = FermionState.from_terms(2, 4, [((3, 1), 0.5), ((1, 3), 0.25)])
        assert Q.amplitude((1, 3)) == pytest.approx(-0.25)

    def test_constructor_rejects_bad_keys(self):
        with pytest.raises(ShapeError):
            FermionState(2, 4, {(2, 1): 1.0})
        with pytest.raises(ShapeError):
            FermionState(2, 4, {(1, 5): 1.0})
        with pytest.raises(ShapeError):
            FermionState(2, 4, {(1, 2, 3): 1.0})
        with pytest.raises(ValueError):
            FermionState(2, 4, {(1, 2): float("nan")})

    def test_immutability(self):
        P = ghz6()
        with pytest.raises(AttributeError):
            P.k = 2
        with pytest.raises(TypeError):
            P.amplitudes[(1, 2, 3)] = 0.0

    def test_arithmetic(self):
        P, Q = ghz6(), w6()
        R = 2.0 * P - Q
        assert R.amplitude((1, 2, 3)) == pytest.approx(SQRT2)
        assert R.amplitude((2, 3, 4)) == pytest.approx(-1 / SQRT3)
        assert (P - P).is_zero()
        assert P.norm() == pytest.approx(1.0)


class TestWedge:
    def test_basis_product_signs(self):
        e1 = FermionState(1, 4, {(1,): 1.0})
        e2 = FermionState(1, 4, {(2,): 1.0})
        assert wedge(e1, e2).amplitude((1, 2)) == 1.0
        assert wedge(e2, e1).amplitude((1, 2)) == -1.0
        assert wedge(e1, e1).is_zero()

    def test_graded_anticommutativity(self, rng):
        for ku, kv in [(1, 1), (1, 2), (2, 2), (2, 3)]:
            u = random_state(ku, 6, rng)
            v = random_state(kv, 6, rng)
            uv = wedge(u, v)
            vu = wedge(v, u)
            sign = (-1.0) ** (ku * kv)
            for key in uv.amplitudes:
                assert uv.amplitude(key) == pytest.approx(sign * vu.amplitude(key))

    def test_wedge_of_vectors_is_minor_expansion(self, rng):
        vecs = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
        P = wedge_of_vectors(vecs)
        for key in itertools.combinations(range(1, 7), 3):
            minor = np.linalg.det(vecs[:, [m - 1 for m in key]])
            assert P.amplitude(key) == pytest.approx(minor)

    def test_degree_overflow(self):
        u = FermionState(2, 4, {(1, 2): 1.0})
        v = FermionState(3, 4, {(1, 2, 3): 1.0})
        with pytest.raises(ShapeError):
            wedge(u, v)


class TestPluecker:
    def test_frozen_ghz_value(self):
        # [DERIVED] the one nonzero relation pairs the two GHZ terms:
        # P_123 P_456 with a single surviving summand, giving 1/2.
        val = pluecker_relation(ghz6(), (1, 2), (3, 4, 5, 6))
        assert val == pytest.approx(0.5)
        best, pair = pluecker_scan(ghz6())
        assert best == pytest.approx(0.5)
        assert pair is not None

    def test_decomposable_states_pass(self, rng):
        for _ in range(10):
            P = random_plane_state(3, 6, rng)
            assert is_decomposable(P)
            best, _ = pluecker_scan(P)
            assert best <= 1e-10
            assert pluecker_violations(P) == []

    def test_generic_states_fail(self, rng):
        for _ in range(10):
            P = random_state(3, 6, rng)
            assert not is_decomposable(P)
            assert len(pluecker_violations(P)) > 0

    def test_dual_route_agreement(self, rng):
        # Plücker scan and kernel-dimension oracle must agree on mixed
        # shapes, decomposable or not.
        for k, n in [(2, 4), (2, 5), (3, 6), (2, 6)]:
            for _ in range(5):
                plane = random_plane_state(k, n, rng)
                assert is_decomposable(plane) == decomposability_oracle(plane) == True
                generic = random_state(k, n, rng)
                assert is_decomposable(generic) == decomposability_oracle(generic)

    def test_violation_report_sorted(self):
        viols = pluecker_violations(ghz6())
        mags = [v for (_, _, v) in viols]
        assert mags == sorted(mags, reverse=True)
        assert mags[0] == pytest.approx(0.5)

    def test_parallel_scan_matches(self):
        best1, _ = pluecker_scan(w6(), workers=1)
        best4, _ = pluecker_scan(w6(), workers=4)
        assert best1 == best4

    def test_zero_state_rejected(self):
        Z = FermionState(3, 6, {})
        with pytest.raises(ValueError):
            is_decomposable(Z)
        with pytest.raises(ValueError):
            decomposability_oracle(Z)

    def test_index_size_validation(self):
        with pytest.raises(ShapeError):
            pluecker_relation(ghz6(), (1,), (3, 4, 5, 6))


class TestWedgePower:
    def test_frozen_ghz_values(self):
        # [DERIVED] (e12 + e34)/sqrt2 squares to 2 * (1/2) e1234.
        g2 = FermionState(2, 4, {(1, 2): 1 / SQRT2, (3, 4): 1 / SQRT2})
        assert wedge_power_norm(g2) == pytest.approx(1.0)
        # [DERIVED] three-level analogue: 3! * 3^(-3/2).
        g3 = FermionState(
            2, 6, {(1, 2): 1 / SQRT3, (3, 4): 1 / SQRT3, (5, 6): 1 / SQRT3}
        )
        assert wedge_power_norm(g3) == pytest.approx(6 * 3**-1.5)

    def test_w_type_vanishes(self):
        w4 = (1 / SQRT3) * FermionState(
            2, 4, {(1, 2): 1.0, (1, 3): 1.0, (1, 4): 1.0}
        )
        assert wedge_power_norm(w4) == 0.0
        w6_2 = 0.5 * FermionState(
            2, 6, {(1, 2): 1.0, (1, 3): 1.0, (1, 4): 1.0, (1, 5): 1.0}
        )
        assert wedge_power_norm(w6_2) == 0.0

    def test_permutation_sum_oracle(self, rng):
        # Exhaustive pairing formula for k = 2, n = 4:
        # (P ^ P)_1234 = 2 (P12 P34 - P13 P24 + P14 P23).
        for _ in range(20):
            P = random_state(2, 4, rng)
            a = P.amplitude
            oracle = 2 * (
                a((1, 2)) * a((3, 4))
                - a((1, 3)) * a((2, 4))
                + a((1, 4)) * a((2, 3))
            )
            assert wedge_power_norm(P) == pytest.approx(abs(oracle))

    def test_scaling_degree(self, rng):
        P = random_state(2, 6, rng)
        assert wedge_power_norm(3.0 * P) == pytest.approx(27 * wedge_power_norm(P))

    def test_shape_preconditions(self):
        with pytest.raises(ShapeError):
            wedge_power_norm(ghz6())  # odd degree
        with pytest.raises(ShapeError):
            wedge_power_norm(FermionState(2, 5, {(1, 2): 1.0}))


class TestReducedDensityMatrix:
    def test_frozen_ghz(self):
        rho = one_particle_rdm(ghz6())
        assert np.allclose(rho, np.eye(6) / 6)
        # [DERIVED] gamma = 3 rho = I/2, so gamma^2 - gamma = -I/4.
        assert idempotency_defect(ghz6()) == pytest.approx(math.sqrt(6) / 4)

    def test_dense_tensor_oracle(self, rng):
        # Build the antisymmetric dense tensor and trace out all slots
        # but the first; must match the sparse accumulation.
        for _ in range(5):
            P = random_state(3, 6, rng)
            P = (1.0 / P.norm()) * P
            psi = np.zeros((6, 6, 6), dtype=complex)
            for perm in itertools.permutations(range(3)):
                for key, val in P.amplitudes.items():
                    idx = tuple(key[p] - 1 for p in perm)
                    sign = sort_sign(tuple(perm[i] + 1 for i in range(3)))[0]
                    psi[idx] = sign * val / math.sqrt(6.0)
            dense = np.einsum("aij,bij->ab", psi, psi.conj())
            assert np.allclose(one_particle_rdm(P), dense, atol=1e-12)

    def test_hermitian_psd_trace_one(self, rng):
        for _ in range(10):
            P = random_state(3, 6, rng)
            P = (1.0 / P.norm()) * P
            rho = one_particle_rdm(P)
            assert np.allclose(rho, rho.conj().T)
            assert np.trace(rho).real == pytest.approx(1.0)
            assert np.linalg.eigvalsh(rho).min() > -1e-12

    def test_defect_vanishes_exactly_on_planes(self, rng):
        for k, n in [(2, 4), (3, 6), (2, 5)]:
            P = random_plane_state(k, n, rng)
            assert idempotency_defect(P) < 1e-10
        corrupt = ghz6() + w6()
        corrupt = (1.0 / corrupt.norm()) * corrupt
        assert idempotency_defect(corrupt) > 0.1

    def test_requires_normalization(self):
        with pytest.raises(ValueError):
            one_particle_rdm(2.0 * ghz6())


class TestFreudenthalCoordinates:
    def test_frozen_ghz_coordinates(self):
        x = to_freudenthal(ghz6())
        assert x.alpha == pytest.approx(1 / SQRT2)
        assert x.beta == pytest.approx(1 / SQRT2)
        assert np.allclose(x.a.matrix, 0)
        assert np.allclose(x.b.matrix, 0)
        assert quartic_form(x) == pytest.approx(0.5)
        assert rank(x) == 4

    def test_frozen_w_coordinates(self):
        x = to_freudenthal(w6())
        assert x.alpha == pytest.approx(0.0)
        assert x.beta == pytest.approx(0.0)
        assert np.allclose(x.a.matrix, 0)
        assert np.allclose(x.b.matrix, np.eye(3) / SQRT3)
        assert rank(x) == 3

    def test_round_trip_both_directions(self, rng):
        for _ in range(10):
            P = random_state(3, 6, rng)
            back = from_freudenthal(to_freudenthal(P))
            assert all(
                abs(back.amplitude(key) - val) < 1e-12
                for key, val in P.amplitudes.items()
            )
        for _ in range(5):
            coeffs = rng.normal(size=20) + 1j * rng.normal(size=20)
            from freudenthal.triple import fvector
            from freudenthal.jordan import AlgebraKind

            x = fvector(AlgebraKind.J3, coeffs)
            again = to_freudenthal(from_freudenthal(x))
            assert np.allclose(again.coefficients(), x.coefficients())

    def test_linearity(self, rng):
        P, Q = random_state(3, 6, rng), random_state(3, 6, rng)
        lhs = to_freudenthal(P + 2j * Q).coefficients()
        rhs = to_freudenthal(P).coefficients() + 2j * to_freudenthal(Q).coefficients()
        assert np.allclose(lhs, rhs)

    def test_quartic_is_sl6_invariant(self, rng):
        # The quartic form pulled back through the coordinates must be
        # invariant under unit-determinant mode mixing.
        for _ in range(5):
            P = random_state(3, 6, rng)
            g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            g = g / np.linalg.det(g) ** (1 / 6)
            q1 = quartic_form(to_freudenthal(P))
            q2 = quartic_form(to_freudenthal(apply_matrix(P, g)))
            assert abs(q1 - q2) <= 1e-8 * max(1.0, abs(q1))

    def test_shape_guard(self):
        with pytest.raises(ShapeError):
            to_freudenthal(FermionState(2, 4, {(1, 2): 1.0}))


class TestApplyMatrix:
    def test_identity_and_composition(self, rng):
        P = random_state(3, 6, rng)
        same = apply_matrix(P, np.eye(6))
        assert all(
            abs(same.amplitude(k) - v) < 1e-12 for k, v in P.amplitudes.items()
        )
        g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        two_step = apply_matrix(apply_matrix(P, h), g)
        one_step = apply_matrix(P, g @ h)
        for key in one_step.amplitudes:
            assert two_step.amplitude(key) == pytest.approx(
                one_step.amplitude(key), rel=1e-9, abs=1e-9
            )

    def test_compound_property(self, rng):
        u = random_state(1, 6, rng)
        v = random_state(1, 6, rng)
        w = random_state(1, 6, rng)
        g = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        lhs = apply_matrix(wedge(wedge(u, v), w), g)
        rhs = wedge(wedge(apply_matrix(u, g), apply_matrix(v, g)), apply_matrix(w, g))
        for key in itertools.combinations(range(1, 7), 3):
            assert lhs.amplitude(key) == pytest.approx(
                rhs.amplitude(key), rel=1e-9, abs=1e-9
            )

    def test_unitary_preserves_norm_and_decomposability(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        P = random_plane_state(3, 6, rng)
        moved = apply_matrix(P, q)
        assert moved.norm() == pytest.approx(1.0)
        assert is_decomposable(moved)

    def test_top_degree_scales_by_det(self, rng):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        P = FermionState(4, 4, {(1, 2, 3, 4): 1.5})
        out = apply_matrix(P, g)
        assert out.amplitude((1, 2, 3, 4)) == pytest.approx(1.5 * np.linalg.det(g))

    def test_shape_validation(self):
        with pytest.raises(ShapeError):
            apply_matrix(ghz6(), np.eye(5))
