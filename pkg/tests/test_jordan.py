from __future__ import annotations

import numpy as np
import pytest

from freudenthal.jordan import (
    AlgebraKind,
    KindMismatch,
    basis,
    close,
    embed_in_j3,
    embed_step,
    identity,
    j1,
    j11,
    j111,
    j12,
    j3,
    norm,
    norm_linearized,
    sharp,
    springer_sharp,
    springer_trace_form,
    trace_form,
    zero,
)
from conftest import random_jordan

ALL_KINDS = list(AlgebraKind)
TOL = 1e-9


def assert_close(a, b, tol=TOL):
    assert close(a, b, tol), f"{a} != {b}"


def assert_elements_close(x, y, tol=TOL):
    assert x.kind is y.kind
    scale = max(1.0, np.max(np.abs(x.coeffs)), np.max(np.abs(y.coeffs)))
    assert np.max(np.abs(x.coeffs - y.coeffs)) <= tol * scale


class TestFrozenValues:
    def test_norms(self):
        assert_close(norm(j1(2.0)), 8.0)
        assert_close(norm(j11(2.0, 3.0)), 18.0)
        assert_close(norm(j111(2.0, 3.0, 5.0)), 30.0)
        assert_close(norm(j12(2.0, [[1, 2], [3, 4]])), -4.0)
        assert_close(norm(j3(np.diag([2, 3, 5]))), 30.0)

    def test_sharp(self):
        assert_close(sharp(j1(3.0)).parts, 9.0)
        assert sharp(j11(2.0, 3.0)).parts == (9.0, 6.0)
        assert sharp(j111(1.0, 2.0, 3.0)).parts == (6.0, 3.0, 2.0)
        a, m = sharp(j12(2.0, [[1, 2], [3, 4]])).parts
        assert_close(a, -2.0)
        assert np.allclose(m, [[8, -4], [-6, 2]])

    def test_trace_form(self):
        assert_close(trace_form(j1(2.0), j1(5.0)), 30.0)
        assert_close(trace_form(j11(1.0, 2.0), j11(3.0, 4.0)), 19.0)
        assert_close(trace_form(j111(1, 2, 3), j111(4, 5, 6)), 32.0)
        assert_close(trace_form(j12(1.0, np.eye(2)), j12(1.0, np.eye(2))), 3.0)
        assert_close(trace_form(j3(np.eye(3)), j3(np.eye(3))), 3.0)

    def test_norm_linearized_unit_vectors(self):
        e1, e2, e3 = basis(AlgebraKind.J111)
        assert_close(norm_linearized(e1, e2, e3), 1.0 / 6.0)

    def test_identity_basepoints(self):
        for kind in ALL_KINDS:
            assert_close(norm(identity(kind)), 1.0)


class TestAlgebraicProperties:
    def test_adjugate_identity(self, rng):
        # x x# = N(x) I on the matrix algebra, 100 random elements
        for _ in range(100):
            x = random_jordan(AlgebraKind.J3, rng)
            lhs = x.matrix @ sharp(x).matrix
            scale = max(1.0, np.max(np.abs(lhs)))
            assert np.max(np.abs(lhs - norm(x) * np.eye(3))) <= TOL * scale

    def test_norm_linearized_symmetry_and_diagonal(self, rng):
        import itertools

        for kind in ALL_KINDS:
            x, y, z = (random_jordan(kind, rng) for _ in range(3))
            vals = [
                norm_linearized(*p) for p in itertools.permutations((x, y, z))
            ]
            for v in vals[1:]:
                assert_close(v, vals[0], 1e-8)
            assert_close(norm_linearized(x, x, x), norm(x), 1e-8)

    def test_sharp_is_quadratic(self, rng):
        for kind in ALL_KINDS:
            x = random_jordan(kind, rng)
            lam = 0.7 - 1.3j
            assert_elements_close(sharp(lam * x), (lam * lam) * sharp(x))


class TestSpringerConstruction:
    def test_trace_form_recovered(self, rng):
        for kind in ALL_KINDS:
            c = identity(kind)
            for _ in range(20):
                x, y = random_jordan(kind, rng), random_jordan(kind, rng)
                assert_close(
                    springer_trace_form(x, y, c), trace_form(x, y), 1e-8
                )

    def test_sharp_recovered(self, rng):
        for kind in ALL_KINDS:
            c = identity(kind)
            for _ in range(20):
                x = random_jordan(kind, rng)
                assert_elements_close(springer_sharp(x, c), sharp(x), 1e-8)

    def test_noncanonical_basepoint(self, rng):
        # any N(c)=1 basepoint reproduces a valid solution of the defining
        # relation (x#, y)_c = 3 N(x,x,y)
        c = j3(np.diag([2.0, 0.5, 1.0]))
        assert_close(norm(c), 1.0)
        x = random_jordan(AlgebraKind.J3, rng)
        xs = springer_sharp(x, c)
        for b in basis(AlgebraKind.J3):
            assert_close(
                springer_trace_form(xs, b, c), 3 * norm_linearized(x, x, b), 1e-7
            )

    def test_bad_basepoint_rejected(self):
        with pytest.raises(ValueError):
            springer_trace_form(j1(1.0), j1(1.0), j1(2.0))
        with pytest.raises(ValueError):
            springer_sharp(j1(1.0), j1(0.0))


class TestEmbeddings:
    def test_chain_composition_matches_direct(self, rng):
        for kind in ALL_KINDS[:-1]:
            x = random_jordan(kind, rng)
            stepped = x
            while stepped.kind is not AlgebraKind.J3:
                stepped = embed_step(stepped)
            assert_elements_close(stepped, embed_in_j3(x))

    def test_structure_maps_commute(self, rng):
        for kind in ALL_KINDS:
            for _ in range(20):
                x, y = random_jordan(kind, rng), random_jordan(kind, rng)
                ex, ey = embed_in_j3(x), embed_in_j3(y)
                assert_close(norm(x), norm(ex), 1e-8)
                assert_close(trace_form(x, y), trace_form(ex, ey), 1e-8)
                assert_elements_close(embed_in_j3(sharp(x)), sharp(ex), 1e-8)

    def test_identity_maps_to_identity(self):
        for kind in ALL_KINDS:
            assert np.allclose(embed_in_j3(identity(kind)).matrix, np.eye(3))

    def test_top_of_chain(self, rng):
        with pytest.raises(KindMismatch):
            embed_step(random_jordan(AlgebraKind.J3, rng))


class TestValidation:
    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            trace_form(j1(1.0), j11(1.0, 1.0))
        with pytest.raises(KindMismatch):
            j1(1.0) + j11(1.0, 1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            j1(float("nan"))
        with pytest.raises(ValueError):
            j3(np.full((3, 3), np.inf))

    def test_shape_rejected(self):
        with pytest.raises(ValueError):
            j12(1.0, np.eye(3))

    def test_zero_element(self):
        for kind in ALL_KINDS:
            assert norm(zero(kind)) == 0
