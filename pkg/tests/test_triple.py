from __future__ import annotations

import itertools

import numpy as np
import pytest

from freudenthal.jordan import AlgebraKind, KindMismatch, close, identity, j3, zero
from freudenthal.triple import (
    FreudenthalVector,
    fvector,
    quartic_form,
    quartic_form_linearized,
    quartic_tangle,
    rank,
    rank_margins,
    skew_form,
    triple_basis,
    triple_product,
    zero_vector,
)
from conftest import random_complex

ALL_KINDS = list(AlgebraKind)
S2 = 2**-0.5
S3 = 3**-0.5


def random_vector(kind: AlgebraKind, rng) -> FreudenthalVector:
    return fvector(kind, random_complex(rng, 2 + 2 * kind.dimension))


def ghz_vector(kind: AlgebraKind) -> FreudenthalVector:
    return FreudenthalVector(S2, S2, zero(kind), zero(kind))


def w_vector(kind: AlgebraKind) -> FreudenthalVector:
    return FreudenthalVector(0.0, 0.0, zero(kind), S3 * identity(kind))


def sep_vector(kind: AlgebraKind) -> FreudenthalVector:
    return FreudenthalVector(1.0, 0.0, zero(kind), zero(kind))


class TestSkewForm:
    def test_frozen_values(self):
        kind = AlgebraKind.J3
        x = FreudenthalVector(1.0, 0.0, zero(kind), zero(kind))
        y = FreudenthalVector(0.0, 1.0, zero(kind), zero(kind))
        assert skew_form(x, y) == 1.0
        assert skew_form(y, x) == -1.0
        u = FreudenthalVector(0.0, 0.0, j3(np.eye(3)), zero(kind))
        v = FreudenthalVector(0.0, 0.0, zero(kind), j3(np.eye(3)))
        assert skew_form(u, v) == 3.0

    def test_antisymmetry_and_bilinearity(self, rng):
        for kind in ALL_KINDS:
            x, y, z = (random_vector(kind, rng) for _ in range(3))
            assert close(skew_form(x, y), -skew_form(y, x))
            lam = 1.3 - 0.4j
            assert close(
                skew_form(x + lam * z, y),
                skew_form(x, y) + lam * skew_form(z, y),
                1e-8,
            )

    def test_nondegenerate(self):
        for kind in ALL_KINDS:
            bas = triple_basis(kind)
            gram = np.array([[skew_form(a, b) for b in bas] for a in bas])
            assert abs(np.linalg.det(gram)) > 0.5


class TestQuarticForm:
    def test_ghz_frozen(self):
        for kind in ALL_KINDS:
            assert close(quartic_form(ghz_vector(kind)), 0.5)
            assert close(quartic_tangle(ghz_vector(kind)), 1.0)

    def test_w_vanishes(self):
        for kind in ALL_KINDS:
            assert abs(quartic_form(w_vector(kind))) < 1e-12

    def test_zero(self):
        assert quartic_form(zero_vector(AlgebraKind.J3)) == 0

    def test_homogeneity(self, rng):
        for kind in ALL_KINDS:
            x = random_vector(kind, rng)
            lam = 0.8 + 0.5j
            assert close(quartic_form(lam * x), lam**4 * quartic_form(x), 1e-8)

    def test_tangle_is_twice_q(self, rng):
        # two independently transcribed normalizations of the same quartic
        for kind in ALL_KINDS:
            for _ in range(20):
                x = random_vector(kind, rng)
                assert close(quartic_tangle(x), 2.0 * quartic_form(x), 1e-9)

    def test_value_preserved_by_embedding(self, rng):
        for kind in ALL_KINDS[:-1]:
            x = random_vector(kind, rng)
            assert close(quartic_form(x), quartic_form(x.embed()), 1e-8)
            assert close(quartic_tangle(x), quartic_tangle(x.embed()), 1e-8)


class TestPolarization:
    def test_diagonal_recovers_quartic(self, rng):
        for kind in ALL_KINDS:
            x = random_vector(kind, rng)
            assert close(
                quartic_form_linearized(x, x, x, x), quartic_form(x), 1e-8
            )

    def test_symmetry(self, rng):
        kind = AlgebraKind.J12
        args = [random_vector(kind, rng) for _ in range(4)]
        ref = quartic_form_linearized(*args)
        for perm in itertools.permutations(args):
            assert close(quartic_form_linearized(*perm), ref, 1e-8)

    def test_multilinearity(self, rng):
        kind = AlgebraKind.J11
        x, y, z, w, u = (random_vector(kind, rng) for _ in range(5))
        lam = 0.3 - 1.1j
        lhs = quartic_form_linearized(x + lam * u, y, z, w)
        rhs = quartic_form_linearized(x, y, z, w) + lam * quartic_form_linearized(
            u, y, z, w
        )
        assert close(lhs, rhs, 1e-8)

    def test_zero_argument(self, rng):
        kind = AlgebraKind.J3
        x, y, z = (random_vector(kind, rng) for _ in range(3))
        scale = max(1.0, abs(quartic_form(x + y + z)))
        assert abs(quartic_form_linearized(x, y, z, zero_vector(kind))) <= 1e-10 * scale


class TestTripleProduct:
    def test_defining_property(self, rng):
        # {T(x,y,z), w} = q(x,y,z,w) checked against the independent
        # 15-subset polarization for every basis w
        for kind in ALL_KINDS:
            x, y, z = (random_vector(kind, rng) for _ in range(3))
            t = triple_product(x, y, z)
            for w in triple_basis(kind):
                assert close(
                    skew_form(t, w), quartic_form_linearized(x, y, z, w), 1e-7
                )

    def test_symmetric_in_arguments(self, rng):
        kind = AlgebraKind.J3
        x, y, z = (random_vector(kind, rng) for _ in range(3))
        ref = triple_product(x, y, z).coefficients()
        for perm in itertools.permutations((x, y, z)):
            got = triple_product(*perm).coefficients()
            assert np.max(np.abs(got - ref)) <= 1e-8 * max(
                1.0, np.max(np.abs(ref))
            )

    def test_separable_representative_annihilated(self):
        for kind in ALL_KINDS:
            t = triple_product(sep_vector(kind), sep_vector(kind), sep_vector(kind))
            assert t.norm() == 0.0

    def test_w_not_annihilated(self):
        for kind in ALL_KINDS:
            x = w_vector(kind)
            assert triple_product(x, x, x).norm() > 0.05


class TestRank:
    def test_frozen_stratification(self):
        z3 = zero(AlgebraKind.J3)
        b1 = FreudenthalVector(S2, 0.0, j3(S2 * np.diag([1, 0, 0])), z3)
        sep_a = FreudenthalVector(0.0, 0.0, j3(np.diag([1, 0, 0])), z3)
        assert rank(zero_vector(AlgebraKind.J3)) == 0
        assert rank(ghz_vector(AlgebraKind.J3)) == 4
        assert rank(w_vector(AlgebraKind.J3)) == 3
        assert rank(b1) == 2
        assert rank(sep_vector(AlgebraKind.J3)) == 1
        assert rank(sep_a) == 1

    def test_all_kinds(self):
        for kind in ALL_KINDS:
            assert rank(ghz_vector(kind)) == 4
            assert rank(w_vector(kind)) == 3
            assert rank(sep_vector(kind)) == 1

    def test_scale_invariance(self):
        for lam in (1e-7, 1e-3, 1.0, 1e4, 1e8):
            assert rank(lam * ghz_vector(AlgebraKind.J3)) == 4
            assert rank(lam * sep_vector(AlgebraKind.J3)) == 1

    def test_rank_preserved_by_embedding(self, rng):
        for kind in ALL_KINDS[:-1]:
            for x in (
                ghz_vector(kind),
                w_vector(kind),
                sep_vector(kind),
                random_vector(kind, rng),
            ):
                assert rank(x) == rank(x.embed())

    def test_generic_vectors_rank4(self, rng):
        hits = sum(
            rank(random_vector(AlgebraKind.J3, rng)) == 4 for _ in range(200)
        )
        assert hits == 200

    def test_margins(self):
        r, ratios = rank_margins(ghz_vector(AlgebraKind.J3))
        assert r == 4 and ratios[0] > 10.0
        assert rank_margins(zero_vector(AlgebraKind.J1)) == (0, [])

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            rank(ghz_vector(AlgebraKind.J1), tol=0.0)
        with pytest.raises(ValueError):
            rank(ghz_vector(AlgebraKind.J1), tol=-1.0)


class TestValidation:
    def test_kind_mismatch(self):
        x = ghz_vector(AlgebraKind.J1)
        y = ghz_vector(AlgebraKind.J3)
        with pytest.raises(KindMismatch):
            skew_form(x, y)
        with pytest.raises(KindMismatch):
            FreudenthalVector(0.0, 0.0, zero(AlgebraKind.J1), zero(AlgebraKind.J3))

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            FreudenthalVector(
                float("inf"), 0.0, zero(AlgebraKind.J1), zero(AlgebraKind.J1)
            )

    def test_fvector_roundtrip(self, rng):
        for kind in ALL_KINDS:
            x = random_vector(kind, rng)
            y = fvector(kind, x.coefficients())
            assert np.array_equal(x.coefficients(), y.coefficients())
