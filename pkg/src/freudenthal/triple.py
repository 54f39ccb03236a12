"""Freudenthal triple systems M(J) = C + C + J + J over a cubic Jordan
algebra J.

The system carries a symplectic form

    {x, y} = alpha delta - beta gamma + (A, D) - (B, C),

a quartic form

    q(x) = 2((A,B) - alpha beta)^2 - 8(A#, B#) + 8 alpha N(A) + 8 beta N(B),

and a triple product T defined implicitly by {T(x,y,z), w} = q(x,y,z,w),
where q(x,y,z,w) is the full polarization of q.  A second normalization of
the quartic, quartic_tangle = 2 q, is the one whose absolute value acts as
the tripartite entanglement measure (1 on the canonical GHZ vector).

Vectors stratify into ranks 0..4 by the vanishing pattern of q, T(x,x,x)
and the linear map y -> 3 T(x,x,y) + {x,y} x; the rank is the SLOCC class.

Everything here is immutable and pure; per-algebra structure (basis, skew
Gram matrix, polarized quartic tensor) is cached per process.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .jordan import (
    AlgebraKind,
    JordanElement,
    KindMismatch,
    _norm_vec,
    _sharp_vec,
    _trace_vec,
    embed_in_j3,
    zero,
)

__all__ = [
    "FreudenthalVector",
    "fvector",
    "zero_vector",
    "triple_basis",
    "skew_form",
    "quartic_form",
    "quartic_tangle",
    "quartic_form_linearized",
    "triple_product",
    "rank",
    "rank_margins",
    "DEFAULT_RANK_TOL",
]

DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class FreudenthalVector:
    """Element (alpha, beta, A, B) of M(J); A and B share one algebra."""

    alpha: complex
    beta: complex
    a: JordanElement
    b: JordanElement

    def __post_init__(self) -> None:
        if self.a.kind is not self.b.kind:
            raise KindMismatch("both Jordan slots must use the same algebra")
        alpha, beta = complex(self.alpha), complex(self.beta)
        if not (
            np.isfinite(alpha.real)
            and np.isfinite(alpha.imag)
            and np.isfinite(beta.real)
            and np.isfinite(beta.imag)
        ):
            raise ValueError("non-finite scalar slot")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def kind(self) -> AlgebraKind:
        return self.a.kind

    @property
    def dimension(self) -> int:
        return 2 + 2 * self.kind.dimension

    def coefficients(self) -> np.ndarray:
        """Flat coordinates (alpha, beta, A-coefficients, B-coefficients)."""
        return np.concatenate(
            ([self.alpha, self.beta], self.a.coeffs, self.b.coeffs)
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients()))

    def embed(self) -> "FreudenthalVector":
        """The same vector over M_3(C), via the Jordan subalgebra chain."""
        if self.kind is AlgebraKind.J3:
            return self
        return FreudenthalVector(
            self.alpha, self.beta, embed_in_j3(self.a), embed_in_j3(self.b)
        )

    def _require(self, other: "FreudenthalVector") -> None:
        if not isinstance(other, FreudenthalVector) or other.kind is not self.kind:
            raise KindMismatch("vectors belong to different triple systems")

    def __add__(self, other: "FreudenthalVector") -> "FreudenthalVector":
        self._require(other)
        return FreudenthalVector(
            self.alpha + other.alpha,
            self.beta + other.beta,
            self.a + other.a,
            self.b + other.b,
        )

    def __sub__(self, other: "FreudenthalVector") -> "FreudenthalVector":
        self._require(other)
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FreudenthalVector":
        s = complex(scalar)
        return FreudenthalVector(s * self.alpha, s * self.beta, s * self.a, s * self.b)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (
            f"FreudenthalVector({self.kind.value}, alpha={self.alpha!r}, "
            f"beta={self.beta!r}, a={self.a.parts!r}, b={self.b.parts!r})"
        )


def fvector(kind: AlgebraKind, coeffs) -> FreudenthalVector:
    """Rebuild a vector from flat coordinates (inverse of coefficients())."""
    vec = np.asarray(coeffs, dtype=complex).reshape(-1)
    d = kind.dimension
    if vec.shape != (2 + 2 * d,):
        raise ValueError(f"expected {2 + 2 * d} coordinates for {kind.value}")
    return FreudenthalVector(
        vec[0],
        vec[1],
        JordanElement(kind, vec[2 : 2 + d]),
        JordanElement(kind, vec[2 + d :]),
    )


def zero_vector(kind: AlgebraKind) -> FreudenthalVector:
    return FreudenthalVector(0.0, 0.0, zero(kind), zero(kind))


@functools.lru_cache(maxsize=None)
def triple_basis(kind: AlgebraKind) -> tuple[FreudenthalVector, ...]:
    """Coordinate basis of M(J), ordered as in coefficients()."""
    dim = 2 + 2 * kind.dimension
    eye = np.eye(dim)
    return tuple(fvector(kind, row) for row in eye)


# -- the three defining forms -------------------------------------------------


def skew_form(x: FreudenthalVector, y: FreudenthalVector) -> complex:
    """Nondegenerate symplectic form {x, y}."""
    x._require(y)
    return (
        x.alpha * y.beta
        - x.beta * y.alpha
        + _trace_vec(x.kind, x.a.coeffs, y.b.coeffs)
        - _trace_vec(x.kind, x.b.coeffs, y.a.coeffs)
    )


def _quartic_from_vec(kind: AlgebraKind, vec: np.ndarray) -> complex:
    d = kind.dimension
    alpha, beta = vec[0], vec[1]
    a, b = vec[2 : 2 + d], vec[2 + d :]
    t = _trace_vec(kind, a, b) - alpha * beta
    return (
        2.0 * t * t
        - 8.0 * _trace_vec(kind, _sharp_vec(kind, a), _sharp_vec(kind, b))
        + 8.0 * alpha * _norm_vec(kind, a)
        + 8.0 * beta * _norm_vec(kind, b)
    )


def quartic_form(x: FreudenthalVector) -> complex:
    """q(x); its vanishing pattern drives the rank stratification."""
    return _quartic_from_vec(x.kind, x.coefficients())


def quartic_tangle(x: FreudenthalVector) -> complex:
    """Quartic in the measure normalization,

        4([(A,B) - alpha beta]^2 - 4(A#, B#) + 4 alpha N(A) + 4 beta N(B)),

    whose absolute value is the tripartite tangle (1 on canonical GHZ).
    Identically equal to 2 * quartic_form(x); both normalizations are kept
    because classification thresholds use q while reports use this one.
    """
    vec = x.coefficients()
    kind = x.kind
    d = kind.dimension
    alpha, beta = vec[0], vec[1]
    a, b = vec[2 : 2 + d], vec[2 + d :]
    t = _trace_vec(kind, a, b) - alpha * beta
    return 4.0 * (
        t * t
        - 4.0 * _trace_vec(kind, _sharp_vec(kind, a), _sharp_vec(kind, b))
        + 4.0 * alpha * _norm_vec(kind, a)
        + 4.0 * beta * _norm_vec(kind, b)
    )


_SLOT_SUBSETS = [
    s
    for r in range(1, 5)
    for s in itertools.combinations(range(4), r)
]


def quartic_form_linearized(
    x: FreudenthalVector,
    y: FreudenthalVector,
    z: FreudenthalVector,
    w: FreudenthalVector,
) -> complex:
    """Full symmetric polarization q(x,y,z,w) with q(x,x,x,x) = q(x),
    evaluated by inclusion-exclusion over the 15 nonempty slot subsets."""
    x._require(y)
    x._require(z)
    x._require(w)
    vecs = [v.coefficients() for v in (x, y, z, w)]
    kind = x.kind
    total = 0.0 + 0.0j
    for subset in _SLOT_SUBSETS:
        s = vecs[subset[0]].copy()
        for i in subset[1:]:
            s += vecs[i]
        total += (-1) ** (4 - len(subset)) * _quartic_from_vec(kind, s)
    return total / 24.0


# -- cached per-algebra structure ---------------------------------------------


@functools.lru_cache(maxsize=None)
def _structure(kind: AlgebraKind):
    """(skew Gram S, inv(S).T, polarized quartic tensor Q) over the basis.

    Q[i,j,k,l] = q(b_i, b_j, b_k, b_l) is real and fully symmetric; it
    memoizes the polarization so that triple products and rank tests reduce
    to tensor contractions.
    """
    bas = triple_basis(kind)
    dim = len(bas)
    gram = np.empty((dim, dim))
    for i in range(dim):
        for j in range(dim):
            val = skew_form(bas[i], bas[j])
            assert abs(val.imag) < 1e-15
            gram[i, j] = val.real
    gram_inv_t = np.linalg.inv(gram).T

    # q evaluated on every sum of up to four basis vectors (multisets)
    qval: dict[tuple[int, ...], complex] = {}
    for size in range(1, 5):
        for ms in itertools.combinations_with_replacement(range(dim), size):
            vec = np.zeros(dim, dtype=complex)
            for i in ms:
                vec[i] += 1.0
            qval[ms] = _quartic_from_vec(kind, vec)

    tensor = np.zeros((dim, dim, dim, dim))
    for ms in itertools.combinations_with_replacement(range(dim), 4):
        total = 0.0 + 0.0j
        for subset in _SLOT_SUBSETS:
            key = tuple(sorted(ms[i] for i in subset))
            total += (-1) ** (4 - len(subset)) * qval[key]
        val = total.real / 24.0
        assert abs(total.imag) < 1e-12
        for perm in set(itertools.permutations(ms)):
            tensor[perm] = val
    return gram, gram_inv_t, tensor


def _tensor_contract3(tensor: np.ndarray, y: np.ndarray, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """v_i = sum_jkl Q[i,j,k,l] y_j z_k w_l via reshaped matmuls."""
    dim = tensor.shape[0]
    t = tensor.reshape(dim**3, dim) @ w
    t = t.reshape(dim**2, dim) @ z
    return t.reshape(dim, dim) @ y


def triple_product(
    x: FreudenthalVector, y: FreudenthalVector, z: FreudenthalVector
) -> FreudenthalVector:
    """T(x,y,z), the unique vector with {T(x,y,z), w} = q(x,y,z,w) for all w,
    solved over the coordinate basis through the inverse skew Gram matrix."""
    x._require(y)
    x._require(z)
    _, gram_inv_t, tensor = _structure(x.kind)
    rhs = _tensor_contract3(
        tensor, x.coefficients(), y.coefficients(), z.coefficients()
    )
    return fvector(x.kind, gram_inv_t @ rhs)


# -- rank stratification ------------------------------------------------------


def _rank_quantities(x: FreudenthalVector) -> tuple[float, float, float]:
    """(|q(x)|, ||T(x,x,x)||, max_j ||3 T(x,x,b_j) + {x,b_j} x||)."""
    gram, gram_inv_t, tensor = _structure(x.kind)
    vec = x.coefficients()
    dim = vec.shape[0]
    t2 = (tensor.reshape(dim * dim, dim * dim) @ np.outer(vec, vec).reshape(-1)).reshape(dim, dim)
    # t2[i, j] = q(b_i, b_j, x, x); columns give T(x,x,b_j) after the solve
    q_abs = abs(vec @ (t2 @ vec))
    t_xxx = gram_inv_t @ (t2 @ vec)
    # On vectors of rank <= 1 the triple product degenerates to
    # 3 T(x,x,y) = {x,y} x for every y, so the residual below vanishes
    # exactly there and detects rank 2.
    cols = 3.0 * (gram_inv_t @ t2) - np.outer(vec, vec @ gram)
    col_norms = np.linalg.norm(cols, axis=0)
    return q_abs, float(np.linalg.norm(t_xxx)), float(np.max(col_norms))


def rank(x: FreudenthalVector, tol: float = DEFAULT_RANK_TOL) -> int:
    """SLOCC rank in 0..4.

    rank 4: q(x) != 0;  rank 3: q = 0 but T(x,x,x) != 0;  rank 2: both vanish
    but 3 T(x,x,y) - {x,y} x != 0 for some y (linear in y, so a basis scan
    suffices);  rank 1: all vanish but x != 0;  rank 0: x = 0.  Thresholds
    scale with ||x||^degree so the verdict is invariant under rescaling.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    nx = x.norm()
    if nx == 0.0:
        return 0
    q_abs, t3_norm, pencil_norm = _rank_quantities(x)
    if q_abs > tol * nx**4:
        return 4
    if t3_norm > tol * nx**3:
        return 3
    if pencil_norm > tol * nx**2:
        return 2
    return 1


def rank_margins(
    x: FreudenthalVector, tol: float = DEFAULT_RANK_TOL
) -> tuple[int, list[float]]:
    """Rank plus the ratios quantity/threshold for each test actually made.

    Ratios within a factor of 10 of 1 indicate a numerically degenerate
    verdict; callers may escalate those to warnings.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    nx = x.norm()
    if nx == 0.0:
        return 0, []
    q_abs, t3_norm, pencil_norm = _rank_quantities(x)
    ratios = [q_abs / (tol * nx**4)]
    if ratios[-1] > 1.0:
        return 4, ratios
    ratios.append(t3_norm / (tol * nx**3))
    if ratios[-1] > 1.0:
        return 3, ratios
    ratios.append(pencil_norm / (tol * nx**2))
    if ratios[-1] > 1.0:
        return 2, ratios
    return 1, ratios
