"""Embeddings of composite quantum systems into a single fermionic state.

Two layers live here.

The general layer handles any mixture of fermionic species: ``MultiState``
stores a state of N species (k_i particles in n_i modes each) and
``merge_species`` maps it isometrically into the (sum k_i)-th wedge power
of the direct-sum mode space by shifting each species' modes past the
previous blocks.  A state is a tensor product of per-species decomposable
factors exactly when its merged image is decomposable, so the Plücker
relations decide separability for arbitrary such systems
(``separability_via_embedding``), with an explicit amplitude-pair
criterion for all-qubit shapes (``qubit_separability_direct``) and a
factorization test for any grouping of the species
(``factors_across_cut``).  The one-particle reduced density matrix of the
merged state is the weighted direct sum of the per-species ones
(``embedded_rdm_blocks`` / ``rdm_direct_sum``).  ``merge_qudits`` is the
variant for N single-particle d-level species whose mode labels follow
the stride-d rule rather than block offsets; on those shapes the two
rules coincide.

The specific layer maps the four distinguishable-constituent systems tied
to the triple-system classification — three qubits, a qubit with two
bosonic qubits, three bosonic qubits, and a qubit with two fermions in
four modes — onto triple-system coordinates over the 3 x 3 matrices and
(where meaningful) onto three-fermion states, together with the inclusion
maps of the subspace chain

    boson3 -> boson2q -> three qubits -> qubit + fermion pair.

Bosonic amplitudes are occupation coefficients with weighted norms
(a doubled weight on the mixed two-boson slot; weight three on the
single- and double-excitation slots of three bosons); the maps warn, but
do not fail, when handed unnormalized input.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fermion import (
    DEFAULT_TOL,
    FermionState,
    ShapeError,
    _rdm_numerator,
    is_decomposable,
    one_particle_rdm,
    sort_sign,
)
from .jordan import j3
from .triple import FreudenthalVector

__all__ = [
    "SystemShape",
    "MultiState",
    "NormalizationWarning",
    "merge_species",
    "merge_qudits",
    "multistate_from_tensor",
    "tensor_from_multistate",
    "separability_via_embedding",
    "qubit_separability_direct",
    "species_rdm",
    "embedded_rdm_blocks",
    "rdm_direct_sum",
    "factors_across_cut",
    "bipartitions",
    "three_qubit_to_freudenthal",
    "three_qubit_to_fermion",
    "boson2q_to_freudenthal",
    "boson3_to_freudenthal",
    "qubit_fermion4_to_freudenthal",
    "qubit_fermion4_to_fermion",
    "pack_antisymmetric_pair",
    "boson3_to_boson2q",
    "boson2q_to_three_qubit",
    "three_qubit_to_qubit_fermion4",
]

LocalKey = tuple[int, ...]
MultiKey = tuple[LocalKey, ...]

NORM_CHECK_TOL = 1e-6


class NormalizationWarning(UserWarning):
    """Input expected to be normalized under its weighted convention is not."""


@dataclass(frozen=True)
class SystemShape:
    """Species list for a composite fermionic system: (k_i, n_i) per species."""

    species: tuple[tuple[int, int], ...]

    def __post_init__(self):
        species = tuple((int(k), int(n)) for k, n in self.species)
        if not species:
            raise ShapeError("shape needs at least one species")
        for k, n in species:
            if k < 1 or n < k:
                raise ShapeError(f"invalid species shape (k={k}, n={n})")
        object.__setattr__(self, "species", species)

    @property
    def num_species(self) -> int:
        return len(self.species)

    @property
    def total_particles(self) -> int:
        return sum(k for k, _ in self.species)

    @property
    def total_modes(self) -> int:
        return sum(n for _, n in self.species)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for _, n in self.species:
            out.append(acc)
            acc += n
        return tuple(out)

    def local_keys(self, species: int) -> list[LocalKey]:
        """All sorted k_i-subsets of the given species' modes (1-based index)."""
        k, n = self.species[species - 1]
        return list(itertools.combinations(range(1, n + 1), k))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(math.comb(n, k) for k, n in self.species)

    def is_qudit_uniform(self) -> bool:
        return all(k == 1 for k, _ in self.species) and len(
            {n for _, n in self.species}
        ) == 1


class MultiState:
    """Immutable state of several fermionic species.

    Amplitudes are keyed by one sorted mode tuple per species, each local
    and 1-based; the key ((1,), (2, 3)) means the first species' particle
    in its mode 1 and the second species' pair in its modes 2 and 3.
    """

    __slots__ = ("shape", "_amp")

    def __init__(self, shape: SystemShape, amplitudes: Mapping[MultiKey, complex]):
        if not isinstance(shape, SystemShape):
            shape = SystemShape(tuple(shape))
        amp: dict[MultiKey, complex] = {}
        for key, value in amplitudes.items():
            key = tuple(tuple(int(m) for m in part) for part in key)
            self._validate_key(shape, key)
            value = complex(value)
            if not (np.isfinite(value.real) and np.isfinite(value.imag)):
                raise ValueError(f"non-finite amplitude at {key}")
            if value != 0.0:
                amp[key] = value
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "_amp", amp)

    @staticmethod
    def _validate_key(shape: SystemShape, key: MultiKey) -> None:
        if len(key) != shape.num_species:
            raise ShapeError(f"key {key} has {len(key)} parts, expected "
                             f"{shape.num_species}")
        for part, (k, n) in zip(key, shape.species):
            if len(part) != k:
                raise ShapeError(f"key part {part} has length {len(part)}, "
                                 f"expected {k}")
            if any(m < 1 or m > n for m in part):
                raise ShapeError(f"key part {part} outside modes 1..{n}")
            if any(part[i] >= part[i + 1] for i in range(k - 1)):
                raise ShapeError(f"key part {part} is not strictly increasing; "
                                 "use from_terms for unsorted mode sequences")

    def __setattr__(self, name, value):
        raise AttributeError("MultiState is immutable")

    @classmethod
    def from_terms(
        cls,
        shape: SystemShape | Sequence[tuple[int, int]],
        terms: Iterable[tuple[Sequence[Sequence[int]], complex]],
    ) -> "MultiState":
        """Build from terms whose per-species mode sequences may be unsorted;
        parity signs fold in per species and repeated terms accumulate."""
        amp: dict[MultiKey, complex] = {}
        for parts, value in terms:
            sign = 1
            key = []
            for part in parts:
                s, sorted_part = sort_sign(tuple(part))
                sign *= s
                key.append(sorted_part)
            if sign == 0:
                continue
            key = tuple(key)
            amp[key] = amp.get(key, 0.0) + sign * complex(value)
        return cls(shape, amp)

    @property
    def amplitudes(self) -> Mapping[MultiKey, complex]:
        return MappingProxyType(self._amp)

    def amplitude(self, key: Sequence[Sequence[int]]) -> complex:
        sign = 1
        parts = []
        for part in key:
            s, sorted_part = sort_sign(tuple(part))
            if s == 0:
                return 0.0
            sign *= s
            parts.append(sorted_part)
        return sign * self._amp.get(tuple(parts), 0.0)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2 for v in self._amp.values())))

    def is_zero(self) -> bool:
        return not self._amp

    def __add__(self, other: "MultiState") -> "MultiState":
        if not isinstance(other, MultiState):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError("states have different shapes")
        amp = dict(self._amp)
        for key, value in other._amp.items():
            amp[key] = amp.get(key, 0.0) + value
        return MultiState(self.shape, amp)

    def __sub__(self, other: "MultiState") -> "MultiState":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "MultiState":
        s = complex(scalar)
        return MultiState(self.shape, {k: s * v for k, v in self._amp.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{key}: {value:.6g}" for key, value in sorted(self._amp.items())
        )
        return f"MultiState(shape={self.shape.species}, {{{parts}}})"


# -- the merging isometries ----------------------------------------------------


def merge_species(psi: MultiState) -> FermionState:
    """Map each key (S_1, ..., S_N) to the union of the S_i shifted past the
    preceding species' blocks, keeping the amplitude.  Blocks are disjoint
    and ordered, so the global key is already sorted and no parity signs
    arise; the map is linear and norm-preserving."""
    shape = psi.shape
    offsets = shape.offsets
    amp = {
        tuple(m + offsets[i] for i, part in enumerate(key) for m in part): value
        for key, value in psi._amp.items()
    }
    return FermionState(shape.total_particles, shape.total_modes, amp)


def merge_qudits(psi: MultiState) -> FermionState:
    """Variant for N qudits (every species one particle in d modes): state
    i_j of the j-th qudit becomes mode (j-1)d + i_j.  Implemented by its
    own stride rule, though on these uniform shapes it agrees with
    merge_species."""
    shape = psi.shape
    if not shape.is_qudit_uniform():
        raise ShapeError(
            "qudit merging needs every species to hold one particle in a "
            "common number of modes"
        )
    d = shape.species[0][1]
    amp = {
        tuple(j * d + part[0] for j, part in enumerate(key)): value
        for key, value in psi._amp.items()
    }
    return FermionState(shape.num_species, shape.num_species * d, amp)


def multistate_from_tensor(tensor: np.ndarray) -> MultiState:
    """All-qudit MultiState from a dense amplitude tensor (one axis per
    qudit, 0-based states)."""
    tensor = np.asarray(tensor, dtype=complex)
    if tensor.ndim == 0:
        raise ShapeError("tensor must have at least one axis")
    shape = SystemShape(tuple((1, n) for n in tensor.shape))
    amp = {
        tuple((i + 1,) for i in idx): tensor[idx]
        for idx in np.ndindex(*tensor.shape)
        if tensor[idx] != 0.0
    }
    return MultiState(shape, amp)


def tensor_from_multistate(psi: MultiState) -> np.ndarray:
    """Inverse of multistate_from_tensor for all-qudit shapes."""
    if any(k != 1 for k, _ in psi.shape.species):
        raise ShapeError("dense tensor form exists only for single-particle "
                         "species")
    dims = tuple(n for _, n in psi.shape.species)
    out = np.zeros(dims, dtype=complex)
    for key, value in psi._amp.items():
        out[tuple(part[0] - 1 for part in key)] = value
    return out


# -- separability --------------------------------------------------------------


def separability_via_embedding(psi: MultiState, tol: float = DEFAULT_TOL) -> bool:
    """True iff psi is a tensor product of per-species decomposable factors,
    decided by the Plücker relations of the merged fermionic image."""
    if psi.is_zero():
        raise ValueError("zero state has no separability verdict")
    return is_decomposable(merge_species(psi), tol)


def qubit_separability_direct(psi: MultiState, tol: float = DEFAULT_TOL) -> bool:
    """Separability for all-qubit shapes by the amplitude-pair criterion:
    for every position j and every pair of contexts, the products of the
    0- and 1-amplitudes must agree.  Equivalent to every one-vs-rest
    flattening having rank one; must agree with the embedding route."""
    if any(sp != (1, 2) for sp in psi.shape.species):
        raise ShapeError("the direct criterion applies to qubit shapes only")
    if psi.is_zero():
        raise ValueError("zero state has no separability verdict")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    tensor = tensor_from_multistate(psi)
    cutoff = tol * psi.norm() ** 2
    for j in range(tensor.ndim):
        flat = np.moveaxis(tensor, j, 0).reshape(2, -1)
        minors = np.outer(flat[0], flat[1]) - np.outer(flat[1], flat[0])
        if np.abs(minors).max() > cutoff:
            return False
    return True


def bipartitions(num_species: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All proper two-block partitions of species 1..N, each as
    (smaller-or-lexicographically-first side, complement)."""
    species = tuple(range(1, num_species + 1))
    out = []
    for size in range(1, num_species // 2 + 1):
        for left in itertools.combinations(species, size):
            right = tuple(m for m in species if m not in left)
            if len(left) == len(right) and left > right:
                continue
            out.append((left, right))
    return out


def factors_across_cut(
    psi: MultiState, left: Sequence[int], tol: float = DEFAULT_TOL
) -> bool:
    """True iff psi factors as (state of the `left` species) tensor (state
    of the rest), with both factors arbitrary — entangled factors allowed.

    Each side is flattened to a single particle over its joint basis and
    the two-species merged image is run through the Plücker test, which
    for this shape is exactly the rank-one condition on the cut matrix.
    """
    if psi.is_zero():
        raise ValueError("zero state has no factorization verdict")
    left = tuple(sorted(set(int(i) for i in left)))
    all_species = range(1, psi.shape.num_species + 1)
    if not left or any(i not in all_species for i in left):
        raise ShapeError(f"cut {left} is not a nonempty proper subset of "
                         f"species 1..{psi.shape.num_species}")
    right = tuple(i for i in all_species if i not in left)
    if not right:
        raise ShapeError("cut must leave at least one species on each side")

    def side_index(side: tuple[int, ...]) -> dict[tuple[LocalKey, ...], int]:
        basis = itertools.product(*(psi.shape.local_keys(i) for i in side))
        return {key: pos for pos, key in enumerate(basis)}

    left_index = side_index(left)
    right_index = side_index(right)
    grouped = MultiState(
        SystemShape(((1, len(left_index)), (1, len(right_index)))),
        {
            (
                (left_index[tuple(key[i - 1] for i in left)] + 1,),
                (right_index[tuple(key[i - 1] for i in right)] + 1,),
            ): value
            for key, value in psi._amp.items()
        },
    )
    return separability_via_embedding(grouped, tol)


# -- reduced density matrices --------------------------------------------------


def species_rdm(psi: MultiState, species: int) -> np.ndarray:
    """One-particle reduced density matrix of the given species (1-based):
    the other species are traced out first, then all but one particle of
    the chosen species.  Trace 1; requires a normalized state."""
    if not 1 <= species <= psi.shape.num_species:
        raise ShapeError(f"no species {species} in shape {psi.shape.species}")
    if abs(psi.norm() - 1.0) > NORM_CHECK_TOL:
        raise ValueError("reduced density matrix requires a normalized state")
    i = species - 1
    k_i, n_i = psi.shape.species[i]
    contexts: dict[tuple, dict[LocalKey, complex]] = {}
    for key, value in psi._amp.items():
        ctx = key[:i] + key[i + 1 :]
        contexts.setdefault(ctx, {})[key[i]] = value
    rho = np.zeros((n_i, n_i), dtype=complex)
    for local in contexts.values():
        rho += _rdm_numerator(local, n_i)
    return rho / k_i


def embedded_rdm_blocks(
    psi: MultiState,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """The one-particle reduced density matrix of the merged fermionic
    image, alongside the per-species ones computed by direct partial
    trace.  The former equals the direct sum of the latter weighted by
    k_i / k — the identity rdm_direct_sum assembles."""
    rho = one_particle_rdm(merge_species(psi))
    blocks = [
        species_rdm(psi, i) for i in range(1, psi.shape.num_species + 1)
    ]
    return rho, blocks


def rdm_direct_sum(shape: SystemShape, blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Assemble the block-diagonal matrix with species block i scaled by
    k_i / k."""
    if len(blocks) != shape.num_species:
        raise ShapeError(f"expected {shape.num_species} blocks, got {len(blocks)}")
    k = shape.total_particles
    out = np.zeros((shape.total_modes, shape.total_modes), dtype=complex)
    for (k_i, n_i), offset, block in zip(shape.species, shape.offsets, blocks):
        block = np.asarray(block, dtype=complex)
        if block.shape != (n_i, n_i):
            raise ShapeError(f"block shape {block.shape} does not match "
                             f"species modes {n_i}")
        out[offset : offset + n_i, offset : offset + n_i] = (k_i / k) * block
    return out


# -- the four triple-system coordinate maps ------------------------------------
#
# Mode conventions for the three-fermion images: a qubit at chain position
# p occupies modes (p, p + 3); the four fermion modes of the qubit+pair
# system sit at (2, 3, 5, 6).

_FERMION4_MODES = (2, 3, 5, 6)
_PAIR_SLOTS = tuple(itertools.combinations(range(4), 2))
_PAIR_INDEX = {pair: i for i, pair in enumerate(_PAIR_SLOTS)}


def _as_qubit_cube(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2, 2):
        raise ShapeError(f"expected a 2x2x2 amplitude array, got {a.shape}")
    return a


def three_qubit_to_freudenthal(a: np.ndarray) -> FreudenthalVector:
    """Triple-system coordinates of a three-qubit state: the all-zeros and
    all-ones amplitudes fill the scalar slots, the weight-two and
    weight-one amplitudes the two diagonal matrix slots."""
    a = _as_qubit_cube(a)
    return FreudenthalVector(
        a[0, 0, 0],
        a[1, 1, 1],
        j3(np.diag([a[0, 1, 1], a[1, 0, 1], a[1, 1, 0]])),
        j3(np.diag([a[1, 0, 0], a[0, 1, 0], a[0, 0, 1]])),
    )


def three_qubit_to_fermion(a: np.ndarray) -> FermionState:
    """Three-fermion image of a three-qubit state: qubit p in state s
    occupies mode p + 3s, so basis states map to wedge triples with
    parity folded into sorted keys."""
    a = _as_qubit_cube(a)
    terms = [
        ((1 + 3 * i, 2 + 3 * j, 3 + 3 * k), a[i, j, k])
        for i, j, k in np.ndindex(2, 2, 2)
    ]
    return FermionState.from_terms(3, 6, terms)


def _check_weighted_norm(value: float, what: str, check_norm: bool) -> None:
    if check_norm and abs(value - 1.0) > NORM_CHECK_TOL:
        warnings.warn(
            f"{what} has weighted norm {value:.6g}, expected 1",
            NormalizationWarning,
            stacklevel=3,
        )


def boson2q_to_freudenthal(
    b: np.ndarray, check_norm: bool = True
) -> FreudenthalVector:
    """Triple-system coordinates of a qubit with two bosonic qubits.
    b[i, j] is the amplitude for qubit state i with j bosons excited; the
    mixed occupation j=1 carries weight two in the norm."""
    b = np.asarray(b, dtype=complex)
    if b.shape != (2, 3):
        raise ShapeError(f"expected a 2x3 amplitude array, got {b.shape}")
    weighted = float(
        np.sum(np.abs(b) ** 2 * np.array([[1.0, 2.0, 1.0], [1.0, 2.0, 1.0]]))
    )
    _check_weighted_norm(weighted, "qubit + two-boson state", check_norm)
    return FreudenthalVector(
        b[0, 0],
        b[1, 2],
        j3(np.diag([b[0, 2], b[1, 1], b[1, 1]])),
        j3(np.diag([b[1, 0], b[0, 1], b[0, 1]])),
    )


def boson3_to_freudenthal(
    c: np.ndarray, check_norm: bool = True
) -> FreudenthalVector:
    """Triple-system coordinates of three bosonic qubits.  c[w] is the
    amplitude for w excitations; w = 1, 2 carry weight three in the norm.
    The matrix slots are scalar multiples of the identity."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (4,):
        raise ShapeError(f"expected 4 amplitudes, got shape {c.shape}")
    weighted = float(
        abs(c[0]) ** 2 + abs(c[3]) ** 2 + 3 * (abs(c[1]) ** 2 + abs(c[2]) ** 2)
    )
    _check_weighted_norm(weighted, "three-boson state", check_norm)
    eye = np.eye(3)
    return FreudenthalVector(c[0], c[3], j3(c[2] * eye), j3(c[1] * eye))


def pack_antisymmetric_pair(d: np.ndarray) -> np.ndarray:
    """Canonical 2x6 form of qubit + fermion-pair amplitudes: columns are
    the ordered mode pairs (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    Accepts either that form or a full 2x4x4 array antisymmetric in the
    pair indices (rejected if it is not)."""
    d = np.asarray(d, dtype=complex)
    if d.shape == (2, 6):
        return d.copy()
    if d.shape != (2, 4, 4):
        raise ShapeError(
            f"expected a 2x6 or antisymmetric 2x4x4 array, got {d.shape}"
        )
    scale = max(1.0, float(np.abs(d).max()))
    if np.abs(d + d.transpose(0, 2, 1)).max() > 1e-12 * scale:
        raise ValueError("pair amplitudes must be antisymmetric in the two "
                         "fermion indices")
    packed = np.empty((2, 6), dtype=complex)
    for col, (j, k) in enumerate(_PAIR_SLOTS):
        packed[:, col] = d[:, j, k]
    return packed


def _pair_amplitude(packed: np.ndarray, i: int, j: int, k: int) -> complex:
    if j == k:
        return 0.0
    if j < k:
        return packed[i, _PAIR_INDEX[(j, k)]]
    return -packed[i, _PAIR_INDEX[(k, j)]]


def qubit_fermion4_to_freudenthal(d: np.ndarray) -> FreudenthalVector:
    """Triple-system coordinates of a qubit with two fermions in four
    modes.  The matrix slots are block diagonal (1 + 2), with the
    off-diagonal block entries drawn through antisymmetric lookups."""
    p = pack_antisymmetric_pair(d)
    A = np.array(
        [
            [_pair_amplitude(p, 0, 2, 3), 0.0, 0.0],
            [0.0, _pair_amplitude(p, 1, 0, 3), _pair_amplitude(p, 1, 2, 0)],
            [0.0, _pair_amplitude(p, 1, 1, 3), _pair_amplitude(p, 1, 2, 1)],
        ]
    )
    B = np.array(
        [
            [_pair_amplitude(p, 1, 0, 1), 0.0, 0.0],
            [0.0, _pair_amplitude(p, 0, 2, 1), _pair_amplitude(p, 0, 0, 2)],
            [0.0, _pair_amplitude(p, 0, 3, 1), _pair_amplitude(p, 0, 0, 3)],
        ]
    )
    return FreudenthalVector(
        _pair_amplitude(p, 0, 0, 1), _pair_amplitude(p, 1, 2, 3), j3(A), j3(B)
    )


def qubit_fermion4_to_fermion(d: np.ndarray) -> FermionState:
    """Three-fermion image of a qubit + fermion pair: qubit states go to
    modes 1 and 4, the four fermion modes to 2, 3, 5, 6."""
    p = pack_antisymmetric_pair(d)
    terms = []
    for i in range(2):
        qubit_mode = 1 if i == 0 else 4
        for col, (j, k) in enumerate(_PAIR_SLOTS):
            terms.append(
                ((qubit_mode, _FERMION4_MODES[j], _FERMION4_MODES[k]), p[i, col])
            )
    return FermionState.from_terms(3, 6, terms)


# -- the subspace chain ----------------------------------------------------------


def boson3_to_boson2q(c: np.ndarray) -> np.ndarray:
    """Inclusion of three bosonic qubits into qubit + two bosonic qubits:
    singling out one boson leaves b[i, j] = c[i + j]."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (4,):
        raise ShapeError(f"expected 4 amplitudes, got shape {c.shape}")
    return np.array([[c[0], c[1], c[2]], [c[1], c[2], c[3]]])


def boson2q_to_three_qubit(b: np.ndarray) -> np.ndarray:
    """Inclusion of qubit + two bosonic qubits into three qubits:
    a[i, j, k] = b[i, j + k] (the bosonic amplitudes are symmetric in the
    last two slots by construction)."""
    b = np.asarray(b, dtype=complex)
    if b.shape != (2, 3):
        raise ShapeError(f"expected a 2x3 amplitude array, got {b.shape}")
    a = np.empty((2, 2, 2), dtype=complex)
    for i, j, k in np.ndindex(2, 2, 2):
        a[i, j, k] = b[i, j + k]
    return a


def three_qubit_to_qubit_fermion4(a: np.ndarray) -> np.ndarray:
    """Inclusion of three qubits into qubit + fermion pair: the second
    qubit's states become fermion modes 0 and 2, the third qubit's modes
    1 and 3, with the parity sign folded when the resulting pair is out
    of order."""
    a = _as_qubit_cube(a)
    packed = np.zeros((2, 6), dtype=complex)
    for i, j, k in np.ndindex(2, 2, 2):
        mj = 0 if j == 0 else 2
        mk = 1 if k == 0 else 3
        if mj < mk:
            packed[i, _PAIR_INDEX[(mj, mk)]] += a[i, j, k]
        else:
            packed[i, _PAIR_INDEX[(mk, mj)]] -= a[i, j, k]
    return packed
