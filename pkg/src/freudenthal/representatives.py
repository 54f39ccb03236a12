"""Named SLOCC-orbit representatives for the five supported systems.

One pure state per orbit, normalized in each system's convention, with
the classification it must receive.  The biseparable representatives are
named after the bipartition they split across; ``bisep_internal`` is the
qubit + two-fermion state whose splitting is only visible at the level of
the fermionic rank, not across the qubit | fermion-pair cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .classify import ClassLabel
from .embed import MultiState, SystemShape
from .fermion import FermionState

__all__ = ["Representative", "all_representatives", "four_qubit_pair"]

_HALF = 1.0 / math.sqrt(2.0)
_THIRD = 1.0 / math.sqrt(3.0)

State = Union[FermionState, np.ndarray]


@dataclass(frozen=True)
class Representative:
    """A named orbit representative together with its expected verdict."""

    system: str
    name: str
    state: State = field(compare=False)
    expected: ClassLabel
    expected_tangle: float


def _fermion(terms) -> FermionState:
    return FermionState.from_terms(3, 6, terms)


def _label(rank: int, name: str, cuts=()) -> ClassLabel:
    return ClassLabel(rank=rank, name=name, cut_pattern=tuple(cuts))


def all_representatives() -> tuple[Representative, ...]:
    """Every representative, grouped by system, generic classes first."""
    reps: list[Representative] = []

    # --- three fermions, six modes -------------------------------------
    reps += [
        Representative(
            "fermion",
            "ghz",
            _fermion([((1, 2, 3), _HALF), ((4, 5, 6), _HALF)]),
            _label(4, "GHZ"),
            1.0,
        ),
        Representative(
            "fermion",
            "w",
            _fermion([((4, 2, 3), _THIRD), ((1, 5, 3), _THIRD), ((1, 2, 6), _THIRD)]),
            _label(3, "W"),
            0.0,
        ),
        Representative(
            "fermion",
            "bisep",
            _fermion([((1, 2, 3), _HALF), ((1, 5, 6), _HALF)]),
            _label(2, "biseparable"),
            0.0,
        ),
        Representative(
            "fermion", "product", _fermion([((1, 2, 3), 1.0)]), _label(1, "separable"), 0.0
        ),
    ]

    # --- one qubit + two fermions, four modes --------------------------
    # Packed rows are the qubit index, columns the mode pairs
    # (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    ghz = np.zeros((2, 6), dtype=complex)
    ghz[0, 0] = _HALF  # qubit 0 with pair (0,1)
    ghz[1, 5] = _HALF  # qubit 1 with pair (2,3)
    w = np.zeros((2, 6), dtype=complex)
    w[0, 5] = _THIRD  # qubit 0 with pair (2,3)
    w[1, 2] = _THIRD  # qubit 1 with pair (0,3)
    w[1, 3] = -_THIRD  # qubit 1 with pair (2,1), sign folded
    bisep_split = np.zeros((2, 6), dtype=complex)
    bisep_split[0, 0] = _HALF
    bisep_split[0, 5] = _HALF
    bisep_internal = np.zeros((2, 6), dtype=complex)
    bisep_internal[0, 0] = _HALF
    bisep_internal[1, 2] = _HALF  # qubit 1 with pair (0,3)
    product = np.zeros((2, 6), dtype=complex)
    product[0, 0] = 1.0
    reps += [
        Representative("qubit_fermion4", "ghz", ghz, _label(4, "GHZ"), 1.0),
        Representative("qubit_fermion4", "w", w, _label(3, "W"), 0.0),
        Representative(
            "qubit_fermion4",
            "bisep_split",
            bisep_split,
            _label(2, "biseparable", [((1,), (2,))]),
            0.0,
        ),
        Representative(
            "qubit_fermion4",
            "bisep_internal",
            bisep_internal,
            _label(2, "biseparable"),
            0.0,
        ),
        Representative("qubit_fermion4", "product", product, _label(1, "separable"), 0.0),
    ]

    # --- three qubits ----------------------------------------------------
    def cube(entries) -> np.ndarray:
        a = np.zeros((2, 2, 2), dtype=complex)
        for idx, value in entries:
            a[idx] = value
        return a

    reps += [
        Representative(
            "qubit3",
            "ghz",
            cube([((0, 0, 0), _HALF), ((1, 1, 1), _HALF)]),
            _label(4, "GHZ"),
            1.0,
        ),
        Representative(
            "qubit3",
            "w",
            cube([((1, 0, 0), _THIRD), ((0, 1, 0), _THIRD), ((0, 0, 1), _THIRD)]),
            _label(3, "W"),
            0.0,
        ),
        Representative(
            "qubit3",
            "bisep_cut1",
            cube([((0, 0, 0), _HALF), ((0, 1, 1), _HALF)]),
            _label(2, "biseparable", [((1,), (2, 3))]),
            0.0,
        ),
        Representative(
            "qubit3",
            "bisep_cut2",
            cube([((0, 0, 0), _HALF), ((1, 0, 1), _HALF)]),
            _label(2, "biseparable", [((2,), (1, 3))]),
            0.0,
        ),
        Representative(
            "qubit3",
            "bisep_cut3",
            cube([((0, 0, 0), _HALF), ((1, 1, 0), _HALF)]),
            _label(2, "biseparable", [((3,), (1, 2))]),
            0.0,
        ),
        Representative(
            "qubit3", "product", cube([((0, 0, 0), 1.0)]), _label(1, "separable"), 0.0
        ),
    ]

    # --- one qubit + two bosonic qubits ---------------------------------
    def rect(entries) -> np.ndarray:
        b = np.zeros((2, 3), dtype=complex)
        for idx, value in entries:
            b[idx] = value
        return b

    reps += [
        Representative(
            "boson2q",
            "ghz",
            rect([((0, 0), _HALF), ((1, 2), _HALF)]),
            _label(4, "GHZ"),
            1.0,
        ),
        Representative(
            "boson2q",
            "w",
            rect([((1, 0), _THIRD), ((0, 1), _THIRD)]),
            _label(3, "W"),
            0.0,
        ),
        Representative(
            "boson2q",
            "bisep",
            rect([((0, 0), _HALF), ((0, 2), _HALF)]),
            _label(2, "biseparable", [((1,), (2,))]),
            0.0,
        ),
        Representative(
            "boson2q", "product", rect([((0, 0), 1.0)]), _label(1, "separable"), 0.0
        ),
    ]

    # --- three bosonic qubits -------------------------------------------
    reps += [
        Representative(
            "boson3",
            "ghz",
            np.array([_HALF, 0.0, 0.0, _HALF], dtype=complex),
            _label(4, "GHZ"),
            1.0,
        ),
        Representative(
            "boson3",
            "w",
            np.array([0.0, _THIRD, 0.0, 0.0], dtype=complex),
            _label(3, "W"),
            0.0,
        ),
        Representative(
            "boson3",
            "product",
            np.array([1.0, 0.0, 0.0, 0.0], dtype=complex),
            _label(1, "separable"),
            0.0,
        ),
    ]
    return tuple(reps)


def four_qubit_pair() -> tuple[MultiState, MultiState, np.ndarray]:
    """Two four-qubit states in one fermionic orbit but different classes.

    Both are biseparable; the first is GHZ-entangled across qubits 3, 4
    and the second across qubits 1, 2.  Their images in the fourth wedge
    power of C^8 are carried onto each other by the returned 8x8 matrix
    (the block swap exchanging the two qubit pairs' mode blocks), so no
    invariant of the big fermionic system can tell them apart even though
    their cut patterns differ.
    """
    shape = SystemShape(((1, 2),) * 4)
    first = MultiState(
        shape,
        {
            ((1,), (1,), (1,), (1,)): _HALF,
            ((1,), (1,), (2,), (2,)): _HALF,
        },
    )
    second = MultiState(
        shape,
        {
            ((1,), (1,), (1,), (1,)): _HALF,
            ((2,), (2,), (1,), (1,)): _HALF,
        },
    )
    connector = np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(4))
    return first, second, connector
