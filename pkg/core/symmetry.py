"""
The tetrahedral group, its subgroups, and invariance groups of oriented potentials.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from config.settings import SolverConfig, get_default_config
from core.orientation import OrientedParams, params_tensor
from core.sphere import grid_seeds
from core.strata.disk import disk_reflection_slopes
from core.strata.tetrahedral import TETRAHEDRON_VERTICES
from core.tensor import OctupolarTensor, potential_array


logger = logging.getLogger(__name__)

_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)
_R23 = math.sqrt(2.0 / 3.0)

# Proper rotations M1..M12; M_{k+12} = diag(-1, 1, 1) @ M_k.
_PROPER = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((-0.5, _R3 / 2, 0), (-_R3 / 2, -0.5, 0), (0, 0, 1)),
    ((-0.5, -_R3 / 2, 0), (_R3 / 2, -0.5, 0), (0, 0, 1)),
    ((0.5, _R3 / 2, 0), (1 / (2 * _R3), -1 / 6, 2 * _R2 / 3), (_R23, -_R2 / 3, -1 / 3)),
    ((0.5, 1 / (2 * _R3), _R23), (_R3 / 2, -1 / 6, -_R2 / 3), (0, 2 * _R2 / 3, -1 / 3)),
    ((0.5, -_R3 / 2, 0), (-1 / (2 * _R3), -1 / 6, 2 * _R2 / 3), (-_R23, -_R2 / 3, -1 / 3)),
    ((0.5, -1 / (2 * _R3), -_R23), (-_R3 / 2, -1 / 6, -_R2 / 3), (0, 2 * _R2 / 3, -1 / 3)),
    ((-0.5, 1 / (2 * _R3), _R23), (-1 / (2 * _R3), 5 / 6, -_R2 / 3), (-_R23, -_R2 / 3, -1 / 3)),
    ((-0.5, -1 / (2 * _R3), -_R23), (1 / (2 * _R3), 5 / 6, -_R2 / 3), (_R23, -_R2 / 3, -1 / 3)),
    ((0, 1 / _R3, -_R23), (1 / _R3, -2 / 3, -_R2 / 3), (-_R23, -_R2 / 3, -1 / 3)),
    ((0, -1 / _R3, _R23), (-1 / _R3, -2 / 3, -_R2 / 3), (_R23, -_R2 / 3, -1 / 3)),
    ((-1, 0, 0), (0, 1 / 3, 2 * _R2 / 3), (0, 2 * _R2 / 3, -1 / 3)),
)

_P11 = (
    (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12),
    (2, 3, 1, 11, 7, 8, 12, 10, 4, 6, 9, 5),
    (3, 1, 2, 9, 12, 10, 5, 6, 11, 8, 4, 7),
    (4, 12, 6, 5, 1, 11, 9, 2, 10, 7, 3, 8),
    (5, 8, 11, 1, 4, 3, 10, 12, 7, 9, 6, 2),
    (6, 4, 12, 10, 8, 7, 1, 11, 3, 2, 5, 9),
    (7, 10, 9, 2, 11, 1, 6, 5, 12, 4, 8, 3),
    (8, 11, 5, 6, 10, 12, 2, 9, 1, 3, 7, 4),
    (9, 7, 10, 12, 3, 4, 11, 1, 8, 5, 2, 6),
    (10, 9, 7, 8, 6, 5, 3, 4, 2, 1, 12, 11),
    (11, 5, 8, 7, 2, 9, 4, 3, 6, 12, 1, 10),
    (12, 6, 4, 3, 9, 2, 8, 7, 5, 11, 10, 1),
)

_P12 = (
    (13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24),
    (15, 13, 14, 21, 24, 22, 17, 18, 23, 20, 16, 19),
    (14, 15, 13, 23, 19, 20, 24, 22, 16, 18, 21, 17),
    (18, 16, 24, 22, 20, 19, 13, 23, 15, 14, 17, 21),
    (19, 22, 21, 14, 23, 13, 18, 17, 24, 16, 20, 15),
    (16, 24, 18, 17, 13, 23, 21, 14, 22, 19, 15, 20),
    (17, 20, 23, 13, 16, 15, 22, 24, 19, 21, 18, 14),
    (21, 19, 22, 24, 15, 16, 23, 13, 20, 17, 14, 18),
    (20, 23, 17, 18, 22, 24, 14, 21, 13, 15, 19, 16),
    (23, 17, 20, 19, 14, 21, 16, 15, 18, 24, 13, 22),
    (22, 21, 19, 20, 18, 17, 15, 16, 14, 13, 24, 23),
    (24, 18, 16, 15, 21, 14, 20, 19, 17, 23, 22, 13),
)

_P21 = (
    (13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24),
    (14, 15, 13, 23, 19, 20, 24, 22, 16, 18, 21, 17),
    (15, 13, 14, 21, 24, 22, 17, 18, 23, 20, 16, 19),
    (16, 24, 18, 17, 13, 23, 21, 14, 22, 19, 15, 20),
    (17, 20, 23, 13, 16, 15, 22, 24, 19, 21, 18, 14),
    (18, 16, 24, 22, 20, 19, 13, 23, 15, 14, 17, 21),
    (19, 22, 21, 14, 23, 13, 18, 17, 24, 16, 20, 15),
    (20, 23, 17, 18, 22, 24, 14, 21, 13, 15, 19, 16),
    (21, 19, 22, 24, 15, 16, 23, 13, 20, 17, 14, 18),
    (22, 21, 19, 20, 18, 17, 15, 16, 14, 13, 24, 23),
    (23, 17, 20, 19, 14, 21, 16, 15, 18, 24, 13, 22),
    (24, 18, 16, 15, 21, 14, 20, 19, 17, 23, 22, 13),
)

_P22 = (
    (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12),
    (3, 1, 2, 9, 12, 10, 5, 6, 11, 8, 4, 7),
    (2, 3, 1, 11, 7, 8, 12, 10, 4, 6, 9, 5),
    (6, 4, 12, 10, 8, 7, 1, 11, 3, 2, 5, 9),
    (7, 10, 9, 2, 11, 1, 6, 5, 12, 4, 8, 3),
    (4, 12, 6, 5, 1, 11, 9, 2, 10, 7, 3, 8),
    (5, 8, 11, 1, 4, 3, 10, 12, 7, 9, 6, 2),
    (9, 7, 10, 12, 3, 4, 11, 1, 8, 5, 2, 6),
    (8, 11, 5, 6, 10, 12, 2, 9, 1, 3, 7, 4),
    (11, 5, 8, 7, 2, 9, 4, 3, 6, 12, 1, 10),
    (10, 9, 7, 8, 6, 5, 3, 4, 2, 1, 12, 11),
    (12, 6, 4, 3, 9, 2, 8, 7, 5, 11, 10, 1),
)

# Subgroups as published alongside the table; listed_subgroup_closure() checks them.
LISTED_SUBGROUPS: dict[str, tuple[tuple[int, ...], ...]] = {
    "Ga": (
        (1, 2, 3, 13, 14, 15), (1, 2, 3, 16, 21, 23), (1, 2, 3, 17, 19, 24), (1, 2, 3, 18, 20, 22),
        (1, 4, 5, 13, 18, 19), (1, 4, 5, 14, 16, 22), (1, 4, 5, 15, 21, 24), (1, 4, 5, 17, 20, 23),
        (1, 8, 9, 13, 20, 21), (1, 8, 9, 14, 19, 23), (1, 8, 9, 15, 17, 22), (1, 8, 9, 16, 18, 24),
    ),
    "Gb": (
        (1, 10, 13, 23), (1, 10, 14, 17), (1, 10, 15, 20), (1, 10, 16, 19), (1, 10, 18, 21), (1, 10, 22, 24),
        (1, 11, 13, 22), (1, 11, 14, 21), (1, 11, 15, 19), (1, 11, 16, 20), (1, 11, 17, 18), (1, 11, 23, 24),
        (1, 12, 13, 24), (1, 12, 14, 18), (1, 12, 15, 16), (1, 12, 17, 21), (1, 12, 19, 20), (1, 12, 22, 23),
    ),
    "Gc": (
        (1, 10, 11, 12, 13, 22, 23, 24), (1, 10, 11, 12, 14, 17, 18, 21), (1, 10, 11, 12, 15, 16, 19, 20),
    ),
    "Gd": ((1, 13), (1, 14), (1, 15), (1, 20), (1, 21), (1, 24)),
}

ROTATION_SUBGROUPS: dict[str, frozenset[int]] = {
    "G1": frozenset({1, 2, 3}),
    "G2": frozenset({1, 4, 5}),
    "G3": frozenset({1, 6, 7}),
    "G4": frozenset({1, 8, 9}),
    "G5": frozenset({1, 10}),
    "G6": frozenset({1, 11}),
    "G7": frozenset({1, 12}),
    "G8": frozenset({1, 10, 11, 12}),
}


@dataclass(frozen=True)
class GroupElement:
    id: int
    matrix: np.ndarray = field(compare=False, repr=False)

    @property
    def det(self) -> int:
        return int(round(float(np.linalg.det(self.matrix))))

    @property
    def proper(self) -> bool:
        return self.id <= 12


@dataclass(frozen=True)
class Subgroup:
    elements: frozenset[int]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def parity(self) -> str:
        if all(i <= 12 for i in self.elements):
            return "proper"
        return "mixed"


@dataclass(frozen=True)
class TableCheck:
    matches: int
    total: int
    mismatches: tuple[tuple[int, int, int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.matches == self.total


@lru_cache(maxsize=1)
def td_elements() -> tuple[GroupElement, ...]:
    mirror = np.diag([-1.0, 1.0, 1.0])
    proper = [np.array(rows, dtype=float) for rows in _PROPER]
    matrices = proper + [mirror @ m for m in proper]
    return tuple(GroupElement(id=i + 1, matrix=m) for i, m in enumerate(matrices))


def element(element_id: int) -> GroupElement:
    return td_elements()[element_id - 1]


def identify(matrix: np.ndarray, tol: float = 1e-9) -> int:
    for g in td_elements():
        if np.abs(g.matrix - matrix).max() <= tol:
            return g.id
    raise ValueError("matrix is not an element of the tetrahedral group")


def transcribed_table() -> np.ndarray:
    top = np.hstack([np.array(_P11), np.array(_P12)])
    bottom = np.hstack([np.array(_P21), np.array(_P22)])
    return np.vstack([top, bottom])


@lru_cache(maxsize=1)
def _computed_table() -> tuple[tuple[int, ...], ...]:
    elements = td_elements()
    return tuple(tuple(identify(a.matrix @ b.matrix) for b in elements) for a in elements)


def multiplication_table() -> np.ndarray:
    """table[i - 1, j - 1] is the id of M_i @ M_j."""
    return np.array(_computed_table(), dtype=int)


def verify_multiplication_table() -> TableCheck:
    computed = multiplication_table()
    listed = transcribed_table()
    bad = np.argwhere(computed != listed)
    mismatches = tuple((int(i) + 1, int(j) + 1, int(listed[i, j]), int(computed[i, j])) for i, j in bad)
    return TableCheck(matches=computed.size - len(mismatches), total=computed.size, mismatches=mismatches)


def closure(ids) -> frozenset[int]:
    table = multiplication_table()
    group = set(ids) | {1}
    while True:
        grown = group | {int(table[a - 1, b - 1]) for a in group for b in group}
        if grown == group:
            return frozenset(group)
        group = grown


def is_closed(ids) -> bool:
    return closure(ids) == frozenset(ids) | {1}


def is_normal(ids) -> bool:
    members = [element(i).matrix for i in ids]
    conjugates = {identify(g.matrix @ m @ g.matrix.T) for g in td_elements() for m in members}
    return conjugates <= set(ids)


def fixed_subspace(ids, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (rows) of the vectors fixed by every listed element."""
    stacked = np.vstack([element(i).matrix - np.eye(3) for i in ids])
    _, singular, vt = np.linalg.svd(stacked)
    rank = int((singular > tol).sum())
    return vt[rank:]


def vertex_permutation(element_id: int) -> tuple[int, ...]:
    """Where the element sends each tetrahedron vertex, as indices into TETRAHEDRON_VERTICES."""
    images = TETRAHEDRON_VERTICES @ element(element_id).matrix.T
    distances = np.linalg.norm(images[:, None, :] - TETRAHEDRON_VERTICES[None, :, :], axis=2)
    return tuple(int(j) for j in distances.argmin(axis=1))


def acts_freely(ids) -> bool:
    """No non-identity element fixes a tetrahedron vertex."""
    return all(
        all(image != vertex for vertex, image in enumerate(vertex_permutation(i)))
        for i in ids
        if i != 1
    )


def listed_subgroup_closure() -> dict[str, list[tuple[tuple[int, ...], bool]]]:
    return {family: [(ids, is_closed(ids)) for ids in sets] for family, sets in LISTED_SUBGROUPS.items()}


def _family(group: frozenset[int]) -> str:
    proper = {i for i in group if i <= 12}
    if group == frozenset(range(1, 25)):
        return "Td"
    if len(group) == len(proper):
        named = [name for name, ids in ROTATION_SUBGROUPS.items() if ids == group]
        if named:
            return named[0]
        return "T" if len(group) == 12 else "e"
    if proper == {1}:
        return "Gd"
    if len(proper) == 3:
        return "Ga"
    if len(group) == 8:
        return "Gc"
    return "Gb"


@lru_cache(maxsize=1)
def subgroup_lattice() -> tuple[Subgroup, ...]:
    """Every subgroup of the tetrahedral group, by order then smallest ids."""
    found = {closure((a, b)) for a, b in itertools.combinations_with_replacement(range(1, 25), 2)}
    ordered = sorted(found, key=lambda g: (len(g), sorted(g)))
    return tuple(Subgroup(elements=g, name=_family(g)) for g in ordered)


@dataclass(frozen=True)
class OrientedTransform:
    """Orthogonal map of the (x, y) plane that keeps the z axis: rotation (s=1) or reflection (s=-1)."""

    gamma: float
    s: int

    @property
    def matrix(self) -> np.ndarray:
        c, sn = math.cos(self.gamma), math.sin(self.gamma)
        return np.array([[c, -self.s * sn, 0.0], [sn, self.s * c, 0.0], [0.0, 0.0, 1.0]])

    @property
    def mirror_slope(self) -> float | None:
        """Slope m of the mirror plane y = m x, for reflections."""
        if self.s == 1:
            return None
        half = 0.5 * self.gamma
        if abs(math.cos(half)) < 1e-12:
            return math.inf
        return math.tan(half)

    def to_dict(self) -> dict[str, Any]:
        return {"gamma": self.gamma, "s": self.s, "mirror_slope": self.mirror_slope}


@dataclass
class SymmetryReport:
    group_name: str
    elements: list[int]
    transforms: list[OrientedTransform]
    continuous: bool = False

    @property
    def reflection_planes(self) -> list[float]:
        return [t.mirror_slope for t in self.transforms if t.s == -1]

    @property
    def rotations(self) -> list[OrientedTransform]:
        return [t for t in self.transforms if t.s == 1]

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": self.group_name,
            "elements": list(self.elements),
            "continuous": self.continuous,
            "transforms": [t.to_dict() for t in self.transforms],
            "reflection_planes": [None if math.isinf(m) else m for m in self.reflection_planes],
        }


def _candidate_angles(chi: float) -> list[float]:
    angles = [k * math.pi / 6 for k in range(12)]
    s = math.sin(chi)
    for value in (s, -s):
        base = math.acos(max(-1.0, min(1.0, value)))
        angles += [base, -base]
    for m in disk_reflection_slopes(chi):
        angles.append(math.pi if math.isinf(m) else 2.0 * math.atan(m))
    angles += [math.radians(d) for d in range(360)]

    distinct: list[float] = []
    for angle in angles:
        wrapped = angle % (2 * math.pi)
        if wrapped > 2 * math.pi - 1e-9:
            wrapped = 0.0
        if all(min(abs(wrapped - d), 2 * math.pi - abs(wrapped - d)) > 1e-9 for d in distinct):
            distinct.append(wrapped)
    return distinct


def invariance_defect(t: OctupolarTensor, matrix: np.ndarray, points: np.ndarray) -> float:
    a = t.full
    return float(np.abs(potential_array(a, points @ matrix.T) - potential_array(a, points)).max())


def _group_name(n_rot: int, n_ref: int) -> str:
    if n_ref == 0:
        return "e" if n_rot == 0 else f"C{n_rot + 1}"
    if n_rot == 0 and n_ref == 1:
        return "Dh"
    if n_rot == 1 and n_ref == 2:
        return "D2h"
    if n_rot == 2 and n_ref == 3:
        return "D3h"
    return f"C{n_rot + 1}v"


def detect_symmetry(p: OrientedParams, cfg: SolverConfig | None = None) -> SymmetryReport:
    cfg = cfg or get_default_config()
    t = params_tensor(p)
    points = grid_seeds(cfg.symmetry_grid)
    tol = cfg.symmetry_tol

    td_ids = [g.id for g in td_elements() if invariance_defect(t, g.matrix, points) < tol]

    transforms = []
    for s in (1, -1):
        for gamma in _candidate_angles(p.chi):
            if s == 1 and gamma == 0.0:
                continue
            candidate = OrientedTransform(gamma, s)
            if invariance_defect(t, candidate.matrix, points) < tol:
                transforms.append(candidate)

    n_rot = sum(1 for tr in transforms if tr.s == 1)
    n_ref = len(transforms) - n_rot
    if n_rot > 6:
        logger.debug("potential is invariant under a continuous family of rotations")
        return SymmetryReport("D∞h", td_ids, [], continuous=True)
    if len(td_ids) == 24:
        return SymmetryReport("Td", td_ids, transforms)
    name = _group_name(n_rot, n_ref)
    logger.debug("K=%.6g rho=%.6g chi=%.6g: %s (%d rotations, %d reflections)", p.k, p.rho, p.chi, name, n_rot, n_ref)
    return SymmetryReport(name, td_ids, transforms)
