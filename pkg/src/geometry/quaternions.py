"""Partition of a doubly symmetric layer into mirror-image quaternions."""

from typing import Dict, List, Tuple
import logging

import numpy as np

from .arrays import ElementGrid
from ..errors import GridHasAxisElements, GridNotSymmetric

logger = logging.getLogger(__name__)

Quaternion = Tuple[int, int, int, int]


def _key(value: float, tol: float) -> int:
    return int(round(value / tol))


def quaternion_partition(grid: ElementGrid) -> List[Quaternion]:
    """
    Group the elements into disjoint quaternions of mirror images.

    Each tuple holds the indices of the elements centred at
    (+alpha, +beta), (-alpha, +beta), (+alpha, -beta), (-alpha, -beta)
    relative to the grid centroid, in that order. Quaternions are listed in
    element-index order of their (+alpha, +beta) member.
    """
    cx, cz = grid.centroid
    rel = grid.centers - np.array([cx, cz])
    tol = grid.element_size * 1e-6

    on_axis = np.flatnonzero((np.abs(rel[:, 0]) < tol) | (np.abs(rel[:, 1]) < tol))
    if on_axis.size:
        raise GridHasAxisElements(
            f"{on_axis.size} element centre(s) lie on a symmetry axis "
            f"(grid {grid.rows}x{grid.cols}); first index {int(on_axis[0])}"
        )

    lookup: Dict[Tuple[int, int], int] = {}
    for n, (x, z) in enumerate(rel):
        lookup[(_key(x, tol), _key(z, tol))] = n

    quaternions: List[Quaternion] = []
    for n, (x, z) in enumerate(rel):
        if x < 0 or z < 0:
            continue
        members = []
        for sx, sz in ((1, 1), (-1, 1), (1, -1), (-1, -1)):
            mirror = lookup.get((_key(sx * x, tol), _key(sz * z, tol)))
            if mirror is None:
                raise GridNotSymmetric(
                    f"Element {n} at ({x:.6g}, {z:.6g}) has no mirror at "
                    f"({sx * x:.6g}, {sz * z:.6g})"
                )
            members.append(mirror)
        quaternions.append(tuple(members))

    covered = sorted(i for q in quaternions for i in q)
    if covered != list(range(grid.count)):
        raise GridNotSymmetric(
            f"Quaternions cover {len(covered)} of {grid.count} elements"
        )
    logger.debug(f"Partitioned {grid.count} elements into {len(quaternions)} quaternions")
    return quaternions
