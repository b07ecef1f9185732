"""Canonical 24-joint skeleton used throughout the pipeline.

The skeleton is a fixed tree of 24 named joints (pelvis root, two legs with
feet, a three-segment spine, neck/head, and two arms with hands). All pose
data in this package is an array of absolute 3D joint positions in meters,
right-handed, Y-up, indexed by this joint order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

JOINT_COUNT = 24

# Canonical joint order. Index 0 is the root.
CANONICAL_JOINT_NAMES: tuple[str, ...] = (
    "pelvis",
    "left_hip",
    "right_hip",
    "spine1",
    "left_knee",
    "right_knee",
    "spine2",
    "left_ankle",
    "right_ankle",
    "spine3",
    "left_foot",
    "right_foot",
    "neck",
    "left_collar",
    "right_collar",
    "head",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hand",
    "right_hand",
)

# parent[i] is the index of joint i's parent; the root has parent -1.
CANONICAL_PARENT_INDICES: tuple[int, ...] = (
    -1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21,
)

# Joints that carry visual emphasis by default: wrists, hands, ankles, feet.
DEFAULT_EMPHASIZED_JOINTS: tuple[str, ...] = (
    "left_wrist",
    "right_wrist",
    "left_hand",
    "right_hand",
    "left_ankle",
    "right_ankle",
    "left_foot",
    "right_foot",
)


@dataclass(frozen=True)
class Skeleton:
    """A fixed joint hierarchy.

    joints: joint names in canonical order (exactly 24).
    parent: map of joint name -> parent joint name; the root is absent.
    bones:  derived (parent, child) name pairs, one per non-root joint,
            listed in child-index order (23 entries).
    """

    joints: tuple[str, ...]
    parent: dict[str, str]
    bones: tuple[tuple[str, str], ...] = field(init=False, compare=False)
    parent_indices: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.joints) != JOINT_COUNT:
            raise ValueError(f"skeleton needs exactly {JOINT_COUNT} joints, got {len(self.joints)}")
        if len(set(self.joints)) != len(self.joints):
            raise ValueError("duplicate joint names")
        index = {name: i for i, name in enumerate(self.joints)}
        roots = [j for j in self.joints if j not in self.parent]
        if len(roots) != 1:
            raise ValueError(f"skeleton needs exactly one root, found {roots}")
        parent_idx = np.full(len(self.joints), -1, dtype=np.int64)
        for child, parent in self.parent.items():
            if child not in index or parent not in index:
                raise ValueError(f"unknown joint in parent map: {child} -> {parent}")
            parent_idx[index[child]] = index[parent]
        # Every non-root joint must reach the root (parent graph is a tree).
        root_i = index[roots[0]]
        for i in range(len(self.joints)):
            seen = set()
            j = i
            while j != root_i:
                if j in seen:
                    raise ValueError("cycle in parent graph")
                seen.add(j)
                j = int(parent_idx[j])
                if j < 0:
                    raise ValueError(f"joint {self.joints[i]!r} does not reach the root")
        bones = tuple(
            (self.parent[child], child) for child in self.joints if child in self.parent
        )
        object.__setattr__(self, "bones", bones)
        object.__setattr__(self, "parent_indices", parent_idx)

    @property
    def root(self) -> str:
        return self.joints[int(np.argmax(self.parent_indices < 0))]

    @property
    def root_index(self) -> int:
        return int(np.argmax(self.parent_indices < 0))

    def index_of(self, joint: str) -> int:
        try:
            return self.joints.index(joint)
        except ValueError:
            raise KeyError(f"unknown joint {joint!r}") from None

    def topological_order(self) -> list[int]:
        """Joint indices ordered so every parent precedes its children."""
        order: list[int] = []
        remaining = set(range(len(self.joints)))
        placed = set()
        while remaining:
            for i in sorted(remaining):
                p = int(self.parent_indices[i])
                if p < 0 or p in placed:
                    order.append(i)
                    placed.add(i)
                    remaining.discard(i)
                    break
            else:  # pragma: no cover - unreachable on a validated tree
                raise ValueError("parent graph is not a tree")
        return order


def canonical_skeleton() -> Skeleton:
    """The package-wide 24-joint skeleton."""
    parent = {
        CANONICAL_JOINT_NAMES[i]: CANONICAL_JOINT_NAMES[p]
        for i, p in enumerate(CANONICAL_PARENT_INDICES)
        if p >= 0
    }
    return Skeleton(joints=CANONICAL_JOINT_NAMES, parent=parent)


CANONICAL_SKELETON = canonical_skeleton()
