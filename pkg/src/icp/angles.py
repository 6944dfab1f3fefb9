"""Per-edge intersection angles."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

from .errors import DomainError, MissingAngle

Edge = tuple[int, int]


def edge_key(v: int, w: int) -> Edge:
    """Sorted vertex pair used to key every per-edge map."""
    return (v, w) if v < w else (w, v)


class AngleData:
    """Intersection angle Θ(e) in radians for each edge, 0 < Θ < π.

    ``phi(e)`` is the exterior weight π - Θ(e) that the face and cycle
    conditions are written in.
    """

    __slots__ = ("theta",)

    def __init__(self, theta: Mapping[Edge, float]):
        clean = {}
        for e, t in theta.items():
            v, w = e
            t = float(t)
            if not math.isfinite(t) or not (0.0 < t < math.pi):
                raise DomainError(f"angle on edge {e} must lie in (0, pi), got {t!r}")
            clean[edge_key(v, w)] = t
        self.theta = clean

    @classmethod
    def constant(cls, edges: Iterable[Edge], value: float) -> "AngleData":
        return cls({e: value for e in edges})

    def __getitem__(self, e: Edge) -> float:
        try:
            return self.theta[edge_key(*e)]
        except KeyError:
            raise MissingAngle(f"no angle for edge {edge_key(*e)}") from None

    def phi(self, e: Edge) -> float:
        return math.pi - self[e]

    def __len__(self):
        return len(self.theta)

    def __contains__(self, e):
        return edge_key(*e) in self.theta

    def __eq__(self, other):
        return isinstance(other, AngleData) and self.theta == other.theta

    def restrict(self, edges: Iterable[Edge]) -> "AngleData":
        return AngleData({e: self[e] for e in edges})

    def check_defined_on(self, c) -> None:
        """Raise MissingAngle unless the angles cover exactly the edges of ``c``."""
        missing = [e for e in c.edges if e not in self.theta]
        if missing:
            raise MissingAngle(f"no angle for edge {missing[0]}")
        extra = set(self.theta) - set(c.edges)
        if extra:
            raise MissingAngle(f"angle given for non-edge {min(extra)}")

    @property
    def sup(self) -> float:
        return max(self.theta.values())
