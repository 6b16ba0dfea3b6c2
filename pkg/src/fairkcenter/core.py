"""Shared data model: points with group labels, per-group center caps,
distance evaluation, and solution-quality measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

Coords = tuple[float, ...]


@dataclass(frozen=True)
class Point:
    """A data point: integer id, coordinate vector, 1-based group label."""

    id: int
    coords: Coords
    group: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if not self.coords:
            raise ValueError("point needs at least one coordinate")
        if self.group < 1:
            raise ValueError(f"group labels are 1-based, got {self.group}")

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class DistanceMetric:
    """Distance function over coordinate tuples.

    The default is euclidean. Any symmetric, nonnegative callable satisfying
    the triangle inequality may be injected for general metric spaces; the
    triangle inequality is assumed, never checked per call.
    """

    kind: str
    fn: Callable[[Coords, Coords], float]

    @classmethod
    def euclidean(cls) -> "DistanceMetric":
        return cls("euclidean", math.dist)

    @classmethod
    def from_callable(cls, fn: Callable[[Coords, Coords], float], name: str = "custom") -> "DistanceMetric":
        return cls(name, fn)

    def __call__(self, p: Point, q: Point) -> float:
        if len(p.coords) != len(q.coords):
            raise ValueError(
                f"dimension mismatch: point {p.id} has {len(p.coords)} coords, point {q.id} has {len(q.coords)}"
            )
        return self.fn(p.coords, q.coords)


EUCLIDEAN = DistanceMetric.euclidean()


def distance(p: Point, q: Point, metric: DistanceMetric = EUCLIDEAN) -> float:
    """Metric distance between two points of equal dimension."""
    return metric(p, q)


@dataclass(frozen=True)
class FairnessSpec:
    """Per-group caps on how many centers may be chosen; the total budget
    ``k`` is the sum of the caps."""

    caps: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "caps", tuple(int(c) for c in self.caps))
        if not self.caps:
            raise ValueError("at least one group is required")
        if any(c < 0 for c in self.caps):
            raise ValueError("caps must be nonnegative")
        if all(c == 0 for c in self.caps):
            raise ValueError("at least one cap must be positive")

    @property
    def m(self) -> int:
        return len(self.caps)

    @property
    def k(self) -> int:
        return sum(self.caps)

    def cap(self, group: int) -> int:
        if not 1 <= group <= self.m:
            raise ValueError(f"group {group} outside 1..{self.m}")
        return self.caps[group - 1]


@dataclass(frozen=True)
class CenterSet:
    """An ordered collection of chosen centers with distinct ids."""

    centers: tuple[Point, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "centers", tuple(self.centers))
        ids = [p.id for p in self.centers]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate center ids")

    def __len__(self) -> int:
        return len(self.centers)

    def __iter__(self):
        return iter(self.centers)

    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.centers)

    def per_group_counts(self, m: int) -> tuple[int, ...]:
        counts = [0] * m
        for p in self.centers:
            if p.group > m:
                raise ValueError(f"center {p.id} labelled group {p.group} but only {m} groups declared")
            counts[p.group - 1] += 1
        return tuple(counts)


@dataclass(frozen=True)
class Violation:
    """One broken constraint: a group over its cap, or the total over k."""

    kind: str  # "group" or "total"
    group: int | None
    count: int
    limit: int


def check_fairness(centers: CenterSet, spec: FairnessSpec) -> list[Violation]:
    """Every group whose center count exceeds its cap, plus a total-budget
    entry when |centers| > k. Empty list means feasible."""
    report: list[Violation] = []
    counts = centers.per_group_counts(spec.m)
    for group, (count, cap) in enumerate(zip(counts, spec.caps), start=1):
        if count > cap:
            report.append(Violation("group", group, count, cap))
    if len(centers) > spec.k:
        report.append(Violation("total", None, len(centers), spec.k))
    return report


def clustering_cost(
    points: Iterable[Point],
    centers: CenterSet | Sequence[Point],
    metric: DistanceMetric = EUCLIDEAN,
) -> float:
    """max over points of the distance to the nearest center."""
    cs = list(centers)
    if not cs:
        raise ValueError("empty center set")
    worst = -1.0
    for p in points:
        worst = max(worst, min(metric(p, c) for c in cs))
    if worst < 0:
        raise ValueError("empty point set")
    return worst


@dataclass(frozen=True)
class Dataset:
    """A fixed point collection with a declared dimension and group count."""

    points: tuple[Point, ...]
    dim: int
    m: int

    @classmethod
    def from_points(cls, points: Iterable[Point], m: int | None = None) -> "Dataset":
        pts = tuple(points)
        if not pts:
            raise ValueError("empty dataset")
        dim = pts[0].dim
        groups = set()
        for p in pts:
            if p.dim != dim:
                raise ValueError(f"point {p.id}: dimension {p.dim} differs from {dim}")
            groups.add(p.group)
        m_eff = max(groups) if m is None else m
        if max(groups) > m_eff:
            raise ValueError(f"group label {max(groups)} exceeds declared group count {m_eff}")
        return cls(pts, dim, m_eff)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)
