"""Online maintenance of a separation-constrained representative set.

Points are offered one at a time. An offered point is stored only when it is
strictly farther than the threshold from every stored point, so stored points
stay pairwise separated beyond the threshold while every offered point ends
up within the threshold of something stored. With a size cap the structure
doubles as a certificate: a cap overflow proves the threshold was chosen
below twice the optimal clustering radius, because no more than k points can
be pairwise separated by more than that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import EUCLIDEAN, DistanceMetric, Point


class OfferStatus(Enum):
    ADDED = "added"
    COVERED = "covered"
    OVERFLOW = "overflow"


@dataclass(frozen=True)
class OfferResult:
    status: OfferStatus
    covered_by: Point | None
    min_dist: float


class IndependentSet:
    """Stored points pairwise farther than ``threshold`` apart; offers are
    either stored, covered by the nearest stored point, or refused when a cap
    would be exceeded (which permanently marks the set overflowed)."""

    def __init__(
        self,
        threshold: float,
        metric: DistanceMetric = EUCLIDEAN,
        cap: int | None = None,
        group_filter: int | None = None,
    ) -> None:
        if threshold < 0:
            raise ValueError("threshold must be nonnegative")
        if cap is not None and cap < 0:
            raise ValueError("cap must be nonnegative")
        self.threshold = float(threshold)
        self.metric = metric
        self.cap = cap
        self.group_filter = group_filter
        self.members: list[Point] = []
        self.overflowed = False
        self.distance_evals = 0
        self._coords: np.ndarray | None = None  # euclidean fast path only

    def __len__(self) -> int:
        return len(self.members)

    def _scan(self, p: Point) -> tuple[float, int]:
        """Nearest stored point: (distance, index), (inf, -1) when empty.
        Costs exactly one distance evaluation per stored point; ties keep the
        earliest-stored point."""
        n = len(self.members)
        self.distance_evals += n
        if n == 0:
            return math.inf, -1
        # the vectorized path only pays off past a handful of members
        if self.metric.kind == "euclidean" and n > 8:
            arr = self._coords[:n]
            x = np.asarray(p.coords, dtype=np.float64)
            if arr.shape[1] != x.shape[0]:
                raise ValueError(
                    f"dimension mismatch: point {p.id} has {x.shape[0]} coords, stored points have {arr.shape[1]}"
                )
            if arr.shape[1] == 1:
                # |a-b| keeps exact tie semantics with the scalar path
                dists = np.abs(arr[:, 0] - x[0])
            else:
                diff = arr - x
                dists = np.sqrt(np.einsum("ij,ij->i", diff, diff))
            idx = int(np.argmin(dists))
            return float(dists[idx]), idx
        best = math.inf
        best_idx = -1
        fn = self.metric.fn
        pc = p.coords
        for idx, q in enumerate(self.members):
            d = fn(pc, q.coords)
            if d < best:
                best, best_idx = d, idx
        return best, best_idx

    def min_dist(self, p: Point) -> float:
        """Distance from ``p`` to the nearest stored point; inf when empty."""
        return self._scan(p)[0]

    def nearest(self, p: Point) -> tuple[float, Point | None]:
        """Nearest stored point and the distance to it; (inf, None) when
        empty. Same evaluation cost as ``min_dist``."""
        d, idx = self._scan(p)
        return d, (self.members[idx] if idx >= 0 else None)

    def offer(self, p: Point) -> OfferResult:
        if self.overflowed:
            raise RuntimeError("offer to an overflowed set")
        if self.group_filter is not None and p.group != self.group_filter:
            raise ValueError(f"point {p.id} has group {p.group}, set accepts group {self.group_filter}")
        d, idx = self._scan(p)
        if d <= self.threshold:
            # a point at exactly the threshold stays covered
            return OfferResult(OfferStatus.COVERED, self.members[idx], d)
        if self.cap is not None and len(self.members) >= self.cap:
            self.overflowed = True
            return OfferResult(OfferStatus.OVERFLOW, None, d)
        self._append(p)
        return OfferResult(OfferStatus.ADDED, None, d)

    def _append(self, p: Point) -> None:
        if self.metric.kind == "euclidean":
            if self._coords is None:
                size = self.cap if self.cap is not None else 16
                self._coords = np.empty((max(size, 1), p.dim), dtype=np.float64)
            elif len(self.members) == self._coords.shape[0]:
                grown = np.empty((2 * self._coords.shape[0], self._coords.shape[1]), dtype=np.float64)
                grown[: len(self.members)] = self._coords
                self._coords = grown
            self._coords[len(self.members)] = p.coords
        self.members.append(p)
