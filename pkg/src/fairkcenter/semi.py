"""Solver for group-ordered streams: every group-1 point arrives before any
group-2 point.

Group 1 streams into a plain separation set. While group 2 streams, two
things happen side by side: a second representative set grows under
thresholds that depend on whether group 1 ended up over its cap, and each
stored group-1 representative may pick up one nearby group-2 stand-in. If
group 1 holds too many representatives after the stream, the surplus is
swapped for their stand-ins, which repairs the group-1 cap at the price of
half a threshold of extra covering radius. The tighter bookkeeping buys a
factor-3 cost bound (instead of 5) whenever the radius guess is at least
the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EUCLIDEAN, CenterSet, DistanceMetric, FairnessSpec, Point, check_fairness
from .independent import IndependentSet, OfferStatus
from .solver import InfeasibleReason, SolveOutcome


class StreamOrderError(ValueError):
    """A group-1 point arrived after group-2 streaming had begun."""


@dataclass(frozen=True)
class SemiProcessResult:
    added: bool
    min_dist_all: float | None


class SemiInstance:
    """Streaming state for one radius guess over a group-ordered stream."""

    def __init__(self, radius_guess: float, spec: FairnessSpec, metric: DistanceMetric = EUCLIDEAN) -> None:
        if spec.m != 2:
            raise ValueError("this solver handles exactly two groups")
        if radius_guess < 0:
            raise ValueError("radius guess must be nonnegative")
        self.radius_guess = float(radius_guess)
        self.threshold = 2.0 * self.radius_guess
        self.spec = spec
        self.metric = metric
        # group-1 representatives can legitimately number up to k (not k1):
        # only more than k of them certify the guess was too small
        self.reps1 = IndependentSet(self.threshold, metric, cap=spec.k, group_filter=1)
        self.reps2 = IndependentSet(self.threshold, metric, cap=spec.caps[1], group_filter=2)
        self.replacements: list[Point] = []
        self.replacement_of: dict[int, Point] = {}  # reps1 member id -> group-2 stand-in
        self.group2_started = False
        self.overflowed = False
        self.finalized = False
        self.points_processed = 0
        self.stored_order: list[Point] = []
        self.worst_update_excess: int | None = None
        self.path: str | None = None

    @property
    def distance_evals(self) -> int:
        return self.reps1.distance_evals + self.reps2.distance_evals

    @property
    def stored_count(self) -> int:
        return len(self.stored_order)

    def process(self, point: Point, probe_other: bool = False) -> SemiProcessResult:
        if self.finalized:
            raise RuntimeError("instance already finalized")
        if self.overflowed:
            raise RuntimeError("instance already overflowed")
        if point.group not in (1, 2):
            raise ValueError(f"point {point.id} has group {point.group}; this solver expects groups 1 and 2")
        n1, n2 = len(self.reps1), len(self.reps2)
        budget = 2 * n1 + n2
        evals_before = self.distance_evals
        if point.group == 1:
            result = self._process_group1(point, probe_other)
        else:
            result = self._process_group2(point, probe_other)
        excess = (self.distance_evals - evals_before) - budget
        if self.worst_update_excess is None or excess > self.worst_update_excess:
            self.worst_update_excess = excess
        self.points_processed += 1
        return result

    def _process_group1(self, point: Point, probe_other: bool) -> SemiProcessResult:
        if self.group2_started:
            raise StreamOrderError(
                f"point {point.id}: group-1 point after group-2 streaming began; "
                "this solver requires all group-1 points first"
            )
        res = self.reps1.offer(point)
        if res.status is OfferStatus.OVERFLOW:
            self.overflowed = True
            return SemiProcessResult(False, None)
        if res.status is OfferStatus.ADDED:
            self.stored_order.append(point)
        min_all = None
        if probe_other:
            min_all = min(res.min_dist, self.reps2.min_dist(point))
        return SemiProcessResult(res.status is OfferStatus.ADDED, min_all)

    def _process_group2(self, point: Point, probe_other: bool) -> SemiProcessResult:
        self.group2_started = True
        lam = self.threshold
        dist1, nearest_rep = self.reps1.nearest(point)
        dist2: float | None = None
        added = False
        if len(self.reps1) <= self.spec.caps[0]:
            # group 1 fits its cap: admit only points clear of group 1 by one
            # and a half thresholds and clear of stored group-2 points
            if dist1 > 1.5 * lam:
                res = self.reps2.offer(point)
                dist2 = res.min_dist
                if res.status is OfferStatus.OVERFLOW:
                    self.overflowed = True
                    return SemiProcessResult(False, None)
                if res.status is OfferStatus.ADDED:
                    added = True
                    self.stored_order.append(point)
        else:
            if dist1 > lam:
                res = self.reps2.offer(point)
                dist2 = res.min_dist
                if res.status is OfferStatus.OVERFLOW:
                    self.overflowed = True
                    return SemiProcessResult(False, None)
                if res.status is OfferStatus.ADDED:
                    added = True
                    self.stored_order.append(point)
            # independently, the point may become the stand-in for one stored
            # group-1 representative. Only the nearest one can qualify:
            # representatives sit farther than a threshold apart, so no two
            # can both be within half a threshold of the point.
            if dist1 <= lam / 2.0 and nearest_rep is not None:
                if nearest_rep.id not in self.replacement_of:
                    self.replacement_of[nearest_rep.id] = point
                    self.replacements.append(point)
                    self.stored_order.append(point)
        min_all = None
        if probe_other:
            if dist2 is None:
                dist2 = self.reps2.min_dist(point)
            min_all = min(dist1, dist2)
        return SemiProcessResult(added, min_all)

    def finalize(self) -> SolveOutcome:
        """Assemble the centers; swaps surplus group-1 representatives for
        their stand-ins when group 1 exceeded its cap. One-shot."""
        if self.finalized:
            raise RuntimeError("finalize is one-shot")
        self.finalized = True
        if self.overflowed:
            self.path = "overflow"
            return SolveOutcome.infeasible(InfeasibleReason.STREAM_OVERFLOW)
        k1 = self.spec.caps[0]
        if len(self.reps1) <= k1:
            self.path = "union"
            centers = CenterSet(tuple(self.reps1.members) + tuple(self.reps2.members))
        else:
            self.path = "swap"
            surplus = len(self.reps1) - k1
            if len(self.replacement_of) < surplus:
                return SolveOutcome.infeasible(InfeasibleReason.FAIRNESS_VIOLATED)
            # swap out the representatives whose stand-ins were recorded first
            swap_ids = set(list(self.replacement_of)[:surplus])
            kept = [p for p in self.reps1.members if p.id not in swap_ids]
            stand_ins = [self.replacement_of[pid] for pid in self.replacement_of if pid in swap_ids]
            centers = CenterSet(tuple(self.reps2.members) + tuple(kept) + tuple(stand_ins))
        if check_fairness(centers, self.spec):
            return SolveOutcome.infeasible(InfeasibleReason.FAIRNESS_VIOLATED)
        return SolveOutcome.ok(centers)
