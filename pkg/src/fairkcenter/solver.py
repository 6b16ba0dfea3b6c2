"""One-pass solver for two groups at a fixed radius guess.

During the stream each group keeps its own representative set at a
separation threshold of twice the guess. Afterwards, selection depends on
which groups ended up over their caps:

* neither over: the union of both sets already works;
* one over: drop the overfull group's representatives that sit within three
  guesses of the other set (their neighborhoods are served from there);
* both over: pick a constrained vertex cover on the bipartite graph that
  links cross-group representatives within three guesses of each other.

Every infeasible return is a certificate that the radius guess was below
the optimum, never an error: the radius ladder relies on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import EUCLIDEAN, CenterSet, DistanceMetric, FairnessSpec, Point, check_fairness
from .independent import IndependentSet, OfferResult, OfferStatus


class InfeasibleReason(Enum):
    STREAM_OVERFLOW = "stream-overflow"
    SELECTION_EXHAUSTED = "selection-exhausted"
    FAIRNESS_VIOLATED = "fairness-violated"


@dataclass(frozen=True)
class SolveOutcome:
    """Either a center set (guaranteed to satisfy the caps) or the reason the
    guess failed."""

    centers: CenterSet | None
    reason: InfeasibleReason | None

    @property
    def feasible(self) -> bool:
        return self.centers is not None

    @classmethod
    def ok(cls, centers: CenterSet) -> "SolveOutcome":
        return cls(centers, None)

    @classmethod
    def infeasible(cls, reason: InfeasibleReason) -> "SolveOutcome":
        return cls(None, reason)


@dataclass(frozen=True)
class ProcessResult:
    """Outcome of feeding one point, with the distances measured doing so.
    ``min_dist_all`` is only known when the other group was probed too."""

    offer: OfferResult
    min_dist_own: float
    min_dist_all: float | None


class StreamInstance:
    """Streaming state for one radius guess over a two-group stream."""

    def __init__(self, radius_guess: float, spec: FairnessSpec, metric: DistanceMetric = EUCLIDEAN) -> None:
        if spec.m != 2:
            raise ValueError("this solver handles exactly two groups")
        if radius_guess < 0:
            raise ValueError("radius guess must be nonnegative")
        self.radius_guess = float(radius_guess)
        self.threshold = 2.0 * self.radius_guess
        self.spec = spec
        self.metric = metric
        self.reps = {
            1: IndependentSet(self.threshold, metric, cap=spec.k, group_filter=1),
            2: IndependentSet(self.threshold, metric, cap=spec.k, group_filter=2),
        }
        self.overflowed = False
        self.finalized = False
        self.points_processed = 0
        self.stored_order: list[Point] = []
        self.worst_update_excess: int | None = None
        self.path: str | None = None  # which selection branch finalize took
        self.last_graph: CrossGroupGraph | None = None

    @property
    def distance_evals(self) -> int:
        return self.reps[1].distance_evals + self.reps[2].distance_evals

    @property
    def stored_count(self) -> int:
        return len(self.stored_order)

    def process(self, point: Point, probe_other: bool = False) -> ProcessResult:
        """Route the point to its group's set. With ``probe_other`` the other
        group's set is scanned too, so the total work stays at one evaluation
        per currently stored point."""
        if self.finalized:
            raise RuntimeError("instance already finalized")
        if self.overflowed:
            raise RuntimeError("instance already overflowed")
        if point.group not in (1, 2):
            raise ValueError(f"point {point.id} has group {point.group}; this solver expects groups 1 and 2")
        own = self.reps[point.group]
        other = self.reps[3 - point.group]
        budget = len(own) + len(other)
        evals_before = self.distance_evals
        res = own.offer(point)
        other_dist: float | None = None
        if res.status is OfferStatus.OVERFLOW:
            self.overflowed = True
        elif res.status is OfferStatus.ADDED:
            self.stored_order.append(point)
        if probe_other and not self.overflowed:
            other_dist = other.min_dist(point)
        used = self.distance_evals - evals_before
        excess = used - budget
        if self.worst_update_excess is None or excess > self.worst_update_excess:
            self.worst_update_excess = excess
        self.points_processed += 1
        min_all = None if other_dist is None else min(res.min_dist, other_dist)
        return ProcessResult(res, res.min_dist, min_all)

    def finalize(self) -> SolveOutcome:
        """Select centers from the stored representatives. One-shot."""
        if self.finalized:
            raise RuntimeError("finalize is one-shot")
        self.finalized = True
        if self.overflowed:
            self.path = "overflow"
            return SolveOutcome.infeasible(InfeasibleReason.STREAM_OVERFLOW)
        g1, g2 = self.reps[1], self.reps[2]
        k1, k2 = self.spec.caps
        over1, over2 = len(g1) > k1, len(g2) > k2
        if not over1 and not over2:
            self.path = "union"
            return SolveOutcome.ok(CenterSet(tuple(g1.members) + tuple(g2.members)))
        if over1 != over2:
            self.path = "one-over"
            over, under = (g1, g2) if over1 else (g2, g1)
            return select_with_one_group_over(over, under, self.radius_guess, self.spec, self.metric)
        self.path = "both-over"
        graph = build_cross_graph(g1, g2, self.radius_guess, self.metric)
        self.last_graph = graph
        return select_with_both_groups_over(graph, self.spec, self.radius_guess, self.metric)


def select_with_one_group_over(
    over: IndependentSet,
    under: IndependentSet,
    radius_guess: float,
    spec: FairnessSpec,
    metric: DistanceMetric = EUCLIDEAN,
) -> SolveOutcome:
    """Selection when exactly one group's representatives exceed its cap.

    Representatives of the overfull group within three guesses of the other
    set are dropped; the survivors plus the whole underfull set are the
    centers. More survivors than the cap allows certifies the guess was below
    the optimum.
    """
    keep_beyond = 3.0 * radius_guess
    survivors = [p for p in over.members if under.min_dist(p) > keep_beyond]
    if over.group_filter is None:
        raise ValueError("overfull set must be group-filtered")
    if len(survivors) > spec.cap(over.group_filter):
        return SolveOutcome.infeasible(InfeasibleReason.FAIRNESS_VIOLATED)
    centers = CenterSet(tuple(under.members) + tuple(survivors))
    if check_fairness(centers, spec):
        return SolveOutcome.infeasible(InfeasibleReason.FAIRNESS_VIOLATED)
    return SolveOutcome.ok(centers)


class CrossGroupGraph:
    """Bipartite graph over both groups' representatives with an edge between
    cross-group pairs within the link radius (three radius guesses). Also
    carries the mutable selection state: the live vertex set shrinks as the
    cover loop removes vertices, and every loop iteration is traced."""

    def __init__(
        self,
        left: list[Point],
        right: list[Point],
        radius_guess: float,
        metric: DistanceMetric = EUCLIDEAN,
    ) -> None:
        self.radius_guess = float(radius_guess)
        self.link_radius = 3.0 * self.radius_guess
        self.metric = metric
        self.left = list(left)
        self.right = list(right)
        self.points: dict[int, Point] = {p.id: p for p in self.left + self.right}
        if len(self.points) != len(self.left) + len(self.right):
            raise ValueError("duplicate point ids across the two sides")
        self.adj: dict[int, set[int]] = {pid: set() for pid in self.points}
        self.edges: set[tuple[int, int]] = set()
        for p in self.left:
            for q in self.right:
                if metric(p, q) <= self.link_radius:
                    self.adj[p.id].add(q.id)
                    self.adj[q.id].add(p.id)
                    self.edges.add((p.id, q.id))
        self.live: set[int] = set(self.points)
        # (|chosen|, chosen group-1 count, chosen group-2 count, live group-1, live group-2)
        # recorded at the start of each cover-loop iteration
        self.loop_trace: list[tuple[int, int, int, int, int]] = []

    def degree(self, pid: int) -> int:
        return len(self.adj[pid] & self.live)

    def live_in_group(self, group: int) -> list[int]:
        return sorted(pid for pid in self.live if self.points[pid].group == group)


def build_cross_graph(
    g1: IndependentSet,
    g2: IndependentSet,
    radius_guess: float,
    metric: DistanceMetric = EUCLIDEAN,
) -> CrossGroupGraph:
    """Link cross-group representatives within three radius guesses."""
    return CrossGroupGraph(list(g1.members), list(g2.members), radius_guess, metric)


def select_with_both_groups_over(
    graph: CrossGroupGraph,
    spec: FairnessSpec,
    radius_guess: float,
    metric: DistanceMetric = EUCLIDEAN,
) -> SolveOutcome:
    """Constrained vertex cover when both groups exceed their caps.

    Isolated vertices are taken first. Then, while budget and live vertices
    remain: with no degree-1 vertex present, take one endpoint of the
    lexicographically smallest live edge (preferring the endpoint whose group
    has more remaining cap); otherwise take the vertex with the most degree-1
    neighbors and retire those neighbors with it. Whenever one group's chosen
    plus remaining representatives fit its cap, everything remaining is
    resolved directly and selection ends early.
    """
    k = spec.k
    near_radius = 2.0 * radius_guess
    link_radius = graph.link_radius
    chosen: list[Point] = []

    def chosen_min_dist(p: Point) -> float:
        return min((metric(p, c) for c in chosen), default=math.inf)

    def chosen_counts() -> tuple[int, int]:
        c1 = sum(1 for p in chosen if p.group == 1)
        return c1, len(chosen) - c1

    # isolated vertices serve their own neighborhoods; nothing across the
    # groups can stand in for them
    for pid in sorted(graph.live):
        if graph.degree(pid) == 0:
            p = graph.points[pid]
            if chosen_min_dist(p) > near_radius:
                chosen.append(p)
    graph.live -= {pid for pid in graph.live if graph.degree(pid) == 0}

    def try_early_exit() -> list[Point] | None:
        """When some group's chosen + live representatives fit its cap, take
        them all, plus the other side's live points not already served within
        the link radius."""
        counts = chosen_counts()
        for group in (1, 2):
            live_ids = graph.live_in_group(group)
            if counts[group - 1] + len(live_ids) <= spec.caps[group - 1]:
                base = list(chosen)
                base.extend(graph.points[pid] for pid in live_ids)
                extra = [
                    graph.points[pid]
                    for pid in graph.live_in_group(3 - group)
                    if min((metric(graph.points[pid], c) for c in base), default=math.inf) > link_radius
                ]
                return base + extra
        return None

    final = try_early_exit()  # harmless pre-loop check; fires only when already feasible
    initial_live = len(graph.live)
    iterations = 0
    while final is None and len(chosen) <= k and graph.live:
        iterations += 1
        if iterations > initial_live:
            raise AssertionError("cover loop failed to shrink the live vertex set")
        c1, c2 = chosen_counts()
        graph.loop_trace.append(
            (len(chosen), c1, c2, len(graph.live_in_group(1)), len(graph.live_in_group(2)))
        )
        degree_one = [pid for pid in graph.live if graph.degree(pid) == 1]
        if not degree_one:
            # all live degrees are >= 2: retire the smallest cross edge
            left_id = min(pid for pid in graph.live if graph.points[pid].group == 1 and graph.degree(pid) > 0)
            right_id = min(graph.adj[left_id] & graph.live)
            slack1 = spec.caps[0] - c1
            slack2 = spec.caps[1] - c2
            pick = left_id if slack1 >= slack2 else right_id
            chosen.append(graph.points[pick])
            removed = {left_id, right_id}
        else:
            best_id = -1
            best_leaves: set[int] = set()
            for pid in sorted(graph.live):
                leaves = {q for q in graph.adj[pid] & graph.live if graph.degree(q) == 1}
                if best_id < 0 or len(leaves) > len(best_leaves):
                    best_id, best_leaves = pid, leaves
            chosen.append(graph.points[best_id])
            removed = {best_id} | best_leaves
        graph.live -= removed
        # removals may lower neighbors' degrees but can never isolate them
        for rid in removed:
            for w in graph.adj[rid] & graph.live:
                if graph.degree(w) == 0:
                    raise AssertionError("vertex removal created an isolated live vertex")
        final = try_early_exit()

    if final is None:
        if graph.live:
            # budget exhausted with vertices still uncovered: guess too small
            return SolveOutcome.infeasible(InfeasibleReason.SELECTION_EXHAUSTED)
        final = chosen
    centers = CenterSet(tuple(final))
    if check_fairness(centers, spec):
        return SolveOutcome.infeasible(InfeasibleReason.SELECTION_EXHAUSTED)
    return SolveOutcome.ok(centers)
