"""Parallel radius guessing over a single pass of the stream.

The optimal radius is unknown up front, so a geometric grid of guesses runs
side by side, each guess owning one solver instance fed every point. The
grid anchors itself on a small bootstrap buffer: among the first k+2 points
two must share an optimal cluster, so the smallest positive pairwise gap in
the buffer is at most twice the optimal radius and makes a safe lowest
guess. Guesses that provably undershoot prune themselves when their stored
sets overflow. When the stream outgrows the largest guess (a point lands
beyond its covering threshold from everything that guess stored), the grid
extends upward one step at a time, seeding each new instance by replaying
the stored points of the largest existing one; the slack that replay
seeding introduces is covered by the grid's step factor.

NOTES
-----
* Memory stays at O(k) stored points per instance and one grid instance per
  (1+epsilon) step between the lowest and highest guess.
* A fully degenerate stream (every point coincident) never yields a positive
  gap; it short-circuits to a single deduplicated center at radius zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

from .core import EUCLIDEAN, CenterSet, DistanceMetric, FairnessSpec, Point
from .semi import SemiInstance
from .solver import SolveOutcome, StreamInstance

Instance = Union[StreamInstance, SemiInstance]


@dataclass(frozen=True)
class LadderResult:
    """Outcome of a ladder run: the smallest feasible guess and its centers.
    ``cost`` stays None unless the caller replays the stream to measure it."""

    best_guess: float
    centers: CenterSet
    cost: float | None
    discarded: int


class Ladder:
    """Drives one solver instance per grid guess through the stream."""

    def __init__(
        self,
        spec: FairnessSpec,
        metric: DistanceMetric = EUCLIDEAN,
        epsilon: float = 0.1,
        mode: str = "general",
    ) -> None:
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if mode not in ("general", "semi"):
            raise ValueError(f"unknown mode {mode!r}")
        self.spec = spec
        self.metric = metric
        self.epsilon = float(epsilon)
        self.mode = mode
        self.buffer: list[Point] = []
        self._buffer_min_gap = math.inf  # smallest positive pairwise distance
        self._buffer_diameter = 0.0
        self.bootstrapping = True
        self.instances: dict[float, Instance] = {}
        self.guesses: list[float] = []  # every grid point ever spawned, ascending
        self.pruned: list[float] = []
        self.points_seen = 0
        self.ladder_evals = 0  # bootstrap and fallback scans outside the instances
        self.total_stored_peak = 0
        self.finished = False
        # retired-instance stats, kept so resource contracts stay checkable
        # after pruned instances release their storage
        self._retired_stored_max = 0
        self._retired_update_excess: int | None = None
        self._retired_evals = 0

    # ------------------------------------------------------------------
    # streaming
    # ------------------------------------------------------------------
    def observe(self, point: Point) -> None:
        """Feed one stream point to the ladder."""
        if self.finished:
            raise RuntimeError("ladder already finished")
        self.points_seen += 1
        if self.bootstrapping:
            self._buffer_point(point)
            if len(self.buffer) >= self.spec.k + 2 and self._buffer_min_gap < math.inf:
                self._spawn_initial_grid()
            self._note_stored_peak()
            return
        self._dispatch(point)
        self._note_stored_peak()

    def _buffer_point(self, point: Point) -> None:
        for other in self.buffer:
            d = self.metric(point, other)
            self.ladder_evals += 1
            if 0.0 < d < self._buffer_min_gap:
                self._buffer_min_gap = d
            if d > self._buffer_diameter:
                self._buffer_diameter = d
        self.buffer.append(point)

    def _new_instance(self, guess: float) -> Instance:
        if self.mode == "general":
            return StreamInstance(guess, self.spec, self.metric)
        return SemiInstance(guess, self.spec, self.metric)

    def _spawn_initial_grid(self) -> None:
        """Grid from the smallest positive buffer gap up to a guess whose
        covering threshold spans the whole buffer; every instance replays the
        full buffer, so none of them carries any seeding slack."""
        low = self._buffer_min_gap
        grid = [low]
        while 2.0 * grid[-1] < self._buffer_diameter:
            grid.append(grid[-1] * (1.0 + self.epsilon))
        for guess in grid:
            self.guesses.append(guess)
            inst = self._new_instance(guess)
            alive = True
            for p in self.buffer:
                inst.process(p)
                if inst.overflowed:
                    alive = False
                    break
            if alive:
                self.instances[guess] = inst
            else:
                self._retire(guess, inst)
        self.bootstrapping = False
        seed = self.buffer
        self.buffer = []
        if not self.instances:
            # every initial guess overflowed on the buffer itself
            self._extend_grid(seed, pending=None)

    def _live_guesses(self) -> list[float]:
        return sorted(self.instances)

    def _dispatch(self, point: Point) -> None:
        live = self._live_guesses()
        largest = live[-1]
        largest_min_dist: float | None = None
        largest_overflowed: Instance | None = None
        for guess in live:
            inst = self.instances[guess]
            res = inst.process(point, probe_other=(guess == largest))
            if inst.overflowed:
                self.instances.pop(guess)
                self._retire(guess, inst)
                if guess == largest:
                    largest_overflowed = inst
            elif guess == largest:
                largest_min_dist = res.min_dist_all
        if largest_overflowed is not None:
            # the top guess just proved too small: its successor replays what
            # it stored and then sees the point that broke it
            self._extend_grid(list(largest_overflowed.stored_order), pending=point)
        elif largest_min_dist is not None and largest_min_dist > self.instances[largest].threshold:
            # the stream outgrew the top guess; the point itself was stored,
            # so the replay seed already contains it
            self._extend_grid(list(self.instances[largest].stored_order), pending=None)

    def _extend_grid(self, seed: list[Point], pending: Point | None) -> Instance:
        """Append grid steps until one accepts the seed replay (and the
        pending point, when given) without overflowing."""
        base = self.guesses[-1]
        replay = seed + ([pending] if pending is not None else [])
        diameter: float | None = None
        while True:
            base = base * (1.0 + self.epsilon)
            self.guesses.append(base)
            inst = self._new_instance(base)
            alive = True
            for p in replay:
                inst.process(p)
                if inst.overflowed:
                    alive = False
                    break
            if alive:
                self.instances[base] = inst
                return inst
            self._retire(base, inst)
            if diameter is None:
                diameter = 0.0
                for i, p in enumerate(replay):
                    for q in replay[i + 1 :]:
                        diameter = max(diameter, self.metric(p, q))
                        self.ladder_evals += 1
            if 2.0 * base >= diameter:
                # at this threshold each group keeps at most one stored point,
                # so an overflow means a populated group has cap zero and no
                # other group can stand in for it
                raise RuntimeError(
                    "no feasible center set at any radius: the caps leave some observed group unservable"
                )

    def _retire(self, guess: float, inst: Instance) -> None:
        self.pruned.append(guess)
        self._retired_stored_max = max(self._retired_stored_max, inst.stored_count)
        self._retired_evals += inst.distance_evals
        excess = inst.worst_update_excess
        if excess is not None and (
            self._retired_update_excess is None or excess > self._retired_update_excess
        ):
            self._retired_update_excess = excess

    def _note_stored_peak(self) -> None:
        total = len(self.buffer) + sum(inst.stored_count for inst in self.instances.values())
        if total > self.total_stored_peak:
            self.total_stored_peak = total

    # ------------------------------------------------------------------
    # post-streaming
    # ------------------------------------------------------------------
    def finish(self) -> LadderResult:
        """Finalize live instances ascending by guess and return the smallest
        feasible one. One-shot."""
        if self.finished:
            raise RuntimeError("finish is one-shot")
        self.finished = True
        if self.points_seen == 0:
            raise ValueError("empty stream")
        if self.bootstrapping:
            if self._buffer_min_gap < math.inf:
                self._spawn_initial_grid()
            else:
                return self._degenerate_result()
        for guess in self._live_guesses():
            outcome = self.instances[guess].finalize()
            if outcome.feasible:
                return self._result(guess, outcome)
        # no grid guess worked; push the grid upward from the largest stored
        # set until a guess succeeds or the caps are provably unsatisfiable
        seed = self._replay_seed()
        diameter = 0.0
        for i, p in enumerate(seed):
            for q in seed[i + 1 :]:
                diameter = max(diameter, self.metric(p, q))
                self.ladder_evals += 1
        while True:
            inst = self._extend_grid(seed, pending=None)
            outcome = inst.finalize()
            if outcome.feasible:
                return self._result(self.guesses[-1], outcome)
            if self.guesses[-1] >= diameter:
                raise RuntimeError(
                    "no feasible center set at any radius: the caps leave some observed group unservable"
                )

    def _replay_seed(self) -> list[Point]:
        if self.buffer:
            return list(self.buffer)
        if not self.instances:
            raise RuntimeError("no live instance to seed from")
        largest = self._live_guesses()[-1]
        return list(self.instances[largest].stored_order)

    def _degenerate_result(self) -> LadderResult:
        # every buffered point coincides: one point covers the stream at
        # radius zero, provided its group has a positive cap
        for p in self.buffer:
            if self.spec.cap(p.group) >= 1:
                return LadderResult(0.0, CenterSet((p,)), None, len(self.pruned))
        raise RuntimeError("no observed group has a positive cap")

    def _result(self, guess: float, outcome: SolveOutcome) -> LadderResult:
        assert outcome.centers is not None
        return LadderResult(guess, outcome.centers, None, len(self.pruned))

    # ------------------------------------------------------------------
    # reporting helpers
    # ------------------------------------------------------------------
    @property
    def total_distance_evals(self) -> int:
        live = sum(inst.distance_evals for inst in self.instances.values())
        return live + self._retired_evals + self.ladder_evals

    @property
    def per_instance_stored_peak(self) -> int:
        """Largest stored-point count any instance (live or pruned) reached."""
        live = max((inst.stored_count for inst in self.instances.values()), default=0)
        return max(live, self._retired_stored_max)

    @property
    def worst_update_excess(self) -> int:
        """Worst per-point evaluation count relative to the per-instance
        budget, across every instance live or pruned; at most zero when the
        update-time contract holds."""
        worst: int | None = self._retired_update_excess
        for inst in self.instances.values():
            if inst.worst_update_excess is not None and (
                worst is None or inst.worst_update_excess > worst
            ):
                worst = inst.worst_update_excess
        return 0 if worst is None else worst

    @property
    def spawned_count(self) -> int:
        return len(self.guesses)

    @property
    def live_count(self) -> int:
        return len(self.instances)

    @property
    def grid_bound(self) -> int:
        """Upper bound on how many grid guesses the run may spawn:
        one per (1+epsilon) step between the lowest and highest guess."""
        if len(self.guesses) < 2:
            return max(len(self.guesses), 1)
        ratio = self.guesses[-1] / self.guesses[0]
        return math.ceil(math.log(ratio) / math.log(1.0 + self.epsilon) - 1e-9) + 1


def run_known(
    radius: float,
    points: Iterable[Point],
    spec: FairnessSpec,
    mode: str = "general",
    metric: DistanceMetric = EUCLIDEAN,
) -> SolveOutcome:
    """Single-instance run at one fixed radius guess (no ladder).

    A zero radius degrades to exact-duplicate collapsing: the separation
    threshold becomes zero, so only coordinate-distinct points are stored.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if mode == "general":
        inst: Instance = StreamInstance(radius, spec, metric)
    elif mode == "semi":
        inst = SemiInstance(radius, spec, metric)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for p in points:
        inst.process(p)
        if inst.overflowed:
            break
    return inst.finalize()
