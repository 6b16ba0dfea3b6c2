import math

import numpy as np
import pytest

from fairkcenter import (
    FairnessSpec,
    GenerationError,
    SizeGuardError,
    brute_force_opt,
    candidate_radii,
    check_fairness,
    clustering_cost,
    distance,
    generate_planted,
    gonzalez,
)

from conftest import pt, random_two_group_instance, stream


# ----------------------------------------------------------------------
# exhaustive optimum
# ----------------------------------------------------------------------
def test_brute_force_small_instance():
    # group1 {0,10}, group2 {1,11,20}, caps (1,2): no subset beats cost 1,
    # and the first cost-1 witness in enumeration order (increasing size,
    # lexicographic ids) is ids (0,3,4) = coords {0,11,20}
    pts = stream([(0.0, 1), (10.0, 1), (1.0, 2), (11.0, 2), (20.0, 2)])
    result = brute_force_opt(pts, FairnessSpec((1, 2)))
    assert result.r_opt == 1.0
    assert result.centers.ids() == (0, 3, 4)
    assert clustering_cost(pts, result.centers) == 1.0
    assert check_fairness(result.centers, FairnessSpec((1, 2))) == []


def test_brute_force_single_point():
    result = brute_force_opt([pt(0, 4.0, 1)], FairnessSpec((1, 1)))
    assert result.r_opt == 0.0
    assert result.centers.ids() == (0,)


def test_brute_force_counts_feasible_subsets():
    pts = stream([(0.0, 1), (5.0, 2)])
    result = brute_force_opt(pts, FairnessSpec((1, 1)))
    # {0}, {1}, {0,1}
    assert result.evaluated == 3


def test_brute_force_size_guards():
    pts = stream([(float(i), 1) for i in range(17)])
    with pytest.raises(SizeGuardError, match="n="):
        brute_force_opt(pts, FairnessSpec((1, 1)))
    with pytest.raises(SizeGuardError, match="k="):
        brute_force_opt(stream([(0.0, 1)]), FairnessSpec((3, 3)))
    # guards can be lifted explicitly
    result = brute_force_opt(pts, FairnessSpec((1, 1)), max_n=17)
    assert result.r_opt == 8.0


def test_brute_force_no_feasible_subset():
    # every point is group 1 but only group 2 may host centers
    pts = stream([(0.0, 1), (5.0, 1)])
    with pytest.raises(ValueError, match="no cap-feasible"):
        brute_force_opt(pts, FairnessSpec((0, 1)))


def test_oracle_lower_bounds_any_feasible_solution(rng):
    for trial in range(20):
        points, spec = random_two_group_instance(rng, max_n=9)
        result = brute_force_opt(points, spec)
        # any cap-feasible single center costs at least the optimum
        for p in points:
            if spec.cap(p.group) >= 1:
                assert clustering_cost(points, [p]) >= result.r_opt - 1e-12


# ----------------------------------------------------------------------
# candidate radii
# ----------------------------------------------------------------------
def test_candidate_radii_distances_and_halves():
    assert candidate_radii(stream([(0.0, 1), (1.0, 1), (3.0, 1)])) == [0.5, 1.0, 1.5, 2.0, 3.0]


def test_candidate_radii_single_point():
    assert candidate_radii([pt(0, 7.0, 1)]) == [0.0]


def test_candidate_radii_coincident_pair():
    assert candidate_radii(stream([(2.0, 1), (2.0, 2)])) == [0.0]


# ----------------------------------------------------------------------
# farthest-first baseline
# ----------------------------------------------------------------------
def test_gonzalez_farthest_first_from_first_point():
    pts = stream([(0.0, 1), (10.0, 1), (20.0, 1)])
    centers = gonzalez(pts, 2)
    assert sorted(p.coords[0] for p in centers) == [0.0, 20.0]


def test_gonzalez_stops_at_distinct_points():
    pts = stream([(0.0, 1), (0.0, 2), (5.0, 1)])
    centers = gonzalez(pts, 5)
    assert sorted(p.coords[0] for p in centers) == [0.0, 5.0]
    assert clustering_cost(pts, centers) == 0.0


def test_gonzalez_single_point():
    centers = gonzalez([pt(0, 1.0, 1)], 3)
    assert centers.ids() == (0,)


def test_gonzalez_within_twice_unconstrained_optimum(rng):
    import itertools

    def unconstrained_opt(points, k):
        return min(
            clustering_cost(points, combo)
            for size in range(1, min(k, len(points)) + 1)
            for combo in itertools.combinations(points, size)
        )

    for trial in range(15):
        points, spec = random_two_group_instance(rng, max_n=9)
        k = spec.k
        r_free = unconstrained_opt(points, k)
        cost = clustering_cost(points, gonzalez(points, k))
        assert cost <= 2.0 * r_free + 1e-9


# ----------------------------------------------------------------------
# planted datasets
# ----------------------------------------------------------------------
def test_planted_matches_oracle():
    spec = FairnessSpec((1, 1))
    planted = generate_planted(spec, 10, 1.0, seed=0)
    result = brute_force_opt(planted.points, spec)
    assert result.r_opt == pytest.approx(1.0, abs=1e-9)


def test_planted_geometry():
    spec = FairnessSpec((2, 3))
    planted = generate_planted(spec, 40, 2.0, separation=5.0, seed=21)
    anchors = list(planted.planted_centers)
    assert [sum(1 for a in anchors if a.group == g) for g in (1, 2)] == [2, 3]
    for i, a in enumerate(anchors):
        for b in anchors[i + 1 :]:
            assert distance(a, b) >= 5.0 * 2.0
    assert clustering_cost(planted.points, planted.planted_centers) == pytest.approx(2.0, abs=1e-9)
    assert check_fairness(planted.planted_centers, spec) == []


def test_planted_every_cluster_pins_its_radius():
    # each cluster carries two opposed boundary points, so no single center
    # inside the cluster can beat the planted radius
    spec = FairnessSpec((2, 2))
    planted = generate_planted(spec, 16, 1.0, seed=3, shuffle=False)
    anchors = list(planted.planted_centers)
    for j, anchor in enumerate(anchors):
        members = [p for p in planted.points if distance(p, anchor) <= 1.0 + 1e-9]
        best_single = min(max(distance(c, q) for q in members) for c in members)
        assert best_single >= 1.0 - 1e-9


def test_planted_n_equals_k_is_exactly_the_anchors():
    spec = FairnessSpec((1, 2))
    planted = generate_planted(spec, 3, 1.0, seed=5)
    assert len(planted.points) == 3
    assert sorted(planted.planted_centers.ids()) == sorted(p.id for p in planted.points)
    assert brute_force_opt(planted.points, spec).r_opt == 0.0


def test_planted_determinism():
    spec = FairnessSpec((2, 2))
    a = generate_planted(spec, 30, 1.5, seed=42)
    b = generate_planted(spec, 30, 1.5, seed=42)
    assert [(p.coords, p.group) for p in a.points] == [(p.coords, p.group) for p in b.points]
    c = generate_planted(spec, 30, 1.5, seed=43)
    assert [(p.coords, p.group) for p in a.points] != [(p.coords, p.group) for p in c.points]


def test_planted_validation():
    spec = FairnessSpec((2, 2))
    with pytest.raises(ValueError, match="below the number"):
        generate_planted(spec, 3, 1.0)
    with pytest.raises(ValueError, match="separation"):
        generate_planted(spec, 20, 1.0, separation=3.0)
    with pytest.raises(GenerationError):
        generate_planted(spec, 20, 1.0, max_attempts=2)
