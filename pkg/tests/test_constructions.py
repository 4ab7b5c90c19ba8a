"""Tests for trivial, homogeneous, alpha-double and action groupoids and fiber-distance families."""

import numpy as np
import pytest

from ngdef.constructions import (FiberDistanceFamily, GroupActionModel, MetricSpaceModel, action_groupoid,
                                 alpha_double, fiber_distances_from_norm, norm_from_fiber_distances,
                                 right_invariance_violation, invariance_triples, trivial_groupoid,
                                 validate_metric_space)
from ngdef.errors import FiberMismatch, InvalidModelSpec, NotFree, RightInvarianceViolated
from ngdef.models import BoundedSampler, HeisenbergGroup, euclidean_space, translation_action


def squared_line() -> MetricSpaceModel:
    """The real line with the squared distance, which breaks the triangle inequality."""
    return MetricSpaceModel("squared-line", lambda x, y: (x - y) ** 2,
                            sampler=lambda rng, center, radius: float(rng.uniform(-radius, radius)))


def first_coordinate_line() -> MetricSpaceModel:
    """Points of the plane compared by their first coordinate only."""
    points = [np.array([0.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 0.0])]
    return MetricSpaceModel("first-coordinate", lambda x, y: abs(float(x[0] - y[0])), points=points)


class TestTrivialGroupoids:
    def test_pair_groupoid_over_metric_space(self):
        G = trivial_groupoid(euclidean_space(1))
        g = G.pair(np.array([3.0]), np.array([1.0]))
        assert G.alpha(g)[0] == 1.0 and G.omega(g)[0] == 3.0
        assert G.norm(g) == pytest.approx(2.0)
        assert G.norm(G.identity(np.array([1.0]))) == 0.0
        assert G.object_distance(np.array([1.0]), np.array([3.0])) == pytest.approx(2.0)

    def test_heisenberg_offsets(self, heisenberg):
        """Offsets are ``y^{-1} x`` and the distance is left invariant."""
        G, group = heisenberg.groupoid, HeisenbergGroup()
        x, y = np.array([1.0, 0.0, 0.5]), np.array([0.0, 2.0, -1.0])
        g = G.pair(x, y)
        assert np.allclose(g.payload, group.multiply(group.inverse(y), x))
        assert np.allclose(G.with_offset(y, g.payload).target, x)

        shift = np.array([0.3, -0.7, 2.0])
        moved = G.pair(group.multiply(shift, x), group.multiply(shift, y))
        assert G.norm(moved) == pytest.approx(G.norm(g))

    def test_coerce_rejects_wrong_dimension(self):
        with pytest.raises(ValueError):
            HeisenbergGroup().coerce([1.0, 2.0])

    def test_metric_space_validation(self, rng):
        validate_metric_space(euclidean_space(2), rng)
        with pytest.raises(InvalidModelSpec):
            validate_metric_space(squared_line(), rng)

    def test_distinct_points_at_distance_zero(self, rng):
        validate_metric_space(MetricSpaceModel("three", lambda x, y: float(x != y), points=["a", "b", "c"]), rng)
        with pytest.raises(InvalidModelSpec, match="not a metric space"):
            validate_metric_space(first_coordinate_line(), rng)
        space = MetricSpaceModel("collapsed", lambda x, y: 0.0,
                                 sampler=lambda rng, center, radius: rng.uniform(-radius, radius, size=2))
        worst, witness = space.violation(rng, count=4)
        assert worst == 1.0
        assert not np.array_equal(witness[0], witness[1])


class TestAlphaDouble:
    """Same-source pairs normed by the fiber distance."""

    def test_pairs_need_a_common_source(self, euclidean_line):
        D = alpha_double(euclidean_line.groupoid)
        G = euclidean_line.groupoid
        with pytest.raises(FiberMismatch):
            D.pair(G.with_offset([0.0], [1.0]), G.with_offset([1.0], [1.0]))

    def test_norm_is_fiber_distance(self, euclidean_line):
        G = euclidean_line.groupoid
        D = alpha_double(G)
        g, h = G.with_offset([0.0], [2.5]), G.with_offset([0.0], [-1.0])
        p = D.pair(g, h)
        assert D.norm(p) == pytest.approx(3.5)
        assert D.norm(D.identity(g)) == 0.0
        assert D.same_arrow(D.compose(D.pair(g, h), D.pair(h, g)), D.identity(g))

    def test_dif_is_an_isometric_morphism(self, heisenberg):
        G = heisenberg.groupoid
        D = alpha_double(G)
        dif = D.dif_morphism()
        pairs = list(BoundedSampler(seed=3, count=16).pairs(D))
        violation, _ = dif.violation(pairs)
        assert dif.isometry
        assert violation <= 1e-9
        for p, _ in pairs:
            assert G.norm(dif(p)) == pytest.approx(D.norm(p))


class TestActionGroupoids:
    def test_translation_arrows(self, translation_line):
        G = translation_line.groupoid
        p = G.arrow(np.array([1.0]), np.array([2.0]))
        assert p.target[0] == 3.0
        assert G.norm(p) == pytest.approx(2.0)
        q = G.arrow(p.target, np.array([-0.5]))
        assert G.compose(q, p).payload[0] == pytest.approx(1.5)
        assert G.arrow_between(np.array([0.25]), np.array([1.0])).payload[0] == pytest.approx(-0.75)

    def test_action_fiber_distance(self, translation_line):
        G = translation_line.groupoid
        x = np.array([0.5])
        p, q = G.arrow(x, np.array([2.0])), G.arrow(x, np.array([-1.0]))
        assert G.action_fiber_distance(p, q) == pytest.approx(3.0)
        with pytest.raises(FiberMismatch):
            G.action_fiber_distance(p, G.arrow(np.array([0.0]), np.array([1.0])))

    def test_non_free_action_has_no_norm(self):
        """The rotation group of the plane fixes the origin."""
        def rotate(t, x):
            c, s = np.cos(t), np.sin(t)
            return np.array([c * x[0] - s * x[1], s * x[0] + c * x[1]])

        action = GroupActionModel(
            name="rotations", multiply=lambda a, b: a + b, inverse=lambda a: -a, neutral=0.0, act=rotate,
            distance=lambda x, y: float(np.linalg.norm(x - y)), free=False,
            sample_element=lambda rng, radius: float(rng.uniform(-radius, radius)),
            sample_point=lambda rng, center, radius: rng.uniform(-radius, radius, size=2),
        )
        with pytest.raises(NotFree):
            action_groupoid(action)

    def test_translation_action_laws(self, rng):
        violation, _ = translation_action(2).violation(rng)
        assert violation <= 1e-12


class TestFiberDistanceFamilies:
    """Right-invariant fiber distances and the norms they define."""

    def test_round_trip_through_fiber_distances(self, euclidean_plane):
        G = euclidean_plane.groupoid
        normed = norm_from_fiber_distances(G, fiber_distances_from_norm(G), samples=64)
        for g in BoundedSampler(seed=4, count=16).arrows(G):
            assert normed.norm(g) == pytest.approx(G.norm(g))

    def test_finite_groupoid_is_checked_exhaustively(self, triangle):
        G = triangle.groupoid
        triples = list(invariance_triples(G))
        assert len(triples) == 81
        violation, _ = right_invariance_violation(G, fiber_distances_from_norm(G), iter(triples))
        assert violation == 0.0

    def test_object_weighted_family_is_not_invariant(self, euclidean_line):
        G = euclidean_line.groupoid
        family = FiberDistanceFamily(lambda x, g, h: (1.0 + abs(x[0])) * abs(g.target[0] - h.target[0]),
                                     name="weighted")
        with pytest.raises(RightInvarianceViolated) as exc_info:
            norm_from_fiber_distances(G, family, samples=64)
        error = exc_info.value
        assert error.violation > 1e-9
        assert G.composable(error.g, error.u)
