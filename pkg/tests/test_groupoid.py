"""Tests for the normed-groupoid core: composition, convergence, seminorms and morphisms."""

import numpy as np
import pytest

from ngdef.constructions import HomogeneousGroupoid
from ngdef.errors import FiberMismatch, NotAMorphism, NotComposable, NotSeparating
from ngdef.groupoid import (Arrow, ConvergenceMode, GroupoidMorphism, accept_residuals, describe,
                            identity_morphism, relative_gap, seminorms_from_morphisms)
from ngdef.models import BoundedSampler, EuclideanGroup


class TestComposition:
    """Composition, inverses and the difference function."""

    def test_finite_compose_and_identity(self, triangle):
        """Composing an arrow with its inverse gives the identity of its target."""
        G = triangle.groupoid
        ab, ba = G.arrow("ab"), G.arrow("ba")
        assert G.compose(ab, ba).payload == "aa"
        assert G.compose(ba, ab).payload == "bb"
        assert G.is_identity(G.compose(ab, ba))
        assert not G.is_identity(ab)

    def test_compose_requires_matching_endpoints(self, triangle):
        G = triangle.groupoid
        with pytest.raises(NotComposable):
            G.compose(G.arrow("ab"), G.arrow("ab"))

    def test_dif_requires_common_source(self, triangle):
        G = triangle.groupoid
        with pytest.raises(FiberMismatch):
            G.dif(G.arrow("ab"), G.arrow("ba"))

    def test_fiber_and_object_distances(self, triangle):
        """``d(g h^{-1})`` on the fiber over ``a`` and the infimum norm between objects."""
        G = triangle.groupoid
        assert G.fiber_distance(G.arrow("ba"), G.arrow("ca")) == 4.0
        assert G.object_distance("a", "b") == 3.0
        assert G.object_distance("a", "a") == 0.0

    def test_pair_groupoid_products(self, euclidean_plane):
        """``(x, y)(y, z) = (x, z)`` and ``(x, y)^{-1} = (y, x)``."""
        G = euclidean_plane.groupoid
        x, y, z = np.array([1.0, 2.0]), np.array([-0.5, 0.0]), np.array([0.25, 3.0])
        assert G.same_arrow(G.compose(G.pair(x, y), G.pair(y, z)), G.pair(x, z))
        assert G.same_arrow(G.inverse(G.pair(x, y)), G.pair(y, x))
        assert G.norm(G.pair(x, y)) == pytest.approx(np.linalg.norm(x - y))

    def test_relative_gap(self):
        assert relative_gap(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0
        assert relative_gap(np.array([100.0]), np.array([101.0])) == pytest.approx(1.0 / 101.0)
        assert relative_gap(np.zeros(2), np.zeros(3)) == float("inf")
        assert relative_gap("a", "a") == 0.0
        assert relative_gap("a", 1.0) == 1.0

    def test_describe_arrow(self):
        data = describe(Arrow(np.array([0.0]), np.array([1.5]), np.array([1.5])))
        assert data == {"source": [0.0], "target": [1.5], "payload": [1.5]}


class TestConvergence:
    """Right, left and simple convergence of arrow sequences."""

    def test_right_convergence_on_a_fiber(self, euclidean_line):
        G = euclidean_line.groupoid
        x = np.zeros(1)
        seq = [G.with_offset(x, [1.0 + 0.5 ** k]) for k in range(1, 25)]

        trace = G.converges_to(seq, G.with_offset(x, [1.0]), ConvergenceMode.RIGHT, tol=1e-6)
        assert trace.converged
        assert trace.final == pytest.approx(0.5 ** 24)
        assert trace.mode is ConvergenceMode.RIGHT

    def test_left_convergence_with_common_target(self, euclidean_line):
        G = euclidean_line.groupoid
        seq = [G.pair([1.0], [0.5 ** k]) for k in range(1, 25)]

        trace = G.converges_to(seq, G.pair([1.0], [0.0]), ConvergenceMode.LEFT, tol=1e-6)
        assert trace.converged
        assert trace.final == pytest.approx(0.5 ** 24)

    def test_simple_convergence_moves_sources(self, euclidean_line):
        """Arrows whose sources move converge simply but are not right-composable with the limit."""
        G = euclidean_line.groupoid
        a = G.pair([1.0], [0.0])
        seq = [G.pair([1.0 + 0.5 ** k], [0.5 ** k]) for k in range(1, 25)]

        trace = G.converges_to(seq, a, ConvergenceMode.SIMPLE, tol=1e-6)
        assert trace.converged
        assert trace.final == pytest.approx(2 * 0.5 ** 24)

        with pytest.raises(NotComposable):
            G.converges_to(seq, a, ConvergenceMode.RIGHT)

    def test_constant_sequence_away_from_limit(self, euclidean_line):
        G = euclidean_line.groupoid
        x = np.zeros(1)
        seq = [G.with_offset(x, [2.0])] * 8
        trace = G.converges_to(seq, G.with_offset(x, [1.0]))
        assert not trace
        assert trace.final == pytest.approx(1.0)

    def test_accept_residuals(self):
        assert accept_residuals([1e-3, 1e-5, 1e-8], 1e-6)
        assert not accept_residuals([1e-3, 1e-8, 1e-7], 1e-6)
        assert not accept_residuals([1e-3, 1e-4], 1e-6)
        assert not accept_residuals([], 1e-6)


class TestSeminormsAndMorphisms:
    """Seminorm families induced by morphisms into normed groupoids."""

    def test_projections_give_separating_family(self, euclidean_plane):
        G = euclidean_plane.groupoid
        pairs = list(BoundedSampler(seed=1, count=16).pairs(G))
        family = seminorms_from_morphisms(euclidean_plane.morphisms, pairs)

        assert len(family) == 2
        values = family.evaluate(G.with_offset([0.0, 0.0], [3.0, -4.0]))
        assert values == {"coordinate-0": pytest.approx(3.0), "coordinate-1": pytest.approx(4.0)}
        violation, _ = family.violation(G, pairs)
        assert violation <= 1e-9

    def test_single_projection_is_not_separating(self, euclidean_plane):
        G = euclidean_plane.groupoid
        origin = np.zeros(2)
        vertical = G.with_offset(origin, [0.0, 1.0])
        with pytest.raises(NotSeparating):
            seminorms_from_morphisms(euclidean_plane.morphisms[:1], [(vertical, G.identity(origin))])

    def test_broken_morphism_is_rejected(self, euclidean_plane):
        """A map that doubles offsets but not endpoints breaks the endpoint laws."""
        G = euclidean_plane.groupoid
        line = HomogeneousGroupoid(EuclideanGroup(1))
        doubling = GroupoidMorphism(
            "doubling", G, line,
            lambda x: np.asarray(x, dtype=float)[:1],
            lambda g: line.with_offset(g.source[:1], 2.0 * g.payload[:1]),
        )
        pairs = list(BoundedSampler(seed=2, count=8).pairs(G))
        with pytest.raises(NotAMorphism) as exc_info:
            seminorms_from_morphisms([doubling], pairs)
        assert exc_info.value.violation > 1e-9

    def test_identity_morphism(self, triangle):
        G = triangle.groupoid
        violation, _ = identity_morphism(G).violation(G.composable_pairs())
        assert violation == 0.0
