"""Tests for scaling groups, deformations, dilatations, induced structures and approximate operations."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngdef.deformation import DomainWitness, DyadicScaling, PositiveReals, deformation_morphism_violation
from ngdef.errors import InvalidModelSpec, NotComposableInduced, NotInDomain
from ngdef.models import HeisenbergGroup, HomogeneousDeformation

from .conftest import offset_arrow

coordinate = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)
exponent = st.integers(min_value=1, max_value=20)


class TestScalingGroups:
    def test_positive_reals(self):
        gamma = PositiveReals()
        assert gamma.product(0.5, 0.25) == 0.125
        assert gamma.inverse(0.25) == 4.0
        assert gamma.power(0.5, -2) == 4.0
        with pytest.raises(ValueError):
            gamma.modulus(0.0)

    def test_dyadic_exponents(self):
        gamma = DyadicScaling(0.5)
        assert gamma.modulus(3) == 0.125
        assert gamma.from_modulus(0.25) == 2
        assert gamma.product(2, -5) == -3
        assert gamma.modulus(gamma.inverse(2)) == 4.0
        with pytest.raises(ValueError):
            gamma.from_modulus(0.3)
        with pytest.raises(ValueError):
            DyadicScaling(2.0)

    def test_domain_witness_constraints(self):
        assert DomainWitness() == DomainWitness(A=2.0, B=4.0, R=1.0, eps0=0.5)
        with pytest.raises(InvalidModelSpec):
            DomainWitness(A=4.0, B=2.0)
        with pytest.raises(InvalidModelSpec):
            DomainWitness(eps0=1.5)


class TestDeformationMaps:
    """Semigroup law, domains and dilatations."""

    def test_semigroup_and_unit(self, heisenberg):
        d, G = heisenberg.deformation, heisenberg.groupoid
        g = offset_arrow(heisenberg, [0.2, -0.1, 0.3], [0.4, 0.5, -0.2])
        assert G.same_arrow(d.deform(0.5, d.deform(0.25, g)), d.deform(0.125, g))
        assert G.same_arrow(d.deform(1.0, g), g)
        assert G.same_arrow(d.deform(0.5, G.identity(g.source)), G.identity(g.source))
        assert np.allclose(d.deform(0.5, g).payload, HeisenbergGroup().dilate(0.5, g.payload))

    def test_builtin_domains_are_global(self, euclidean_line, heisenberg):
        for bundle in (euclidean_line, heisenberg):
            assert bundle.deformation.domain_radius(1.0) == float("inf")
        far = offset_arrow(euclidean_line, [0.0], [5.0])
        assert euclidean_line.deformation.in_domain(1.0, far)
        assert euclidean_line.deformation.deform(1.0, far).target[0] == pytest.approx(5.0)
        assert euclidean_line.deformation.deform(0.5, far).target[0] == pytest.approx(2.5)

    def test_bounded_domain_is_a_norm_ball(self, euclidean_line):
        d = HomogeneousDeformation(euclidean_line.groupoid, domain_bound=4.0)
        inside = offset_arrow(euclidean_line, [0.0], [8.0])
        outside = offset_arrow(euclidean_line, [0.0], [10.0])
        assert d.in_domain(0.5, inside)
        assert d.domain_radius(0.5) == 8.0
        with pytest.raises(NotInDomain) as exc_info:
            d.deform(0.5, outside)
        assert exc_info.value.excess == pytest.approx(1.0)

    def test_dilatation_is_a_homothety(self, euclidean_plane):
        """``delta^h_eps g`` moves the target of ``g`` towards the target of ``h``."""
        d = euclidean_plane.deformation
        x = np.array([1.0, -1.0])
        g, h = offset_arrow(euclidean_plane, x, [1.0, 0.0]), offset_arrow(euclidean_plane, x, [0.0, 1.0])
        moved = d.dilatation(0.25, h, g)
        assert np.allclose(moved.source, x)
        assert np.allclose(moved.target, h.target + 0.25 * (g.target - h.target))

    def test_double_deformation_fixes_the_base_arrow(self, euclidean_line):
        d = euclidean_line.deformation
        double = d.double()
        D = double.groupoid
        g, h = offset_arrow(euclidean_line, [0.0], [1.0]), offset_arrow(euclidean_line, [0.0], [-1.0])
        moved = double.deform(0.5, D.pair(g, h))
        assert moved.source is h
        assert moved.target.target[0] == pytest.approx(0.0)
        assert D.norm(moved) == pytest.approx(0.5 * D.norm(D.pair(g, h)))


class TestInducedStructures:
    def test_induced_norm_and_composition(self, heisenberg):
        d, G = heisenberg.deformation, heisenberg.groupoid
        induced = d.induce(0.5)
        x = np.zeros(3)
        h = offset_arrow(heisenberg, x, [0.3, 0.1, 0.2])
        g = G.with_offset(induced.omega(h), [-0.2, 0.4, 0.1])
        # the Koranyi gauge is homogeneous, so the induced norm is the norm
        assert induced.norm(g) == pytest.approx(G.norm(g))
        gh = induced.compose(g, h)
        assert G.same_arrow(d.deform(0.5, gh), G.compose(d.deform(0.5, g), d.deform(0.5, h)))
        assert G.same_arrow(induced.compose(induced.inverse(h), h), G.identity(x))

    def test_pairs_composable_only_after_scaling(self, euclidean_line):
        """``(g, h)`` with ``omega(h) = alpha(g)`` is generally not composable in the induced groupoid."""
        induced = euclidean_line.deformation.induce(0.5)
        h = offset_arrow(euclidean_line, [0.0], [1.0])
        g = offset_arrow(euclidean_line, h.target, [1.0])
        assert not induced.composable(g, h)
        with pytest.raises(NotComposableInduced):
            induced.compose(g, h)

    def test_transported_deformation_is_the_deformation(self, heisenberg):
        d, G = heisenberg.deformation, heisenberg.groupoid
        induced = d.induce(0.25)
        g = offset_arrow(heisenberg, [1.0, 0.0, 0.0], [0.5, -0.5, 0.25])
        assert G.same_arrow(induced.transported_deform(0.5, g), induced.deform(0.5, g))


class TestApproximateOperations:
    """Closed forms of the approximate operations of the Euclidean homothety deformation."""

    @settings(max_examples=50, deadline=None)
    @given(st.tuples(coordinate, coordinate), st.tuples(coordinate, coordinate), st.tuples(coordinate, coordinate),
           exponent)
    def test_euclidean_closed_forms(self, base, u, v, k):
        from ngdef.models import build_model, default_model_registry

        bundle = build_model("euclidean(2)", default_model_registry())
        d = bundle.deformation
        eps = 0.5 ** k
        x, u, v = np.array(base), np.array(u), np.array(v)
        g, h = offset_arrow(bundle, x, u - x), offset_arrow(bundle, x, v - x)

        assert np.allclose(d.approx_diff(eps, h, g).target, x + (v - u) + eps * (u - x), atol=1e-12)
        assert np.allclose(d.approx_sum(eps, g, h).target, x + (u - x) + (1 - eps) * (v - x), atol=1e-12)
        assert np.allclose(d.approx_inv(eps, g).target, x - (1 - eps) * (u - x), atol=1e-12)

    def test_based_sum_at_a_base_arrow(self, euclidean_line):
        """``Sigma^u_eps(g, h) = g + h - u - eps (g - u)`` on targets."""
        d = euclidean_line.deformation
        x = np.array([0.5])
        u, g, h = (offset_arrow(euclidean_line, x, [w]) for w in (0.25, 1.0, -0.5))
        eps = 0.125
        expected = g.target + h.target - u.target - eps * (g.target - u.target)
        assert np.allclose(d.based_sum(eps, u, g, h).target, expected)
        assert np.allclose(d.based_diff(eps, u, g, d.based_sum(eps, u, g, h)).target, h.target)

    def test_heisenberg_sum_at_identity(self, heisenberg):
        """``Sigma^e_eps(u, v) = u (delta_eps u)^{-1} v`` exactly."""
        d, group = heisenberg.deformation, HeisenbergGroup()
        x = np.zeros(3)
        u, v = np.array([0.3, -0.2, 0.1]), np.array([-0.1, 0.4, 0.05])
        e = heisenberg.groupoid.identity(x)
        for eps in (0.5, 0.125):
            got = d.based_sum(eps, e, offset_arrow(heisenberg, x, u), offset_arrow(heisenberg, x, v))
            expected = group.multiply(group.multiply(u, group.inverse(group.dilate(eps, u))), v)
            assert np.allclose(got.target, expected, atol=1e-12)


class TestDeformationMorphisms:
    def test_projections_commute_with_scaling(self, euclidean_plane, sampler):
        d = euclidean_plane.deformation
        line = euclidean_plane.morphisms[0].codomain

        target = HomogeneousDeformation(line)
        arrows = list(sampler.arrows(euclidean_plane.groupoid))
        for projection in euclidean_plane.morphisms:
            violation, _ = deformation_morphism_violation(projection, d, target, arrows, (0.5, 0.25),
                                                          preserves_norm=False)
            assert violation <= 1e-12

    def test_translation_isomorphism_is_isometric(self, translation_line, sampler):
        morphism = translation_line.morphisms[0]
        target = HomogeneousDeformation(morphism.codomain)
        arrows = list(sampler.arrows(translation_line.groupoid))
        violation, _ = deformation_morphism_violation(morphism, translation_line.deformation, target, arrows,
                                                      (0.5, 0.25))
        assert violation <= 1e-12
