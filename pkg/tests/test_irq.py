"""Tests for idempotent right quasigroups: finite tables, iterates and dilatation Gamma-irqs."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngdef.errors import InvalidModelSpec, ZeroIndex
from ngdef.irq import Direction, FiniteIrq, from_dilatation, identity_gaps, worst_gap
from ngdef.models import build_model, default_model_registry

from .conftest import offset_arrow

coordinate = st.floats(min_value=-0.2, max_value=0.2, allow_nan=False)
point = st.tuples(coordinate, coordinate, coordinate)


class TestFiniteIrq:
    """The affine irq of Z/5 bundled as a fixture."""

    def test_fixture_operations(self, z5_irq):
        assert z5_irq.is_finite
        for x in range(5):
            for y in range(5):
                assert z5_irq.circ(x, y) == (2 * y - x) % 5
                assert z5_irq.bullet(x, y) == (3 * y - 2 * x) % 5

    def test_axioms_hold_everywhere(self, z5_irq):
        for x in z5_irq.elements():
            for y in z5_irq.elements():
                assert all(gap == 0.0 for gap in z5_irq.axiom_gaps(x, y).values())
                assert worst_gap(identity_gaps(z5_irq, x, y, (x + y) % 5, (2 * y) % 5))[1] == 0.0

    def test_iterates(self, z5_irq):
        """``x circ_k y = x + 2^k (y - x)``; negative indices switch to bullet."""
        assert z5_irq.iterate(2, Direction.CIRC, 0, 1) == 4
        assert z5_irq.iterate(3, "circ", 0, 1) == 3
        assert z5_irq.iterate(-1, Direction.CIRC, 0, 1) == z5_irq.bullet(0, 1)
        square = z5_irq.iterated(2)
        assert square.circ(1, 2) == (1 + 4 * 1) % 5
        assert square.bullet(1, square.circ(1, 2)) == 2

    def test_zero_index_is_rejected(self, z5_irq):
        with pytest.raises(ZeroIndex):
            z5_irq.iterate(0, Direction.CIRC, 0, 1)
        with pytest.raises(ZeroIndex):
            z5_irq.iterated(0)

    def test_tables_must_satisfy_cancellation(self):
        """Malformed or non-cancelling tables are rejected."""
        with pytest.raises(InvalidModelSpec):
            FiniteIrq([0, 1], [[0, 0], [0, 0]], [[0, 0], [0, 0]])
        with pytest.raises(InvalidModelSpec):
            FiniteIrq([0, 1], [[0, 1]], [[0, 1], [0, 1]])
        with pytest.raises(InvalidModelSpec):
            FiniteIrq([0, 1], [[0, 2], [0, 1]], [[0, 1], [0, 1]])

    def test_load_document(self, tmp_path):
        """The left projection ``x circ y = y`` is an irq on any carrier."""
        path = tmp_path / "projection.json"
        path.write_text(json.dumps({"carrier": ["a", "b"], "circ": [["a", "b"], ["a", "b"]],
                                    "bullet": [["a", "b"], ["a", "b"]]}))
        irq = FiniteIrq.load(path)
        assert irq.name == "projection"
        assert irq.circ("a", "b") == "b"

        (tmp_path / "broken.json").write_text("{")
        with pytest.raises(InvalidModelSpec):
            FiniteIrq.load(tmp_path / "broken.json")


class TestDilatationIrq:
    """Gamma-irqs of dilatations on a fiber."""

    def test_euclidean_midpoint(self, euclidean_line):
        irq = euclidean_line.fiber_irq()
        g, h = offset_arrow(euclidean_line, [0.0], [0.0]), offset_arrow(euclidean_line, [0.0], [2.0])
        assert irq.at(0.5).circ(g, h).target[0] == pytest.approx(1.0)
        assert irq.bullet_at(0.5, g, irq.circ_at(0.5, g, h)).target[0] == pytest.approx(2.0)
        assert irq.base().target[0] == 0.0

    def test_gamma_law_and_distributivity(self, heisenberg, rng):
        irq = heisenberg.fiber_irq()
        for _ in range(20):
            x, u, v = (irq.sample(rng, radius=0.5) for _ in range(3))
            eps, mu = irq.gamma.sample(rng), irq.gamma.sample(rng)
            assert irq.gamma_law_gap(eps, mu, x, u) <= 1e-9
            assert irq.distributivity_gap(eps, mu, x, u, v) <= 1e-9

    @settings(max_examples=40, deadline=None)
    @given(point, point, point, point, st.sampled_from([0.5, 0.25, 0.75]))
    def test_heisenberg_fiber_identities(self, x, u, v, w, eps):
        bundle = build_model("heisenberg", default_model_registry())
        irq = bundle.fiber_irq().at(eps)
        base = np.zeros(3)
        arrows = [offset_arrow(bundle, base, p) for p in (x, u, v, w)]
        name, gap = worst_gap(identity_gaps(irq, *arrows))
        assert gap <= 1e-9, name
        assert max(irq.axiom_gaps(arrows[0], arrows[1]).values()) <= 1e-9

    def test_unavailable_fiber(self, euclidean_line):
        with pytest.raises(InvalidModelSpec):
            from_dilatation(euclidean_line.deformation, np.zeros(2))
