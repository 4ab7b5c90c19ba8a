"""Suites for groupoids, norms and the standard constructions."""

import logging
from itertools import product
from typing import Any, Iterator, List, Tuple

from ...constructions import (AlphaDoubleGroupoid, HomogeneousGroupoid, NormedActionGroupoid, TrivialGroupoid,
                              fiber_distances_from_norm, invariance_triples, norm_from_fiber_distances,
                              right_invariance_violation)
from ...errors import NgdefError, NotAMorphism, RightInvarianceViolated
from ...groupoid import ATOL, Arrow, ConvergenceMode, NormedGroupoid, identity_morphism, seminorms_from_morphisms
from ...models.base import ModelBundle
from ...models.sampling import BoundedSampler
from ..estimate import EpsSchedule
from ..reports import CheckReport, ViolationTracker
from .base import CheckSuite, SuiteKind

logger = logging.getLogger('ngdef')


def arrows_of(groupoid: NormedGroupoid, sampler: BoundedSampler) -> List[Arrow]:
    """Every arrow of a finite groupoid, otherwise sampled arrows."""
    if groupoid.is_finite:
        return groupoid.arrows()
    return list(sampler.arrows(groupoid))


def pairs_of(groupoid: NormedGroupoid, sampler: BoundedSampler) -> List[Tuple[Arrow, Arrow]]:
    """Every composable pair of a finite groupoid, otherwise sampled pairs."""
    if groupoid.is_finite:
        return list(groupoid.composable_pairs())
    return list(sampler.pairs(groupoid))


def triples_of(groupoid: NormedGroupoid, sampler: BoundedSampler) -> Iterator[Tuple[Arrow, Arrow, Arrow]]:
    """Every composable triple of a finite groupoid, otherwise sampled triples."""
    if groupoid.is_finite:
        return groupoid.composable_triples()
    return sampler.triples(groupoid)


def groupoid_law_gaps(G: NormedGroupoid, g: Arrow, h: Arrow, k: Arrow) -> dict:
    """Gaps of the groupoid laws on a composable triple ``(g, h, k)``."""
    gh = G.compose(g, h)
    e_src, e_dst = G.identity(G.alpha(g)), G.identity(G.omega(g))
    g_inv = G.inverse(g)
    return {
        "associativity": G.arrow_gap(G.compose(gh, k), G.compose(g, G.compose(h, k))),
        "product-source": G.object_gap(G.alpha(gh), G.alpha(h)),
        "product-target": G.object_gap(G.omega(gh), G.omega(g)),
        "right-identity": G.arrow_gap(G.compose(g, e_src), g),
        "left-identity": G.arrow_gap(G.compose(e_dst, g), g),
        "left-inverse": G.arrow_gap(G.compose(g_inv, g), e_src),
        "right-inverse": G.arrow_gap(G.compose(g, g_inv), e_dst),
        "inverse-endpoints": max(G.object_gap(G.alpha(g_inv), G.omega(g)), G.object_gap(G.omega(g_inv), G.alpha(g))),
    }


def record_gaps(tracker: ViolationTracker, gaps: dict, witness: Any) -> None:
    for law, value in gaps.items():
        tracker.add(value, {"law": law, "sample": witness})


class GroupoidAxiomsSuite(CheckSuite):
    """Associativity, identities and inverses; exhaustive on finite groupoids."""

    @property
    def name(self) -> str:
        return "groupoid-axioms"

    @property
    def description(self) -> str:
        return "associativity, identity and inverse laws"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.require_groupoid()
        tracker = ViolationTracker()
        for g, h, k in triples_of(G, sampler):
            record_gaps(tracker, groupoid_law_gaps(G, g, h, k), (g, h, k))
        return self.report(tracker, bundle, sampler, tol)


class NormAxiomsSuite(CheckSuite):
    """Zero on identities, subadditivity, inverse invariance and separation."""

    @property
    def name(self) -> str:
        return "norm-axioms"

    @property
    def description(self) -> str:
        return "norm vanishes exactly on identities, is subadditive and inverse invariant"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.require_groupoid()
        tracker = ViolationTracker()
        for g, h in pairs_of(G, sampler):
            dg, dh, dgh = G.norm(g), G.norm(h), G.norm(G.compose(g, h))
            witness = (g, h)
            tracker.add(max(0.0, -dg), {"law": "nonnegative", "sample": g})
            tracker.add(abs(G.norm(G.identity(G.alpha(g)))), {"law": "identity", "sample": g})
            tracker.add(max(0.0, dgh - dg - dh) / (1.0 + dg + dh), {"law": "subadditive", "sample": witness})
            tracker.add(abs(G.norm(G.inverse(g)) - dg) / (1.0 + dg), {"law": "inverse", "sample": g})
            if dg <= ATOL and not G.is_identity(g):
                tracker.add(float("inf"), {"law": "separation", "sample": g})
        return self.report(tracker, bundle, sampler, tol)


class LimitUniquenessSuite(CheckSuite):
    """
    A right-convergent sequence cannot approach two distant arrows.

    With ``r_k = delta_{eps_k}(r) a`` and a second candidate ``b = s a``,
    ``d(a b^{-1})`` is at most the sum of the two final residuals; when both
    candidates are accepted they lie within ``2 tol`` of each other.
    """

    kind = SuiteKind.LIMIT

    @property
    def name(self) -> str:
        return "limit-uniqueness"

    @property
    def description(self) -> str:
        return "right limits of deformed sequences are unique"

    def applies_to(self, bundle: ModelBundle) -> bool:
        return bundle.groupoid is not None and bundle.deformation is not None

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, deformation = bundle.groupoid, bundle.deformation
        scales = schedule.scales(deformation.gamma)
        rng = sampler.rng()
        tracker = ViolationTracker()
        for a in sampler.arrows(G):
            r = G.sample_fiber(rng, G.omega(a), sampler.radius)
            candidates = [a, G.compose(G.sample_fiber(rng, G.omega(a), 0.5 * tol * float(rng.uniform())), a),
                          G.compose(G.sample_fiber(rng, G.omega(a), sampler.radius), a)]
            try:
                sequence = [G.compose(deformation.deform(eps, r), a) for eps in scales]
            except NgdefError as e:
                tracker.add(float("inf"), {"sample": (a, r), "error": str(e)})
                continue
            traces = [G.converges_to(sequence, b, ConvergenceMode.RIGHT, tol) for b in candidates]
            for (b, tb), (c, tc) in product(zip(candidates, traces), repeat=2):
                gap = G.norm(G.compose(b, G.inverse(c)))
                tracker.add(max(0.0, gap - tb.final - tc.final) / (1.0 + gap), {"law": "triangle", "sample": (b, c)})
                if tb.converged and tc.converged:
                    tracker.add(max(0.0, gap - 2.0 * tol), {"law": "uniqueness", "sample": (b, c)})
        return self.report(tracker, bundle, sampler, tol, schedule)


class SeminormFamilySuite(CheckSuite):
    """Seminorms ``d o A`` from the model's morphisms, plus the identity morphism."""

    @property
    def name(self) -> str:
        return "seminorm-family"

    @property
    def description(self) -> str:
        return "morphisms to normed groupoids give a separating seminorm family"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.require_groupoid()
        morphisms = [identity_morphism(G), *bundle.morphisms]
        pairs = pairs_of(G, sampler)
        tracker = ViolationTracker()
        try:
            family = seminorms_from_morphisms(morphisms, pairs, tol)
        except NotAMorphism as e:
            tracker.add(e.violation, {"morphism": e.name, "sample": e.witness})
            return self.report(tracker, bundle, sampler, tol)
        violation, witness = family.violation(G, pairs)
        tracker.add(violation, witness)
        report = self.report(tracker, bundle, sampler, tol)
        report.samples = len(pairs)
        report.details["members"] = list(family)
        return report


class AlphaDoubleSuite(CheckSuite):
    """The alpha-double groupoid is a normed groupoid and ``dif`` a norm-preserving morphism onto the base."""

    @property
    def name(self) -> str:
        return "alpha-double"

    @property
    def description(self) -> str:
        return "alpha-double groupoid laws and the dif morphism"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.require_groupoid()
        double = AlphaDoubleGroupoid(G)
        tracker = ViolationTracker()
        trivial = isinstance(G, (TrivialGroupoid, HomogeneousGroupoid))
        pairs = []
        for p, q, r in triples_of(double, sampler):
            record_gaps(tracker, groupoid_law_gaps(double, p, q, r), (p, q, r))
            pairs.append((p, q))
            for arrow in (p, q):
                base = G.dif(arrow.target, arrow.source)
                tracker.add(abs(double.norm(arrow) - G.norm(base)) / (1.0 + G.norm(base)),
                            {"law": "dif-preserves-norm", "sample": arrow})
                if trivial:
                    # the double of a trivial groupoid is normed by the distance of the two targets
                    plain = G.object_distance(arrow.source.target, arrow.target.target)
                    tracker.add(abs(double.norm(arrow) - plain) / (1.0 + plain),
                                {"law": "pair-distance", "sample": arrow})
        violation, witness = double.dif_morphism().violation(pairs)
        tracker.add(violation, {"law": "dif-morphism", "sample": witness})
        return self.report(tracker, bundle, sampler, tol)


class RightInvarianceSuite(CheckSuite):
    """Fiber distances of a norm are right invariant, and the norm they induce is the original one."""

    @property
    def name(self) -> str:
        return "right-invariance"

    @property
    def description(self) -> str:
        return "right invariance of fiber distances and the norm round trip"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.require_groupoid()
        family = fiber_distances_from_norm(G)
        triples = invariance_triples(G, sampler.count, sampler.seed, sampler.radius)
        tracker = ViolationTracker()
        violation, witness = right_invariance_violation(G, family, triples)
        tracker.add(violation, {"law": "right-invariance", "sample": witness})
        try:
            renormed = norm_from_fiber_distances(G, family, sampler.count, sampler.seed, tol)
        except RightInvarianceViolated as e:
            tracker.add(e.violation, {"law": "round-trip", "sample": (e.g, e.h, e.u)})
            return self.report(tracker, bundle, sampler, tol)
        for g in arrows_of(G, sampler):
            d = G.norm(g)
            tracker.add(abs(renormed.norm(g) - d) / (1.0 + d), {"law": "round-trip", "sample": g})
        return self.report(tracker, bundle, sampler, tol)


class ActionGroupoidSuite(CheckSuite):
    """Action laws and the norm properties of a free action groupoid."""

    @property
    def name(self) -> str:
        return "action-groupoid"

    @property
    def description(self) -> str:
        return "action laws, action-groupoid norm properties and fiber distances"

    def applies_to(self, bundle: ModelBundle) -> bool:
        return isinstance(bundle.groupoid, NormedActionGroupoid)

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G = bundle.groupoid
        rng = sampler.rng()
        tracker = ViolationTracker()
        violation, witness = G.action.violation(rng, sampler.count, sampler.radius)
        tracker.add(violation, {"law": "action", "sample": witness})
        for g, h in sampler.pairs(G):
            # h = (x, h) and g = (h(x), g)
            x, dh = G.alpha(h), G.norm(h)
            tracker.add(abs(G.norm(G.identity(x))), {"law": "identity-norm", "sample": x})
            if dh <= ATOL and not G.is_identity(h):
                tracker.add(float("inf"), {"law": "free", "sample": h})
            tracker.add(abs(G.norm(G.inverse(h)) - dh) / (1.0 + dh), {"law": "inverse-norm", "sample": h})
            total = G.norm(G.compose(g, h))
            tracker.add(max(0.0, total - dh - G.norm(g)) / (1.0 + total), {"law": "subadditive", "sample": (g, h)})
            other = G.sample_fiber(rng, x, sampler.radius)
            generic, formula = G.fiber_distance(h, other), G.action_fiber_distance(h, other)
            tracker.add(abs(generic - formula) / (1.0 + generic), {"law": "fiber-distance", "sample": (h, other)})
        return self.report(tracker, bundle, sampler, tol)
