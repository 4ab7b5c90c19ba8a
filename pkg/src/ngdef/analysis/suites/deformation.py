"""Suites for deformations, their domains and the structures they induce."""

import logging
from typing import Any, List

from ...constructions import HomogeneousGroupoid
from ...deformation import Deformation, deformation_morphism_violation
from ...errors import NgdefError
from ...groupoid import Arrow, ConvergenceMode
from ...models.base import ModelBundle
from ...models.lift import HomogeneousDeformation
from ...models.sampling import BoundedSampler
from ..estimate import EpsSchedule, check_uniform_convergence
from ..reports import CheckReport, ViolationTracker
from .base import CheckSuite, SuiteKind

logger = logging.getLogger('ngdef')

# Norm radius of arrows fed to the approximate operations.
APPROX_RADIUS = 0.5

# Norm radius of arrows transported to an induced scale.
INDUCED_RADIUS = 1.0

# Smallest |eps| drawn for the codomain condition on differences.
SMALL_SCALE = 0.0625


class DeformationSuite(CheckSuite):
    """Base for suites that need a deformation."""

    def applies_to(self, bundle: ModelBundle) -> bool:
        return bundle.groupoid is not None and bundle.deformation is not None


def _guard(tracker: ViolationTracker, law: str, witness: Any, thunk) -> None:
    """Record ``thunk()``, or an infinite violation when it raises."""
    try:
        tracker.add(thunk(), {"law": law, "sample": witness})
    except (NgdefError, ValueError, ArithmeticError) as e:
        tracker.add(float("inf"), {"law": law, "sample": witness, "error": str(e)})


class DeformationActionSuite(DeformationSuite):
    """``alpha delta_eps = alpha``, ``delta_eps delta_mu = delta_{eps mu}``, ``delta_e = id`` and fixed identities."""

    @property
    def name(self) -> str:
        return "deformation-action"

    @property
    def description(self) -> str:
        return "deformation preserves sources, is a group action and fixes identities"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        gamma = d.gamma
        rng = sampler.rng()
        tracker = ViolationTracker()
        for g in sampler.arrows(G):
            eps, mu = gamma.sample(rng), gamma.sample(rng)
            witness = {"arrow": g, "eps": gamma.modulus(eps), "mu": gamma.modulus(mu)}
            e = G.identity(G.alpha(g))
            _guard(tracker, "source", witness, lambda: G.object_gap(G.alpha(d.deform(eps, g)), G.alpha(g)))
            _guard(tracker, "semigroup", witness, lambda: G.arrow_gap(d.deform(eps, d.deform(mu, g)),
                                                                       d.deform(gamma.product(eps, mu), g)))
            _guard(tracker, "neutral", witness, lambda: G.arrow_gap(d.deform(gamma.neutral, g), g))
            _guard(tracker, "inverse-scale", witness,
                   lambda: G.arrow_gap(d.deform(gamma.inverse(eps), d.deform(eps, g)), g))
            _guard(tracker, "fixes-identities", witness, lambda: G.arrow_gap(d.deform(eps, e), e))
        return self.report(tracker, bundle, sampler, tol)


class DeformationContractionSuite(DeformationSuite):
    """``d(delta_eps g) -> 0`` uniformly on the sampled ball as ``|eps| -> 0``."""

    kind = SuiteKind.LIMIT

    @property
    def name(self) -> str:
        return "deformation-contraction"

    @property
    def description(self) -> str:
        return "deformation contracts bounded sets of arrows to the objects"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        arrows = list(sampler.arrows(G))
        tracker = ViolationTracker()
        try:
            trace = check_uniform_convergence(d.deform, lambda g: G.identity(G.alpha(g)), arrows,
                                              schedule.scales(d.gamma), G, tol, ConvergenceMode.RIGHT)
        except (NgdefError, ValueError) as e:
            tracker.add(float("inf"), {"error": str(e)})
            report = self.report(tracker, bundle, sampler, tol, schedule)
            report.samples = len(arrows)
            return report
        # a trace that ends below tol but still grows is rejected outright
        violation = trace.final if trace.converged or trace.final > tol else float("inf")
        tracker.add(violation, {"final": trace.final, "residuals": trace.residuals[-4:]})
        report = self.report(tracker, bundle, sampler, tol, schedule)
        report.samples = len(arrows)
        report.details["residuals"] = trace.residuals
        return report


class DeformationDomainsSuite(DeformationSuite):
    """
    The ball chain of the domain axiom and the codomain condition on differences.

    Sublevel sets ``{d <= r}`` stand for the preimages ``d^{-1}(r)``. For
    ``|eps| <= 1`` the chain reads
    ``{d <= |eps|} < delta_eps{d <= A} < dom(eps^{-1}) < delta_eps{d <= B} < delta_eps dom(eps)``
    and each inclusion is checked on arrows sampled from its left side.
    Where ``dom(eps)`` is larger than ``{d <= B / |eps|}``, as for globally
    defined deformations, the ball stands in for it, so the witness constants
    are checked even when no domain bounds the maps. Objects are drawn from the
    ball of radius ``R``.
    """

    @property
    def name(self) -> str:
        return "deformation-domains"

    @property
    def description(self) -> str:
        return "domain chain and difference codomains with the model's witness constants"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        gamma = d.gamma
        witness = d.domain_witness()
        A, B = witness.A, witness.B
        rng = sampler.rng()
        tracker = ViolationTracker()

        def above(value: float, bound: float) -> float:
            return max(0.0, value - bound) / (1.0 + bound)

        def outside(eps: Any, g: Arrow) -> float:
            if not d.in_domain(eps, g):
                return max(0.0, d.domain_excess(eps, g)) / (1.0 + B)
            return above(G.norm(g), B / gamma.modulus(eps))

        for x in sampler.with_radius(min(sampler.radius, witness.R)).objects(G):
            eps = gamma.sample(rng)
            scale, eps_inv = gamma.modulus(eps), gamma.inverse(eps)
            sample = {"object": x, "eps": scale}

            g = G.sample_fiber(rng, x, sampler.radius)
            _guard(tracker, "objects-in-domain", sample, lambda: outside(eps, G.identity(x)))
            _guard(tracker, "symmetric-domain", sample,
                   lambda: float(d.in_domain(eps, g) != d.in_domain(eps, G.inverse(g))))

            small = G.sample_fiber(rng, x, scale)
            _guard(tracker, "small-ball", {**sample, "arrow": small},
                   lambda: above(G.norm(d.deform(eps_inv, small)), A))

            inner = G.sample_fiber(rng, x, A)
            _guard(tracker, "image-in-codomain", {**sample, "arrow": inner},
                   lambda: outside(eps_inv, d.deform(eps, inner)))

            codomain = G.sample_fiber(rng, x, min(d.domain_radius(eps_inv), B * scale))
            _guard(tracker, "codomain-in-image", {**sample, "arrow": codomain},
                   lambda: above(G.norm(d.deform(eps_inv, codomain)), B))

            outer = G.sample_fiber(rng, x, B)
            _guard(tracker, "ball-in-domain", {**sample, "arrow": outer}, lambda: outside(eps, outer))

            small_eps = gamma.sample(rng, SMALL_SCALE, witness.eps0)
            a, b = G.sample_fiber(rng, x, witness.R), G.sample_fiber(rng, x, witness.R)
            _guard(tracker, "difference-codomain", {"object": x, "eps": gamma.modulus(small_eps), "pair": (a, b)},
                   lambda: outside(gamma.inverse(small_eps), G.dif(d.deform(small_eps, a), d.deform(small_eps, b))))
        report = self.report(tracker, bundle, sampler, tol)
        report.details["witness"] = {"A": A, "B": B, "R": witness.R, "eps0": witness.eps0}
        return report


class DoubleDeformationSuite(DeformationSuite):
    """The deformation of the alpha-double groupoid and ``dif`` as a morphism of deformations."""

    @property
    def name(self) -> str:
        return "double-deformation"

    @property
    def description(self) -> str:
        return "lifted deformation of the alpha-double groupoid commutes with dif"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        d = bundle.deformation
        double = d.double()
        D = double.groupoid
        gamma = d.gamma
        rng = sampler.rng()
        tracker = ViolationTracker()
        arrows: List[Arrow] = []
        scales = set()
        for p in sampler.arrows(D):
            arrows.append(p)
            eps, mu = gamma.sample(rng), gamma.sample(rng)
            scales.add(eps)
            witness = {"pair": p, "eps": gamma.modulus(eps), "mu": gamma.modulus(mu)}
            _guard(tracker, "pair-formula", witness,
                   lambda: D.arrow_gap(double.deform(eps, p), D.pair(*d.tilde_deform(eps, p.target, p.source))))
            _guard(tracker, "semigroup", witness, lambda: D.arrow_gap(double.deform(eps, double.deform(mu, p)),
                                                                       double.deform(gamma.product(eps, mu), p)))
            _guard(tracker, "fixes-diagonal", witness,
                   lambda: D.arrow_gap(double.deform(eps, D.identity(p.source)), D.identity(p.source)))
        try:
            violation, witness = deformation_morphism_violation(D.dif_morphism(), double, d, arrows,
                                                                sorted(scales)[:4])
            tracker.add(violation, {"law": "dif-morphism", "sample": witness})
        except (NgdefError, ValueError) as e:
            tracker.add(float("inf"), {"law": "dif-morphism", "error": str(e)})
        return self.report(tracker, bundle, sampler, tol)


class DeformationMorphismsSuite(DeformationSuite):
    """
    The model's morphisms onto trivial groupoids of homogeneous groups commute with the dilations there.

    Morphisms flagged as isometries must also preserve norms.
    """

    @property
    def name(self) -> str:
        return "deformation-morphisms"

    @property
    def description(self) -> str:
        return "model morphisms commute with deformations"

    def applies_to(self, bundle: ModelBundle) -> bool:
        return super().applies_to(bundle) and any(
            isinstance(m.codomain, HomogeneousGroupoid) for m in bundle.morphisms)

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        rng = sampler.rng()
        arrows = list(sampler.arrows(G))
        scales = [d.gamma.sample(rng) for _ in range(4)]
        pairs = list(sampler.with_count(min(sampler.count, 64)).pairs(G))
        tracker = ViolationTracker()
        for morphism in bundle.morphisms:
            if not isinstance(morphism.codomain, HomogeneousGroupoid):
                continue
            target: Deformation = HomogeneousDeformation(morphism.codomain, gamma=d.gamma)
            violation, witness = morphism.violation(pairs)
            tracker.add(violation, {"morphism": morphism.name, "law": "groupoid-morphism", "sample": witness})
            try:
                violation, witness = deformation_morphism_violation(morphism, d, target, arrows, scales,
                                                                    preserves_norm=morphism.isometry)
            except (NgdefError, ValueError) as e:
                violation, witness = float("inf"), str(e)
            tracker.add(violation, {"morphism": morphism.name, "law": "commutes", "sample": witness})
        report = self.report(tracker, bundle, sampler, tol)
        report.samples = len(arrows)
        report.details["morphisms"] = [m.name for m in bundle.morphisms]
        return report


class InducedStructuresSuite(DeformationSuite):
    """
    The induced structures at a scale ``mu`` fit together.

    ``dif_mu`` is the difference of ``m_mu``, ``d~_mu = d_mu o dif_mu``, the
    transported deformation is ``delta`` itself and ``dif_mu`` commutes with
    the induced double deformation.
    """

    @property
    def name(self) -> str:
        return "induced-structures"

    @property
    def description(self) -> str:
        return "induced operations, norms and deformations at a scale"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        gamma = d.gamma
        rng = sampler.rng()
        tracker = ViolationTracker()
        for g, h in sampler.with_radius(min(sampler.radius, INDUCED_RADIUS)).fiber_tuples(G, 2):
            mu, eps = gamma.sample(rng), gamma.sample(rng)
            induced = d.induce(mu)
            witness = {"pair": (g, h), "mu": gamma.modulus(mu), "eps": gamma.modulus(eps)}
            dif = induced.dif(g, h)
            _guard(tracker, "difference-of-product", witness,
                   lambda: G.arrow_gap(induced.compose(g, induced.inverse(h)), dif))
            _guard(tracker, "fiber-distance", witness, lambda: abs(induced.tilde_norm(g, h) - induced.norm(dif))
                   / (1.0 + induced.norm(dif)))
            _guard(tracker, "transported-deformation", witness,
                   lambda: G.arrow_gap(induced.transported_deform(eps, g), induced.deform(eps, g)))
            _guard(tracker, "double-deformation", witness,
                   lambda: G.arrow_gap(induced.dif(*induced.tilde_deform(eps, g, h)), d.deform(eps, dif)))
        return self.report(tracker, bundle, sampler, tol)


class ApproximateOperationsSuite(DeformationSuite):
    """Based and unbased approximate operations agree, and the identity is neutral."""

    @property
    def name(self) -> str:
        return "approximate-operations"

    @property
    def description(self) -> str:
        return "based and unbased approximate sum and difference agree"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        gamma = d.gamma
        rng = sampler.rng()
        tracker = ViolationTracker()
        for u, g, h in sampler.with_radius(min(sampler.radius, APPROX_RADIUS)).fiber_tuples(G, 3):
            eps = gamma.sample(rng)
            witness = {"base": u, "args": (g, h), "eps": gamma.modulus(eps)}
            u_inv = G.inverse(u)
            shift = lambda a: G.compose(a, u_inv)  # noqa: E731
            e = G.identity(G.alpha(g))
            _guard(tracker, "shifted-difference", witness,
                   lambda: G.arrow_gap(d.approx_diff(eps, shift(h), shift(g)), shift(d.based_diff(eps, u, g, h))))
            _guard(tracker, "shifted-sum", witness,
                   lambda: G.arrow_gap(d.approx_sum(eps, shift(h), shift(g)), shift(d.based_sum(eps, u, g, h))))
            _guard(tracker, "sum-neutral", witness, lambda: G.arrow_gap(d.approx_sum(eps, g, e), g))
            _guard(tracker, "difference-neutral", witness, lambda: G.arrow_gap(d.approx_diff(eps, g, e), g))
            _guard(tracker, "inverse-as-difference", witness,
                   lambda: G.arrow_gap(d.approx_inv(eps, g), d.approx_diff(eps, e, g)))
            _guard(tracker, "based-inverse", witness,
                   lambda: G.arrow_gap(d.based_inv(eps, u, g), d.based_diff(eps, u, g, u)))
        return self.report(tracker, bundle, sampler, tol)
