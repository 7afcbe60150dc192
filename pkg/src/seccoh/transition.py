"""Transition cocycles with possibly non-abelian coefficients.

Degree-0 and degree-1 cocycle sets are pointed sets under the constant
identity cochain.  Equivalence of degree-1 cocycles is witnessed by a
degree-0 cochain mu with (d1 mu) phi1 = phi2 (d0 mu).  For a central
extension the connecting maps land in abelian cohomology and give the
Dixmier-Douady lifting obstruction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cochains import (Cochain, cochain_from_list, compose, constant_cochain,
                       invert, twisted_pullback)
from .cohomology import CohomologyClass, cohomology, solve_coboundary_equation
from .groups import CentralExtensionData, FiniteGammaGroup
from .simplicial import Scenario
from .validation import BudgetExceededError, ValidationError

DEFAULT_SEARCH_BUDGET = 2 ** 20


def _plan(scenario: Scenario, degree_bound: int = 2) -> dict:
    """Precomputed position tables for fast cocycle checks on value lists."""
    cache = scenario._caches.setdefault("tc_plan", {})
    if cache:
        return cache
    pos0 = scenario.key_positions(0)
    pos1 = scenario.key_positions(1)
    e = scenario.gamma.identity
    norm = [n for (index, gammas), n in pos1.items()
            if index[0] == index[1] and gammas == (e,)]
    deg1 = []
    for (index, gammas), n in pos1.items():
        left = pos0[((index[0],), ())]
        right = pos0[((index[1],), ())]
        deg1.append((n, left, right, gammas[0]))
    deg2 = []
    for index, gammas in scenario.keys(2):
        d0 = pos1[((index[1], index[2]), gammas[1:])]
        d1 = pos1[((index[0], index[2]), (scenario.gamma.mul(gammas[0], gammas[1]),))]
        d2 = pos1[((index[0], index[1]), gammas[:1])]
        deg2.append((d0, d1, d2, gammas[0], (index, gammas)))
    cache.update(norm=tuple(norm), deg1=tuple(deg1), deg2=tuple(deg2))
    return cache


def tc0_violations(mu: Cochain) -> list[str]:
    """Failures of the degree-0 condition (d1 mu)^-1 (d0 mu) = 1."""
    if mu.degree != 0:
        raise ValidationError("tc0 check needs a degree-0 cochain")
    plan = _plan(mu.scenario)
    perms = mu.coeff.action.perms
    vl = mu.value_list()
    keys1 = mu.scenario.keys(1)
    out = []
    for n, left, right, γ in plan["deg1"]:
        if vl[left] != perms[γ][vl[right]]:
            out.append(f"degree-0 condition fails at cell {keys1[n]}")
    return out


def is_tc0(mu: Cochain) -> bool:
    return not tc0_violations(mu)


def tc1_violations(phi: Cochain) -> list[str]:
    """Failures of normalization or of the degree-1 cocycle condition
    (d1 phi)^-1 (d2 phi) (d0 phi) = 1, citing the offending cells."""
    if phi.degree != 1:
        raise ValidationError("tc1 check needs a degree-1 cochain")
    plan = _plan(phi.scenario)
    group = phi.coeff.group
    mul, inv, e = group.table, group.inverse, group.identity
    perms = phi.coeff.action.perms
    vl = phi.value_list()
    keys1 = phi.scenario.keys(1)
    out = []
    for n in plan["norm"]:
        if vl[n] != e:
            out.append(f"normalization fails at cell {keys1[n]}")
    for d0, d1, d2, γ1, key in plan["deg2"]:
        if mul[inv[vl[d1]]][mul[vl[d2]][perms[γ1][vl[d0]]]] != e:
            out.append(f"cocycle condition fails at cell {key}")
    return out


def is_tc1(phi: Cochain) -> bool:
    return not tc1_violations(phi)


@dataclass(frozen=True, eq=False)
class TransitionCocycle:
    """A validated degree-1 transition cocycle."""

    cochain: Cochain

    def __post_init__(self):
        bad = tc1_violations(self.cochain)
        if bad:
            raise ValidationError("not a transition cocycle: " + "; ".join(bad[:3]))

    def __eq__(self, other) -> bool:
        return isinstance(other, TransitionCocycle) and self.cochain == other.cochain

    @property
    def scenario(self) -> Scenario:
        return self.cochain.scenario

    @property
    def coeff(self) -> FiniteGammaGroup:
        return self.cochain.coeff


def identity_cocycle(scenario: Scenario, coeff: FiniteGammaGroup) -> TransitionCocycle:
    return TransitionCocycle(constant_cochain(scenario, coeff, 1))


def coboundary_cocycle(mu: Cochain) -> TransitionCocycle:
    """The principal cocycle (d1 mu)^-1 (d0 mu) of an arbitrary degree-0
    cochain; always satisfies the cocycle condition."""
    if mu.degree != 0:
        raise ValidationError("needs a degree-0 cochain")
    nu = compose(invert(twisted_pullback(1, mu)), twisted_pullback(0, mu))
    return TransitionCocycle(nu)


@dataclass(frozen=True, eq=False)
class CocycleEquivalence:
    """A degree-0 witness mu with (d1 mu) phi1 = phi2 (d0 mu)."""

    mu: Cochain
    left: Cochain
    right: Cochain

    def __post_init__(self):
        if not equivalence_holds(self.mu, self.left, self.right):
            raise ValidationError("witness does not satisfy the equivalence condition")


def equivalence_holds(mu: Cochain, phi1: Cochain, phi2: Cochain) -> bool:
    plan = _plan(phi1.scenario)
    group = phi1.coeff.group
    mul = group.table
    perms = phi1.coeff.action.perms
    m, v1, v2 = mu.value_list(), phi1.value_list(), phi2.value_list()
    return all(mul[m[left]][v1[n]] == mul[v2[n]][perms[γ][m[right]]]
               for n, left, right, γ in plan["deg1"])


def apply_equivalence(mu: Cochain, phi: Cochain) -> Cochain:
    """The cocycle (d1 mu) phi (d0 mu)^-1 equivalent to phi via mu."""
    plan = _plan(phi.scenario)
    group = phi.coeff.group
    mul, inv = group.table, group.inverse
    perms = phi.coeff.action.perms
    m, v = mu.value_list(), phi.value_list()
    out = list(v)
    for n, left, right, γ in plan["deg1"]:
        out[n] = mul[m[left]][mul[v[n]][inv[perms[γ][m[right]]]]]
    return cochain_from_list(phi.scenario, phi.coeff, 1, out)


def find_equivalence(phi1: TransitionCocycle, phi2: TransitionCocycle,
                     budget: int | None = None,
                     method: str = "auto") -> CocycleEquivalence | None:
    """Search for an equivalence witness between two transition cocycles.

    ``method='search'`` enumerates all degree-0 cochains in lexicographic
    order (up to ``budget`` candidates; exceeding it raises, distinct from
    a proven None).  ``method='abelian'`` decides instantly through the
    degree-1 class reduction and produces a witness by solving the linear
    system.  ``'auto'`` picks the abelian route when available.
    """
    a, b = phi1.cochain, phi2.cochain
    if a.scenario is not b.scenario or a.coeff != b.coeff:
        raise ValidationError("cocycles are not comparable")
    if method == "auto":
        method = "abelian" if a.coeff.is_abelian else "search"
    if method == "abelian":
        if not a.coeff.is_abelian:
            raise ValidationError("abelian method needs abelian coefficients")
        diff = compose(a, invert(b))  # want diff = d mu
        mu = solve_coboundary(a.scenario, a.coeff, diff)
        if mu is None:
            return None
        return CocycleEquivalence(mu, a, b)
    if method != "search":
        raise ValidationError(f"unknown method {method!r}")
    budget = DEFAULT_SEARCH_BUDGET if budget is None else budget
    scenario = a.scenario
    n = a.coeff.group.order
    width = len(scenario.keys(0))
    tried = 0
    for values in itertools.product(range(n), repeat=width):
        tried += 1
        if tried > budget:
            raise BudgetExceededError(
                f"equivalence search exhausted its budget of {budget} candidates")
        mu = cochain_from_list(scenario, a.coeff, 0, values)
        if equivalence_holds(mu, a, b):
            return CocycleEquivalence(mu, a, b)
    return None


def solve_coboundary(scenario: Scenario, coeff: FiniteGammaGroup,
                     target: Cochain) -> Cochain | None:
    """A degree-0 cochain mu with d(mu) = target, or None (abelian only)."""
    return solve_coboundary_equation(scenario, coeff, 0, target)


# -- connecting maps and the lifting obstruction ---------------------------


def section_lift(phi: Cochain, ext: CentralExtensionData) -> Cochain:
    """Pointwise lift through the extension's set-section."""
    if phi.coeff != ext.C:
        raise ValidationError("cochain coefficients are not the extension's C")
    return Cochain(phi.scenario, ext.B, phi.degree,
                   {k: ext.section[v] for k, v in phi.values.items()})


def _pull_through_alpha(nu: Cochain, ext: CentralExtensionData) -> Cochain:
    e_c = ext.C.group.identity
    if any(ext.beta.image[v] != e_c for v in nu.values.values()):
        raise ValidationError("internal error: defect does not land in ker(beta)")
    return Cochain(nu.scenario, ext.A, nu.degree,
                   {k: ext.alpha_preimage[v] for k, v in nu.values.items()})


def delta0(mu: Cochain, ext: CentralExtensionData) -> CohomologyClass:
    """Connecting map on degree-0 cocycles: lift through the section, form
    (d1 eta)^-1 (d0 eta), pull back through alpha, reduce in H^1(A)."""
    bad = tc0_violations(mu)
    if bad:
        raise ValidationError("not a degree-0 cocycle: " + "; ".join(bad[:3]))
    eta = section_lift(mu, ext)
    nu = compose(invert(twisted_pullback(1, eta)), twisted_pullback(0, eta))
    pulled = _pull_through_alpha(nu, ext)
    if not is_tc1(pulled):
        raise ValidationError("internal error: connecting defect is not a cocycle")
    H = cohomology(mu.scenario, 1, ext.A)
    return CohomologyClass(H, H.reduce(pulled))


def lift_defect(phi: TransitionCocycle, ext: CentralExtensionData):
    """The section lift psi of phi and its A-valued degree-2 defect
    (d1 psi)^-1 (d2 psi) (d0 psi)."""
    psi = section_lift(phi.cochain, ext)
    t0 = twisted_pullback(0, psi)
    t1 = twisted_pullback(1, psi)
    t2 = twisted_pullback(2, psi)
    nu = compose(invert(t1), compose(t2, t0))
    pulled = _pull_through_alpha(nu, ext)
    _assert_two_cocycle(pulled)
    return psi, pulled


def _assert_two_cocycle(nu: Cochain):
    # the displayed order (d0 nu)(d1 nu)^-1 (d2 nu)(d3 nu)^-1 = 1; the values
    # are central so this equals every other arrangement
    check = compose(compose(twisted_pullback(0, nu), invert(twisted_pullback(1, nu))),
                    compose(twisted_pullback(2, nu), invert(twisted_pullback(3, nu))))
    if not check.is_identity():
        raise ValidationError("internal error: lifting defect is not a 2-cocycle")


def delta1(phi: TransitionCocycle | Cochain,
           ext: CentralExtensionData) -> CohomologyClass:
    """Connecting map on transition cocycles: the class of the section
    lift's defect in H^2(A).  Independent of the section, the lift, and
    the representative."""
    if isinstance(phi, Cochain):
        phi = TransitionCocycle(phi)
    _, pulled = lift_defect(phi, ext)
    H = cohomology(phi.scenario, 2, ext.A)
    return CohomologyClass(H, H.reduce(pulled))


def dd(arg, ext: CentralExtensionData) -> CohomologyClass:
    """The Dixmier-Douady lifting obstruction of a transition cocycle or of
    a combinatorial bundle (whose cocycle is extracted first)."""
    from .bundles import CombinatorialBundle, canonical_sections, cocycle_from_sections
    if isinstance(arg, CombinatorialBundle):
        arg = cocycle_from_sections(arg, canonical_sections(arg))
    return delta1(arg, ext)


# -- exhaustive enumeration (oracle-grade, deliberately simple) ------------


def tc0_elements(scenario: Scenario, coeff: FiniteGammaGroup,
                 bound: int = DEFAULT_SEARCH_BUDGET) -> list[Cochain]:
    """All degree-0 cocycles, by exhaustive enumeration."""
    width = len(scenario.keys(0))
    n = coeff.group.order
    if n ** width > bound:
        raise BudgetExceededError(f"enumeration of {n}^{width} cochains exceeds {bound}")
    out = []
    for values in itertools.product(range(n), repeat=width):
        mu = cochain_from_list(scenario, coeff, 0, values)
        if is_tc0(mu):
            out.append(mu)
    return out


def tc1_orbits(scenario: Scenario, coeff: FiniteGammaGroup,
               bound: int = DEFAULT_SEARCH_BUDGET) -> list[list[Cochain]]:
    """All degree-1 cocycles grouped into equivalence classes, by exhaustive
    enumeration and the full degree-0 transformation action.  Deliberately
    independent of the cohomology pipeline; each class is sorted and classes
    are ordered by their least member."""
    plan = _plan(scenario)
    n = coeff.group.order
    w1 = len(scenario.keys(1))
    w0 = len(scenario.keys(0))
    if n ** w1 > bound or n ** w0 > bound:
        raise BudgetExceededError("enumeration bound exceeded")
    group = coeff.group
    mul, inv, e = group.table, group.inverse, group.identity
    perms = coeff.action.perms
    deg2 = plan["deg2"]
    norm = plan["norm"]
    cocycles = []
    for values in itertools.product(range(n), repeat=w1):
        if any(values[k] != e for k in norm):
            continue
        if all(mul[inv[values[d1]]][mul[values[d2]][perms[γ1][values[d0]]]] == e
               for d0, d1, d2, γ1, _ in deg2):
            cocycles.append(values)
    cocycle_set = set(cocycles)
    mus = list(itertools.product(range(n), repeat=w0))
    deg1 = plan["deg1"]
    seen = set()
    classes = []
    for start in cocycles:
        if start in seen:
            continue
        orbit = set()
        for m in mus:
            out = list(start)
            for k, left, right, γ in deg1:
                out[k] = mul[m[left]][mul[start[k]][inv[perms[γ][m[right]]]]]
            t = tuple(out)
            if t in cocycle_set:
                orbit.add(t)
        seen |= orbit
        classes.append(sorted(orbit))
    classes.sort(key=lambda c: c[0])
    return [[cochain_from_list(scenario, coeff, 1, v) for v in cls]
            for cls in classes]


@dataclass(frozen=True)
class TCCompareReport:
    """Exhaustive pointed-set counts against the abelian pipeline."""

    tc0_count: int
    h0_size: int
    tc1_class_count: int
    h1_size: int
    class_coordinates: tuple[tuple[int, ...], ...]

    @property
    def ok(self) -> bool:
        return (self.tc0_count == self.h0_size
                and self.tc1_class_count == self.h1_size
                and len(set(self.class_coordinates)) == len(self.class_coordinates))


def tc1_h1_compare(scenario: Scenario, coeff: FiniteGammaGroup | None = None,
                   bound: int = DEFAULT_SEARCH_BUDGET) -> TCCompareReport:
    """Compare exhaustive cocycle/equivalence enumeration with the computed
    H^0/H^1 (abelian coefficients): counts must agree and distinct classes
    must reduce to distinct coordinates."""
    coeff = coeff or scenario.coeff
    if not coeff.is_abelian:
        raise ValidationError("comparison needs abelian coefficients")
    tc0 = tc0_elements(scenario, coeff, bound)
    classes = tc1_orbits(scenario, coeff, bound)
    H0 = cohomology(scenario, 0, coeff)
    H1 = cohomology(scenario, 1, coeff)
    coords = tuple(H1.reduce(cls[0]) for cls in classes)
    return TCCompareReport(len(tc0), H0.size, len(classes), H1.size, coords)
