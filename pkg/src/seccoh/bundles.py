"""Combinatorial semi-equivariant principal bundles.

The total space of a reconstructed bundle is materialized explicitly:
triples (patch, point, group element) glued by union-find along the
degree-1 cocycle values, with the right action and the gamma-action
stored as tables.  Every bundle axiom is then an exhaustive assertion.

Lifting classification solves the A-linear defect equation; its oracle
enumerates every pointwise lift and filters by the cocycle test.  Two
liftings of the same cocycle count as equivalent when a witness exists
whose beta-image is trivial (the witnesses that commute with the maps
down to the base bundle); the classes then form a torsor under H^1(A).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cochains import (Cochain, cochain_from_list, compose, constant_cochain,
                       map_coefficients)
from .cohomology import CohomologyClass, cohomology, solve_coboundary_equation
from .groups import CentralExtensionData, FiniteGammaGroup
from .simplicial import Scenario, SimplexPoint
from .transition import (DEFAULT_SEARCH_BUDGET, TransitionCocycle, _plan,
                         equivalence_holds, find_equivalence, is_tc1, lift_defect,
                         tc1_violations)
from .validation import AuditReport, BudgetExceededError, ValidationError


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int):
        i, j = self.find(i), self.find(j)
        if i == j:
            return
        if self.size[i] < self.size[j]:
            i, j = j, i
        self.parent[j] = i
        self.size[i] += self.size[j]


@dataclass(eq=False)
class CombinatorialBundle:
    """An explicit principal bundle with a compatible gamma-action.

    ``triples`` lists (patch, point, group element); ``triple_class`` maps
    each to its gluing class.  ``right[c][g]`` and ``left[γ][c]`` are the
    two action tables on classes; ``proj`` is the projection to points.
    """

    scenario: Scenario
    coeff: FiniteGammaGroup
    triples: tuple[tuple[int, int, int], ...]
    triple_class: dict
    classes: tuple[tuple[tuple[int, int, int], ...], ...]
    proj: tuple[int, ...]
    right: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]

    @property
    def total_size(self) -> int:
        return len(self.classes)

    def fiber(self, x: int) -> tuple[int, ...]:
        return tuple(c for c in range(len(self.classes)) if self.proj[c] == x)


def bundle_from_cocycle(phi: TransitionCocycle) -> CombinatorialBundle:
    """Reconstruct the bundle: triples (a,x,g) glued by
    (a,x,g) ~ (b,x,phi_ba(1)·g), right action on g, gamma-action through
    the cocycle.  The patch used for the gamma-action is the least
    admissible one; well-definedness over every admissible patch is
    audited here rather than assumed."""
    scenario = phi.scenario
    group = phi.coeff.group
    values = phi.cochain.values
    mul = group.table
    e = scenario.gamma.identity
    nG = group.order
    sets = scenario.cover.sets
    triples = tuple((a, x, g)
                    for a in range(scenario.cover.size)
                    for x in sorted(sets[a])
                    for g in range(nG))
    index_of = {t: n for n, t in enumerate(triples)}
    uf = UnionFind(len(triples))
    for x in range(scenario.space.size):
        patches = [a for a in range(scenario.cover.size) if x in sets[a]]
        for a in patches:
            for b in patches:
                if a == b:
                    continue
                glue = values[((b, a), (e,))]
                for g in range(nG):
                    uf.union(index_of[(a, x, g)],
                             index_of[(b, x, mul[glue][g])])
    roots = sorted({uf.find(n) for n in range(len(triples))})
    class_index = {root: c for c, root in enumerate(roots)}
    triple_class = {t: class_index[uf.find(n)] for n, t in enumerate(triples)}
    members: list[list] = [[] for _ in roots]
    for t in triples:
        members[triple_class[t]].append(t)
    classes = tuple(tuple(sorted(m)) for m in members)
    proj = []
    for m in classes:
        xs = {x for _, x, _ in m}
        if len(xs) != 1:
            raise ValidationError("internal error: gluing mixed distinct base points")
        proj.append(xs.pop())
    right = []
    for c, m in enumerate(classes):
        a, x, g = m[0]
        row = tuple(triple_class[(a, x, mul[g][gp])] for gp in range(nG))
        for a2, x2, g2 in m[1:]:
            if row != tuple(triple_class[(a2, x2, mul[g2][gp])] for gp in range(nG)):
                raise ValidationError("internal error: right action not well-defined")
        right.append(row)
    theta = phi.coeff.action.perms
    sigma = scenario.space.perms
    left = []
    for γ in scenario.gamma.elements():
        row = []
        for c, m in enumerate(classes):
            targets = set()
            for a, x, g in m:
                gx = sigma[γ][x]
                for b in range(scenario.cover.size):
                    if gx in sets[b]:
                        t = (b, gx, mul[values[((b, a), (γ,))]][theta[γ][g]])
                        targets.add(triple_class[t])
            if len(targets) != 1:
                raise ValidationError(
                    f"gamma-action not well-defined on class {c} (gamma {γ})")
            row.append(targets.pop())
        left.append(tuple(row))
    return CombinatorialBundle(scenario, phi.coeff, triples, triple_class,
                               classes, tuple(proj), tuple(right), tuple(left))


def bundle_violations(P: CombinatorialBundle) -> AuditReport:
    """Exhaustive bundle axioms: projection equivariance, semi-equivariance,
    action laws, and free transitive fibers of the right action."""
    violations = []
    checked = 0
    gamma = P.scenario.gamma
    group = P.coeff.group
    sigma = P.scenario.space.perms
    theta = P.coeff.action.perms
    nC = P.total_size
    for γ in gamma.elements():
        for c in range(nC):
            checked += 1
            if P.proj[P.left[γ][c]] != sigma[γ][P.proj[c]]:
                violations.append(f"projection not equivariant at (γ={γ}, class {c})")
            for g in group.elements():
                checked += 1
                if P.left[γ][P.right[c][g]] != P.right[P.left[γ][c]][theta[γ][g]]:
                    violations.append(
                        f"semi-equivariance fails at (γ={γ}, class {c}, g={g})")
    ident = tuple(range(nC))
    if P.left[gamma.identity] != ident:
        violations.append("identity of gamma does not act trivially")
    for γ1 in gamma.elements():
        for γ2 in gamma.elements():
            checked += 1
            composed = tuple(P.left[γ1][P.left[γ2][c]] for c in range(nC))
            if composed != P.left[gamma.mul(γ1, γ2)]:
                violations.append(f"gamma-action not a homomorphism at ({γ1},{γ2})")
    for c in range(nC):
        checked += 1
        if P.right[c][group.identity] != c:
            violations.append(f"right action: identity moves class {c}")
        for g in group.elements():
            for h in group.elements():
                checked += 1
                if P.right[P.right[c][g]][h] != P.right[c][group.mul(g, h)]:
                    violations.append(f"right action not an action at class {c}")
                    break
    for x in range(P.scenario.space.size):
        fiber = P.fiber(x)
        checked += 1
        if len(fiber) != group.order:
            violations.append(f"fiber over {x} has {len(fiber)} classes, "
                              f"expected {group.order}")
            continue
        orbit = {P.right[fiber[0]][g] for g in group.elements()}
        if orbit != set(fiber):
            violations.append(f"right action not transitive on fiber over {x}")
        stab = [g for g in group.elements() if P.right[fiber[0]][g] == fiber[0]]
        if stab != [group.identity]:
            violations.append(f"right action not free on fiber over {x}")
    return AuditReport(checked, tuple(violations))


@dataclass(frozen=True)
class SectionFamily:
    """Per cover set, a choice of class over every point of the set."""

    maps: tuple[dict, ...]  # one {x: class} per cover set

    def at(self, a: int, x: int) -> int:
        return self.maps[a][x]


def section_violations(P: CombinatorialBundle, s: SectionFamily) -> AuditReport:
    violations = []
    checked = 0
    for a, m in enumerate(s.maps):
        expect = P.scenario.cover.sets[a]
        if set(m) != expect:
            violations.append(f"section over set {a} has wrong domain")
            continue
        for x, c in m.items():
            checked += 1
            if P.proj[c] != x:
                violations.append(f"section over set {a} is not a section at {x}")
    return AuditReport(checked, tuple(violations))


def canonical_sections(P: CombinatorialBundle) -> SectionFamily:
    """The sections x -> [a, x, identity]."""
    e = P.coeff.group.identity
    return SectionFamily(tuple(
        {x: P.triple_class[(a, x, e)] for x in sorted(P.scenario.cover.sets[a])}
        for a in range(P.scenario.cover.size)))


def perturbed_sections(P: CombinatorialBundle, s: SectionFamily,
                       mu: Cochain) -> SectionFamily:
    """Move each section value by the right action of a degree-0 cochain."""
    if mu.degree != 0:
        raise ValidationError("section perturbation needs a degree-0 cochain")
    return SectionFamily(tuple(
        {x: P.right[c][mu.values[((a,), ())]] for x, c in m.items()}
        for a, m in enumerate(s.maps)))


def cocycle_from_sections(P: CombinatorialBundle,
                          s: SectionFamily) -> TransitionCocycle:
    """Extract the transition cocycle: phi_ba(γ) is the unique g with
    γ·s_a(x) = s_b(γx)·g, checked constant over the whole cell (a family
    of sections that is not coherent cell-by-cell is rejected)."""
    section_violations(P, s).raise_if_failed("sections")
    scenario = P.scenario
    group = P.coeff.group
    rinv = [{P.right[c][g]: g for g in group.elements()}
            for c in range(P.total_size)]
    sigma = scenario.space.perms
    values = {}
    for (index, gammas), xs in scenario.slice_points(1).items():
        b, a = index
        γ = gammas[0]
        got = set()
        for x in xs:
            moved = P.left[γ][s.at(a, x)]
            base = s.at(b, sigma[γ][x])
            g = rinv[base].get(moved)
            if g is None:
                raise ValidationError(
                    f"section failure: moved section leaves the fiber at {(b, a, γ, x)}")
            got.add(g)
        if len(got) != 1:
            raise ValidationError(
                f"section failure: transition value not constant on cell {(index, gammas)}")
        values[(index, gammas)] = got.pop()
    phi = Cochain(scenario, P.coeff, 1, values)
    bad = tc1_violations(phi)
    if bad:
        raise ValidationError("extracted values violate the cocycle law: "
                              + "; ".join(bad[:3]))
    return TransitionCocycle(phi)


@dataclass(frozen=True)
class BundleIsomorphism:
    """An explicit class map P1 -> P2 together with its witness cochain."""

    mapping: tuple[int, ...]
    witness: Cochain | None = None


def iso_violations(P1: CombinatorialBundle, P2: CombinatorialBundle,
                   mapping: tuple[int, ...]) -> AuditReport:
    """Exhaustive isomorphism axioms: bijective, over the base, and
    equivariant for both actions."""
    violations = []
    checked = 0
    if sorted(mapping) != list(range(P2.total_size)):
        violations.append("mapping is not a bijection")
        return AuditReport(1, tuple(violations))
    for c in range(P1.total_size):
        checked += 1
        if P2.proj[mapping[c]] != P1.proj[c]:
            violations.append(f"mapping does not cover the identity at class {c}")
        for g in P1.coeff.group.elements():
            checked += 1
            if mapping[P1.right[c][g]] != P2.right[mapping[c]][g]:
                violations.append(f"mapping not G-equivariant at ({c},{g})")
                break
        for γ in P1.scenario.gamma.elements():
            checked += 1
            if mapping[P1.left[γ][c]] != P2.left[γ][mapping[c]]:
                violations.append(f"mapping not gamma-equivariant at ({γ},{c})")
                break
    return AuditReport(checked, tuple(violations))


def trivialization_map(P: CombinatorialBundle, s: SectionFamily,
                       target: CombinatorialBundle) -> tuple[int, ...]:
    """The map P -> target sending p over x to [a, x, T_a(p)], where a is
    the least patch containing x and T_a reads the fiber coordinate off
    the section.  ``target`` must be the bundle of the extracted cocycle."""
    group = P.coeff.group
    rinv = [{P.right[c][g]: g for g in group.elements()}
            for c in range(P.total_size)]
    sets = P.scenario.cover.sets
    mapping = []
    for c in range(P.total_size):
        x = P.proj[c]
        a = next(a for a in range(P.scenario.cover.size) if x in sets[a])
        g = rinv[s.at(a, x)][c]
        mapping.append(target.triple_class[(a, x, g)])
    return tuple(mapping)


def bundle_iso_check(P1: CombinatorialBundle, P2: CombinatorialBundle,
                     budget: int | None = None) -> BundleIsomorphism | None:
    """Decide isomorphism by comparing extracted cocycles; a witness
    equivalence is turned into an explicit verified class map."""
    if P1.scenario is not P2.scenario or P1.coeff != P2.coeff:
        raise ValidationError("bundles are not comparable")
    s1, s2 = canonical_sections(P1), canonical_sections(P2)
    phi1 = cocycle_from_sections(P1, s1)
    phi2 = cocycle_from_sections(P2, s2)
    equiv = find_equivalence(phi1, phi2, budget=budget)
    if equiv is None:
        return None
    mu = equiv.mu
    Q1 = bundle_from_cocycle(phi1)
    t1 = trivialization_map(P1, s1, Q1)
    # [a,x,g] -> [a,x,mu_a·g] lands in the bundle of phi2
    Q2 = bundle_from_cocycle(phi2)
    mul = P1.coeff.group.table
    mid = {}
    for t, c in Q1.triple_class.items():
        a, x, g = t
        mid[c] = Q2.triple_class[(a, x, mul[mu.values[((a,), ())]][g])]
    t2 = trivialization_map(P2, s2, Q2)
    t2inv = [0] * P2.total_size
    for c, q in enumerate(t2):
        t2inv[q] = c
    mapping = tuple(t2inv[mid[t1[c]]] for c in range(P1.total_size))
    iso_violations(P1, P2, mapping).raise_if_failed("constructed isomorphism")
    return BundleIsomorphism(mapping, mu)


def roundtrip_check(arg, sections: SectionFamily | None = None) -> AuditReport:
    """Round-trip either way: a cocycle must be recovered exactly from the
    canonical sections of its bundle; a bundle must be isomorphic to the
    bundle of its extracted cocycle, by an explicitly verified map."""
    if isinstance(arg, TransitionCocycle):
        P = bundle_from_cocycle(arg)
        back = cocycle_from_sections(P, canonical_sections(P))
        checked = len(arg.cochain.values) + 1
        if back.cochain != arg.cochain:
            return AuditReport(checked, ("canonical sections do not recover the cocycle",))
        return AuditReport(checked)
    P = arg
    s = sections if sections is not None else canonical_sections(P)
    phi = cocycle_from_sections(P, s)
    Q = bundle_from_cocycle(phi)
    mapping = trivialization_map(P, s, Q)
    return iso_violations(P, Q, mapping)


# -- lifting classification -------------------------------------------------


@dataclass(frozen=True)
class LiftingClassification:
    """Existence and classes of liftings of a transition cocycle through a
    central extension.  When nonempty, the classes form a torsor under
    H^1 with A-coefficients."""

    dd_class: CohomologyClass
    exists: bool
    representatives: tuple[TransitionCocycle, ...]
    class_count: int
    h1_size: int


def _lifting_orbit(values: tuple[int, ...], scenario: Scenario,
                   ext: CentralExtensionData):
    """All transforms of a lifting under witnesses with trivial beta-image
    (mu = alpha(m)); these move a lifting within its equivalence class
    without moving the underlying base cocycle."""
    deg1 = _plan(scenario)["deg1"]
    width = len(scenario.keys(0))
    alpha = ext.alpha.image
    group = ext.B.group
    mul, inv = group.table, group.inverse
    perms = ext.B.action.perms
    for m_values in itertools.product(range(ext.A.group.order), repeat=width):
        m = [alpha[v] for v in m_values]
        out = list(values)
        for k, left, right, γ in deg1:
            out[k] = mul[m[left]][mul[values[k]][inv[perms[γ][m[right]]]]]
        yield tuple(out)


def lifting_equivalent(psi1: TransitionCocycle, psi2: TransitionCocycle,
                       ext: CentralExtensionData) -> bool:
    """Equivalence of liftings: a witness with trivial beta-image (these
    are exactly the witnesses commuting with the projection to the base
    cocycle).  Decided by exhausting alpha-images of degree-0 A-cochains."""
    target = psi2.cochain.value_list()
    return any(v == target for v in
               _lifting_orbit(psi1.cochain.value_list(), psi1.scenario, ext))


def solve_liftings(phi: TransitionCocycle, ext: CentralExtensionData,
                   budget: int | None = None) -> LiftingClassification:
    """Classify liftings through the defect equation: with base lift psi0
    and defect nu, liftings are alpha(omega)·psi0 for degree-1 A-cochains
    omega with d(omega) = -nu; classes correspond to H^1(A)."""
    scenario = phi.scenario
    if phi.coeff != ext.C:
        raise ValidationError("cocycle coefficients are not the extension's C")
    psi0, nu = lift_defect(phi, ext)
    H2 = cohomology(scenario, 2, ext.A)
    ddc = CohomologyClass(H2, H2.reduce(nu))
    H1 = cohomology(scenario, 1, ext.A)
    if not ddc.is_zero:
        return LiftingClassification(ddc, False, (), 0, H1.size)
    from .cochains import invert as inv_cochain
    omega0 = solve_coboundary_equation(scenario, ext.A, 1, inv_cochain(nu))
    if omega0 is None:
        raise ValidationError("internal error: zero obstruction but no solution")
    reps = []
    for coords in H1.elements():
        z = H1.class_cochain(coords)
        omega = compose(omega0, z)
        psi = compose(map_coefficients(omega, ext.alpha, ext.B), psi0)
        bad = tc1_violations(psi)
        if bad:
            raise ValidationError("internal error: constructed lifting fails "
                                  "the cocycle law: " + bad[0])
        reps.append(TransitionCocycle(psi))
    # distinctness audit: differences of representatives reduce to the
    # nonzero classes they were built from
    for (c1, r1), (c2, r2) in itertools.combinations(zip(H1.elements(), reps), 2):
        delta = compose(r1.cochain, inv_cochain(r2.cochain))
        pulled = Cochain(scenario, ext.A, 1,
                         {k: ext.alpha_preimage[v] for k, v in delta.values.items()})
        got = H1.reduce(pulled)
        want = tuple((a - b) % f for a, b, f in zip(c1, c2, H1.factors))
        if got != want:
            raise ValidationError("internal error: lifting torsor audit failed")
    # canonicalize: the lexicographically least lifting of each class, for
    # reproducible reports (within budget; |A|^{#degree-0 slots} transforms)
    budget = DEFAULT_SEARCH_BUDGET if budget is None else budget
    if ext.A.group.order ** len(scenario.keys(0)) <= budget:
        reps = [TransitionCocycle(cochain_from_list(
                    scenario, ext.B, 1,
                    min(_lifting_orbit(r.cochain.value_list(), scenario, ext))))
                for r in reps]
    reps.sort(key=lambda r: r.cochain.value_list())
    return LiftingClassification(ddc, True, tuple(reps), len(reps), H1.size)


@dataclass(frozen=True)
class BruteLiftings:
    """Oracle output: every pointwise lift, filtered and grouped."""

    candidate_count: int
    liftings: tuple[TransitionCocycle, ...]
    classes: tuple[tuple[int, ...], ...]  # indices into ``liftings`` per class

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def representatives(self) -> tuple[TransitionCocycle, ...]:
        return tuple(self.liftings[cls[0]] for cls in self.classes)


def enumerate_liftings_bruteforce(phi: TransitionCocycle, ext: CentralExtensionData,
                                  bound: int | None = None) -> BruteLiftings:
    """Enumerate every psi with beta∘psi = phi, keep those satisfying the
    cocycle law, and group them into lifting-equivalence classes by the
    exhaustive transformation action.  Independent of the linear-algebra
    classifier; deterministic ordering throughout."""
    bound = DEFAULT_SEARCH_BUDGET if bound is None else bound
    scenario = phi.scenario
    if phi.coeff != ext.C:
        raise ValidationError("cocycle coefficients are not the extension's C")
    fibers = []
    for key in scenario.keys(1):
        c = phi.cochain.values[key]
        fibers.append(tuple(b for b in ext.B.group.elements()
                            if ext.beta.image[b] == c))
    total = 1
    for f in fibers:
        total *= len(f)
        if total > bound:
            raise BudgetExceededError(
                f"lift enumeration needs {total}+ candidates, bound is {bound}")
    plan = _plan(scenario)
    group = ext.B.group
    mul, inv, e = group.table, group.inverse, group.identity
    perms = ext.B.action.perms
    deg2, norm = plan["deg2"], plan["norm"]
    survivors = []
    for values in itertools.product(*fibers):
        if any(values[k] != e for k in norm):
            continue
        if all(mul[inv[values[d1]]][mul[values[d2]][perms[γ1][values[d0]]]] == e
               for d0, d1, d2, γ1, _ in deg2):
            survivors.append(values)
    survivor_set = {v: n for n, v in enumerate(survivors)}
    deg1 = plan["deg1"]
    width = len(scenario.keys(0))
    nA = ext.A.group.order
    alpha = ext.alpha.image
    if nA ** width > bound:
        raise BudgetExceededError("transformation action exceeds the bound")
    seen = set()
    classes = []
    for n, start in enumerate(survivors):
        if n in seen:
            continue
        orbit = set()
        for m_values in itertools.product(range(nA), repeat=width):
            m = [alpha[v] for v in m_values]
            out = list(start)
            for k, left, right, γ in deg1:
                out[k] = mul[m[left]][mul[start[k]][inv[perms[γ][m[right]]]]]
            hit = survivor_set.get(tuple(out))
            if hit is not None:
                orbit.add(hit)
        seen |= orbit
        classes.append(tuple(sorted(orbit)))
    liftings = tuple(TransitionCocycle(cochain_from_list(scenario, ext.B, 1, v))
                     for v in survivors)
    return BruteLiftings(total, liftings, tuple(classes))
