"""Finite gamma-sets, covers, and the simplicial machinery.

The simplicial space has level p equal to Gamma^p x X.  Face maps mix
group multiplication with the action on X; the index set of the induced
cover carries matching face/degeneracy maps.  A point (γ1,..,γp,x)
determines the sequence x_i = γ_{i+1}···γ_p·x (so x_p = x and
x_0 = γ1···γp·x), and membership in a cover cell (a_0,..,a_p) means
x_i ∈ U_{a_i} for every i.  Under this convention the degree-1 cells are
exactly the classical transition-cocycle domains U_a ∩ γ^{-1}U_b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

from .groups import CentralExtensionData, FiniteGammaGroup, FiniteGroup
from .validation import AuditReport, ValidationError

DEFAULT_DEGREE_BOUND = 4


@dataclass(frozen=True)
class GammaSpace:
    """A finite point set 0..size-1 with a permutation action of gamma."""

    size: int
    perms: tuple[tuple[int, ...], ...]

    def act(self, gamma_elt: int, x: int) -> int:
        return self.perms[gamma_elt][x]


def action_violations(gamma: FiniteGroup, space: GammaSpace) -> AuditReport:
    violations = []
    checked = 0
    if len(space.perms) != gamma.order:
        raise ValidationError(
            f"space action has {len(space.perms)} permutations, expected {gamma.order}")
    for γ in gamma.elements():
        perm = space.perms[γ]
        checked += 1
        if len(perm) != space.size or set(perm) != set(range(space.size)):
            violations.append(f"map for gamma={gamma.label(γ)} is not a permutation")
    if not violations:
        if space.perms[gamma.identity] != tuple(range(space.size)):
            violations.append("identity of gamma does not act as the identity")
        for γ1 in gamma.elements():
            for γ2 in gamma.elements():
                checked += 1
                composed = tuple(space.perms[γ1][space.perms[γ2][x]]
                                 for x in range(space.size))
                if composed != space.perms[gamma.mul(γ1, γ2)]:
                    violations.append(
                        f"action is not a homomorphism at "
                        f"({gamma.label(γ1)},{gamma.label(γ2)})")
    return AuditReport(checked, tuple(violations))


@dataclass(frozen=True)
class Cover:
    """A cover of the point set by named, nonempty subsets."""

    names: tuple[str, ...]
    sets: tuple[frozenset[int], ...]

    @property
    def size(self) -> int:
        return len(self.sets)

    def index_of(self, name: str) -> int:
        return self.names.index(name)


def cover_violations(space: GammaSpace, cover: Cover) -> AuditReport:
    violations = []
    if len(cover.names) != len(cover.sets):
        raise ValidationError("cover names and sets have different lengths")
    if len(set(cover.names)) != len(cover.names):
        violations.append("cover set names are not unique")
    union = set()
    for name, s in zip(cover.names, cover.sets):
        if not s:
            violations.append(f"cover set {name!r} is empty")
        if any(not 0 <= x < space.size for x in s):
            violations.append(f"cover set {name!r} contains out-of-range points")
        union |= s
    if union != set(range(space.size)):
        violations.append("cover does not cover the whole space")
    return AuditReport(len(cover.sets) + 1, tuple(violations))


class SimplexPoint(NamedTuple):
    """A point of the simplicial space: a gamma-tuple and a base point."""

    gammas: tuple[int, ...]
    x: int

    @property
    def degree(self) -> int:
        return len(self.gammas)


MultiIndex = tuple[int, ...]


def face_index(i: int, index: MultiIndex) -> MultiIndex:
    """Remove the i-th entry."""
    p = len(index) - 1
    if not 0 <= i <= p:
        raise ValidationError(f"face index {i} out of range for degree {p}")
    return index[:i] + index[i + 1:]


def degeneracy_index(i: int, index: MultiIndex) -> MultiIndex:
    """Duplicate the i-th entry."""
    p = len(index) - 1
    if not 0 <= i <= p:
        raise ValidationError(f"degeneracy index {i} out of range for degree {p}")
    return index[: i + 1] + index[i:]


# Cochain values are constant along the space directions of every cell (the
# finite shadow of smoothness: with a discrete coefficient group, smooth
# means locally constant, and each nonempty cell models one connected
# piece).  A value slot is therefore a (multi-index, gamma-tuple) pair with
# a nonempty point slice; these functions are the face/degeneracy maps on
# the gamma-tuple part.  The base-point action of the last face is
# invisible at this level.

SliceKey = tuple[MultiIndex, tuple[int, ...]]


@dataclass(eq=False)
class Scenario:
    """The ambient context: gamma, the gamma-set, the cover, and named
    coefficient gamma-groups (plus any extensions/cocycles/refinements
    parsed alongside them).

    Immutable after construction; the private fields memoize the cell
    census and derived presentations.
    """

    gamma: FiniteGroup
    space: GammaSpace
    cover: Cover
    coefficients: dict[str, FiniteGammaGroup]
    default_coefficients: str
    extensions: dict[str, CentralExtensionData] = field(default_factory=dict)
    cocycles: dict = field(default_factory=dict)
    refinements: dict = field(default_factory=dict)
    degree_bound: int = DEFAULT_DEGREE_BOUND
    name: str = "scenario"
    _census: dict = field(default_factory=dict, repr=False)
    _caches: dict = field(default_factory=dict, repr=False)

    @property
    def coeff(self) -> FiniteGammaGroup:
        return self.coefficients[self.default_coefficients]

    # -- simplicial space ------------------------------------------------

    def points(self, p: int):
        """All points of degree p, in lexicographic order."""
        for gammas in itertools.product(self.gamma.elements(), repeat=p):
            for x in range(self.space.size):
                yield SimplexPoint(gammas, x)

    def face_point(self, i: int, pt: SimplexPoint) -> SimplexPoint:
        p = pt.degree
        if p < 1 or not 0 <= i <= p:
            raise ValidationError(f"face {i} out of range for degree {p}")
        g = pt.gammas
        if i == 0:
            return SimplexPoint(g[1:], pt.x)
        if i == p:
            return SimplexPoint(g[:-1], self.space.act(g[p - 1], pt.x))
        merged = self.gamma.mul(g[i - 1], g[i])
        return SimplexPoint(g[: i - 1] + (merged,) + g[i + 1:], pt.x)

    def degeneracy_point(self, i: int, pt: SimplexPoint) -> SimplexPoint:
        p = pt.degree
        if not 0 <= i <= p:
            raise ValidationError(f"degeneracy {i} out of range for degree {p}")
        g = pt.gammas
        e = self.gamma.identity
        return SimplexPoint(g[:i] + (e,) + g[i:], pt.x)

    def point_sequence(self, pt: SimplexPoint, i: int) -> int:
        """The i-th point of the path: the last degree-i entries applied to x."""
        p = pt.degree
        if not 0 <= i <= p:
            raise ValidationError(f"sequence index {i} out of range for degree {p}")
        y = pt.x
        for k in range(p - 1, i - 1, -1):
            y = self.space.act(pt.gammas[k], y)
        return y

    def face_gammas(self, i: int, gammas: tuple[int, ...]) -> tuple[int, ...]:
        """The i-th face on the gamma-tuple of a value slot (the base-point
        translation of the last face does not show at slot level)."""
        p = len(gammas)
        if p < 1 or not 0 <= i <= p:
            raise ValidationError(f"face {i} out of range for degree {p}")
        if i == 0:
            return gammas[1:]
        if i == p:
            return gammas[:-1]
        merged = self.gamma.mul(gammas[i - 1], gammas[i])
        return gammas[: i - 1] + (merged,) + gammas[i + 1:]

    def degeneracy_gammas(self, i: int, gammas: tuple[int, ...]) -> tuple[int, ...]:
        p = len(gammas)
        if not 0 <= i <= p:
            raise ValidationError(f"degeneracy {i} out of range for degree {p}")
        return gammas[:i] + (self.gamma.identity,) + gammas[i:]

    def member(self, pt: SimplexPoint, index: MultiIndex) -> bool:
        """True iff every path point of ``pt`` lies in the matching cover set."""
        p = pt.degree
        if len(index) != p + 1:
            raise ValidationError("multi-index degree does not match the point")
        sets = self.cover.sets
        y = pt.x
        if y not in sets[index[p]]:
            return False
        for k in range(p - 1, -1, -1):
            y = self.space.act(pt.gammas[k], y)
            if y not in sets[index[k]]:
                return False
        return True

    # -- census ----------------------------------------------------------

    def _build_census(self, p: int):
        if p < 0:
            raise ValidationError("degree must be nonnegative")
        if p > self.degree_bound:
            raise ValidationError(
                f"degree {p} exceeds the configured bound {self.degree_bound}")
        if p in self._census:
            return self._census[p]
        cells = []
        slices = []
        empty = 0
        gamma_tuples = tuple(itertools.product(self.gamma.elements(), repeat=p))
        for index in itertools.product(range(self.cover.size), repeat=p + 1):
            pts = []
            for gammas in gamma_tuples:
                xs = tuple(x for x in range(self.space.size)
                           if self.member(SimplexPoint(gammas, x), index))
                if xs:
                    slices.append((index, gammas, xs))
                    pts.extend(SimplexPoint(gammas, x) for x in xs)
            if pts:
                cells.append((index, tuple(pts)))
            else:
                empty += 1
        keys = tuple((index, gammas) for index, gammas, _ in slices)
        census = {
            "cells": tuple(cells),
            "empty": empty,
            "slices": tuple(slices),
            "keys": keys,
            "pos": {k: n for n, k in enumerate(keys)},
            "slice_points": {(index, gammas): xs for index, gammas, xs in slices},
        }
        self._census[p] = census
        return census

    def cells(self, p: int) -> tuple[tuple[MultiIndex, tuple[SimplexPoint, ...]], ...]:
        """Nonempty cover cells of degree p with their points, in
        deterministic lexicographic order.  Empty multi-indices are skipped
        but counted (see empty_index_count)."""
        return self._build_census(p)["cells"]

    def slices(self, p: int):
        """The value slots of degree p: (multi-index, gamma-tuple, points),
        one per nonempty point slice, in lexicographic order."""
        return self._build_census(p)["slices"]

    def empty_index_count(self, p: int) -> int:
        return self._build_census(p)["empty"]

    def keys(self, p: int) -> tuple[SliceKey, ...]:
        """Value-slot keys of degree p, in census order."""
        return self._build_census(p)["keys"]

    def key_positions(self, p: int) -> dict:
        return self._build_census(p)["pos"]

    def slice_points(self, p: int) -> dict:
        return self._build_census(p)["slice_points"]


def twist(action, i: int, pt: SimplexPoint) -> tuple[int, ...]:
    """The twisting automorphism attached to the i-th face at ``pt``:
    the action of the leading gamma entry when i = 0, identity otherwise."""
    if i == 0 and pt.degree >= 1:
        return action.perm(pt.gammas[0])
    return tuple(range(action.target.order))


# -- refinements ----------------------------------------------------------


@dataclass(eq=False)
class Refinement:
    """A finer cover together with one refining map into the base cover."""

    fine: Cover
    assignment: tuple[int, ...]  # fine set index -> base set index


def refinement_violations(scenario: Scenario, ref: Refinement) -> AuditReport:
    violations = []
    checked = 0
    rep = cover_violations(scenario.space, ref.fine)
    checked += rep.checked
    violations += list(rep.violations)
    if len(ref.assignment) != ref.fine.size:
        raise ValidationError("refining map length does not match the fine cover")
    for b, a in enumerate(ref.assignment):
        checked += 1
        if not 0 <= a < scenario.cover.size:
            violations.append(f"refining map sends {ref.fine.names[b]!r} out of range")
        elif not ref.fine.sets[b] <= scenario.cover.sets[a]:
            violations.append(
                f"{ref.fine.names[b]!r} is not contained in "
                f"{scenario.cover.names[a]!r}")
    return AuditReport(checked, tuple(violations))


def refine_scenario(scenario: Scenario, ref: Refinement) -> Scenario:
    """The scenario over the refined cover (same gamma, space, coefficients).
    Cached per fine cover so that two refining maps into the same cover
    share one census."""
    cache = scenario._caches.setdefault("fine", {})
    key = id(ref.fine)
    if key not in cache:
        refinement_violations(scenario, ref).raise_if_failed("refinement")
        cache[key] = Scenario(
            gamma=scenario.gamma,
            space=scenario.space,
            cover=ref.fine,
            coefficients=scenario.coefficients,
            default_coefficients=scenario.default_coefficients,
            degree_bound=scenario.degree_bound,
            name=f"{scenario.name}/refined",
        )
    return cache[key]


def induced_refinement(scenario: Scenario, ref: Refinement, p: int) -> dict:
    """The induced map on degree-p cells, (b_0..b_p) -> (r(b_0)..r(b_p)),
    verified pointwise: every point of the fine cell must lie in the image
    cell of the base cover."""
    refinement_violations(scenario, ref).raise_if_failed("refinement")
    fine = refine_scenario(scenario, ref)
    r = ref.assignment
    mapping = {}
    for index, pts in fine.cells(p):
        target = tuple(r[b] for b in index)
        for pt in pts:
            if not scenario.member(pt, target):
                raise ValidationError(
                    f"containment violation: point {pt} of fine cell {index} "
                    f"is not in base cell {target}")
        mapping[index] = target
    return mapping


# -- exhaustive identity verification --------------------------------------


def verify_simplicial_identities(scenario: Scenario, pmax: int = 3) -> AuditReport:
    """Exhaustively check the face/degeneracy identities on points and on
    multi-indices for all degrees up to pmax."""
    violations = []
    checked = 0

    def record(msg):
        if len(violations) < 50:
            violations.append(msg)

    for p in range(pmax + 1):
        pts = tuple(scenario.points(p))
        # d_i d_j = d_{j-1} d_i for i < j (needs p >= 2)
        if p >= 2:
            for pt in pts:
                for j in range(1, p + 1):
                    for i in range(j):
                        checked += 1
                        left = scenario.face_point(i, scenario.face_point(j, pt))
                        right = scenario.face_point(j - 1, scenario.face_point(i, pt))
                        if left != right:
                            record(f"d{i} d{j} != d{j-1} d{i} at {pt}")
        # e_i e_j = e_{j+1} e_i for i <= j
        for pt in pts:
            for j in range(p + 1):
                for i in range(j + 1):
                    checked += 1
                    left = scenario.degeneracy_point(i, scenario.degeneracy_point(j, pt))
                    right = scenario.degeneracy_point(j + 1, scenario.degeneracy_point(i, pt))
                    if left != right:
                        record(f"e{i} e{j} != e{j+1} e{i} at {pt}")
            # d_i e_j identities
            for j in range(p + 1):
                ej = scenario.degeneracy_point(j, pt)
                for i in range(p + 2):
                    checked += 1
                    got = scenario.face_point(i, ej)
                    if i < j:
                        want = scenario.degeneracy_point(j - 1, scenario.face_point(i, pt))
                    elif i in (j, j + 1):
                        want = pt
                    else:
                        want = scenario.degeneracy_point(j, scenario.face_point(i - 1, pt))
                    if got != want:
                        record(f"d{i} e{j} identity fails at {pt}")
    # same identities on the indexing set
    for p in range(pmax + 1):
        for index in itertools.product(range(scenario.cover.size), repeat=p + 1):
            if p >= 1:
                for j in range(1, p + 1):
                    for i in range(j):
                        checked += 1
                        if face_index(i, face_index(j, index)) != \
                                face_index(j - 1, face_index(i, index)):
                            record(f"index d{i} d{j} fails at {index}")
            for j in range(p + 1):
                for i in range(j + 1):
                    checked += 1
                    if degeneracy_index(i, degeneracy_index(j, index)) != \
                            degeneracy_index(j + 1, degeneracy_index(i, index)):
                        record(f"index e{i} e{j} fails at {index}")
                ej = degeneracy_index(j, index)
                for i in range(p + 2):
                    checked += 1
                    got = face_index(i, ej)
                    if i < j:
                        want = degeneracy_index(j - 1, face_index(i, index))
                    elif i in (j, j + 1):
                        want = index
                    else:
                        want = degeneracy_index(j, face_index(i - 1, index))
                    if got != want:
                        record(f"index d{i} e{j} identity fails at {index}")
    return AuditReport(checked, tuple(violations))


def verify_twist_identities(scenario: Scenario,
                            coeff: FiniteGammaGroup | None = None,
                            pmax: int = 3) -> AuditReport:
    """Exhaustively check the two twisting-map identity families up to pmax."""
    coeff = coeff or scenario.coeff
    action = coeff.action
    n = coeff.group.order
    violations = []
    checked = 0
    # The face identity is only ever applied beneath a double pullback, so its
    # domain is the points of degree >= 2.
    for q in range(2, pmax + 1):
        for pt in scenario.points(q):
            for j in range(1, q + 1):
                dj = scenario.face_point(j, pt)
                for i in range(j):
                    di = scenario.face_point(i, pt)
                    checked += 1
                    tj = twist(action, j, pt)
                    ti_dj = twist(action, i, dj)
                    ti = twist(action, i, pt)
                    tjm1_di = twist(action, j - 1, di)
                    left = tuple(tj[ti_dj[g]] for g in range(n))
                    right = tuple(ti[tjm1_di[g]] for g in range(n))
                    if left != right:
                        violations.append(f"twist face identity fails at {pt}, i={i}, j={j}")
    for p in range(pmax):
        for pt in scenario.points(p):
            for j in range(p + 1):
                ej = scenario.degeneracy_point(j, pt)
                for i in range(p + 2):
                    checked += 1
                    got = twist(action, i, ej)
                    if i < j:
                        want = twist(action, i, pt)
                    elif i in (j, j + 1):
                        want = tuple(range(n))
                    else:
                        want = twist(action, i - 1, pt)
                    if got != want:
                        violations.append(
                            f"twist degeneracy identity fails at {pt}, i={i}, j={j}")
    return AuditReport(checked, tuple(violations))


def verify_face_compat(scenario: Scenario, pmax: int = 3) -> AuditReport:
    """Cover compatibility: membership is preserved along every face map."""
    violations = []
    checked = 0
    for p in range(1, pmax + 1):
        for index, pts in scenario.cells(p):
            for i in range(p + 1):
                fidx = face_index(i, index)
                for pt in pts:
                    checked += 1
                    if not scenario.member(scenario.face_point(i, pt), fidx):
                        violations.append(
                            f"face compatibility fails: d{i} of {pt} in cell {index}")
    return AuditReport(checked, tuple(violations))
