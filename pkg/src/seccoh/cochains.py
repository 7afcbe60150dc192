"""Cochains on the simplicial cover and the operations between them.

A degree-p cochain assigns one coefficient-group element to every value
slot of the census — a (multi-index, gamma-tuple) pair whose point slice
is nonempty.  Constancy along the space directions is the finite shadow
of smoothness: a discrete-valued smooth map is locally constant, and
each nonempty slice models one connected piece of the covered set.
Twisted pullbacks compose the face-map pullback with the twisting
automorphism, which is nontrivial only for the 0-th face; the coboundary
is their alternating sum and needs abelian coefficients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .groups import FiniteGammaGroup, GroupHom, is_equivariant
from .simplicial import (Refinement, Scenario, SimplexPoint, face_index,
                         refine_scenario)
from .validation import NonAbelianError, ValidationError


@dataclass(eq=False)
class Cochain:
    """An element of the degree-p cochain group.

    ``values`` maps every census key of the degree to a coefficient
    element index; the key set must equal the census exactly.
    Treated as immutable; ``value_list`` is memoized.
    """

    scenario: Scenario
    coeff: FiniteGammaGroup
    degree: int
    values: dict
    _vlist: tuple = field(default=None, repr=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain)
                and self.degree == other.degree
                and self.coeff == other.coeff
                and self.scenario is other.scenario
                and self.values == other.values)

    def value_list(self) -> tuple[int, ...]:
        """Values in census order; the canonical comparable form."""
        if self._vlist is None:
            object.__setattr__(self, "_vlist",
                               tuple(self.values[k] for k in self.scenario.keys(self.degree)))
        return self._vlist

    def evaluate(self, index: tuple[int, ...], pt: SimplexPoint) -> int:
        """The value at a point of the cell (constant along its slice)."""
        if not self.scenario.member(pt, index):
            raise ValidationError(f"point {pt} is not in cell {index}")
        return self.values[(index, pt.gammas)]

    def is_identity(self) -> bool:
        e = self.coeff.group.identity
        return all(v == e for v in self.values.values())


def make_cochain(scenario: Scenario, coeff: FiniteGammaGroup, degree: int,
                 values: dict) -> Cochain:
    """Validate the key set against the census and the values against G."""
    keys = scenario.keys(degree)
    if set(values) != set(keys):
        raise ValidationError(
            f"value table does not match the degree-{degree} census "
            f"({len(values)} entries, census has {len(keys)})")
    n = coeff.group.order
    for k, v in values.items():
        if not 0 <= v < n:
            raise ValidationError(f"value {v} at cell {k} is not a group element")
    return Cochain(scenario, coeff, degree, dict(values))


def cochain_from_list(scenario: Scenario, coeff: FiniteGammaGroup, degree: int,
                      vlist) -> Cochain:
    keys = scenario.keys(degree)
    return Cochain(scenario, coeff, degree, dict(zip(keys, vlist)))


def constant_cochain(scenario: Scenario, coeff: FiniteGammaGroup, degree: int,
                     element: int | None = None) -> Cochain:
    g = coeff.group.identity if element is None else element
    return Cochain(scenario, coeff, degree,
                   {k: g for k in scenario.keys(degree)})


def _check_compatible(a: Cochain, b: Cochain):
    if a.scenario is not b.scenario:
        raise ValidationError("cochains live over different scenarios")
    if a.coeff != b.coeff:
        raise ValidationError("cochains have different coefficients")
    if a.degree != b.degree:
        raise ValidationError(f"degree mismatch: {a.degree} != {b.degree}")


def compose(left: Cochain, right: Cochain) -> Cochain:
    """Pointwise product (left * right), in that order."""
    _check_compatible(left, right)
    mul = left.coeff.group.table
    return Cochain(left.scenario, left.coeff, left.degree,
                   {k: mul[left.values[k]][right.values[k]] for k in left.values})


def invert(phi: Cochain) -> Cochain:
    inv = phi.coeff.group.inverse
    return Cochain(phi.scenario, phi.coeff, phi.degree,
                   {k: inv[v] for k, v in phi.values.items()})


def twisted_pullback(i: int, phi: Cochain) -> Cochain:
    """Pull back along the i-th face and twist by the leading gamma when i=0."""
    scenario = phi.scenario
    p = phi.degree
    if not 0 <= i <= p + 1:
        raise ValidationError(f"pullback index {i} out of range for degree {p}")
    perms = phi.coeff.action.perms
    out = {}
    for index, gammas in scenario.keys(p + 1):
        v = phi.values[(face_index(i, index), scenario.face_gammas(i, gammas))]
        if i == 0:
            v = perms[gammas[0]][v]
        out[(index, gammas)] = v
    return Cochain(scenario, phi.coeff, p + 1, out)


def coboundary(phi: Cochain) -> Cochain:
    """Alternating product of the twisted pullbacks (abelian coefficients)."""
    if not phi.coeff.is_abelian:
        raise NonAbelianError(
            "coboundary needs abelian coefficients; use the face maps directly")
    group = phi.coeff.group
    mul, inv = group.table, group.inverse
    acc = {k: group.identity for k in phi.scenario.keys(phi.degree + 1)}
    for i in range(phi.degree + 2):
        tp = twisted_pullback(i, phi)
        if i % 2:
            for k, v in tp.values.items():
                acc[k] = mul[acc[k]][inv[v]]
        else:
            for k, v in tp.values.items():
                acc[k] = mul[acc[k]][v]
    return Cochain(phi.scenario, phi.coeff, phi.degree + 1, acc)


def scale(phi: Cochain, k: int) -> Cochain:
    """k-fold power of an abelian cochain."""
    if not phi.coeff.is_abelian:
        raise NonAbelianError("scale needs abelian coefficients")
    group = phi.coeff.group
    return Cochain(phi.scenario, phi.coeff, phi.degree,
                   {key: group.power(v, k) for key, v in phi.values.items()})


def restrict(phi: Cochain, ref: Refinement) -> Cochain:
    """Restriction along a refining map: values are looked up at the image
    multi-index, at the same gamma-tuple."""
    fine = refine_scenario(phi.scenario, ref)
    r = ref.assignment
    out = {}
    for index, gammas in fine.keys(phi.degree):
        out[(index, gammas)] = phi.values[(tuple(r[b] for b in index), gammas)]
    return Cochain(fine, phi.coeff, phi.degree, out)


def map_coefficients(phi: Cochain, hom: GroupHom,
                     target: FiniteGammaGroup) -> Cochain:
    """Apply a gamma-group homomorphism to every value."""
    if hom.source != phi.coeff.group or hom.target != target.group:
        raise ValidationError("homomorphism endpoints do not match the coefficients")
    if not is_equivariant(hom, phi.coeff.action, target.action):
        raise ValidationError("coefficient map is not gamma-equivariant")
    return Cochain(phi.scenario, target, phi.degree,
                   {k: hom.image[v] for k, v in phi.values.items()})


def homotopy(phi: Cochain, ref_r: Refinement, ref_s: Refinement) -> Cochain:
    """The refinement cochain homotopy h: degree p over the base cover to
    degree p-1 over the fine cover,

        (h phi)_(b_0..b_{p-1}) = sum_k (-1)^k
            phi_(r(b_0)..r(b_k), s(b_k)..s(b_{p-1})) ∘ e_k.

    Satisfies s*phi - r*phi = h(d phi) + d(h phi); the two degeneracies
    pin the twisting to the identity, which is what makes the twisted
    theory behave like the untwisted one here.
    """
    if not phi.coeff.is_abelian:
        raise NonAbelianError("homotopy needs abelian coefficients")
    if ref_r.fine is not ref_s.fine and ref_r.fine != ref_s.fine:
        raise ValidationError("refining maps must target the same fine cover")
    if phi.degree < 1:
        raise ValidationError("homotopy needs degree >= 1")
    fine = refine_scenario(phi.scenario, ref_r)
    r, s = ref_r.assignment, ref_s.assignment
    p = phi.degree
    group = phi.coeff.group
    mul, inv = group.table, group.inverse
    out = {}
    for index, gammas in fine.keys(p - 1):
        acc = group.identity
        for k in range(p):
            mixed = tuple(r[b] for b in index[: k + 1]) + tuple(s[b] for b in index[k:])
            v = phi.values[(mixed, fine.degeneracy_gammas(k, gammas))]
            acc = mul[acc][inv[v] if k % 2 else v]
        out[(index, gammas)] = acc
    return Cochain(fine, phi.coeff, p - 1, out)


def random_cochain(scenario: Scenario, coeff: FiniteGammaGroup, degree: int,
                   seed: int) -> Cochain:
    """Seeded pseudo-random cochain: a Mersenne-Twister stream (random.Random)
    drawn with randrange over the census in its canonical order."""
    rng = random.Random(seed)
    n = coeff.group.order
    return Cochain(scenario, coeff, degree,
                   {k: rng.randrange(n) for k in scenario.keys(degree)})
