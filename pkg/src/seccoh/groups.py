"""Finite groups, homomorphisms and group actions, all by explicit tables.

Group elements are integer indices 0..n-1.  Every axiom is checkable
exhaustively at the sizes this package targets; above the configured
bound a deterministic sample is used instead, so validation stays
O(n^2)-ish in practice.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property

from .snf import diagonal_of, smith_normal_form
from .validation import AuditReport, NonAbelianError, ValidationError

# Full n^3 associativity scan up to this order; deterministic sampling beyond.
EXHAUSTIVE_ORDER_BOUND = 512
SAMPLED_TRIPLE_COUNT = 20000
# abelian_presentation builds an n x n^2 relation matrix; keep n sane.
PRESENTATION_ORDER_BOUND = 64


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group presented by its multiplication table.

    ``table[a][b]`` is the index of the product a*b.  Labels are for
    display and scenario files only; identity and inverses are derived.
    """

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    name: str = "G"

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int:
        n = self.order
        for e in range(n):
            row = self.table[e]
            if all(row[g] == g and self.table[g][e] == g for g in range(n)):
                return e
        raise ValidationError(f"group {self.name!r} has no identity element")

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        e = self.identity
        inv = []
        for g in range(self.order):
            h = next((h for h in range(self.order)
                      if self.table[g][h] == e and self.table[h][g] == e), None)
            if h is None:
                raise ValidationError(f"group {self.name!r}: element {g} has no inverse")
            inv.append(h)
        return tuple(inv)

    @cached_property
    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(n) for b in range(a + 1, n))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][g]
        return acc

    def elements(self) -> range:
        return range(self.order)

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def element_order(self, g: int) -> int:
        k, acc = 1, g
        while acc != self.identity:
            acc = self.table[acc][g]
            k += 1
        return k

    def exponent(self) -> int:
        out = 1
        for g in self.elements():
            o = self.element_order(g)
            out = out * o // _gcd(out, o)
        return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def group_axiom_violations(group: FiniteGroup,
                           exhaustive_bound: int = EXHAUSTIVE_ORDER_BOUND) -> AuditReport:
    """Check table shape, identity/inverse laws, and associativity."""
    n = group.order
    violations = []
    checked = 0
    for a in range(n):
        if len(group.table[a]) != n:
            violations.append(f"row {a} has length {len(group.table[a])}, expected {n}")
        for b, v in enumerate(group.table[a]):
            checked += 1
            if not 0 <= v < n:
                violations.append(f"table[{a}][{b}] = {v} out of range")
    if violations:
        return AuditReport(checked, tuple(violations))
    try:
        group.identity
        group.inverse
    except ValidationError as exc:
        violations.append(str(exc))
        return AuditReport(checked, tuple(violations))
    if n <= exhaustive_bound:
        triples = itertools.product(range(n), repeat=3)
    else:
        rng = random.Random(0)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(SAMPLED_TRIPLE_COUNT))
    mul = group.table
    for a, b, c in triples:
        checked += 1
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            violations.append(f"associativity fails at ({a},{b},{c})")
            if len(violations) >= 10:
                break
    return AuditReport(checked, tuple(violations))


def make_cyclic(n: int, name: str | None = None) -> FiniteGroup:
    """Z/n with addition; identity at index 0."""
    if n < 1:
        raise ValidationError("cyclic group order must be at least 1")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, tuple(str(i) for i in range(n)), name or f"Z{n}")


@dataclass(frozen=True)
class GroupHom:
    """A map of finite groups, one target index per source element."""

    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.image[g]

    @cached_property
    def is_injective(self) -> bool:
        return len(set(self.image)) == self.source.order

    @cached_property
    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.target.order

    def kernel(self) -> tuple[int, ...]:
        e = self.target.identity
        return tuple(g for g in self.source.elements() if self.image[g] == e)

    def image_set(self) -> frozenset[int]:
        return frozenset(self.image)

    def preimages(self, c: int) -> tuple[int, ...]:
        return tuple(b for b in self.source.elements() if self.image[b] == c)


def identity_hom(group: FiniteGroup) -> GroupHom:
    return GroupHom(group, group, tuple(group.elements()))


def hom_violations(hom: GroupHom) -> AuditReport:
    violations = []
    checked = 0
    n, m = hom.source.order, hom.target.order
    if len(hom.image) != n:
        return AuditReport(0, (f"image has length {len(hom.image)}, expected {n}",))
    for v in hom.image:
        checked += 1
        if not 0 <= v < m:
            violations.append(f"image value {v} out of range")
    if violations:
        return AuditReport(checked, tuple(violations))
    if hom.image[hom.source.identity] != hom.target.identity:
        violations.append("identity is not mapped to identity")
    for a in range(n):
        for b in range(n):
            checked += 1
            if hom.image[hom.source.mul(a, b)] != hom.target.mul(hom.image[a], hom.image[b]):
                violations.append(f"multiplicativity fails at ({a},{b})")
                if len(violations) >= 10:
                    return AuditReport(checked, tuple(violations))
    return AuditReport(checked, tuple(violations))


@dataclass(frozen=True)
class GammaAction:
    """An action of ``gamma`` on the elements of ``target``, one permutation per
    acting element.  Validated by check_gamma_group when the permutations are
    required to be group automorphisms."""

    gamma: FiniteGroup
    target: FiniteGroup
    perms: tuple[tuple[int, ...], ...]

    def apply(self, gamma_elt: int, g: int) -> int:
        return self.perms[gamma_elt][g]

    def perm(self, gamma_elt: int) -> tuple[int, ...]:
        return self.perms[gamma_elt]

    @property
    def is_trivial(self) -> bool:
        ident = tuple(range(self.target.order))
        return all(p == ident for p in self.perms)


def trivial_action(gamma: FiniteGroup, target: FiniteGroup) -> GammaAction:
    ident = tuple(range(target.order))
    return GammaAction(gamma, target, tuple(ident for _ in gamma.elements()))


def check_gamma_group(gamma: FiniteGroup, group: FiniteGroup,
                      action: GammaAction) -> AuditReport:
    """Validate that ``action`` makes ``group`` a gamma-group.

    Reports every violated axiom: non-bijective or non-automorphism
    per-element maps, a non-homomorphic assignment, or theta_1 != id.
    """
    violations = []
    checked = 0
    if action.gamma is not gamma and action.gamma != gamma:
        raise ValidationError("action's acting group does not match")
    if action.target is not group and action.target != group:
        raise ValidationError("action's target group does not match")
    if len(action.perms) != gamma.order:
        raise ValidationError(
            f"action has {len(action.perms)} permutations, expected {gamma.order}")
    n = group.order
    for γ in gamma.elements():
        perm = action.perms[γ]
        if len(perm) != n or set(perm) != set(range(n)):
            violations.append(f"map for gamma={gamma.label(γ)} is not a bijection")
            continue
        for a in range(n):
            for b in range(n):
                checked += 1
                if perm[group.mul(a, b)] != group.mul(perm[a], perm[b]):
                    violations.append(
                        f"map for gamma={gamma.label(γ)} is not an automorphism "
                        f"(fails at ({a},{b}))")
                    break
            else:
                continue
            break
    ident = tuple(range(n))
    if action.perms[gamma.identity] != ident:
        violations.append("identity of gamma does not act as the identity map")
    for γ1 in gamma.elements():
        p1 = action.perms[γ1]
        for γ2 in gamma.elements():
            p2 = action.perms[γ2]
            composed = tuple(p1[p2[g]] for g in range(n))
            checked += 1
            if composed != action.perms[gamma.mul(γ1, γ2)]:
                violations.append(
                    f"assignment gamma -> automorphism is not a homomorphism "
                    f"at ({gamma.label(γ1)},{gamma.label(γ2)})")
    return AuditReport(checked, tuple(violations))


@dataclass(frozen=True)
class FiniteGammaGroup:
    """A coefficient object: a finite group with a gamma-action on it."""

    group: FiniteGroup
    action: GammaAction

    @property
    def is_abelian(self) -> bool:
        return self.group.is_abelian

    @property
    def gamma(self) -> FiniteGroup:
        return self.action.gamma


def gamma_group(gamma: FiniteGroup, group: FiniteGroup,
                action: GammaAction | None = None) -> FiniteGammaGroup:
    """Build and validate a gamma-group; trivial action by default."""
    action = action or trivial_action(gamma, group)
    check_gamma_group(gamma, group, action).raise_if_failed(
        f"gamma-group over {group.name!r}")
    return FiniteGammaGroup(group, action)


def semidirect_product(gamma: FiniteGroup, group: FiniteGroup,
                       action: GammaAction) -> FiniteGroup:
    """The outer semidirect product, with multiplication
    (γ1,g1)(γ2,g2) = (γ1γ2, g1·(γ1 g2)).  Elements are labelled "(γ,g)"."""
    check_gamma_group(gamma, group, action).raise_if_failed("semidirect product")
    nΓ, nG = gamma.order, group.order

    def idx(γ, g):
        return γ * nG + g

    table = []
    for γ1 in gamma.elements():
        for g1 in group.elements():
            row = []
            for γ2 in gamma.elements():
                for g2 in group.elements():
                    row.append(idx(gamma.mul(γ1, γ2),
                                   group.mul(g1, action.apply(γ1, g2))))
            table.append(tuple(row))
    labels = tuple(f"({gamma.label(γ)},{group.label(g)})"
                   for γ in gamma.elements() for g in group.elements())
    return FiniteGroup(tuple(table), labels, f"{gamma.name}x{group.name}")


@dataclass(frozen=True)
class AbelianPresentation:
    """Invariant-factor coordinates for a finite abelian group.

    encode/decode are mutually inverse bijections between element indices
    and tuples in prod Z/factors[i]; encode is additive.
    """

    group: FiniteGroup
    factors: tuple[int, ...]
    encode_table: tuple[tuple[int, ...], ...]
    decode_table: dict[tuple[int, ...], int]
    generators: tuple[int, ...]

    def encode(self, g: int) -> tuple[int, ...]:
        return self.encode_table[g]

    def decode(self, coords: tuple[int, ...]) -> int:
        return self.decode_table[tuple(c % f for c, f in zip(coords, self.factors))]

    @property
    def rank(self) -> int:
        return len(self.factors)


def abelian_presentation(group: FiniteGroup) -> AbelianPresentation:
    """Invariant factors n_1 | n_2 | ... of an abelian group, via the Smith
    normal form of the multiplication-table relation matrix."""
    if not group.is_abelian:
        raise NonAbelianError(
            f"coefficients must be abelian; group {group.name!r} is not")
    n = group.order
    if n > PRESENTATION_ORDER_BOUND:
        raise ValidationError(
            f"presentation bound exceeded: |G| = {n} > {PRESENTATION_ORDER_BOUND}")
    # Relations e_a + e_b - e_{ab}, one generator per element.
    relations = []
    for a in range(n):
        for b in range(a, n):
            col = [0] * n
            col[a] += 1
            col[b] += 1
            col[group.mul(a, b)] -= 1
            relations.append(col)
    matrix = [[col[i] for col in relations] for i in range(n)]
    S, U, Uinv, _ = smith_normal_form(matrix)
    diag = diagonal_of(S)
    if len(diag) < n or any(d == 0 for d in diag):
        raise ValidationError("internal error: relation lattice not full rank")
    kept = [i for i in range(n) if diag[i] != 1]
    factors = tuple(diag[i] for i in kept)
    encode = tuple(tuple(U[i][g] % diag[i] for i in kept) for g in range(n))
    generators = []
    for i in kept:
        g = group.identity
        for k in range(n):
            g = group.mul(g, group.power(k, Uinv[k][i]))
        generators.append(g)
    decode: dict[tuple[int, ...], int] = {}
    for coords in itertools.product(*(range(f) for f in factors)):
        g = group.identity
        for gen, c in zip(generators, coords):
            g = group.mul(g, group.power(gen, c))
        decode[coords] = g
    if len(decode) != n or any(encode[decode[c]] != c for c in decode):
        raise ValidationError("internal error: presentation round trip failed")
    return AbelianPresentation(group, factors, encode, decode, tuple(generators))


def section_of(beta: GroupHom) -> tuple[int, ...]:
    """Deterministic set-section of a surjection: the least-index preimage,
    except that the identity is always lifted to the identity."""
    if not beta.is_surjective:
        raise ValidationError("beta is not surjective; no section exists")
    section = []
    for c in beta.target.elements():
        section.append(min(b for b in beta.source.elements() if beta.image[b] == c))
    section[beta.target.identity] = beta.source.identity
    return tuple(section)


@dataclass(frozen=True)
class CentralExtensionData:
    """A central extension 1 -> A -> B -> C -> 1 of gamma-groups together
    with a deterministic set-section of beta."""

    A: FiniteGammaGroup
    B: FiniteGammaGroup
    C: FiniteGammaGroup
    alpha: GroupHom
    beta: GroupHom
    section: tuple[int, ...]

    @cached_property
    def alpha_preimage(self) -> dict[int, int]:
        return {self.alpha.image[a]: a for a in self.A.group.elements()}

    def lift(self, c: int) -> int:
        return self.section[c]


def central_extension(A: FiniteGammaGroup, B: FiniteGammaGroup, C: FiniteGammaGroup,
                      alpha: GroupHom, beta: GroupHom,
                      section: tuple[int, ...] | None = None) -> CentralExtensionData:
    ext = CentralExtensionData(A, B, C, alpha, beta,
                               section if section is not None else section_of(beta))
    check_central_extension(ext).raise_if_failed("central extension")
    return ext


def is_equivariant(hom: GroupHom, src_action: GammaAction,
                   tgt_action: GammaAction) -> bool:
    gamma = src_action.gamma
    return all(hom.image[src_action.apply(γ, g)] == tgt_action.apply(γ, hom.image[g])
               for γ in gamma.elements() for g in hom.source.elements())


def check_central_extension(ext: CentralExtensionData) -> AuditReport:
    """Validate injectivity, surjectivity, exactness, centrality,
    gamma-equivariance of both maps, and beta∘section = id."""
    violations = []
    checked = 0
    A, B, C = ext.A, ext.B, ext.C
    if ext.alpha.source != A.group or ext.alpha.target != B.group:
        raise ValidationError("alpha endpoints do not match A, B")
    if ext.beta.source != B.group or ext.beta.target != C.group:
        raise ValidationError("beta endpoints do not match B, C")
    if not (A.gamma == B.gamma == C.gamma):
        raise ValidationError("A, B, C are not groups over the same gamma")
    for rep, label in ((hom_violations(ext.alpha), "alpha"),
                       (hom_violations(ext.beta), "beta")):
        checked += rep.checked
        violations += [f"{label}: {v}" for v in rep.violations]
    if violations:
        return AuditReport(checked, tuple(violations))
    if not ext.alpha.is_injective:
        violations.append("alpha not injective")
    if not ext.beta.is_surjective:
        violations.append("beta not surjective")
    if frozenset(ext.alpha.image) != frozenset(ext.beta.kernel()):
        violations.append("image of alpha differs from kernel of beta")
    for a in A.group.elements():
        img = ext.alpha.image[a]
        for b in B.group.elements():
            checked += 1
            if B.group.mul(img, b) != B.group.mul(b, img):
                violations.append(f"alpha({a}) is not central in B")
                break
    if not is_equivariant(ext.alpha, A.action, B.action):
        violations.append("alpha is not gamma-equivariant")
    if not is_equivariant(ext.beta, B.action, C.action):
        violations.append("beta is not gamma-equivariant")
    checked += 2 * A.gamma.order
    if len(ext.section) != C.group.order:
        violations.append("section has wrong length")
    else:
        for c in C.group.elements():
            checked += 1
            if ext.beta.image[ext.section[c]] != c:
                violations.append(f"beta∘section differs from id at {c}")
    return AuditReport(checked, tuple(violations))
