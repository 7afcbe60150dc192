"""Cohomology of the twisted complex as explicit finite abelian groups.

The degree-p group is ker(d^p)/im(d^{p-1}).  Cochain groups are
coordinatized through the invariant-factor presentation of the
coefficient group; the kernel is computed as an integer lattice, the
image (together with the coordinate moduli) as a relation sublattice,
and the quotient read off a Smith normal form.  Everything is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .cochains import Cochain, coboundary, map_coefficients, twisted_pullback
from .groups import (AbelianPresentation, CentralExtensionData, FiniteGammaGroup,
                     abelian_presentation)
from .simplicial import Refinement, Scenario, face_index, refine_scenario
from .validation import AuditReport, NonAbelianError, ValidationError
from .snf import Lattice, kernel_basis, lattice_solve, matvec, smith_normal_form

DEFAULT_COHOMOLOGY_BOUND = 3


def presentation_of(scenario: Scenario, coeff: FiniteGammaGroup) -> AbelianPresentation:
    cache = scenario._caches.setdefault("presentation", {})
    key = id(coeff)
    if key not in cache:
        cache[key] = abelian_presentation(coeff.group)
    return cache[key]


def cochain_coords(phi: Cochain, pres: AbelianPresentation | None = None) -> list[int]:
    """Integer coordinates of a cochain: presentation coordinates per cell,
    in census order."""
    pres = pres or presentation_of(phi.scenario, phi.coeff)
    out = []
    for v in phi.value_list():
        out.extend(pres.encode(v))
    return out


def cochain_from_coords(scenario: Scenario, coeff: FiniteGammaGroup, degree: int,
                        coords, pres: AbelianPresentation | None = None) -> Cochain:
    pres = pres or presentation_of(scenario, coeff)
    k = pres.rank
    keys = scenario.keys(degree)
    values = {}
    for n, key in enumerate(keys):
        values[key] = pres.decode(tuple(coords[n * k + j] for j in range(k)))
    return Cochain(scenario, coeff, degree, values)


@dataclass(frozen=True)
class HomPresentation:
    """An additive map between products of cyclic groups, as an integer
    matrix with entries reduced modulo the target moduli."""

    src_moduli: tuple[int, ...]
    tgt_moduli: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def apply(self, vec) -> list[int]:
        return [sum(row[j] * vec[j] for j in range(len(vec))) % m
                for row, m in zip(self.matrix, self.tgt_moduli)]

    def kills(self, vec) -> bool:
        return all(v == 0 for v in self.apply(vec))


def linearize_coboundary(scenario: Scenario, p: int,
                         coeff: FiniteGammaGroup | None = None) -> HomPresentation:
    """The coboundary matrix from degree p to degree p+1 in presentation
    coordinates.  Cached per (degree, coefficients)."""
    coeff = coeff or scenario.coeff
    if not coeff.is_abelian:
        raise NonAbelianError("linearization needs abelian coefficients")
    cache = scenario._caches.setdefault("linearize", {})
    ck = (p, id(coeff))
    if ck in cache:
        return cache[ck]
    pres = presentation_of(scenario, coeff)
    k = pres.rank
    group = coeff.group
    src_pos = scenario.key_positions(p)
    tgt_keys = scenario.keys(p + 1)
    n_src, n_tgt = len(src_pos) * k, len(tgt_keys) * k
    src_moduli = tuple(pres.factors[j] for _ in src_pos for j in range(k))
    tgt_moduli = tuple(pres.factors[j] for _ in tgt_keys for j in range(k))
    rows = [[0] * n_src for _ in range(n_tgt)]
    # coordinate matrix of each twisting automorphism
    perm_blocks = {}
    for γ in scenario.gamma.elements():
        perm = coeff.action.perms[γ]
        block = [[0] * k for _ in range(k)]
        for j in range(k):
            col = pres.encode(perm[pres.decode(tuple(1 if t == j else 0 for t in range(k)))])
            for i in range(k):
                block[i][j] = col[i]
        perm_blocks[γ] = block
    ident_block = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    for i in range(p + 2):
        sign = -1 if i % 2 else 1
        for t, (index, gammas) in enumerate(tgt_keys):
            src = src_pos[(face_index(i, index), scenario.face_gammas(i, gammas))]
            block = perm_blocks[gammas[0]] if i == 0 else ident_block
            for r in range(k):
                row = rows[t * k + r]
                for c in range(k):
                    if block[r][c]:
                        row[src * k + c] += sign * block[r][c]
    matrix = tuple(tuple(v % m for v in row) for row, m in zip(rows, tgt_moduli))
    out = HomPresentation(src_moduli, tgt_moduli, matrix)
    cache[ck] = out
    return out


@dataclass(eq=False)
class CohomologyGroup:
    """H^p as an invariant-factor decomposition with generator cocycles and
    a deterministic class-reduction map."""

    scenario: Scenario
    coeff: FiniteGammaGroup
    degree: int
    factors: tuple[int, ...]
    generators: tuple[Cochain, ...]
    _pres: AbelianPresentation
    _dmat: HomPresentation
    _lattice: Lattice
    _U: list
    _diag: list
    _kept: list
    _gen_vectors: list

    @property
    def size(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.factors)

    def elements(self):
        return itertools.product(*(range(f) for f in self.factors))

    def is_cocycle(self, phi: Cochain) -> bool:
        return self._dmat.kills(cochain_coords(phi, self._pres))

    def reduce(self, phi: Cochain) -> tuple[int, ...]:
        """Factor coordinates of a cocycle's class; rejects non-cocycles."""
        if phi.scenario is not self.scenario or phi.degree != self.degree \
                or phi.coeff != self.coeff:
            raise ValidationError("cochain does not live in this cohomology group")
        v = cochain_coords(phi, self._pres)
        if not self._dmat.kills(v):
            raise ValidationError("not a cocycle: coboundary is nonzero")
        c = self._lattice.coords(v)
        if c is None:
            raise ValidationError("internal error: cocycle outside the kernel lattice")
        cp = matvec(self._U, c)
        return tuple(cp[i] % self._diag[i] for i in self._kept)

    def class_cochain(self, coords) -> Cochain:
        """A representative cocycle with the given factor coordinates."""
        if len(coords) != len(self.factors):
            raise ValidationError("coordinate length does not match the factors")
        dim = len(self.scenario.keys(self.degree)) * self._pres.rank
        vec = [0] * dim
        for c, g in zip(coords, self._gen_vectors):
            if c:
                for i in range(dim):
                    vec[i] += c * g[i]
        return cochain_from_coords(self.scenario, self.coeff, self.degree, vec, self._pres)


def cohomology(scenario: Scenario, p: int,
               coeff: FiniteGammaGroup | None = None,
               bound: int = DEFAULT_COHOMOLOGY_BOUND) -> CohomologyGroup:
    """Compute H^p over the given coefficients (defaults to the scenario's)."""
    coeff = coeff or scenario.coeff
    if p < 0:
        raise ValidationError("degree must be nonnegative")
    if p > bound:
        raise ValidationError(f"degree {p} exceeds the cohomology bound {bound}")
    cache = scenario._caches.setdefault("cohomology", {})
    ck = (p, id(coeff))
    if ck in cache:
        return cache[ck]
    pres = presentation_of(scenario, coeff)
    D = linearize_coboundary(scenario, p, coeff)
    n = len(D.src_moduli)
    nt = len(D.tgt_moduli)
    # kernel lattice of the finite-group map: v with D v == 0 mod target moduli
    stacked = [list(D.matrix[r]) + [D.tgt_moduli[r] if c == r else 0 for c in range(nt)]
               for r in range(nt)]
    gens = [vec[:n] for vec in kernel_basis(stacked)]
    lattice = Lattice(gens, n)
    if lattice.rank != n:
        raise ValidationError("internal error: kernel lattice is not full rank")
    relations = []
    if p >= 1:
        Dprev = linearize_coboundary(scenario, p - 1, coeff)
        for j in range(len(Dprev.src_moduli)):
            relations.append([Dprev.matrix[r][j] for r in range(n)])
    for j in range(n):
        col = [0] * n
        col[j] = D.src_moduli[j]
        relations.append(col)
    Y = [[0] * len(relations) for _ in range(n)]
    for j, rel in enumerate(relations):
        c = lattice.coords(rel)
        if c is None:
            raise ValidationError("internal error: relation outside the kernel lattice")
        for i in range(n):
            Y[i][j] = c[i]
    S, U, Uinv, _ = smith_normal_form(Y)
    diag = [S[i][i] for i in range(n)]
    if any(d == 0 for d in diag):
        raise ValidationError("internal error: cohomology is not finite")
    kept = [i for i in range(n) if diag[i] != 1]
    factors = tuple(diag[i] for i in kept)
    basis = lattice.basis
    gen_vectors = []
    for i in kept:
        vec = [0] * n
        for b in range(n):
            coeff_b = Uinv[b][i]
            if coeff_b:
                col = basis[b]
                for r in range(n):
                    vec[r] += coeff_b * col[r]
        gen_vectors.append([v % m for v, m in zip(vec, D.src_moduli)])
    generators = tuple(cochain_from_coords(scenario, coeff, p, g, pres)
                       for g in gen_vectors)
    H = CohomologyGroup(scenario, coeff, p, factors, generators,
                        pres, D, lattice, U, diag, kept, gen_vectors)
    cache[ck] = H
    return H


def class_of(phi: Cochain, H: CohomologyGroup) -> tuple[int, ...]:
    return H.reduce(phi)


def solve_coboundary_equation(scenario: Scenario, coeff: FiniteGammaGroup, p: int,
                              target: Cochain) -> Cochain | None:
    """A degree-p cochain whose coboundary is ``target`` (degree p+1), or
    None when the equation has no solution (abelian coefficients)."""
    if target.degree != p + 1 or target.coeff != coeff:
        raise ValidationError("target must be a degree-(p+1) cochain over the coefficients")
    D = linearize_coboundary(scenario, p, coeff)
    n = len(D.src_moduli)
    nt = len(D.tgt_moduli)
    stacked = [list(D.matrix[r]) + [D.tgt_moduli[r] if c == r else 0 for c in range(nt)]
               for r in range(nt)]
    sol = lattice_solve(stacked, cochain_coords(target))
    if sol is None:
        return None
    coords = [v % m for v, m in zip(sol[:n], D.src_moduli)]
    return cochain_from_coords(scenario, coeff, p, coords)


@dataclass(frozen=True)
class CohomologyClass:
    """A class in a computed cohomology group, as factor coordinates."""

    group: CohomologyGroup
    coords: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def connecting_abelian(scenario: Scenario, ext: CentralExtensionData, p: int,
                       phi: Cochain) -> CohomologyClass:
    """The long-exact-sequence connecting map for an abelian extension:
    lift the C-cocycle through the section, take its coboundary in B, pull
    the result back through alpha, and reduce in H^{p+1}(A)."""
    if not ext.B.is_abelian:
        raise NonAbelianError("connecting_abelian needs an abelian extension")
    if phi.coeff != ext.C:
        raise ValidationError("cocycle coefficients are not the extension's C")
    Hc = cohomology(scenario, p, ext.C)
    if not Hc.is_cocycle(phi):
        raise ValidationError("not a cocycle: coboundary is nonzero")
    lift = Cochain(scenario, ext.B, p,
                   {k: ext.section[v] for k, v in phi.values.items()})
    nu = coboundary(lift)
    e_c = ext.C.group.identity
    if any(ext.beta.image[v] != e_c for v in nu.values.values()):
        raise ValidationError("internal error: defect does not land in ker(beta)")
    pulled = Cochain(scenario, ext.A, p + 1,
                     {k: ext.alpha_preimage[v] for k, v in nu.values.items()})
    Ha = cohomology(scenario, p + 1, ext.A)
    return CohomologyClass(Ha, Ha.reduce(pulled))


def induced_map(H_src: CohomologyGroup, H_tgt: CohomologyGroup, image_coords):
    """Linear extension of generator images to a map on factor coordinates."""
    def apply(coords):
        out = [0] * len(H_tgt.factors)
        for c, img in zip(coords, image_coords):
            for i, v in enumerate(img):
                out[i] += c * v
        return tuple(v % f for v, f in zip(out, H_tgt.factors))
    return apply


def les_exactness_check(scenario: Scenario, ext: CentralExtensionData,
                        pmax: int = 2) -> AuditReport:
    """Verify im = ker at every long-exact-sequence node up to degree pmax
    by explicit enumeration of the finite cohomology groups."""
    if not ext.B.is_abelian:
        raise NonAbelianError("les_exactness_check needs an abelian extension")
    violations = []
    checked = 0
    Ha = {p: cohomology(scenario, p, ext.A) for p in range(pmax + 2)}
    Hb = {p: cohomology(scenario, p, ext.B) for p in range(pmax + 1)}
    Hc = {p: cohomology(scenario, p, ext.C) for p in range(pmax + 1)}

    def hom_map(H_src, H_tgt, hom, target_gg):
        imgs = [H_tgt.reduce(map_coefficients(g, hom, target_gg))
                for g in H_src.generators]
        return induced_map(H_src, H_tgt, imgs)

    def delta_map(p):
        imgs = [connecting_abelian(scenario, ext, p, g).coords
                for g in Hc[p].generators]
        return induced_map(Hc[p], Ha[p + 1], imgs)

    al = {p: hom_map(Ha[p], Hb[p], ext.alpha, ext.B) for p in range(pmax + 1)}
    be = {p: hom_map(Hb[p], Hc[p], ext.beta, ext.C) for p in range(pmax + 1)}
    de = {p: delta_map(p) for p in range(pmax + 1)}

    for p in range(pmax + 1):
        # node H^p(A): ker(alpha_p) vs im(Delta_{p-1}) (zero for p = 0)
        kernel = {c for c in Ha[p].elements() if all(v == 0 for v in al[p](c))}
        image = ({de[p - 1](c) for c in Hc[p - 1].elements()} if p >= 1
                 else {Ha[p].zero})
        checked += Ha[p].size
        if image != kernel:
            violations.append(f"exactness fails at H{p}(A): "
                              f"|im|={len(image)}, |ker|={len(kernel)}")
        # node H^p(B): ker(beta_p) vs im(alpha_p)
        kernel = {c for c in Hb[p].elements() if all(v == 0 for v in be[p](c))}
        image = {al[p](c) for c in Ha[p].elements()}
        checked += Hb[p].size
        if image != kernel:
            violations.append(f"exactness fails at H{p}(B): "
                              f"|im|={len(image)}, |ker|={len(kernel)}")
        # node H^p(C): ker(Delta_p) vs im(beta_p)
        kernel = {c for c in Hc[p].elements() if all(v == 0 for v in de[p](c))}
        image = {be[p](c) for c in Hb[p].elements()}
        checked += Hc[p].size
        if image != kernel:
            violations.append(f"exactness fails at H{p}(C): "
                              f"|im|={len(image)}, |ker|={len(kernel)}")
    return AuditReport(checked, tuple(violations))


def refinement_action_check(scenario: Scenario, ref_r: Refinement,
                            ref_s: Refinement, p: int,
                            coeff: FiniteGammaGroup | None = None) -> AuditReport:
    """Check that two refining maps induce the same map on H^p: for every
    generator, the two restrictions are cohomologous over the fine cover."""
    from .cochains import restrict
    coeff = coeff or scenario.coeff
    H = cohomology(scenario, p, coeff)
    fine = refine_scenario(scenario, ref_r)
    if refine_scenario(scenario, ref_s) is not fine:
        raise ValidationError("refining maps must share one fine cover")
    Hv = cohomology(fine, p, coeff)
    violations = []
    for n, gen in enumerate(H.generators):
        cr = Hv.reduce(restrict(gen, ref_r))
        cs = Hv.reduce(restrict(gen, ref_s))
        if cr != cs:
            violations.append(
                f"generator {n} of H{p} maps to {cr} under r but {cs} under s")
    return AuditReport(len(H.generators), tuple(violations))
