"""Scenario files: a JSON schema describing gamma, the space, the cover,
named coefficient gamma-groups, and optional cocycles, central extensions
and refinements.  Parsing is eager and strict: every module validator
runs, unknown keys are rejected, and all failures carry the dotted path
of the offending field.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .cochains import Cochain
from .groups import (FiniteGammaGroup, FiniteGroup, GammaAction, GroupHom,
                     central_extension, check_gamma_group, group_axiom_violations,
                     hom_violations)
from .simplicial import (Cover, GammaSpace, Refinement, Scenario, action_violations,
                         cover_violations, refinement_violations)
from .transition import TransitionCocycle, tc0_violations, tc1_violations
from .validation import ScenarioError, ValidationError

SCHEMA_VERSION = 1

_TOP_KEYS = {"schema", "name", "gamma", "space", "cover", "coefficients",
             "default_coefficients", "cocycles", "extensions", "refinements"}


def _require(obj, path: str, keys: set[str], required: set[str]):
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    unknown = set(obj) - keys
    if unknown:
        raise ScenarioError(path, f"unknown keys: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(path, f"missing keys: {sorted(missing)}")


def _parse_group(spec, path: str, name: str) -> FiniteGroup:
    _require(spec, path, {"cyclic", "table", "labels"}, set())
    if "cyclic" in spec:
        if "table" in spec:
            raise ScenarioError(path, "give either 'cyclic' or 'table', not both")
        n = spec["cyclic"]
        if not isinstance(n, int) or n < 1:
            raise ScenarioError(path + ".cyclic", "order must be a positive integer")
        labels = tuple(str(i) for i in range(n))
        table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        group = FiniteGroup(table, labels, name)
    elif "table" in spec:
        table = spec["table"]
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise ScenarioError(path + ".table", "expected a list of rows")
        labels = spec.get("labels")
        if labels is not None:
            if (not isinstance(labels, list)
                    or len(labels) != len(table)
                    or len(set(labels)) != len(labels)):
                raise ScenarioError(path + ".labels", "labels must be distinct, one per element")
            labels = tuple(str(v) for v in labels)
        group = FiniteGroup(tuple(tuple(r) for r in table), labels, name)
    else:
        raise ScenarioError(path, "give 'cyclic' or 'table'")
    rep = group_axiom_violations(group)
    if not rep.ok:
        raise ScenarioError(path, "not a group: " + "; ".join(rep.violations[:3]))
    return group


def _label_index(group: FiniteGroup, value, path: str) -> int:
    if isinstance(value, int):
        if not 0 <= value < group.order:
            raise ScenarioError(path, f"element index {value} out of range")
        return value
    if isinstance(value, str):
        if group.labels and value in group.labels:
            return group.labels.index(value)
        raise ScenarioError(path, f"unknown element label {value!r}")
    raise ScenarioError(path, "element must be an index or a label")


def _complete_action(gamma: FiniteGroup, given: dict, width: int, path: str):
    """Extend per-element permutations from a generating set to all of gamma
    by closing under products; conflicts and gaps are errors.  An empty
    table means the trivial action."""
    if not given:
        ident = tuple(range(width))
        return tuple(ident for _ in gamma.elements())
    known: dict[int, tuple[int, ...]] = {gamma.identity: tuple(range(width))}
    for label, perm in given.items():
        γ = _label_index(gamma, label, f"{path}.{label}")
        if (not isinstance(perm, list) or len(perm) != width
                or sorted(perm) != list(range(width))):
            raise ScenarioError(f"{path}.{label}",
                                f"expected a permutation of 0..{width - 1}")
        perm = tuple(perm)
        if γ in known and known[γ] != perm:
            raise ScenarioError(f"{path}.{label}", "conflicting permutation for this element")
        known[γ] = perm
    changed = True
    while changed:
        changed = False
        for γ1, p1 in list(known.items()):
            for γ2, p2 in list(known.items()):
                γ3 = gamma.mul(γ1, γ2)
                composed = tuple(p1[p2[x]] for x in range(width))
                if γ3 not in known:
                    known[γ3] = composed
                    changed = True
                elif known[γ3] != composed:
                    raise ScenarioError(path, "permutations are inconsistent with "
                                        f"the group law at ({gamma.label(γ1)},"
                                        f"{gamma.label(γ2)})")
    if len(known) != gamma.order:
        missing = [gamma.label(γ) for γ in gamma.elements() if γ not in known]
        raise ScenarioError(path, f"action underdetermined; missing elements {missing} "
                            "(give permutations for a generating set)")
    return tuple(known[γ] for γ in gamma.elements())


def parse_scenario_data(data, source: str = "<memory>") -> Scenario:
    _require(data, "", _TOP_KEYS, {"schema", "gamma", "space", "cover", "coefficients"})
    if data["schema"] != SCHEMA_VERSION:
        raise ScenarioError("schema", f"unsupported schema version {data['schema']!r}")
    gamma = _parse_group(data["gamma"], "gamma", "gamma")

    _require(data["space"], "space", {"points", "action"}, {"points"})
    m = data["space"]["points"]
    if not isinstance(m, int) or m < 1:
        raise ScenarioError("space.points", "need a positive number of points")
    perms = _complete_action(gamma, data["space"].get("action", {}), m, "space.action")
    space = GammaSpace(m, perms)
    rep = action_violations(gamma, space)
    if not rep.ok:
        raise ScenarioError("space.action", "; ".join(rep.violations[:3]))

    cover_spec = data["cover"]
    if not isinstance(cover_spec, dict) or not cover_spec:
        raise ScenarioError("cover", "expected a nonempty object of named point lists")
    names = tuple(cover_spec.keys())
    sets = []
    for name in names:
        pts = cover_spec[name]
        if (not isinstance(pts, list) or not pts
                or any(not isinstance(x, int) for x in pts)):
            raise ScenarioError(f"cover.{name}", "expected a nonempty list of point indices")
        if len(set(pts)) != len(pts):
            raise ScenarioError(f"cover.{name}", "duplicate points")
        sets.append(frozenset(pts))
    cover = Cover(names, tuple(sets))
    rep = cover_violations(space, cover)
    if not rep.ok:
        raise ScenarioError("cover", "; ".join(rep.violations[:3]))

    coefficients: dict[str, FiniteGammaGroup] = {}
    for cname, cspec in data["coefficients"].items():
        cpath = f"coefficients.{cname}"
        _require(cspec, cpath, {"group", "action"}, {"group"})
        group = _parse_group(cspec["group"], cpath + ".group", cname)
        aperms = _complete_action(gamma, cspec.get("action", {}), group.order,
                                  cpath + ".action")
        action = GammaAction(gamma, group, aperms)
        rep = check_gamma_group(gamma, group, action)
        if not rep.ok:
            raise ScenarioError(cpath, "; ".join(rep.violations[:3]))
        coefficients[cname] = FiniteGammaGroup(group, action)
    default = data.get("default_coefficients")
    if default is None:
        if len(coefficients) == 1:
            default = next(iter(coefficients))
        else:
            raise ScenarioError("default_coefficients",
                                "required when several coefficient groups are named")
    if default not in coefficients:
        raise ScenarioError("default_coefficients", f"unknown coefficients {default!r}")

    scenario = Scenario(gamma, space, cover, coefficients, default,
                        name=data.get("name", Path(source).stem))

    for ename, espec in data.get("extensions", {}).items():
        epath = f"extensions.{ename}"
        _require(espec, epath, {"A", "B", "C", "alpha", "beta"},
                 {"A", "B", "C", "alpha", "beta"})
        try:
            A, B, C = (coefficients[espec[k]] for k in "ABC")
        except KeyError as exc:
            raise ScenarioError(epath, f"unknown coefficients {exc.args[0]!r}") from None
        alpha = GroupHom(A.group, B.group, tuple(
            _label_index(B.group, v, epath + ".alpha") for v in espec["alpha"]))
        beta = GroupHom(B.group, C.group, tuple(
            _label_index(C.group, v, epath + ".beta") for v in espec["beta"]))
        for hom, hname in ((alpha, "alpha"), (beta, "beta")):
            if len(hom.image) != hom.source.order:
                raise ScenarioError(f"{epath}.{hname}", "one image entry per source element")
            rep = hom_violations(hom)
            if not rep.ok:
                raise ScenarioError(f"{epath}.{hname}", "; ".join(rep.violations[:3]))
        try:
            scenario.extensions[ename] = central_extension(A, B, C, alpha, beta)
        except ValidationError as exc:
            raise ScenarioError(epath, str(exc)) from None

    for rname, rspec in data.get("refinements", {}).items():
        rpath = f"refinements.{rname}"
        _require(rspec, rpath, {"cover", "maps"}, {"cover", "maps"})
        fnames = tuple(rspec["cover"].keys())
        fsets = []
        for fname in fnames:
            pts = rspec["cover"][fname]
            if not isinstance(pts, list) or not pts:
                raise ScenarioError(f"{rpath}.cover.{fname}", "expected a nonempty point list")
            fsets.append(frozenset(pts))
        fine = Cover(fnames, tuple(fsets))
        maps = {}
        for mname, mspec in rspec["maps"].items():
            mpath = f"{rpath}.maps.{mname}"
            if set(mspec) != set(fnames):
                raise ScenarioError(mpath, "must assign every fine set")
            assignment = []
            for fname in fnames:
                target = mspec[fname]
                if target not in names:
                    raise ScenarioError(f"{mpath}.{fname}", f"unknown cover set {target!r}")
                assignment.append(names.index(target))
            ref = Refinement(fine, tuple(assignment))
            rep = refinement_violations(scenario, ref)
            if not rep.ok:
                raise ScenarioError(mpath, "; ".join(rep.violations[:3]))
            maps[mname] = ref
        scenario.refinements[rname] = maps

    for kname, kspec in data.get("cocycles", {}).items():
        kpath = f"cocycles.{kname}"
        _require(kspec, kpath, {"coefficients", "degree", "values"}, {"degree"})
        cname = kspec.get("coefficients", default)
        if cname not in coefficients:
            raise ScenarioError(kpath + ".coefficients", f"unknown coefficients {cname!r}")
        coeff = coefficients[cname]
        degree = kspec["degree"]
        if degree not in (0, 1):
            raise ScenarioError(kpath + ".degree", "cocycle degree must be 0 or 1")
        values = {k: coeff.group.identity for k in scenario.keys(degree)}
        seen = set()
        for n, entry in enumerate(kspec.get("values", [])):
            vpath = f"{kpath}.values[{n}]"
            _require(entry, vpath, {"sets", "gammas", "value"}, {"sets", "value"})
            snames = entry["sets"]
            if (not isinstance(snames, list) or len(snames) != degree + 1
                    or any(s not in names for s in snames)):
                raise ScenarioError(vpath + ".sets",
                                    f"expected {degree + 1} known cover set names")
            index = tuple(names.index(s) for s in snames)
            glabels = entry.get("gammas", [])
            if not isinstance(glabels, list) or len(glabels) != degree:
                raise ScenarioError(vpath + ".gammas", f"expected {degree} gamma entries")
            gammas = tuple(_label_index(gamma, g, vpath + ".gammas") for g in glabels)
            key = (index, gammas)
            if key not in values:
                raise ScenarioError(vpath, f"cell {snames} with gammas {glabels} "
                                    "is empty (not an admissible cell)")
            if key in seen:
                raise ScenarioError(vpath, "duplicate entry for this cell")
            seen.add(key)
            values[key] = _label_index(coeff.group, entry["value"], vpath + ".value")
        phi = Cochain(scenario, coeff, degree, values)
        bad = tc1_violations(phi) if degree == 1 else tc0_violations(phi)
        if bad:
            raise ScenarioError(kpath, "not a cocycle: " + "; ".join(bad[:3]))
        scenario.cocycles[kname] = TransitionCocycle(phi) if degree == 1 else phi
    return scenario


def parse_scenario(path) -> Scenario:
    """Load, validate, and assemble a scenario from a JSON file."""
    p = Path(path)
    if not p.exists():
        raise ScenarioError("", f"scenario file {str(p)!r} does not exist")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"invalid JSON: {exc}") from None
    return parse_scenario_data(data, source=str(p))


def scenario_digest(path) -> str:
    """Digest of the canonicalized scenario document."""
    data = json.loads(Path(path).read_text())
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def cochain_entries(phi: Cochain) -> list[dict]:
    """Sparse serialization: the non-identity values, in census order,
    in the same shape the parser accepts."""
    scenario = phi.scenario
    names = scenario.cover.names
    gamma = scenario.gamma
    e = phi.coeff.group.identity
    out = []
    for (index, gammas), v in ((k, phi.values[k]) for k in scenario.keys(phi.degree)):
        if v == e:
            continue
        out.append({"sets": [names[a] for a in index],
                    "gammas": [gamma.label(γ) for γ in gammas],
                    "value": phi.coeff.group.label(v)})
    return out
