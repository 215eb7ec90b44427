"""Finite transporter systems: validation, quotients and extensions.

Morphism sets are finite labelled sets.  A morphism records its source and
target objects, its image under rho (images of the source's generators) and,
when it comes from S, the element g with ``eps(g)`` equal to it.
Composition is an explicit table ``(a, b) -> a o b``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

from .fusion import FusionSystem
from .groups import (
    FiniteGroup,
    GroupHom,
    PreconditionError,
    Subgroup,
    centralizer,
    enumerate_subgroups,
    find_isomorphism,
    injective_homs,
    is_power_of,
    matrix_group,
    normalizer,
    permutation_group,
    sylow_subgroup,
)
from .saturation import (
    AxiomResult,
    SaturationReport,
    _jsonable,
    _tupled,
    encode_element,
    encode_hom,
    encode_subgroup,
)

VACUOUS = "vacuous at truncation: finite object sets have no infinite ascending chains"


@dataclass
class Morphism:
    source: int
    target: int
    rho: tuple[int, ...]
    eps: int | None = None


class TransporterData:
    """Objects, labelled morphisms, composition table and the structure maps eps and rho."""

    def __init__(self, S: Subgroup, objects, morphisms, comp: dict, F: FusionSystem | None = None,
                 name: str = "", p: int | None = None, meta: dict | None = None):
        self.S = S
        self.group = S.group
        self.objects: list[Subgroup] = list(objects)
        self.obj_index = {P.elements: i for i, P in enumerate(self.objects)}
        self.morphisms: list[Morphism] = list(morphisms)
        self.comp = comp
        self.name = name
        self.meta = dict(meta or {})
        self.mor: dict[tuple[int, int], list[int]] = {}
        self.eps_map: dict[tuple[int, int, int], int] = {}
        for k, m in enumerate(self.morphisms):
            self.mor.setdefault((m.source, m.target), []).append(k)
            if m.eps is not None:
                self.eps_map[(m.source, m.target, m.eps)] = k
        if F is None:
            F = FusionSystem(S, self._rho_generators(), name=name or "F(T)", p=p)
        self.F = F
        self.p = F.p

    def __repr__(self) -> str:
        return f"TransporterData({self.name!r}, objects={len(self.objects)}, morphisms={len(self.morphisms)})"

    def _rho_generators(self) -> list[GroupHom]:
        out = []
        for m in self.morphisms:
            P = self.objects[m.source]
            h = GroupHom(P, self.S, m.rho)
            if not h.is_identity():
                out.append(h)
        return out

    def morphisms_between(self, i: int, j: int) -> list[int]:
        return self.mor.get((i, j), [])

    def identity(self, i: int) -> int:
        return self.eps_map[(i, i, self.group.identity)]

    def rho_hom(self, k: int) -> GroupHom:
        m = self.morphisms[k]
        return GroupHom(self.objects[m.source], self.objects[m.target], m.rho)

    def kernel(self, i: int) -> list[int]:
        """``E(P)``: automorphisms of the object that rho sends to the identity."""
        P = self.objects[i]
        return [k for k in self.morphisms_between(i, i) if self.morphisms[k].rho == P.gens]

    def sizes(self) -> dict[tuple[int, int], int]:
        return {key: len(v) for key, v in sorted(self.mor.items())}

    # JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        G = self.group
        return {
            "name": self.name,
            "p": self.p,
            "group": encode_group(G),
            "S": encode_subgroup(self.S),
            "objects": [[encode_element(G, a) for a in P.key] for P in self.objects],
            "morphisms": [_morphism_json(G, m) for m in self.morphisms],
            "composition": [[a, b, c] for (a, b), c in sorted(self.comp.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "TransporterData":
        G = decode_group(doc["group"])
        dec = _decoder(G)
        S = G.subgroup(dec(x) for x in doc["S"])
        objects = [Subgroup(G, frozenset(dec(x) for x in obj)) for obj in doc["objects"]]
        morphs = []
        for m in doc["morphisms"]:
            eps = m.get("eps_preimage")
            morphs.append(Morphism(int(m["source"]), int(m["target"]),
                                   tuple(dec(x) for x in m["rho"]),
                                   None if eps is None else dec(eps)))
        comp = {(int(a), int(b)): int(c) for a, b, c in doc["composition"]}
        return cls(S, objects, morphs, comp, name=doc.get("name", ""), p=doc.get("p"))


def _morphism_json(G, m: Morphism) -> dict:
    d = {"source": m.source, "target": m.target, "rho": [encode_element(G, y) for y in m.rho]}
    if m.eps is not None:
        d["eps_preimage"] = encode_element(G, m.eps)
    return d


def _decoder(G):
    def dec(x):
        lab = _tupled(x)
        if lab not in G.index:
            raise PreconditionError(f"unknown element encoding {x!r}")
        return G.index[lab]
    return dec


def encode_group(G: FiniteGroup) -> dict:
    """Permutation and matrix groups are stored by generators, anything else by its table."""
    kind = getattr(G, "kind", None)
    if kind:
        return dict(kind)
    return {"kind": "table", "name": G.name, "labels": [_jsonable(lab) for lab in G.labels],
            "table": G.table, "identity": G.identity}


def decode_group(doc: dict) -> FiniteGroup:
    kind = doc.get("kind")
    if kind == "permutation":
        G = permutation_group(doc["generators"], name=doc.get("name", ""))
    elif kind == "matrix":
        G = matrix_group(doc["generators"], int(doc["modulus"]), name=doc.get("name", ""))
    elif kind == "table":
        t = doc["table"]
        labels = [_tupled(x) for x in doc.get("labels", range(len(t)))]
        idx = {lab: i for i, lab in enumerate(labels)}
        G = FiniteGroup(labels, lambda a, b: labels[t[idx[a]][idx[b]]], labels[int(doc["identity"])],
                        name=doc.get("name", ""))
        return G
    else:
        raise PreconditionError(f"unknown group kind {kind!r}")
    G.kind = dict(doc)
    return G


# construction from a finite group ----------------------------------------------------


def transporter_category(G: FiniteGroup, S: Subgroup, objects=None, name: str = "",
                         p: int | None = None) -> TransporterData:
    """``T_Ob(G)``: morphisms P -> Q are the elements x of G with ``x P x^-1 <= Q``."""
    if objects is None:
        objects = enumerate_subgroups(S)
    objects = sorted(objects, key=lambda s: s.sort_key)
    morphs: list[Morphism] = []
    label: dict[tuple[int, int, int], int] = {}
    for i, P in enumerate(objects):
        for j, Q in enumerate(objects):
            if P.order > Q.order:
                continue
            for x in range(G.order):
                imgs = tuple(G.conj(x, a) for a in P.gens)
                if all(y in Q.elements for y in imgs):
                    label[(i, j, x)] = len(morphs)
                    morphs.append(Morphism(i, j, imgs, x if x in S.elements else None))
    elem = {k: key for key, k in label.items()}
    comp = {}
    for a, ma in enumerate(morphs):
        for b in range(len(morphs)):
            mb = morphs[b]
            if mb.target != ma.source:
                continue
            x = G.table[elem[a][2]][elem[b][2]]
            comp[(a, b)] = label[(mb.source, ma.target, x)]
    return TransporterData(S, objects, morphs, comp, name=name or f"T({G.name})", p=p)


def centric_objects(F: FusionSystem) -> list[Subgroup]:
    from .structure import is_centric
    return [P for P in F.subgroups() if is_centric(F, P)]


def harvest_generators(T: TransporterData) -> list[GroupHom]:
    """rho of every automorphism and morphism in T, as fusion generators over S."""
    return T._rho_generators()


def binary_octahedral_group() -> FiniteGroup:
    """Order-48 normalizer of a quaternion subgroup of SL2(7)."""
    i = ((0, 6), (1, 0))
    j = ((2, 3), (3, 5))
    Q8 = matrix_group([i, j], 7)
    SL = matrix_group([((1, 1), (0, 1)), ((1, 0), (1, 1))], 7, name="SL2(7)")
    q = SL.subgroup(SL.index[lab] for lab in Q8.labels)
    N = normalizer(q, within=SL.whole)
    gens = [SL.labels[g] for g in N.gens]
    G = matrix_group(gens, 7, name="binary_octahedral")
    if G.order != 48:
        raise PreconditionError("normalizer of Q8 in SL2(7) does not have order 48")
    return G


def sigma4_group() -> FiniteGroup:
    gens = [(1, 2, 3, 0), (1, 0, 2, 3)]
    return permutation_group(gens, name="Sym4")


def linking_fixture_from_group(G: FiniteGroup, p: int, name: str) -> TransporterData:
    """Transporter category of G on the centric subgroups of a Sylow subgroup."""
    S = sylow_subgroup(G, p)
    from .fusion import group_fusion
    F = group_fusion(G, S, p=p)
    return transporter_category(G, S, centric_objects(F), name=name, p=p)


FIXTURES = {
    "sigma4": "sigma4_linking.json",
    "binary_octahedral": "binary_octahedral_linking.json",
}


def build_fixture(name: str) -> TransporterData:
    """Recompute a shipped fixture from its finite group."""
    if name == "sigma4":
        return linking_fixture_from_group(sigma4_group(), 2, "sigma4")
    if name == "binary_octahedral":
        return linking_fixture_from_group(binary_octahedral_group(), 2, "binary_octahedral")
    raise PreconditionError(f"unknown fixture {name!r}")


def load_fixture(name: str) -> TransporterData:
    if name not in FIXTURES:
        raise PreconditionError(f"unknown fixture {name!r}")
    text = resources.files("fusionkit").joinpath("data").joinpath(FIXTURES[name]).read_text()
    return TransporterData.from_json(json.loads(text))


def corrupt_fixture(T: TransporterData) -> TransporterData:
    """Negative control: one morphism's rho label is moved to another fibre."""
    morphs = list(T.morphisms)
    for i in range(len(T.objects)):
        E = set(T.kernel(i))
        autos = T.morphisms_between(i, i)
        for k in autos:
            if k in E:
                continue
            morphs[k] = Morphism(i, i, T.objects[i].gens, morphs[k].eps)
            return TransporterData(T.S, T.objects, morphs, dict(T.comp), F=T.F,
                                   name=T.name + " (corrupted)", p=T.p)
    raise PreconditionError("no morphism to corrupt")


# validation ------------------------------------------------------------------


class ValidationReport(SaturationReport):
    pass


def _fail(tag: str, **w) -> AxiomResult:
    return AxiomResult(tag, False, w)


def _check_category(T: TransporterData) -> AxiomResult:
    M = T.morphisms
    for i in range(len(T.objects)):
        if (i, i, T.group.identity) not in T.eps_map:
            return _fail("category", object=i, clause="no identity morphism")
    for (a, b), c in T.comp.items():
        if M[b].target != M[a].source:
            return _fail("category", pair=[a, b], clause="composition of non-composable morphisms")
        if M[c].source != M[b].source or M[c].target != M[a].target:
            return _fail("category", pair=[a, b], clause="composite has the wrong source or target")
    for a, ma in enumerate(M):
        if T.comp.get((a, T.identity(ma.source))) != a or T.comp.get((T.identity(ma.target), a)) != a:
            return _fail("category", morphism=a, clause="identity law fails")
    # totality and associativity on composable triples
    for (j, _), outs in T.mor.items():
        for i in range(len(T.objects)):
            ins = T.mor.get((i, j), [])
            for a in outs:
                for b in ins:
                    if (a, b) not in T.comp:
                        return _fail("category", pair=[a, b], clause="composition table is not total")
    for (a, b), ab in T.comp.items():
        src = M[b].source
        for (i, j), cs in T.mor.items():
            if j != src:
                continue
            for c in cs:
                if T.comp[(ab, c)] != T.comp[(a, T.comp[(b, c)])]:
                    return _fail("category", triple=[a, b, c], clause="composition is not associative")
    return AxiomResult("category", True)


def _check_functors(T: TransporterData) -> AxiomResult:
    G = T.group
    M = T.morphisms
    for (a, b), c in T.comp.items():
        fa, fb = T.rho_hom(a).mapping, T.rho_hom(b).mapping
        P = T.objects[M[b].source]
        if tuple(fa[fb[g]] for g in P.gens) != M[c].rho:
            return _fail("functors", pair=[a, b], clause="rho does not respect composition")
        if M[a].eps is not None and M[b].eps is not None:
            if M[c].eps != G.table[M[a].eps][M[b].eps]:
                return _fail("functors", pair=[a, b], clause="eps does not respect composition")
    for k, m in enumerate(M):
        if not T.rho_hom(k).is_homomorphism():
            return _fail("functors", morphism=k, clause="rho value is not a homomorphism")
    return AxiomResult("functors", True)


def _check_a1(T: TransporterData) -> AxiomResult:
    F = T.F
    obs = {P.elements for P in T.objects}
    for P in T.objects:
        for Q in F.conjugacy_class(P):
            if Q.elements not in obs:
                return _fail("A1", object=encode_subgroup(P), clause="objects not closed under F-conjugacy",
                             missing=encode_subgroup(Q))
        for Q in F.subgroups():
            if P.elements <= Q.elements and Q.elements not in obs:
                return _fail("A1", object=encode_subgroup(P), clause="objects not closed under overgroups",
                             missing=encode_subgroup(Q))
    for i, P in enumerate(T.objects):
        Pc = F.canonical(P)
        for j, Q in enumerate(T.objects):
            have = {T.morphisms[k].rho for k in T.morphisms_between(i, j)}
            want = set(F.hom_images(Pc, Q))
            if have != want:
                return _fail("A1", source=encode_subgroup(P), target=encode_subgroup(Q),
                             clause="rho is not onto Hom_F(P, Q)" if want - have
                             else "rho leaves Hom_F(P, Q)", sizes=[len(have), len(want)])
    return AxiomResult("A1", True)


def _check_a2(T: TransporterData) -> AxiomResult:
    for (i, j), labels in sorted(T.mor.items()):
        Ei, Ej = T.kernel(i), T.kernel(j)
        fibres: dict[tuple, set] = {}
        for k in labels:
            fibres.setdefault(T.morphisms[k].rho, set()).add(k)
        for k in labels:
            right = {T.comp[(k, e)] for e in Ei}
            if len(right) != len(Ei):
                return _fail("A2", morphism=k, clause="E(P) does not act freely by right composition")
            if right != fibres[T.morphisms[k].rho]:
                return _fail("A2", morphism=k, clause="rho is not the orbit map of the E(P)-action",
                             orbit=len(right), fibre=len(fibres[T.morphisms[k].rho]))
            left = {T.comp[(e, k)] for e in Ej}
            if len(left) != len(Ej):
                return _fail("A2", morphism=k, clause="E(Q) does not act freely by left composition")
    return AxiomResult("A2", True)


def _check_b(T: TransporterData) -> AxiomResult:
    G = T.group
    for i, P in enumerate(T.objects):
        for j, Q in enumerate(T.objects):
            seen = set()
            for g in T.S.elements:
                imgs = tuple(G.conj(g, a) for a in P.gens)
                if not all(y in Q.elements for y in imgs):
                    continue
                k = T.eps_map.get((i, j, g))
                if k is None:
                    return _fail("B", source=i, target=j, element=encode_element(G, g),
                                 clause="eps is not defined on N_S(P, Q)")
                if k in seen:
                    return _fail("B", source=i, target=j, clause="eps is not injective")
                seen.add(k)
                if T.morphisms[k].rho != imgs:
                    return _fail("B", source=i, target=j, element=encode_element(G, g),
                                 clause="rho(eps(g)) is not c_g")
    return AxiomResult("B", True)


def _check_c(T: TransporterData) -> AxiomResult:
    for k, m in enumerate(T.morphisms):
        P = T.objects[m.source]
        f = T.rho_hom(k).mapping
        for g in P.gens:
            lhs = T.comp[(k, T.eps_map[(m.source, m.source, g)])]
            rhs = T.comp[(T.eps_map[(m.target, m.target, f[g])], k)]
            if lhs != rhs:
                return _fail("C", morphism=k, element=encode_element(T.group, g),
                             clause="naturality square does not commute")
    return AxiomResult("C", True)


def _check_i(T: TransporterData) -> AxiomResult:
    F = T.F
    groups: dict[frozenset, list[int]] = {}
    for i, P in enumerate(T.objects):
        groups.setdefault(F.fusion_class(P).root.elements, []).append(i)
    for root, idx in sorted(groups.items(), key=lambda kv: kv[1]):
        ok = False
        for i in idx:
            aut = len(T.morphisms_between(i, i))
            n = normalizer(T.objects[i], within=T.S).order
            if aut % n == 0 and (aut // n) % T.p != 0:
                ok = True
                break
        if not ok:
            return _fail("I", object=encode_subgroup(T.objects[idx[0]]),
                         clause="no class member with eps(N_S(P)) Sylow in Aut_T(P)")
    return AxiomResult("I", True)


def _inverse_iso(T: TransporterData, k: int) -> int | None:
    m = T.morphisms[k]
    ident = T.identity(m.source)
    for c in T.morphisms_between(m.target, m.source):
        if T.comp[(c, k)] == ident:
            return c
    return None


def _check_ii(T: TransporterData) -> AxiomResult:
    G = T.group
    n_obj = len(T.objects)
    for (i, j), labels in sorted(T.mor.items()):
        P, Q = T.objects[i], T.objects[j]
        if P.order != Q.order:
            continue
        NQ = normalizer(Q, within=T.S)
        over = [t for t in range(n_obj) if P.elements <= T.objects[t].elements
                and normalizer(P, within=T.S).elements >= T.objects[t].elements]
        for k in labels:
            kinv = _inverse_iso(T, k)
            if kinv is None:
                continue
            for t in over:
                Pt = T.objects[t]
                # minimal target: eps_Q^-1 of phi eps_P(Pt) phi^-1
                need = set()
                ok = True
                for g in Pt.elements:
                    c = T.comp[(T.comp[(k, T.eps_map[(i, i, g)])], kinv)]
                    h = T.morphisms[c].eps
                    if h is None or h not in NQ.elements:
                        ok = False
                        break
                    need.add(h)
                if not ok:
                    continue
                Qt = Subgroup(G, G.closure(need | set(Q.elements)))
                u = T.obj_index.get(Qt.elements)
                if u is None:
                    continue
                inc_p = T.eps_map[(i, t, G.identity)]
                inc_q = T.eps_map[(j, u, G.identity)]
                target = T.comp[(inc_q, k)]
                if not any(T.comp[(c, inc_p)] == target for c in T.morphisms_between(t, u)):
                    return _fail("II", morphism=k, over=encode_subgroup(Pt), target=encode_subgroup(Qt),
                                 clause="isomorphism does not extend")
    return AxiomResult("II", True)


def validate_transporter(T: TransporterData) -> ValidationReport:
    t0 = time.perf_counter()
    rep = ValidationReport(system=T.name)
    cat = _check_category(T)
    rep.axioms.append(cat)
    if not cat.passed:
        rep.millis = int((time.perf_counter() - t0) * 1000)
        return rep
    for check in (_check_functors, _check_a1, _check_a2, _check_b, _check_c, _check_i, _check_ii):
        rep.axioms.append(check(T))
    rep.axioms.append(AxiomResult("III", True, note=VACUOUS))
    rep.millis = int((time.perf_counter() - t0) * 1000)
    return rep


# quotients ---------------------------------------------------------------------


def subgroup_group(S: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    """S as a group in its own right, with the embedding of its elements."""
    G = S.group
    H = FiniteGroup(sorted(S.elements), lambda a, b: G.table[a][b], G.identity,
                    name=f"{G.name}|S" if G.name else "S")
    return H, {a: H.index[a] for a in S.elements}


def quotient_group(S: Subgroup, A: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    """``S/A`` and the projection from the ambient labels of S."""
    H, emb = subgroup_group(S)
    AH = Subgroup(H, frozenset(emb[a] for a in A.elements))
    Q, proj = H.quotient(AH)
    Q.name = f"{S.group.name}/A" if S.group.name else "S/A"
    return Q, {a: proj[emb[a]] for a in S.elements}


def _require_f_normal(F: FusionSystem, A: Subgroup) -> None:
    from .structure import is_f_normal
    if not A.elements <= F.S.elements or not is_f_normal(F, A):
        raise PreconditionError("the subgroup is not F-normal")


def _image(Q: FiniteGroup, proj: dict, P: Subgroup) -> Subgroup:
    return Subgroup(Q, frozenset(proj[a] for a in P.elements))


def _lifts(proj: dict, P: Subgroup) -> dict[int, int]:
    out: dict[int, int] = {}
    for a in sorted(P.elements):
        out.setdefault(proj[a], a)
    return out


def quotient_fusion(F: FusionSystem, A: Subgroup, check: bool = True) -> FusionSystem:
    """``F/A`` over ``S/A`` generated by the maps induced from morphisms between overgroups of A."""
    if check:
        _require_f_normal(F, A)
    Qg, proj = quotient_group(F.S, A)
    gens = []
    seen = set()
    for P in F.subgroups():
        if not A.elements <= P.elements:
            continue
        C = F.fusion_class(P)
        if C.root.elements in seen:
            continue
        seen.add(C.root.elements)
        root = C.root
        Pb = _image(Qg, proj, root)
        lift = _lifts(proj, root)
        from .catalog import generating_subset
        for h in generating_subset(F.aut_group(root)):
            m = h.mapping
            g = GroupHom(Pb, Qg.whole, [proj[m[lift[x]]] for x in Pb.gens])
            if not g.is_identity():
                gens.append(g)
        for Q in C.members.values():
            if Q.elements == root.elements:
                continue
            t = C.trans[Q.elements]
            m = {a: t[i] for i, a in enumerate(root.key)}
            gens.append(GroupHom(Pb, Qg.whole, [proj[m[lift[x]]] for x in Pb.gens]))
    name = f"{F.name}/A"
    out = FusionSystem(Qg.whole, gens, name=name, p=F.p, meta={"projection": proj, "kernel": A})
    return out


def quotient_transporter(T: TransporterData, A: Subgroup, check: bool = True) -> TransporterData:
    """Objects P/A for objects P containing A; morphism sets ``Mor_T(P, Q)/eps_P(A)``."""
    if check:
        _require_f_normal(T.F, A)
    Qg, proj = quotient_group(T.S, A)
    keep = [i for i, P in enumerate(T.objects) if A.elements <= P.elements]
    new_idx = {i: n for n, i in enumerate(keep)}
    objs = [_image(Qg, proj, T.objects[i]) for i in keep]
    cls_of: dict[int, int] = {}
    reps: list[int] = []
    for i in keep:
        epsA = [T.eps_map[(i, i, a)] for a in sorted(A.elements)]
        for j in keep:
            for k in T.morphisms_between(i, j):
                if k in cls_of:
                    continue
                orbit = sorted({T.comp[(k, e)] for e in epsA})
                for x in orbit:
                    cls_of[x] = len(reps)
                reps.append(orbit[0])
    morphs = []
    for r in reps:
        m = T.morphisms[r]
        P = T.objects[m.source]
        Pb = objs[new_idx[m.source]]
        lift = _lifts(proj, P)
        f = T.rho_hom(r).mapping
        morphs.append(Morphism(new_idx[m.source], new_idx[m.target],
                               tuple(proj[f[lift[x]]] for x in Pb.gens), None))
    # eps on S/A
    for i in keep:
        for j in keep:
            for g in T.S.elements:
                k = T.eps_map.get((i, j, g))
                if k is None:
                    continue
                c = cls_of[k]
                if morphs[c].eps is None:
                    morphs[c].eps = proj[g]
    comp = {}
    for (a, b), c in T.comp.items():
        if a in cls_of and b in cls_of:
            key = (cls_of[a], cls_of[b])
            val = cls_of[c]
            if comp.setdefault(key, val) != val:
                raise PreconditionError("composition does not descend to the quotient")
    Fbar = quotient_fusion(T.F, A, check=False)
    return TransporterData(Qg.whole, objs, morphs, comp, F=Fbar, name=f"{T.name}/A", p=T.p,
                           meta={"projection": proj, "classes": cls_of})


# fusion system isomorphism --------------------------------------------------------


@dataclass
class IsomorphismCertificate:
    found: bool
    images: list | None = None
    checked_generators: int = 0
    tried: int = 0

    def to_json(self) -> dict:
        return {"found": self.found, "images": self.images,
                "checked_generators": self.checked_generators, "tried": self.tried}


def _conjugate_gen(theta: dict, f: GroupHom, F2: FusionSystem) -> GroupHom:
    inv = {v: k for k, v in theta.items()}
    H = F2.group
    dom = Subgroup(H, frozenset(theta[a] for a in f.domain.elements))
    m = f.mapping
    return GroupHom(dom, F2.S, [theta[m[inv[y]]] for y in dom.gens])


def fusion_isomorphism(F1: FusionSystem, F2: FusionSystem, cap: int = 512) -> IsomorphismCertificate:
    """Search group isomorphisms ``theta: S1 -> S2`` carrying the generators of each system into the other."""
    if F1.S.order != F2.S.order:
        return IsomorphismCertificate(False)
    if F1.S.order > cap:
        raise PreconditionError(f"isomorphism search is capped at order {cap}")
    if sorted(len(C.members) for C in F1.classes()) != sorted(len(C.members) for C in F2.classes()):
        return IsomorphismCertificate(False)
    tried = 0
    for th in injective_homs(F1.S, F2.S, onto=True):
        tried += 1
        theta = th.mapping
        inv = {v: k for k, v in theta.items()}
        ok = all(F2.contains(_conjugate_gen(theta, f, F2)) for f in F1.generators)
        if ok:
            ok = all(F1.contains(_conjugate_gen(inv, f, F1)) for f in F2.generators)
        if ok:
            G2 = F2.group
            return IsomorphismCertificate(True, [encode_element(G2, y) for y in th.images],
                                          len(F1.generators) + len(F2.generators), tried)
    return IsomorphismCertificate(False, tried=tried)


# extensions ---------------------------------------------------------------------


@dataclass
class ExtensionData:
    """``A -> total -> base`` with tau given on morphism labels; objects correspond by index."""

    total: TransporterData
    base: TransporterData
    tau: list[int]
    objects: list[int]
    kernel: Subgroup | None = None


def _label_group(T: TransporterData, labels: list[int]) -> FiniteGroup:
    return FiniteGroup(labels, lambda a, b: T.comp[(a, b)], T.identity(T.morphisms[labels[0]].source))


def validate_extension(ext: ExtensionData) -> ValidationReport:
    t0 = time.perf_counter()
    Tt, Tb = ext.total, ext.base
    rep = ValidationReport(system=f"{Tt.name} -> {Tb.name}")
    M, N = Tt.morphisms, Tb.morphisms
    # functor
    res = None
    if len(ext.tau) != len(M) or len(ext.objects) != len(Tt.objects):
        res = _fail("functor", clause="tau is not defined on every morphism and object")
    else:
        for k, m in enumerate(M):
            n = N[ext.tau[k]]
            if n.source != ext.objects[m.source] or n.target != ext.objects[m.target]:
                res = _fail("functor", morphism=k, clause="tau does not respect source and target")
                break
        if res is None:
            for (a, b), c in Tt.comp.items():
                if Tb.comp[(ext.tau[a], ext.tau[b])] != ext.tau[c]:
                    res = _fail("functor", pair=[a, b], clause="tau does not respect composition")
                    break
    rep.axioms.append(res or AxiomResult("functor", True))
    # (i) kernels
    K = {}
    for i in range(len(Tt.objects)):
        idb = Tb.identity(ext.objects[i])
        K[i] = [k for k in Tt.morphisms_between(i, i) if ext.tau[k] == idb]
    res = None
    sizes = {len(v) for v in K.values()}
    ref = ext.kernel
    if len(sizes) != 1 or not is_power_of(sizes.pop(), Tt.p):
        res = _fail("i", clause="kernels are not p-groups of one common order",
                    orders=sorted(len(v) for v in K.values()))
    elif ref is not None:
        for i, labels in K.items():
            H = _label_group(Tt, labels)
            if find_isomorphism(H.whole, ref) is None:
                res = _fail("i", object=i, clause="kernel is not isomorphic to the declared group")
                break
    rep.axioms.append(res or AxiomResult("i", True))
    # (ii) and (iii): free actions with tau as orbit map
    res_r = res_l = None
    for (i, j), labels in sorted(Tt.mor.items()):
        fib: dict[int, set] = {}
        for k in labels:
            fib.setdefault(ext.tau[k], set()).add(k)
        for k in labels:
            right = {Tt.comp[(k, e)] for e in K[i]}
            if res_r is None and (len(right) != len(K[i]) or right != fib[ext.tau[k]]):
                res_r = _fail("ii", morphism=k, pair=[i, j],
                              clause="right kernel action is not free or tau is not its orbit map",
                              orbit=len(right), fibre=len(fib[ext.tau[k]]))
            left = {Tt.comp[(e, k)] for e in K[j]}
            if res_l is None and (len(left) != len(K[j]) or left != fib[ext.tau[k]]):
                res_l = _fail("iii", morphism=k, pair=[i, j],
                              clause="left kernel action is not free or tau is not its orbit map",
                              orbit=len(left), fibre=len(fib[ext.tau[k]]))
    rep.axioms.append(res_r or AxiomResult("ii", True))
    rep.axioms.append(res_l or AxiomResult("iii", True))
    if not rep.passed:
        rep.millis = int((time.perf_counter() - t0) * 1000)
        return rep
    rep.axioms.append(_reconstruction(ext, K))
    rep.axioms.append(_admissibility(ext))
    rep.millis = int((time.perf_counter() - t0) * 1000)
    return rep


def _top(T: TransporterData) -> int:
    return T.obj_index[T.S.elements]


def _projection(ext: ExtensionData) -> dict[int, int]:
    """q: S~ -> S with tau(eps~(g)) = eps(q(g))."""
    Tt, Tb = ext.total, ext.base
    st, sb = _top(Tt), _top(Tb)
    back = {}
    for g in Tb.S.elements:
        back[Tb.eps_map[(sb, sb, g)]] = g
    q = {}
    for g in Tt.S.elements:
        lab = ext.tau[Tt.eps_map[(st, st, g)]]
        if lab not in back:
            raise PreconditionError("tau(eps(S~)) leaves eps(S)")
        q[g] = back[lab]
    return q


def extension_kernel(ext: ExtensionData) -> Subgroup:
    q = _projection(ext)
    G = ext.total.group
    e = ext.base.group.identity
    return Subgroup(G, frozenset(g for g, v in q.items() if v == e))


def _reconstruction(ext: ExtensionData, K) -> AxiomResult:
    Tt, Tb = ext.total, ext.base
    st, sb = _top(Tt), _top(Tb)
    q = _projection(ext)
    Gt, Gb = Tt.group, Tb.group
    for a in Tt.S.elements:
        for b in Tt.S.elements:
            if q[Gt.table[a][b]] != Gb.table[q[a]][q[b]]:
                return _fail("reconstruction", clause="q is not a homomorphism")
    if set(q.values()) != set(Tb.S.elements):
        return _fail("reconstruction", clause="q is not onto S")
    epsS = {Tb.eps_map[(sb, sb, g)] for g in Tb.S.elements}
    pull = [k for k in Tt.morphisms_between(st, st) if ext.tau[k] in epsS]
    if len(pull) != Tt.S.order:
        return _fail("reconstruction", clause="S~ is not the pull-back of Aut(S^) over Aut(S)",
                     pullback=len(pull), order=Tt.S.order)
    A = extension_kernel(ext)
    if A.order != len(K[st]):
        return _fail("reconstruction", clause="kernel of q does not match the kernel group")
    bar = quotient_transporter(Tt, A, check=False)
    cls = bar.meta["classes"]
    induced: dict[int, int] = {}
    for k, c in cls.items():
        v = ext.tau[k]
        if induced.setdefault(c, v) != v:
            return _fail("reconstruction", morphism=k, clause="tau does not factor through the quotient")
    if sorted(induced.values()) != list(range(len(Tb.morphisms))):
        return _fail("reconstruction", clause="quotient of the total category is not the base")
    return AxiomResult("reconstruction", True)


def _admissibility(ext: ExtensionData) -> AxiomResult:
    """S1 = elements of S acting on the kernel by inner automorphisms; centric-type subgroups must be objects."""
    Tt, Tb = ext.total, ext.base
    A = extension_kernel(ext)
    q = _projection(ext)
    Gt = Tt.group
    lift: dict[int, int] = {}
    for g, v in sorted(q.items()):
        lift.setdefault(v, g)
    inner = {tuple(Gt.conj(a, x) for x in A.gens) for a in A.elements}
    S1 = Subgroup(Tb.group, frozenset(v for v, g in lift.items()
                                      if tuple(Gt.conj(g, x) for x in A.gens) in inner))
    F = Tb.F
    obs = {P.elements for P in Tb.objects}
    for P in F.subgroups():
        if not F.is_fully_centralized(P):
            continue
        if centralizer(P, within=S1).elements <= P.elements and P.elements not in obs:
            return _fail("admissible", subgroup=encode_subgroup(P),
                         clause="fully centralized P with C_S1(P) <= P is not an object")
    return AxiomResult("admissible", True, note=f"|S1| = {S1.order}")


def extension_from_quotient(total: TransporterData, A: Subgroup) -> ExtensionData:
    """The extension ``A -> total -> total/A`` given by the quotient map."""
    base = quotient_transporter(total, A)
    cls = base.meta["classes"]
    keep = [i for i, P in enumerate(total.objects) if A.elements <= P.elements]
    if len(keep) != len(total.objects):
        raise PreconditionError("every object must contain the kernel")
    return ExtensionData(total, base, [cls[k] for k in range(len(total.morphisms))],
                         list(range(len(total.objects))), A)


def trivial_extension(T: TransporterData) -> ExtensionData:
    return ExtensionData(T, T, list(range(len(T.morphisms))), list(range(len(T.objects))),
                         T.group.trivial)


def corrupt_extension(ext: ExtensionData) -> ExtensionData:
    """Negative control: two morphisms of one fibre get the same orbit label as a third."""
    tau = list(ext.tau)
    for (i, j), labels in sorted(ext.total.mor.items()):
        vals = sorted({tau[k] for k in labels})
        if len(vals) >= 2:
            k = min(k for k in labels if tau[k] == vals[1])
            tau[k] = vals[0]
            return ExtensionData(ext.total, ext.base, tau, ext.objects, ext.kernel)
    raise PreconditionError("no fibre to corrupt")


__all__ = [
    "TransporterData", "Morphism", "ExtensionData", "validate_transporter", "quotient_transporter",
    "quotient_fusion", "validate_extension", "fusion_isomorphism", "transporter_category",
    "binary_octahedral_group", "load_fixture", "harvest_generators", "encode_hom",
]
