"""Saturation checkers and level-stability comparison.

Three checkers are provided: the standard axioms (I) and (II), the
alternative pair (I') and (II') that only looks at ``Aut_F(S)`` and at
fully normalized targets, and the criterion based on a set X of elements of
order p together with their centralizer subsystems.  Every failure carries a
JSON witness that :func:`replay_witness` re-verifies from scratch.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .fusion import FusionSystem
from .groups import GroupHom, PreconditionError, Subgroup, conjugate, normalizer

VACUOUS_III = "replaced by level stability; vacuous at a single truncation"


@dataclass
class AxiomResult:
    tag: str
    passed: bool
    witness: dict | None = None
    note: str | None = None

    def to_json(self) -> dict:
        d = {"tag": self.tag, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SaturationReport:
    axioms: list[AxiomResult] = field(default_factory=list)
    millis: int = 0
    system: str = ""

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.axioms)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failing(self) -> AxiomResult | None:
        for a in self.axioms:
            if not a.passed:
                return a
        return None

    def to_json(self, timing: bool = True) -> dict:
        d = {"verdict": self.verdict, "axioms": [a.to_json() for a in self.axioms]}
        if self.system:
            d["system"] = self.system
        d["millis"] = self.millis if timing else 0
        return d

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True, indent=2)


# encoding helpers ---------------------------------------------------------------


def _jsonable(label):
    if isinstance(label, tuple):
        return [_jsonable(x) for x in label]
    return label


def _tupled(obj):
    if isinstance(obj, list):
        return tuple(_tupled(x) for x in obj)
    return obj


def encode_element(G, a: int):
    return _jsonable(G.labels[a])


def decode_element(G, data) -> int:
    lab = _tupled(data)
    if lab not in G.index:
        raise PreconditionError(f"unknown element encoding {data!r}")
    return G.index[lab]


def encode_subgroup(P: Subgroup) -> list:
    return [encode_element(P.group, g) for g in P.gens]


def decode_subgroup(G, data) -> Subgroup:
    return G.subgroup(decode_element(G, d) for d in data)


def encode_hom(f: GroupHom) -> dict:
    G = f.domain.group
    return {"domain": encode_subgroup(f.domain),
            "images": [encode_element(G, y) for y in f.images]}


def decode_hom(G, data, codomain: Subgroup | None = None) -> GroupHom:
    P = decode_subgroup(G, data["domain"])
    imgs = [decode_element(G, y) for y in data["images"]]
    return GroupHom(P, codomain or G.whole, imgs)


# axiom pieces -------------------------------------------------------------------


def _is_p_prime_index(n: int, m: int, p: int) -> bool:
    return n % m == 0 and (n // m) % p != 0


def _axiom_sylow(F: FusionSystem, P: Subgroup, tag: str) -> AxiomResult | None:
    """Sylow part of (I): ``Aut_S(P)`` has index prime to p in ``Aut_F(P)``."""
    aut = F.aut_order(P)
    inner = len(F.inner_perms(P))
    if not _is_p_prime_index(aut, inner, F.p):
        return AxiomResult(tag, False, {
            "subgroup": encode_subgroup(P), "clause": "Out_S(P) is not a Sylow subgroup of Out_F(P)",
            "aut_F": aut, "aut_S": inner})
    return None


def _axiom_i(F: FusionSystem, members: list[Subgroup]) -> AxiomResult | None:
    """(I) on every fully normalized member of one class."""
    best_c = max(F.centralizer_order(Q) for Q in members)
    for P in members:
        if not F.is_fully_normalized(P):
            continue
        if F.centralizer_order(P) != best_c:
            return AxiomResult("I", False, {
                "subgroup": encode_subgroup(P),
                "clause": "fully normalized but not fully centralized",
                "centralizer_order": F.centralizer_order(P),
                "max_centralizer_order": best_c})
        res = _axiom_sylow(F, P, "I")
        if res is not None:
            return res
    return None


def _s_class_reps(F: FusionSystem, members: list[Subgroup]) -> list[Subgroup]:
    """One member of each S-conjugacy class among ``members`` (least in sort order)."""
    seen: set[frozenset] = set()
    reps = []
    S = F.S
    for Q in sorted(members, key=lambda s: s.sort_key):
        if Q.elements in seen:
            continue
        reps.append(Q)
        for g in S.elements:
            seen.add(conjugate(Q, g).elements)
    return reps


def _n_f(F: FusionSystem, P: Subgroup, target: Subgroup, images: tuple[int, ...],
         inner_target: set) -> Subgroup:
    """``N_f = {g in N_S(P) : f c_g f^-1 in Aut_S(f(P))}`` for ``f`` given by images of ``P.gens``."""
    G = F.group
    f = GroupHom(P, target, images)
    m = f.mapping
    inv = {v: k for k, v in m.items()}
    tg = target.gens
    keep = []
    for g in normalizer(P, within=F.S).elements:
        imgs = tuple(m[G.conj(g, inv[y])] for y in tg)
        if imgs in inner_target:
            keep.append(g)
    return Subgroup(G, frozenset(keep))


def _inner_images(F: FusionSystem, Q: Subgroup) -> set[tuple[int, ...]]:
    G = F.group
    return {tuple(G.conj(g, a) for a in Q.gens) for g in normalizer(Q, within=F.S).elements}


def _extension_check(F: FusionSystem, P: Subgroup, target: Subgroup, tag: str,
                     cache: dict) -> AxiomResult | None:
    inner_t = cache.get(("inner", target.elements))
    if inner_t is None:
        inner_t = _inner_images(F, target)
        cache[("inner", target.elements)] = inner_t
    for images in F.iso_images(P, target):
        N = _n_f(F, P, target, images, inner_t)
        if N.order == P.order:
            continue
        N = F.canonical(N)
        if images not in F.restriction_images(N, P):
            f = GroupHom(P, target, images)
            return AxiomResult(tag, False, {
                "subgroup": encode_subgroup(P), "clause": "no extension of f to N_f",
                "morphism": encode_hom(f), "N_f": encode_subgroup(N)})
    return None


# checkers -----------------------------------------------------------------------


def check_saturation(F: FusionSystem) -> SaturationReport:
    """Axioms (I) and (II) on every class; (III) recorded as replaced by stability."""
    t0 = time.perf_counter()
    res_i = None
    res_ii = None
    cache: dict = {}
    for C in F.classes():
        members = C.sorted_members()
        if res_i is None:
            res_i = _axiom_i(F, members)
        if res_ii is None:
            targets = [Q for Q in members if F.is_fully_centralized(Q)]
            for P in _s_class_reps(F, members):
                for Q in targets:
                    res_ii = _extension_check(F, P, Q, "II", cache)
                    if res_ii is not None:
                        break
                if res_ii is not None:
                    break
        if res_i is not None and res_ii is not None:
            break
    report = SaturationReport(system=F.name)
    report.axioms.append(res_i or AxiomResult("I", True))
    report.axioms.append(res_ii or AxiomResult("II", True))
    report.axioms.append(AxiomResult("III-stability", True, note=VACUOUS_III))
    report.millis = int((time.perf_counter() - t0) * 1000)
    return report


def check_saturation_alt(F: FusionSystem) -> SaturationReport:
    """Axioms (I') on S and (II') towards fully normalized targets."""
    t0 = time.perf_counter()
    report = SaturationReport(system=F.name)
    res = _axiom_sylow(F, F.canonical(F.S), "I'")
    report.axioms.append(res or AxiomResult("I'", True))
    res_ii = None
    cache: dict = {}
    for C in F.classes():
        members = C.sorted_members()
        best = max(F.normalizer_order(Q) for Q in members)
        targets = [Q for Q in members if F.normalizer_order(Q) == best]
        for P in _s_class_reps(F, members):
            for Q in targets:
                res_ii = _extension_check(F, P, Q, "II'", cache)
                if res_ii is not None:
                    break
            if res_ii is not None:
                break
        if res_ii is not None:
            break
    report.axioms.append(res_ii or AxiomResult("II'", True))
    report.millis = int((time.perf_counter() - t0) * 1000)
    return report


def check_sat1(F: FusionSystem, X) -> SaturationReport:
    """Criterion through a set X of elements of order p and their centralizer systems."""
    from .structure import centralizer_subsystem

    t0 = time.perf_counter()
    G = F.group
    X = sorted(set(X))
    report = SaturationReport(system=F.name)
    for x in X:
        if G.orders[x] != F.p or x not in F.S.elements:
            raise PreconditionError(f"element {G.labels[x]!r} does not have order p in S")
    # (i) every element of order p is F-conjugate into X
    missing = None
    for cls in F.element_classes_of_order_p():
        if not any(x in cls for x in X):
            missing = cls[0]
            break
    if missing is not None:
        report.axioms.append(AxiomResult("Sat1-i", False, {
            "element": encode_element(G, missing),
            "clause": "element of order p not F-conjugate to any member of X"}))
    else:
        report.axioms.append(AxiomResult("Sat1-i", True))
    # (ii) for g of order p conjugate to x in X: rho in Hom_F(C_S(g), C_S(x)) with rho(g) = x
    res = None
    from .groups import centralizer
    for x in X:
        CSx = centralizer(G.subgroup([x]), within=F.S)
        cls = F.element_class_of(x)
        for g in cls:
            CSg = F.canonical(centralizer(G.subgroup([g]), within=F.S))
            imgs_ok = False
            for imgs in F.hom_images(CSg, CSx):
                h = GroupHom(CSg, CSx, imgs)
                if h(g) == x:
                    imgs_ok = True
                    break
            if not imgs_ok:
                res = AxiomResult("Sat1-ii", False, {
                    "element": encode_element(G, g), "x": encode_element(G, x),
                    "clause": "no morphism C_S(g) -> C_S(x) sending g to x"})
                break
        if res:
            break
    report.axioms.append(res or AxiomResult("Sat1-ii", True))
    # (iii) the centralizer systems are saturated
    res = None
    for x in X:
        C = centralizer_subsystem(F, G.subgroup([x]))
        sub = check_saturation(C)
        if not sub.passed:
            bad = sub.failing()
            res = AxiomResult("Sat1-iii", False, {
                "x": encode_element(G, x), "centralizer_axiom": bad.tag, "detail": bad.witness})
            break
    report.axioms.append(res or AxiomResult("Sat1-iii", True))
    report.millis = int((time.perf_counter() - t0) * 1000)
    return report


def replay_witness(F: FusionSystem, axiom: dict) -> bool:
    """Recompute a failure witness from its JSON form; True when the violation is confirmed."""
    G = F.group
    tag = axiom["tag"]
    w = axiom.get("witness") or {}
    if tag in ("I", "I'"):
        P = F.canonical(decode_subgroup(G, w["subgroup"]))
        if w["clause"].startswith("fully normalized"):
            return (F.is_fully_normalized(P) and not F.is_fully_centralized(P))
        aut = F.aut_order(P)
        inner = len(F.inner_perms(P))
        return (tag == "I'" or F.is_fully_normalized(P)) and not _is_p_prime_index(aut, inner, F.p)
    if tag in ("II", "II'"):
        P = F.canonical(decode_subgroup(G, w["subgroup"]))
        f = decode_hom(G, w["morphism"])
        if not F.contains(f):
            return False
        Q = F.canonical(f.image())
        if tag == "II" and not F.is_fully_centralized(Q):
            return False
        if tag == "II'" and not F.is_fully_normalized(Q):
            return False
        N = _n_f(F, P, Q, f.images, _inner_images(F, Q))
        N = F.canonical(N)
        if N.elements != decode_subgroup(G, w["N_f"]).elements:
            return False
        return f.images not in F.restriction_images(N, P)
    if tag == "Sat1-i":
        a = decode_element(G, w["element"])
        return G.orders[a] == F.p
    raise PreconditionError(f"cannot replay witness for axiom {tag!r}")


# level stability -----------------------------------------------------------------


@dataclass
class StabilityReport:
    builder: str
    level: int
    stable: bool
    checks: list[dict] = field(default_factory=list)
    divergence: dict | None = None
    millis: int = 0

    def to_json(self, timing: bool = True) -> dict:
        d = {"builder": self.builder, "level": self.level, "stable": self.stable,
             "checks": self.checks, "millis": self.millis if timing else 0}
        if self.divergence:
            d["divergence"] = self.divergence
        return d


def _image_subgroup(big_group, inc: list[int], P: Subgroup) -> Subgroup:
    return Subgroup(big_group, frozenset(inc[a] for a in P.elements))


def stability_check(builder, level: int, name: str = "", probes=None) -> StabilityReport:
    """Compare the systems built at ``level`` and ``level + 1`` through the canonical inclusion.

    Checked: (1) every morphism of the level-l system, pushed forward, is a
    morphism of the level-(l+1) system (generator-wise, which suffices);
    (2) equal saturation verdicts; (3) for subgroups P, Q of the image of the
    level-(l-1) system inside level l (their elements stay away from the
    level-l boundary), |Hom_F(P, Q)| agrees, and F-conjugacy between such
    subgroups agrees; (4) any extra probe subgroups supplied by the caller
    (given by element names), compared the same way.
    """
    from .ptoral import level_inclusion

    t0 = time.perf_counter()
    small = builder(level).fusion
    big = builder(level + 1).fusion
    Gs, Gb = small.group, big.group
    inc = level_inclusion(Gs, Gb)
    rep = StabilityReport(name, level, True)

    def diverge(query: str, **info):
        rep.stable = False
        if rep.divergence is None:
            rep.divergence = {"query": query, **info}

    # (1) monotonicity of generators
    bad = 0
    for f in small.generators:
        dom = _image_subgroup(Gb, inc, f.domain)
        m = f.mapping
        pushed = GroupHom(Gb.subgroup([inc[g] for g in f.domain.gens]), Gb.whole,
                          [inc[m[g]] for g in f.domain.gens])
        pushed = GroupHom(big.canonical(pushed.domain), Gb.whole, pushed.images)
        if not big.contains(pushed):
            bad += 1
            diverge("generator not contained in the next level", domain=encode_subgroup(dom))
            break
    rep.checks.append({"query": "generators map into the next level", "pass": bad == 0})
    # (2) saturation verdicts
    v1 = check_saturation(small).verdict
    v2 = check_saturation(big).verdict
    rep.checks.append({"query": "saturation verdict", "levels": [v1, v2], "pass": v1 == v2})
    if v1 != v2:
        diverge("saturation verdict", levels=[v1, v2])
    # (3) subgroups away from the boundary
    inner = []
    lower = None
    if level >= 2:
        try:
            lower = builder(level - 1).fusion.group
        except PreconditionError:
            lower = None
    if lower is not None:
        core = frozenset(level_inclusion(lower, Gs))
        inner = [P for P in small.subgroups() if P.elements <= core]
    named = []
    for spec in probes or ():
        P = small.canonical(Gs.subgroup([Gs.lookup(x) for x in spec]))
        named.append(P)
    pool = sorted({P.elements: P for P in inner + named}.values(), key=lambda s: s.sort_key)
    mism = 0
    for P in pool:
        Pb = big.canonical(_image_subgroup(Gb, inc, P))
        for Q in pool:
            if P.order > Q.order:
                continue
            Qb = big.canonical(_image_subgroup(Gb, inc, Q))
            a = len(small.hom_images(small.canonical(P), small.canonical(Q)))
            b = len(big.hom_images(Pb, Qb))
            if a != b:
                mism += 1
                diverge("Hom-set cardinality", P=encode_subgroup(P), Q=encode_subgroup(Q),
                        levels=[a, b])
                break
        if mism:
            break
    rep.checks.append({"query": "Hom-set cardinalities away from the boundary",
                       "subgroups": len(pool), "pass": mism == 0})
    rep.millis = int((time.perf_counter() - t0) * 1000)
    return rep

