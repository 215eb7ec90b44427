"""Structural invariants and subsystems of fusion systems."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .fusion import FusionSystem, perm_closure, perm_compose, perm_inverse
from .groups import (
    GroupHom,
    PreconditionError,
    Subgroup,
    center,
    centralizer,
    enumerate_subgroups,
    is_normal,
    normalizer,
)
from .saturation import (
    check_saturation,
    encode_element,
    encode_hom,
    encode_subgroup,
)


def torus_of(F: FusionSystem) -> Subgroup:
    """Maximal torus of the ambient truncation intersected with S (trivial for finite groups)."""
    G = F.group
    T = getattr(G, "torus", None)
    if T is None:
        return G.trivial
    return Subgroup(G, T.elements & F.S.elements)


def is_p_group_order(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


# permutation group helpers ------------------------------------------------------


def _perm_order(a) -> int:
    ident = tuple(range(len(a)))
    k, b = 1, a
    while b != ident:
        b = perm_compose(a, b)
        k += 1
    return k


def op_core(perms: set, p: int) -> set:
    """``O_p`` of a permutation group: elements whose normal closure is a p-group."""
    gens = list(perms)
    n = len(next(iter(perms)))
    ident = tuple(range(n))
    out = set()
    done: set = set()
    for g in sorted(perms):
        if g in done:
            continue
        cls = {perm_compose(perm_compose(h, g), perm_inverse(h)) for h in gens}
        closure = perm_closure(sorted(cls), ident)
        good = is_p_group_order(len(closure), p)
        done |= cls
        if good:
            out |= cls
    return perm_closure(sorted(out), ident) if out else {ident}


def op_prime_residual(perms: set, p: int) -> set:
    """``O^p``: the subgroup generated by elements of order prime to p."""
    n = len(next(iter(perms)))
    ident = tuple(range(n))
    gens = sorted(a for a in perms if _perm_order(a) % p != 0)
    return perm_closure(gens, ident)


# classification -----------------------------------------------------------------


@dataclass
class ClassInfo:
    rep: Subgroup
    size: int
    order: int
    aut_order: int
    centric: bool
    radical: bool
    quasicentric: bool


@dataclass
class SubgroupClassification:
    classes: list[ClassInfo] = field(default_factory=list)

    def centric_radical(self) -> list[ClassInfo]:
        return [c for c in self.classes if c.centric and c.radical]

    def to_json(self) -> list:
        return [{"rep": encode_subgroup(c.rep), "size": c.size, "order": c.order,
                 "aut_order": c.aut_order, "centric": c.centric, "radical": c.radical,
                 "quasicentric": c.quasicentric} for c in self.classes]


def is_centric(F: FusionSystem, P: Subgroup) -> bool:
    for Q in F.fusion_class(P).members.values():
        if not centralizer(Q, within=F.S).elements <= Q.elements:
            return False
    return True


def is_radical(F: FusionSystem, P: Subgroup) -> bool:
    P = F.canonical(P)
    aut = F.aut_perms(P)
    inner_p = _inn_perms(P)
    return len(op_core(aut, F.p)) == len(inner_p)


def _inn_perms(P: Subgroup) -> set:
    G = P.group
    loc = P.local
    return {tuple(loc[G.conj(g, a)] for a in P.key) for g in P.elements}


def is_quasicentric(F: FusionSystem, P: Subgroup) -> bool:
    """Centralizer systems of fully centralized conjugates are the inner systems of C_S(Q)."""
    for Q in F.fusion_class(P).members.values():
        if not F.is_fully_centralized(Q):
            continue
        C = centralizer_subsystem(F, Q, check=False)
        CS = C.S
        G = F.group
        for f in C.generators:
            m = f.mapping
            if not any(all(G.conj(g, a) == b for a, b in m.items()) for g in CS.elements):
                return False
    return True


def classify_subgroups(F: FusionSystem) -> SubgroupClassification:
    out = SubgroupClassification()
    for C in F.classes():
        rep = F.fully_normalized_rep(C.root)
        centric = is_centric(F, rep)
        out.classes.append(ClassInfo(
            rep=rep, size=C.size, order=rep.order, aut_order=len(C.aut),
            centric=centric, radical=is_radical(F, rep),
            quasicentric=True if centric else is_quasicentric(F, rep)))
    return out


# closed, normal, central subgroups ---------------------------------------------------


def is_strongly_closed(F: FusionSystem, A: Subgroup) -> bool:
    for cls in F.element_classes():
        inside = [a in A.elements for a in cls]
        if any(inside) and not all(inside):
            return False
    return True


def strongly_closed_subgroups(F: FusionSystem) -> list[Subgroup]:
    return [A for A in F.subgroups() if is_strongly_closed(F, A)]


def _arrow_homs(F: FusionSystem) -> list[GroupHom]:
    """Generators and their inverses as homomorphisms (conjugations need no test)."""
    out = []
    for f in F.generators:
        out.append(f)
        out.append(f.inverse())
    return out


def _extends_over(F: FusionSystem, f: GroupHom, A: Subgroup, fix_A: bool) -> bool:
    """Is there gamma in Hom_F(P A, S) with gamma|_P = f and gamma(A) = A (pointwise if fix_A)?"""
    G = F.group
    P = f.domain
    PA = F.canonical(G.subgroup(P.gens + A.gens))
    m = f.mapping
    target = tuple(m[g] for g in P.gens)
    for imgs in F.hom_images(PA):
        h = GroupHom(PA, F.S, imgs)
        hm = h.mapping
        if tuple(hm[g] for g in P.gens) != target:
            continue
        if fix_A:
            if all(hm[a] == a for a in A.gens):
                return True
        elif all(hm[a] in A.elements for a in A.gens):
            return True
    return False


def is_f_normal(F: FusionSystem, A: Subgroup) -> bool:
    if not is_normal(A, F.S) or not is_strongly_closed(F, A):
        return False
    return all(_extends_over(F, f, A, False) for f in _arrow_homs(F))


def f_normal_subgroups(F: FusionSystem) -> list[Subgroup]:
    return [A for A in strongly_closed_subgroups(F) if is_f_normal(F, A)]


def is_f_central(F: FusionSystem, A: Subgroup) -> bool:
    return is_f_normal(F, A) and F.aut_order(A) == 1


def f_center(F: FusionSystem) -> Subgroup:
    """Largest F-central subgroup of Z(S)."""
    Z = center(F.S)
    best = F.group.trivial
    for A in enumerate_subgroups(Z):
        if A.order > best.order and is_f_central(F, A):
            best = A
    return best


# K-normalizers --------------------------------------------------------------------


def _k_images(A: Subgroup, K) -> set:
    """Normalize K (None/'aut', 'id', 'S' or a list of automorphisms) to images of A.gens."""
    from .groups import automorphisms

    if K is None or K == "aut":
        return {h.images for h in automorphisms(A)}
    if K == "id":
        return {A.gens}
    if isinstance(K, str):
        raise PreconditionError(f"unknown K specification {K!r}")
    out = set()
    for h in K:
        out.add(h.restrict(A).images if h.domain != A else h.images)
    return out


def k_normalizer(F: FusionSystem, A: Subgroup, kimgs: set) -> Subgroup:
    """``N_S^K(A)``: elements of N_S(A) acting on A through K."""
    G = F.group
    keep = [g for g in normalizer(A, within=F.S).elements
            if tuple(G.conj(g, a) for a in A.gens) in kimgs]
    return Subgroup(G, frozenset(keep))


def _conjugate_k(A: Subgroup, f: GroupHom, kimgs: set) -> set:
    """``f K f^-1`` as images of ``f(A).gens``."""
    m = f.mapping
    inv = {v: k for k, v in m.items()}
    B = f.image()
    out = set()
    for imgs in kimgs:
        k = GroupHom(A, A, imgs).mapping
        out.add(tuple(m[k[inv[b]]] for b in B.gens))
    return out


def is_fully_k_normalized(F: FusionSystem, A: Subgroup, kimgs: set) -> tuple[bool, Subgroup | None]:
    n = k_normalizer(F, A, kimgs).order
    A = F.canonical(A)
    for B in F.conjugacy_class(A):
        for imgs in F.iso_images(A, B):
            f = GroupHom(A, B, imgs)
            Bc = Subgroup(F.group, B.elements, B.gens)
            m = k_normalizer(F, Bc, _conjugate_k(A, f, kimgs)).order
            if m > n:
                return False, B
    return True, None


def normalizer_subsystem(F: FusionSystem, A: Subgroup, K=None, check: bool = True,
                         name: str = "") -> FusionSystem:
    """``N_F^K(A)`` over ``N_S^K(A)``: restrictions of maps that extend to ``P A`` acting on A through K."""
    G = F.group
    A = F.canonical(A)
    kimgs = _k_images(A, K)
    if check:
        ok, better = is_fully_k_normalized(F, A, kimgs)
        if not ok:
            raise PreconditionError(
                f"A is not fully K-normalized; a better placed conjugate is {encode_subgroup(better)}")
    NK = k_normalizer(F, A, kimgs)
    NS = normalizer(A, within=F.S)
    # candidate domains R = (R cap N^K) A with A <= R <= N_S(A)
    cands = [R for R in enumerate_subgroups(NS) if A.elements <= R.elements]
    cands.sort(key=lambda s: (-s.order, s.key))
    kept: list[GroupHom] = []
    implied: dict[frozenset, set] = {}
    for R in cands:
        R = F.canonical(R)
        D = Subgroup(G, R.elements & NK.elements)
        if G.subgroup(D.gens + A.gens).elements != R.elements:
            continue
        seen = implied.setdefault(D.elements, set())
        for imgs in F.hom_images(R):
            h = GroupHom(R, F.S, imgs)
            hm = h.mapping
            if not all(hm[a] in A.elements for a in A.gens):
                continue
            if tuple(hm[a] for a in A.gens) not in kimgs:
                continue
            dimgs = tuple(hm[g] for g in D.gens)
            if dimgs in seen:
                continue
            arrow = GroupHom(D, NK, dimgs)
            if arrow.is_identity():
                seen.add(dimgs)
                continue
            if _is_inner_on(G, NK, D, hm):
                seen.add(dimgs)
                continue
            kept.append(arrow)
            # mark restrictions to smaller candidate domains as implied
            for R2 in cands:
                if R2.order < R.order and R2.elements <= R.elements:
                    D2 = Subgroup(G, R2.elements & NK.elements)
                    implied.setdefault(D2.elements, set()).add(tuple(hm[g] for g in D2.gens))
            seen.add(dimgs)
    label = name or f"N^K({encode_subgroup(A)}) in {F.name}"
    return FusionSystem(NK, kept, name=label, p=F.p, meta={"A": A})


def _is_inner_on(G, NK: Subgroup, D: Subgroup, hm: dict) -> bool:
    for g in NK.elements:
        if all(G.conj(g, d) == hm[d] for d in D.gens):
            return True
    return False


def centralizer_subsystem(F: FusionSystem, A: Subgroup, check: bool = True) -> FusionSystem:
    return normalizer_subsystem(F, A, "id", check=check,
                                name=f"C_F({encode_subgroup(A)})")


# comparison of systems ------------------------------------------------------------


def same_system(F1: FusionSystem, F2: FusionSystem) -> bool:
    """Equal Sylow and equal morphism sets (classes and automorphism groups of every subgroup)."""
    if F1.S != F2.S:
        return False
    for P in F1.subgroups():
        C1, C2 = F1.fusion_class(P), F2.fusion_class(P)
        if set(C1.members) != set(C2.members):
            return False
        if len(C1.aut) != len(C2.aut):
            return False
    return True


def is_subsystem(F0: FusionSystem, F: FusionSystem) -> bool:
    if not F0.S <= F.S:
        return False
    return all(F.contains(GroupHom(F.canonical(f.domain), F.S, f.images)) for f in F0.generators)


# normal subsystems ------------------------------------------------------------------


@dataclass
class ConditionResult:
    tag: str
    passed: bool
    witness: dict | None = None

    def to_json(self) -> dict:
        d = {"tag": self.tag, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class NormalityReport:
    conditions: list[ConditionResult] = field(default_factory=list)
    subsystem: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def first_failure(self) -> ConditionResult | None:
        for c in self.conditions:
            if not c.passed:
                return c
        return None

    def to_json(self) -> dict:
        return {"subsystem": self.subsystem, "verdict": self.verdict,
                "conditions": [c.to_json() for c in self.conditions]}


def _full_maps(F0: FusionSystem, P: Subgroup, Q: Subgroup) -> set:
    """Hom_{F0}(P, Q) as tuples of images of ``P.key``."""
    out = set()
    for imgs in F0.hom_images(F0.canonical(P), Q):
        m = GroupHom(P, Q, imgs).mapping
        out.add(tuple(m[a] for a in P.key))
    return out


def _conjugated_maps(maps: set, P: Subgroup, gmap: dict) -> set:
    """``gamma o f o gamma^-1`` for maps f on P, as tuples over ``gamma(P).key``."""
    gP = sorted(gmap[a] for a in P.elements)
    inv = {v: k for k, v in gmap.items()}
    loc = P.local
    out = set()
    for f in maps:
        out.add(tuple(gmap[f[loc[inv[b]]]] for b in gP))
    return out


def _check_n2(F0: FusionSystem, F: FusionSystem) -> ConditionResult:
    G = F.group
    S0 = F0.S
    subs = F0.subgroups()
    cache: dict = {}

    def homs(P, Q):
        key = (P.elements, Q.elements)
        if key not in cache:
            cache[key] = _full_maps(F0, P, Q)
        return cache[key]

    def test(Q: Subgroup, gimgs: tuple, only_pq: bool) -> dict | None:
        gamma = GroupHom(Q, F.S, gimgs)
        gm = gamma.mapping
        gQ = Subgroup(G, frozenset(gm.values()))
        pool = [Q] if only_pq else [P for P in subs if P.elements <= Q.elements]
        for P in pool:
            gP = Subgroup(G, frozenset(gm[a] for a in P.elements))
            lhs = _conjugated_maps(homs(P, Q), P, gm)
            rhs = homs(gP, gQ)
            if lhs != rhs:
                return {"P": encode_subgroup(P), "Q": encode_subgroup(Q),
                        "gamma": encode_hom(gamma), "gamma_order": _hom_order(gamma),
                        "sizes": [len(lhs), len(rhs)]}
        return None

    # automorphism cases first, on fully normalized representatives, high-order gammas first
    for C in F.classes():
        rep = F.fully_normalized_rep(C.root)
        if not rep.elements <= S0.elements:
            continue
        autos = F.aut_group(rep)
        autos.sort(key=lambda h: (-_hom_order(h), h.images))
        for h in autos:
            w = test(rep, h.images, True)
            if w:
                return ConditionResult("N2", False, w)
    # general case: gamma a restricted generating arrow, P <= Q <= S0
    arrows = [(S0G, imgs) for S0G, imgs in _restricted_arrows(F)]
    for Q in subs:
        for dom, mapping in arrows:
            if not Q.elements <= dom.elements:
                continue
            gimgs = tuple(mapping[g] for g in Q.gens)
            w = test(Q, gimgs, False)
            if w:
                return ConditionResult("N2", False, w)
    return ConditionResult("N2", True)


def _restricted_arrows(F: FusionSystem):
    for arrow in F.arrows:
        yield arrow.domain, arrow.mapping


def _hom_order(h: GroupHom) -> int:
    m = h.mapping
    k = 1
    cur = dict(m)
    while any(cur[a] != a for a in h.domain.gens):
        cur = {a: m[cur[a]] for a in cur}
        k += 1
    return k


def _check_n4(F0: FusionSystem, F: FusionSystem) -> ConditionResult:
    G = F.group
    S0 = F.canonical(F0.S)
    CS = centralizer(S0, within=F.S)
    ZS0 = center(S0)
    big = F.canonical(G.subgroup(S0.gens + CS.gens))
    S0c = F0.canonical(S0)
    from .catalog import generating_subset
    gens = generating_subset(F0.aut_group(S0c))
    ext = [GroupHom(big, big, imgs).mapping for imgs in F.iso_images(big, big)]
    for f in gens:
        fm = f.mapping
        ok = False
        for em in ext:
            if any(em[a] != fm[a] for a in S0.gens):
                continue
            if all(G.table[em[c]][G.inv(c)] in ZS0.elements for c in CS.elements):
                ok = True
                break
        if not ok:
            return ConditionResult("N4", False, {"automorphism": encode_hom(f),
                                                 "clause": "no extension to S0 C_S(S0) with [f, C_S(S0)] <= Z(S0)"})
    return ConditionResult("N4", True)


def is_normal_subsystem(F0: FusionSystem, F: FusionSystem, conditions=("N1", "N2", "N3", "N4"),
                        stop_early: bool = False) -> NormalityReport:
    rep = NormalityReport(subsystem=F0.name)
    if not F0.S <= F.S:
        raise PreconditionError("the subsystem must live over a subgroup of S")
    for tag in conditions:
        if tag == "N1":
            A = F.canonical(F0.S)
            ok = is_strongly_closed(F, A)
            res = ConditionResult("N1", ok, None if ok else {"subgroup": encode_subgroup(A)})
        elif tag == "N2":
            res = _check_n2(F0, F)
        elif tag == "N3":
            sat = check_saturation(F0)
            bad = sat.failing()
            res = ConditionResult("N3", sat.passed, None if sat.passed else {"axiom": bad.tag, "detail": bad.witness})
        elif tag == "N4":
            res = _check_n4(F0, F)
        else:
            raise PreconditionError(f"unknown condition {tag!r}")
        rep.conditions.append(res)
        if stop_early and not res.passed:
            break
    return rep


# hyperfocal subgroup and p-power index ---------------------------------------------------


def hyperfocal(F: FusionSystem) -> Subgroup:
    """``<T, g^-1 alpha(g) : alpha in O^p(Aut_F(P)), g in P, P <= S>``."""
    G = F.group
    gens = set(torus_of(F).gens)
    for C in F.classes():
        opr = op_prime_residual(C.aut, F.p)
        if len(opr) == 1:
            continue
        for P in C.members.values():
            perms = F.aut_perms(P)
            # conjugate the root's O^p to P through the transversal
            ops = _transport(F, C, P, opr)
            key = P.key
            for a in ops:
                for i, g in enumerate(key):
                    gens.add(G.table[G.inv(g)][key[a[i]]])
            del perms
    return G.subgroup(sorted(gens))


def _transport(F: FusionSystem, C, P: Subgroup, perms: set) -> set:
    """Carry permutations of the class root to permutations of P along the transversal."""
    t = C.trans[P.elements]
    back = F._to_root(C, P)
    loc = P.local
    sigma = [back[a] for a in P.key]
    return {tuple(loc[t[alpha[sigma[i]]]] for i in range(P.order)) for alpha in perms}


def hyperfocal_quotient_order(F: FusionSystem) -> int:
    return F.S.order // hyperfocal(F).order


def p_power_index_subsystem(F: FusionSystem, R: Subgroup, name: str = "") -> FusionSystem:
    """Subsystem over R generated by ``O^p(Aut_F(P))`` for all ``P <= R`` (and conjugation in R)."""
    H = hyperfocal(F)
    if not H.elements <= R.elements:
        raise PreconditionError("R does not contain the hyperfocal subgroup")
    if not is_normal(R, F.S):
        raise PreconditionError("R must be normal in S")
    from .catalog import generating_subset
    gens: list[GroupHom] = []
    for P in enumerate_subgroups(R):
        P = F.canonical(P)
        C = F.fusion_class(P)
        opr = op_prime_residual(C.aut, F.p)
        if len(opr) == 1:
            continue
        perms = _transport(F, C, P, opr)
        key = P.key
        loc = P.local
        gi = [loc[g] for g in P.gens]
        homs = [GroupHom(P, P, [key[a[j]] for j in gi]) for a in sorted(perms)]
        gens += [h for h in generating_subset(homs)]
    return FusionSystem(R, gens, name=name or f"F_R({F.name})", p=F.p)


# rank one irreducibility --------------------------------------------------------------


def restriction_subsystem(F: FusionSystem, S0: Subgroup, name: str = "") -> FusionSystem:
    """Subsystem over S0 generated by ``Aut_F(P)`` for all ``P <= S0``."""
    from .catalog import generating_subset
    gens = []
    for P in enumerate_subgroups(S0):
        P = F.canonical(P)
        autos = F.aut_group(P)
        if len(autos) > 1:
            gens += generating_subset(autos)
    return FusionSystem(S0, gens, name=name or f"F|{S0.order}", p=F.p)


def rank_of(F: FusionSystem) -> int:
    G = F.group
    if not hasattr(G, "rank_at_level"):
        return 0
    return G.rank_at_level(torus_of(F))


@dataclass
class IrreducibilityCertificate:
    irreducible: bool
    candidates: list[dict] = field(default_factory=list)
    witness: str | None = None
    scope: str = ("candidates: strongly closed S0 containing T; over each S0 the systems "
                  "F_T(T), F_S0(S0), F restricted to S0, and the p-power index subsystem")

    def to_json(self) -> dict:
        d = {"irreducible": self.irreducible, "scope": self.scope, "candidates": self.candidates}
        if self.witness:
            d["witness"] = self.witness
        return d


def _candidate_family(F: FusionSystem):
    T = torus_of(F)
    for S0 in strongly_closed_subgroups(F):
        if not T.elements <= S0.elements:
            continue
        tag = S0.order
        seen = []
        options = []
        if S0.elements == T.elements:
            options.append(("F_T(T)", FusionSystem(S0, (), name="F_T(T)", p=F.p)))
        else:
            options.append(("F_S0(S0)", FusionSystem(S0, (), name=f"F_S0(S0)[{tag}]", p=F.p)))
        options.append(("F|S0", restriction_subsystem(F, S0, name=f"F|S0[{tag}]")))
        H = hyperfocal(F)
        if H.elements <= S0.elements and is_normal(S0, F.S):
            options.append(("F_R", p_power_index_subsystem(F, S0, name=f"F_R[{tag}]")))
        for label, C in options:
            if any(same_system(C, D) for D in seen):
                continue
            seen.append(C)
            yield S0, label, C


def is_irreducible_rank1(F: FusionSystem) -> IrreducibilityCertificate:
    if rank_of(F) != 1:
        raise PreconditionError("irreducibility is decided here only for rank one")
    cert = IrreducibilityCertificate(True)
    for S0, label, C in _candidate_family(F):
        entry = {"S0_order": S0.order, "candidate": label}
        if same_system(C, F):
            entry["status"] = "equals F (not proper)"
            cert.candidates.append(entry)
            continue
        rep = is_normal_subsystem(C, F, stop_early=True)
        entry["normality"] = rep.to_json()
        fail = rep.first_failure()
        entry["status"] = "normal" if fail is None else f"fails {fail.tag}"
        cert.candidates.append(entry)
        if fail is None and cert.irreducible:
            cert.irreducible = False
            cert.witness = label
    return cert


def irreducible_component_rank1(F: FusionSystem):
    """Minimal strongly closed S0 containing T and the component system over it."""
    if rank_of(F) != 1:
        raise PreconditionError("the rank-one component is defined here only for rank one")
    T = torus_of(F)
    S0 = F.S
    for A in strongly_closed_subgroups(F):
        if T.elements <= A.elements:
            S0 = Subgroup(F.group, S0.elements & A.elements)
    if S0.elements == T.elements:
        return S0, FusionSystem(S0, (), name="F_T(T)", p=F.p), "so2"
    comp = restriction_subsystem(F, S0, name="component")
    shape = _rank1_shape(comp)
    if shape is None:
        raise PreconditionError("S0 matches no rank-one component shape")
    return S0, comp, shape


def _rank1_shape(F: FusionSystem) -> str | None:
    G = F.group
    S = F.S
    invol = [a for a in S.elements if G.orders[a] == 2]
    if len(invol) == 1:
        for P in F.subgroups():
            if P.order == 8 and not P.is_abelian() and F.aut_order(P) == 24:
                return "su2"
        return None
    for P in F.subgroups():
        if P.order == 4 and P.is_abelian() and P.exponent() == 2 and F.aut_order(P) == 6:
            return "so3"
    return None


# the exotic example ----------------------------------------------------------------------


@dataclass
class ExoticReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.checks.values())

    def to_json(self) -> dict:
        return {"verdict": "pass" if self.passed else "fail", "checks": self.checks}


def _subgroup_lattice_between(perms: set, bottom: set) -> list[set]:
    """Subgroups of a permutation group containing ``bottom`` (join closure from cyclic pieces)."""
    ident = tuple(range(len(next(iter(perms)))))
    base = frozenset(perm_closure(sorted(bottom), ident))
    found = {base}
    frontier = [base]
    elems = sorted(perms)
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if g in H:
                    continue
                J = frozenset(perm_closure(sorted(H) + [g], ident))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def verify_exotic_simplicity(F: FusionSystem) -> ExoticReport:
    """Scripted check of the absence of proper normal subsystems of the exotic system."""
    from .catalog import generating_subset
    if "V" not in F.meta or F.p != 3:
        raise PreconditionError("input is not the exotic 3-local system")
    G = F.group
    S = F.S
    V = F.canonical(F.meta["V"])
    T = F.canonical(torus_of(F))
    rep = ExoticReport()
    # (a) no proper nontrivial strongly closed subgroups
    sc = strongly_closed_subgroups(F)
    ok = all(A.order in (1, S.order) for A in sc)
    rep.checks["a"] = {"pass": ok, "strongly_closed_orders": sorted(A.order for A in sc)}

    # (b) proper choices for Aut_F0(V) or Aut_F0(T) break N2
    def system_with(PV, autV, PT, autT):
        gens = []
        for P, homs in ((PV, autV), (PT, autT)):
            gens += generating_subset(homs)
        gens += generating_subset(F.aut_group(F.canonical(S)))
        return FusionSystem(S, gens, name="candidate", p=3)

    failures = []
    cand_count = 0
    for P, other in ((V, T), (T, V)):
        perms = F.aut_perms(P)
        inner = F.inner_perms(P)
        key = P.key
        loc = P.local
        gi = [loc[g] for g in P.gens]
        for H in _subgroup_lattice_between(perms, inner):
            if len(H) == len(perms):
                continue
            homs = [GroupHom(P, P, [key[a[j]] for j in gi]) for a in sorted(H)]
            cand = system_with(P, homs, other, F.aut_group(other))
            if F.aut_order(P) == cand.aut_order(P):
                continue
            cand_count += 1
            res = _check_n2(cand, F)
            if res.passed:
                failures.append({"subgroup": encode_subgroup(P), "aut_order": len(H)})
    rep.checks["b"] = {"pass": not failures, "candidates": cand_count, "surviving": failures}

    # (c) Aut_F(S) generated by Inn(S) and extensions of automorphisms of T
    Sc = F.canonical(S)
    autS = F.aut_perms(Sc)
    loc = Sc.local
    inn = _inn_perms(Sc)
    tgens = generating_subset([h for h in F.aut_group(T)
                               if _normalizes_inner(F, T, h)])
    exts = []
    missing = 0
    for beta in tgens:
        bm = beta.mapping
        found = None
        for a in sorted(autS):
            if all(Sc.key[a[loc[t]]] == bm[t] for t in T.gens):
                found = a
                break
        if found is None:
            missing += 1
        else:
            exts.append(found)
    ident = tuple(range(Sc.order))
    gen_group = perm_closure(sorted(inn) + exts, ident)
    ok = missing == 0 and len(gen_group) == len(autS)
    rep.checks["c"] = {"pass": ok, "aut_S": len(autS), "generated": len(gen_group),
                       "unextended": missing}
    return rep


def _normalizes_inner(F: FusionSystem, T: Subgroup, h: GroupHom) -> bool:
    """Does h normalize Aut_S(T) (so that it can extend to S)?"""
    inner = F.inner_perms(T)
    loc = T.local
    hp = tuple(loc[h.mapping[a]] for a in T.key)
    hi = perm_inverse(hp)
    return all(perm_compose(perm_compose(hp, c), hi) in inner for c in inner)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


__all__ = [
    "classify_subgroups", "strongly_closed_subgroups", "f_normal_subgroups", "f_center",
    "normalizer_subsystem", "centralizer_subsystem", "is_normal_subsystem", "hyperfocal",
    "p_power_index_subsystem", "irreducible_component_rank1", "is_irreducible_rank1",
    "verify_exotic_simplicity", "encode_element",
]
