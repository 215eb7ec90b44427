"""Acceptance table: one function per criterion, each returning a JSON-ready dict.

A criterion passes when all of its ``checks`` pass.  ``supplementary``
entries record related computations (for instance the same question asked
after inclusion into the next truncation level) and never change the verdict.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from . import catalog, structure, transporter
from .fusion import direct_hom_images, generate_fusion
from .groups import Subgroup, opk_prime_core, sylow_subgroup
from .ptoral import level_inclusion, make_truncation
from .saturation import (
    check_sat1,
    check_saturation,
    check_saturation_alt,
    encode_subgroup,
    replay_witness,
    stability_check,
)


def _check(name: str, passed: bool, **detail) -> dict:
    d = {"name": name, "pass": bool(passed)}
    if detail:
        d["detail"] = detail
    return d


def _result(cid: int, title: str, checks: list, t0: float, supplementary=None) -> dict:
    out = {"id": cid, "title": title, "pass": all(c["pass"] for c in checks), "checks": checks,
           "seconds": round(time.perf_counter() - t0, 3)}
    if supplementary:
        out["supplementary"] = supplementary
    return out


POSITIVE_SUITE = [
    "so2:p=2,l=2", "so2:p=3,l=2", "so2:p=5,l=2", "sullivan:p=5,n=4,l=2",
    "so3:l=3", "su2:l=3", "exotic3:l=2", "product:so3:l=3&so2:p=2,l=3",
]


def criterion_1(level: int = 3) -> dict:
    t0 = time.perf_counter()
    checks = []
    for name in POSITIVE_SUITE:
        if level != 3:
            name = name.replace("l=3", f"l={level}")
        F = catalog.build(name).fusion
        s = time.perf_counter()
        std = check_saturation(F)
        alt = check_saturation_alt(F)
        secs = time.perf_counter() - s
        checks.append(_check(f"{name}: std and alt agree and pass in < 60 s",
                             std.passed and alt.passed and secs < 60,
                             std=std.verdict, alt=alt.verdict, seconds=round(secs, 3)))
    return _result(1, "saturation positive suite", checks, t0)


def criterion_2() -> dict:
    t0 = time.perf_counter()
    F = catalog.build_negative_control()
    rep = check_saturation(F)
    bad = rep.failing()
    checks = [
        _check("negative control fails axiom (I)", bad is not None and bad.tag == "I",
               witness=None if bad is None else bad.witness),
        _check("witness replays to a verified violation",
               bad is not None and replay_witness(F, bad.to_json())),
    ]
    sizes = sorted({F.normalizer_order(P) for P in F.subgroups()
                    if P.order == 4 and P.exponent() == 2})
    supp = [_check("Klein four-subgroups of D16 all have |N_S(V)| = 8", sizes == [8], orders=sizes)]
    return _result(2, "saturation negative control", checks, t0, supp)


ORACLES = [("sym4", 2), ("d12", 3), ("sl2_3", 3)]


def oracle_equivalence(label: str, p: int) -> dict:
    G = catalog.oracle_group(label)
    S = sylow_subgroup(G, p)
    T = transporter.transporter_category(G, S, name=label, p=p)
    F = generate_fusion(S, transporter.harvest_generators(T), p=p)
    mismatches = 0
    pairs = 0
    subs = F.subgroups()
    for P in subs:
        for Q in subs:
            pairs += 1
            if set(F.hom_images(P, Q)) != direct_hom_images(G, S, P, Q):
                mismatches += 1
    return {"pairs": pairs, "mismatches": mismatches}


def criterion_3() -> dict:
    t0 = time.perf_counter()
    checks = []
    for label, p in ORACLES:
        r = oracle_equivalence(label, p)
        checks.append(_check(f"{label} (p={p}): Hom-sets equal for all P, Q", r["mismatches"] == 0, **r))
    total = time.perf_counter() - t0
    checks.append(_check("total time < 120 s", total < 120, seconds=round(total, 3)))
    return _result(3, "oracle equivalence", checks, t0)


def _klein_fours(F):
    return [P for P in F.subgroups() if P.order == 4 and P.exponent() == 2]


def criterion_4(level: int = 3) -> dict:
    t0 = time.perf_counter()
    F = catalog.build(f"so3:l={level}").fusion
    V = F.canonical(F.meta["V"])
    S = F.canonical(F.S)
    cls = structure.classify_subgroups(F)
    cr = {F.fusion_class(c.rep).root.elements for c in cls.centric_radical()}
    want = {F.fusion_class(S).root.elements, F.fusion_class(V).root.elements}
    fours = _klein_fours(F)
    nclasses = len({F.fusion_class(P).root.elements for P in fours})
    T = structure.torus_of(F)
    checks = [
        _check("|Aut_F(V)| = 6", F.aut_order(V) == 6, value=F.aut_order(V)),
        _check("centric-radical classes are exactly {S, V}", cr == want, count=len(cr)),
        _check("all Klein four-subgroups in one F-class", nclasses == 1, classes=nclasses),
        _check("Z(F) = 1", structure.f_center(F).order == 1),
        _check("T not strongly closed", not structure.is_strongly_closed(F, T)),
    ]
    # the same question one level up, through the canonical inclusion
    big = catalog.build(f"so3:l={level + 1}").fusion
    inc = level_inclusion(F.group, big.group)
    images = {big.fusion_class(Subgroup(big.group, frozenset(inc[a] for a in P.elements))).root.elements
              for P in fours}
    supp = [_check("images of the Klein fours in level l+1 form one F-class", len(images) == 1,
                   classes=len(images))]
    return _result(4, "SO(3) invariants", checks, t0, supp)


def criterion_5(level: int = 3) -> dict:
    t0 = time.perf_counter()
    F = catalog.build(f"su2:l={level}").fusion
    G = F.group
    W = F.canonical(F.meta["W"])
    Z = structure.f_center(F)
    t1 = G.names["t1"]
    A = G.subgroup([t1])
    Fq = transporter.quotient_fusion(F, A)
    cert = transporter.fusion_isomorphism(Fq, catalog.build(f"so3:l={level - 1}").fusion)
    checks = [
        _check("|Aut_F(W)| = 24", F.aut_order(W) == 24, value=F.aut_order(W)),
        _check("Z(F) = <t1> of order 2", Z.elements == A.elements, order=Z.order),
        _check("F/<t1> is isomorphic to so3 one level down", cert.found, certificate=cert.to_json()),
    ]
    return _result(5, "SU(2) invariants", checks, t0)


def criterion_6(level: int = 3) -> dict:
    t0 = time.perf_counter()
    checks = []
    for name in ("so2:p=2,l=2", "so2:p=3,l=2", "so2:p=5,l=2", f"so3:l={level}", f"su2:l={level}"):
        cert = structure.is_irreducible_rank1(catalog.build(name).fusion)
        checks.append(_check(f"{name} irreducible", cert.irreducible))
    cert = structure.is_irreducible_rank1(catalog.build("sullivan:p=5,n=4,l=2").fusion)
    normal = [c for c in cert.candidates if c.get("status") == "normal"]
    checks.append(_check("sullivan(5,4,2) reducible with witness F_T(T) passing N1-N4",
                         not cert.irreducible and cert.witness == "F_T(T)"
                         and any(c["candidate"] == "F_T(T)" for c in normal), witness=cert.witness))
    F = catalog.build(f"so3:l={level}").fusion
    S0 = F.canonical(F.S)
    from .fusion import FusionSystem
    cand = FusionSystem(S0, (), name="F_S(S)", p=2)
    rep = structure.is_normal_subsystem(cand, F, stop_early=True)
    first = rep.first_failure()
    V = F.canonical(F.meta["V"])
    w = first.witness if first else {}
    at_v = bool(w) and w.get("P") == encode_subgroup(V) and w.get("Q") == encode_subgroup(V)
    checks.append(_check("so3 F_S(S) candidate fails exactly at N2 with P = Q = V",
                         first is not None and first.tag == "N2" and at_v
                         and all(c.passed for c in rep.conditions[:-1]),
                         failing=None if first is None else first.tag, witness=w))
    return _result(6, "rank-one irreducibility", checks, t0)


def criterion_7() -> dict:
    t0 = time.perf_counter()
    G = catalog.oracle_group("sym4")
    S = sylow_subgroup(G, 2)
    from .fusion import group_fusion, inner_fusion
    F = group_fusion(G, S, p=2)
    H1 = structure.hyperfocal(F)
    H2 = Subgroup(G, S.elements & opk_prime_core(G, 2).elements)
    so3 = catalog.build("so3:l=3").fusion
    Gd = make_truncation(catalog.dihedral_spec(3))
    D = inner_fusion(Gd.whole, p=2)
    HD = structure.hyperfocal(D)
    checks = [
        _check("hyperfocal(F_D8(Sym4)) = D8 cap O^2(Sym4), order 4, two code paths",
               H1.elements == H2.elements and H1.order == 4, orders=[H1.order, H2.order]),
        _check("hyperfocal(so3:l=3) = S", structure.hyperfocal(so3).order == so3.S.order),
        _check("hyperfocal(F_S(S)) = T for the dihedral truncation, quotient Z/2",
               HD.elements == Gd.torus.elements and Gd.order // HD.order == 2),
    ]
    return _result(7, "hyperfocal subgroup", checks, t0)


def criterion_8() -> dict:
    t0 = time.perf_counter()
    from .fusion import inner_fusion
    Gd = make_truncation(catalog.dihedral_spec(3))
    checks = []
    for label, F in (("F_S(S) over the dihedral truncation", inner_fusion(Gd.whole, p=2)),
                     ("sullivan(5,4,2)", catalog.build("sullivan:p=5,n=4,l=2").fusion)):
        R = structure.hyperfocal(F)
        F0 = structure.p_power_index_subsystem(F, R)
        rep = structure.is_normal_subsystem(F0, F)
        checks.append(_check(f"{label}: subsystem over the hyperfocal subgroup is normal", rep.passed,
                             report=rep.to_json()))
    return _result(8, "p-power index subsystem", checks, t0)


def criterion_9() -> dict:
    t0 = time.perf_counter()
    F = catalog.build("exotic3:l=2").fusion
    G = F.group
    v1 = G.names["v1"]
    sat1 = check_sat1(F, [v1])
    classes = F.element_classes_of_order_p()
    C = structure.centralizer_subsystem(F, G.subgroup([v1]))
    V = F.meta["V"]
    T = structure.torus_of(F)
    aV = C.aut_order(C.canonical(V)) if V.elements <= C.S.elements else 0
    aT = C.aut_order(C.canonical(T))
    sc = sorted(A.order for A in structure.strongly_closed_subgroups(F))
    simp = structure.verify_exotic_simplicity(F)
    checks = [
        _check("check_sat1 with X = {v1} passes", sat1.passed,
               report=sat1.to_json(timing=False)),
        _check("exactly one class of elements of order 3", len(classes) == 1,
               sizes=[len(c) for c in classes]),
        _check("centralizer of <v1>: |Aut(V)| = 6 and |Aut(T)| = 6", aV == 6 and aT == 6, values=[aV, aT]),
        _check("strongly closed subgroups are {1, S}", sc == [1, F.S.order], orders=sc),
        _check("exotic simplicity sub-checks (a), (b), (c) pass", simp.passed, report=simp.to_json()),
    ]
    total = time.perf_counter() - t0
    checks.append(_check("total < 5 min", total < 300, seconds=round(total, 3)))
    big = catalog.build("exotic3:l=3").fusion
    inc = level_inclusion(G, big.group)
    merged = {big.element_class_of(inc[c[0]])[0] for c in classes}
    same = merged == {big.element_class_of(inc[v1])[0]}
    supp = [
        _check("order-3 classes at l=2 merge with the class of v1 at l=3", same, images=len(merged)),
        _check("Sat1 conditions (ii) and (iii) pass at l=2",
               all(a.passed for a in sat1.axioms if a.tag != "Sat1-i")),
    ]
    return _result(9, "exotic 3-local suite", checks, t0, supp)


def criterion_10() -> dict:
    t0 = time.perf_counter()
    s4 = transporter.load_fixture("sigma4")
    bo = transporter.load_fixture("binary_octahedral")
    G = bo.group
    z = next(a for a in bo.S.elements if G.orders[a] == 2)
    A = G.subgroup([z])
    q = transporter.quotient_transporter(bo, A)
    qv = transporter.validate_transporter(q)
    halved = all(q.sizes()[key] * 2 == n for key, n in bo.sizes().items())
    bad = transporter.validate_transporter(transporter.corrupt_fixture(s4))
    failing = [a.tag for a in bad.axioms if not a.passed]
    v4 = next(P for P in s4.objects if P.order == 4 and P.exponent() == 2
              and len(s4.morphisms_between(s4.obj_index[P.elements], s4.obj_index[P.elements])) == 24)
    w = next(P for P in bo.objects if P.order == 8 and not P.is_abelian()
             and len(bo.morphisms_between(bo.obj_index[P.elements], bo.obj_index[P.elements])) == 48)
    checks = [
        _check("Sym4 fixture passes (A1)-(II)", transporter.validate_transporter(s4).passed,
               aut_V=len(s4.morphisms_between(s4.obj_index[v4.elements], s4.obj_index[v4.elements]))),
        _check("binary octahedral fixture passes (A1)-(II)", transporter.validate_transporter(bo).passed,
               aut_W=len(bo.morphisms_between(bo.obj_index[w.elements], bo.obj_index[w.elements]))),
        _check("quotient by <t1> passes validation", qv.passed),
        _check("quotient morphism sets are exactly halved", halved),
        _check("corrupted fixture fails (A2)", "A2" in failing, failing=failing),
    ]
    return _result(10, "transporter validation", checks, t0)


def criterion_11() -> dict:
    t0 = time.perf_counter()
    checks = []
    for name, level, probes in (("so3", 2, [["t1", "x"]]), ("su2", 2, [["t1", "y"]]),
                                ("exotic3", 1, [["v1", "x"]])):
        rep = stability_check(catalog.builder_for(name), level, name, probes)
        checks.append(_check(f"{name}: level {level} -> {level + 1} stable", rep.stable,
                             report=rep.to_json(timing=False)))
    return _result(11, "level stability", checks, t0)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}
LEVELED = {1, 4, 5, 6}


def run_criterion(cid: int, level: int = 3) -> dict:
    fn = CRITERIA[cid]
    return fn(level) if cid in LEVELED else fn()


def run_suite(level: int = 3, jobs: int = 1, only=None) -> dict:
    ids = sorted(only or CRITERIA)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_criterion, ids, [level] * len(ids)))
    else:
        results = [run_criterion(i, level) for i in ids]
    return {"level": level, "pass": all(r["pass"] for r in results), "criteria": results}


def summary_line(result: dict) -> str:
    status = "PASS" if result["pass"] else "FAIL"
    failed = [c["name"] for c in result["checks"] if not c["pass"]]
    tail = f" (failing: {'; '.join(failed)})" if failed else ""
    return f"criterion {result['id']:>2} {status}: {result['title']}{tail}"
