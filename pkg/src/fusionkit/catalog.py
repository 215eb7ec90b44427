"""Named fusion systems: rank-one examples, the exotic 3-local example,
products, and fusion systems of small finite groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .fusion import FusionSystem, group_fusion, perm_closure
from .groups import (
    FiniteGroup,
    GroupHom,
    PreconditionError,
    Subgroup,
    automorphisms,
    dihedral_group,
    is_prime,
    matrix_group,
    special_linear_group,
    sylow_subgroup,
    symmetric_group,
)
from .ptoral import (
    TruncatedPToralGroup,
    TruncationSpec,
    identity_matrix,
    make_truncation,
    mat_mul,
    mat_vec,
)


@dataclass
class CatalogEntry:
    name: str
    params: dict
    fusion: FusionSystem
    expected: dict = field(default_factory=dict)
    transporter: object | None = None

    @property
    def group(self):
        return self.fusion.group


def generating_subset(homs: list[GroupHom]) -> list[GroupHom]:
    """A small subset of a group of automorphisms of one subgroup generating the same group."""
    if not homs:
        return []
    P = homs[0].domain
    loc = P.local
    ident = tuple(range(P.order))

    def perm(h):
        m = h.mapping
        return tuple(loc[m[a]] for a in P.key)

    target = {perm(h) for h in homs}
    chosen: list[GroupHom] = []
    current = {ident}
    ordered = sorted(homs, key=lambda h: h.images)
    orders = {}
    for h in ordered:
        p = perm(h)
        k, q = 1, p
        while q != ident:
            q = tuple(p[i] for i in q)
            k += 1
        orders[h] = k
    ordered.sort(key=lambda h: (-orders[h], h.images))
    for h in ordered:
        if len(current) == len(target):
            break
        if perm(h) not in current:
            chosen.append(h)
            current = perm_closure([perm(c) for c in chosen], ident)
    return chosen


def _torus_names(p: int, level: int, prefix: str = "t", coord: int | None = None, rank: int = 1):
    names = {}
    for k in range(1, level + 1):
        v = [0] * rank
        v[coord or 0] = p ** (level - k)
        names[f"{prefix}{k}"] = tuple(v)
    return names


def _named(G: TruncatedPToralGroup, name: str) -> int:
    return G.names[name]


# rank one ------------------------------------------------------------------


def build_so2(p: int, level: int) -> CatalogEntry:
    if not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")
    spec = TruncationSpec(p, 1, level)
    names = {k: (v, ()) for k, v in _torus_names(p, level).items()}
    G = make_truncation(spec, names)
    F = FusionSystem(G.whole, (), name=f"so2:p={p},l={level}", p=p)
    return CatalogEntry(F.name, {"p": p, "l": level}, F,
                        expected={"order": p ** level, "aut_S": 1})


def hensel_root_of_unity(p: int, n: int, level: int) -> int:
    """Order-n unit mod p^level lifted from the smallest primitive root mod p."""
    if (p - 1) % n:
        raise PreconditionError(f"n = {n} does not divide p - 1 = {p - 1}")
    g = next(a for a in range(2, p + 1) if all(pow(a, (p - 1) // q, p) != 1
                                                for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)))
    if p == 2:
        g = 1
    mod = p ** level
    z = pow(g, (p - 1) // n, mod)
    for _ in range(level):
        z = pow(z, p, mod)
    return z


def build_sullivan(p: int, n: int, level: int) -> CatalogEntry:
    if p == 2 or not is_prime(p):
        raise PreconditionError("p must be an odd prime")
    if n < 2 or (p - 1) % n:
        raise PreconditionError(f"n = {n} must be at least 2 and divide p - 1 = {p - 1}")
    zeta = hensel_root_of_unity(p, n, level)
    spec = TruncationSpec(p, 1, level)
    names = {k: (v, ()) for k, v in _torus_names(p, level).items()}
    G = make_truncation(spec, names)
    S = G.whole
    f = GroupHom(S, S, [G.element_at((zeta * G.torus_part(g)[0],)) for g in S.gens])
    F = FusionSystem(S, [f], name=f"sullivan:p={p},n={n},l={level}", p=p,
                     meta={"zeta": zeta})
    return CatalogEntry(F.name, {"p": p, "n": n, "l": level}, F,
                        expected={"order": p ** level, "aut_S": n})


def dihedral_spec(level: int) -> TruncationSpec:
    return TruncationSpec(2, 1, level, (2,), (((-1,),),))


def quaternion_spec(level: int) -> TruncationSpec:
    return TruncationSpec(2, 1, level, (2,), (((-1,),),), {((1,), (1,)): (2 ** (level - 1),)})


def _rank1_names(level: int, letter: str) -> dict:
    names = {k: (v, (0,)) for k, v in _torus_names(2, level).items()}
    names[letter] = ((0,), (1,))
    return names


def full_aut_generators(P: Subgroup) -> list[GroupHom]:
    return generating_subset(automorphisms(P))


def build_so3(level: int) -> CatalogEntry:
    if level < 2:
        raise PreconditionError("so3 needs level >= 2 (V needs t2 in its normalizer)")
    G = make_truncation(dihedral_spec(level), _rank1_names(level, "x"))
    V = G.subgroup([G.names["t1"], G.names["x"]])
    F = FusionSystem(G.whole, full_aut_generators(V), name=f"so3:l={level}", p=2,
                     meta={"V": V})
    return CatalogEntry(F.name, {"l": level}, F,
                        expected={"order": 2 ** (level + 1), "aut_V": 6, "center": 1})


def build_su2(level: int) -> CatalogEntry:
    if level < 2:
        raise PreconditionError("su2 needs level >= 2 (W needs t2)")
    G = make_truncation(quaternion_spec(level), _rank1_names(level, "y"))
    W = G.subgroup([G.names["t2"], G.names["y"]])
    F = FusionSystem(G.whole, full_aut_generators(W), name=f"su2:l={level}", p=2,
                     meta={"W": W})
    return CatalogEntry(F.name, {"l": level}, F,
                        expected={"order": 2 ** (level + 1), "aut_W": 24, "center": 2})


def build_negative_control() -> FusionSystem:
    """Over D16: full Aut(V) together with the outer automorphism t -> t, x -> x t.

    The outer automorphism fuses V with a Klein four-subgroup of the other
    S-class and makes Out_F(S) a nontrivial 2-group, so axiom (I) fails at S.
    """
    G = make_truncation(dihedral_spec(3), _rank1_names(3, "x"))
    V = G.subgroup([G.names["t1"], G.names["x"]])
    t, x = G.names["t3"], G.names["x"]
    S = G.whole
    sigma = GroupHom.from_map(S, S, _hom_on_gens(G, S, {t: t, x: G.mul(x, t)}))
    gens = full_aut_generators(V) + [sigma]
    return FusionSystem(S, gens, name="negative:d16", p=2, meta={"V": V})


def _hom_on_gens(G, S: Subgroup, assign: dict) -> dict:
    """Extend an assignment on generators to a full mapping (checked by GroupHom)."""
    gens = list(assign)
    h = GroupHom(Subgroup(G, S.elements, gens), S, [assign[g] for g in gens])
    if not h.is_homomorphism() or not h.is_injective():
        raise PreconditionError("assignment does not define an automorphism")
    return h.mapping


# serialization of systems -----------------------------------------------------------


def system_to_json(F: FusionSystem) -> dict:
    """Group description, Sylow generators and fusion generators (as generator images)."""
    from .saturation import encode_hom, encode_subgroup
    from .transporter import encode_group
    G = F.group
    if isinstance(G, TruncatedPToralGroup):
        group = {"kind": "truncation", "spec": G.spec.to_json(),
                 "names": {k: [list(x) for x in G.labels[v]] for k, v in sorted(G.names.items())}}
    else:
        group = encode_group(G)
    return {"name": F.name, "p": F.p, "group": group, "S": encode_subgroup(F.S),
            "generators": [encode_hom(f) for f in F.generators]}


def system_from_json(doc: dict) -> FusionSystem:
    from .saturation import decode_hom, decode_subgroup
    from .transporter import decode_group
    gd = doc["group"]
    if gd.get("kind") == "truncation":
        spec = TruncationSpec.from_json(gd["spec"])
        names = {k: (tuple(v[0]), tuple(v[1])) for k, v in gd.get("names", {}).items()}
        G = make_truncation(spec, names)
    else:
        G = decode_group(gd)
    S = decode_subgroup(G, doc["S"])
    gens = []
    for d in doc.get("generators", []):
        f = decode_hom(G, d, S)
        if not f.is_homomorphism() or not f.is_injective():
            raise PreconditionError("a generator is not an injective homomorphism")
        gens.append(f)
    return FusionSystem(S, gens, name=doc.get("name", ""), p=doc.get("p"))


# the exotic 3-local example ---------------------------------------------------

EXOTIC_X = ((1, -3), (1, -2))
PSI_A = ((1, 0), (0, -1))
PSI_B = ((0, 1), (1, 0))
PSI_C = ((1, 1), (-1, 1))


def exotic_spec(level: int) -> TruncationSpec:
    return TruncationSpec(3, 2, level, (3,), (EXOTIC_X,))


def _matrix_closure(gens, mod: int, cap: int):
    ident = identity_matrix(2)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mat_mul(g, a, mod)
                if b not in seen:
                    seen.add(b)
                    if len(seen) > cap:
                        return None
                    nxt.append(b)
        frontier = nxt
    return seen


def _matrix_order(a, mod: int) -> int:
    ident = identity_matrix(2)
    k, b = 1, a
    while b != ident:
        b = mat_mul(b, a, mod)
        k += 1
    return k


def _reduce_matrix(m, mod: int):
    return tuple(tuple(x % mod for x in row) for row in m)


def gamma_generators(level: int) -> tuple:
    """Lifts of Psi_a, Psi_b, Psi_c to ``GL_2(Z/3^level)`` generating, with the action of x, a group of order 48.

    The given formulas only generate a finite group modulo 3, so each level is
    obtained from the previous one by the first (in sorted order) choice of
    lifts of the same orders for which the generated group stays of order 48.
    """
    gens = tuple(_reduce_matrix(m, 3) for m in (PSI_A, PSI_B, PSI_C))
    orders = [_matrix_order(g, 3) for g in gens]
    for k in range(2, level + 1):
        mod, prev = 3 ** k, 3 ** (k - 1)
        xm = _reduce_matrix(EXOTIC_X, mod)
        cands = []
        for g, n in zip(gens, orders):
            lifts = []
            for d in product(range(3), repeat=4):
                m = ((g[0][0] + prev * d[0], g[0][1] + prev * d[1]),
                     (g[1][0] + prev * d[2], g[1][1] + prev * d[3]))
                m = _reduce_matrix(m, mod)
                if _matrix_order(m, mod) == n:
                    lifts.append(m)
            cands.append(sorted(lifts))
        found = None
        for a in cands[0]:
            if _matrix_closure([a, xm], mod, 48) is None:
                continue
            for b in cands[1]:
                if _matrix_closure([a, b, xm], mod, 48) is None:
                    continue
                for c in cands[2]:
                    grp = _matrix_closure([a, b, c, xm], mod, 48)
                    if grp is not None and len(grp) == 48:
                        found = (a, b, c)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            raise PreconditionError(f"no order-48 lift of Gamma at level {k}")
        gens = found
    return gens


def gamma_group(level: int) -> list:
    """``Gamma_l``: the group generated by the lifted Psi's and the action of x, mod 3^level."""
    mod = 3 ** level
    gens = list(gamma_generators(level)) + [_reduce_matrix(EXOTIC_X, mod)]
    return sorted(_matrix_closure(gens, mod, 10 ** 6))


def build_exotic3(level: int) -> CatalogEntry:
    if level < 1:
        raise PreconditionError("level must be >= 1")
    mod = 3 ** level
    names = {}
    for k in range(1, level + 1):
        names[f"u{k}"] = ((3 ** (level - k), 0), (0,))
        names[f"v{k}"] = ((0, 3 ** (level - k)), (0,))
    names["x"] = ((0, 0), (1,))
    G = make_truncation(exotic_spec(level), names)
    T = G.torus
    S = G.whole
    gamma = gamma_group(level)
    gens: list[GroupHom] = []

    def torus_map(m):
        return GroupHom(T, T, [G.element_at(mat_vec(m, G.torus_part(g), mod)) for g in T.gens])

    gamma_homs = [torus_map(m) for m in gamma]
    gens += generating_subset(gamma_homs)
    # Aut_H(S) for H = T x| Gamma: conjugation by gamma in N_Gamma(<M>)
    M = tuple(tuple(x % mod for x in row) for row in EXOTIC_X)
    M2 = mat_mul(M, M, mod)
    powers = {identity_matrix(2): 0, M: 1, M2: 2}
    inverse = {a: b for a in gamma for b in gamma if mat_mul(a, b, mod) == identity_matrix(2)}
    s_autos = []
    for g in gamma:
        conj = mat_mul(mat_mul(g, M, mod), inverse[g], mod)
        if conj not in powers:
            continue
        j = powers[conj]

        def image(a, g=g, j=j):
            t, w = G.labels[a]
            return G.element_at(mat_vec(g, t, mod), ((w[0] * j) % 3,))

        h = GroupHom(S, S, [image(a) for a in S.gens])
        if not h.is_homomorphism():
            raise PreconditionError("conjugation by a normalizing matrix is not an automorphism")
        s_autos.append(h)
    gens += generating_subset(s_autos)
    V = G.subgroup([G.names["v1"], G.names["x"]])
    gens += full_aut_generators(V)
    F = FusionSystem(S, gens, name=f"exotic3:l={level}", p=3,
                     meta={"V": V, "gamma_order": len(gamma)})
    return CatalogEntry(F.name, {"l": level}, F,
                        expected={"order": 3 ** (2 * level + 1), "gamma_order": 48, "center": 3})


# products ------------------------------------------------------------------


def product_spec(a: TruncationSpec, b: TruncationSpec) -> TruncationSpec:
    if a.p != b.p:
        raise PreconditionError(f"prime mismatch: {a.p} vs {b.p}")
    if a.level != b.level:
        raise PreconditionError("factors must share the truncation level")
    r = a.rank + b.rank
    action = []
    for m in a.action:
        action.append(_block(m, identity_matrix(b.rank)))
    for m in b.action:
        action.append(_block(identity_matrix(a.rank), m))
    ka, kb = len(a.complement), len(b.complement)
    coc = {}
    for (w1, w2), v in a.cocycle.items():
        coc[(tuple(w1) + (0,) * kb, tuple(w2) + (0,) * kb)] = tuple(v) + (0,) * b.rank
    for (w1, w2), v in b.cocycle.items():
        key = ((0,) * ka + tuple(w1), (0,) * ka + tuple(w2))
        coc[key] = (0,) * a.rank + tuple(v)
    # cross terms of a product cocycle vanish when both parts are given separately
    full = {}
    for w1 in TruncationSpec(a.p, r, a.level, a.complement + b.complement).complement_elements():
        for w2 in TruncationSpec(a.p, r, a.level, a.complement + b.complement).complement_elements():
            ca = a.c(w1[:ka], w2[:ka])
            cb = b.c(w1[ka:], w2[ka:])
            v = tuple(ca) + tuple(cb)
            if any(v):
                full[(w1, w2)] = v
    return TruncationSpec(a.p, r, a.level, a.complement + b.complement, tuple(action), full)


def _block(a, b):
    ra, rb = len(a), len(b)
    rows = []
    for i in range(ra):
        rows.append(tuple(a[i]) + (0,) * rb)
    for i in range(rb):
        rows.append((0,) * ra + tuple(b[i]))
    return tuple(rows)


def build_product(e1: CatalogEntry, e2: CatalogEntry) -> CatalogEntry:
    G1, G2 = e1.group, e2.group
    if not isinstance(G1, TruncatedPToralGroup) or not isinstance(G2, TruncatedPToralGroup):
        raise PreconditionError("products are built from truncated catalog entries")
    if G1.p != G2.p:
        raise PreconditionError(f"prime mismatch: {G1.p} vs {G2.p}")
    spec = product_spec(G1.spec, G2.spec)
    ka = len(G1.spec.complement)

    def embed1(a):
        t, w = G1.labels[a]
        return (tuple(t) + (0,) * G2.rank, tuple(w) + (0,) * len(G2.spec.complement))

    def embed2(a):
        t, w = G2.labels[a]
        return ((0,) * G1.rank + tuple(t), (0,) * ka + tuple(w))

    names = {}
    for k, v in G1.names.items():
        names[f"{k}@1"] = embed1(v)
    for k, v in G2.names.items():
        names[f"{k}@2"] = embed2(v)
    G = make_truncation(spec, names)
    i1 = [G.index[embed1(a)] for a in range(G1.order)]
    i2 = [G.index[embed2(a)] for a in range(G2.order)]
    S1 = Subgroup(G, frozenset(i1))
    S2 = Subgroup(G, frozenset(i2))
    gens = []
    for f in e1.fusion.generators:
        gens.append(_product_gen(G, f, i1, S2))
    for f in e2.fusion.generators:
        gens.append(_product_gen(G, f, i2, S1))
    F = FusionSystem(G.whole, gens, name=f"product:{e1.name}&{e2.name}", p=G.p,
                     meta={"factors": (S1, S2)})
    return CatalogEntry(F.name, {"factors": [e1.name, e2.name]}, F,
                        expected={"order": G1.order * G2.order,
                                  "aut_S": e1.fusion.aut_order(e1.fusion.S) * e2.fusion.aut_order(e2.fusion.S)})


def _product_gen(G, f: GroupHom, inc: list[int], other: Subgroup) -> GroupHom:
    """``f x id`` on ``f.domain x other``."""
    dom = G.subgroup([inc[a] for a in f.domain.gens] + list(other.gens))
    m = f.mapping
    inv_inc = {v: k for k, v in enumerate(inc)}
    t = G.table
    images = []
    for g in dom.gens:
        # split g = a * b with a in the embedded factor and b in other
        for b in other.elements:
            a = t[g][G.inv(b)]
            if a in inv_inc and inv_inc[a] in m:
                images.append(t[inc[m[inv_inc[a]]]][b])
                break
        else:
            raise PreconditionError("product generator does not split")
    return GroupHom(dom, G.whole, images)


# finite group oracles ------------------------------------------------------------


def oracle_group(name: str) -> FiniteGroup:
    name = name.lower()
    if name == "sym4":
        return symmetric_group(4)
    if name == "sym3":
        return symmetric_group(3)
    if name == "d12":
        return dihedral_group(12)
    if name == "d8":
        return dihedral_group(8)
    if name in ("sl2_3", "sl2(3)"):
        return special_linear_group(2, 3)
    if name in ("gl2_3", "gl2(3)"):
        return matrix_group([[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 0], [0, 1]]], 3, name="GL2(3)")
    if name == "binary_octahedral":
        from .transporter import binary_octahedral_group
        return binary_octahedral_group()
    raise PreconditionError(f"unknown oracle group {name!r}")


def build_finite_oracle(G: FiniteGroup | str, p: int) -> CatalogEntry:
    if isinstance(G, str):
        label = G
        G = oracle_group(G)
    else:
        label = G.name
    S = sylow_subgroup(G, p)
    F = group_fusion(G, S, name=f"oracle:{label},p={p}", p=p, meta={"ambient": G})
    return CatalogEntry(F.name, {"group": label, "p": p}, F, expected={"order": S.order})


# names -------------------------------------------------------------------------


def _parse_params(text: str) -> dict:
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise PreconditionError(f"malformed parameter {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


CATALOG_NAMES = [
    "so2:p=2,l=2",
    "so2:p=3,l=2",
    "so2:p=5,l=2",
    "sullivan:p=5,n=4,l=2",
    "so3:l=3",
    "su2:l=3",
    "exotic3:l=2",
    "product:so3:l=3&so2:p=2,l=3",
    "oracle:sym4,p=2",
    "oracle:d12,p=3",
    "oracle:sl2_3,p=3",
]


def build(name: str) -> CatalogEntry:
    """Build an entry from its name, e.g. ``so3:l=3`` or ``sullivan:p=5,n=4,l=2``."""
    name = name.strip()
    kind, _, rest = name.partition(":")
    try:
        if kind == "product":
            left, sep, right = rest.partition("&")
            if not sep:
                raise PreconditionError("product needs two factors joined by '&'")
            return build_product(build(left), build(right))
        if kind == "oracle":
            label, _, params = rest.partition(",")
            prm = _parse_params(params)
            return build_finite_oracle(label, int(prm.get("p", 2)))
        prm = {k: int(v) for k, v in _parse_params(rest).items()}
        if kind == "so2":
            return build_so2(prm["p"], prm["l"])
        if kind == "sullivan":
            return build_sullivan(prm["p"], prm["n"], prm["l"])
        if kind == "so3":
            return build_so3(prm["l"])
        if kind == "su2":
            return build_su2(prm["l"])
        if kind == "exotic3":
            return build_exotic3(prm["l"])
    except KeyError as exc:
        raise PreconditionError(f"missing parameter {exc} in {name!r}") from None
    except ValueError as exc:
        raise PreconditionError(f"bad parameter in {name!r}: {exc}") from None
    raise PreconditionError(f"unknown catalog entry {name!r}")


LEVEL_BUILDERS = {
    "so2": lambda l, p=3: build_so2(p, l),
    "so3": build_so3,
    "su2": build_su2,
    "exotic3": build_exotic3,
}


def builder_for(name: str):
    """Level-parameterized builder for ``so3``, ``su2``, ``exotic3`` or ``so2:p=..``."""
    kind, _, rest = name.partition(":")
    if kind == "so2":
        p = int(_parse_params(rest).get("p", 3))
        return lambda l: build_so2(p, l)
    if kind == "sullivan":
        prm = _parse_params(rest)
        return lambda l: build_sullivan(int(prm["p"]), int(prm["n"]), l)
    if kind in LEVEL_BUILDERS:
        return LEVEL_BUILDERS[kind]
    raise PreconditionError(f"no level builder for {name!r}")

