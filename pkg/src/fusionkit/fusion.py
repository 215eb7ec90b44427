"""Fusion systems generated by a set of morphisms.

A :class:`FusionSystem` lives over a p-subgroup ``S`` of an ambient finite
group.  It is given by generating morphisms (injective homomorphisms between
subgroups of ``S``) and contains all conjugations by elements of ``S``.

Everything is computed from the *arrows*: the generators, their inverses and
conjugation by the generators of ``S``.  Every morphism of the generated
system is a composite of restrictions of arrows, so the F-conjugacy class of
a subgroup ``P`` is its orbit under the arrows, and ``Aut_F(P)`` is generated
by the Schreier generators of that orbit (groupoid version of Schreier's
lemma).  Automorphisms of the class root are stored as permutations of the
root's sorted elements.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .groups import (
    FiniteGroup,
    GroupHom,
    PreconditionError,
    Subgroup,
    centralizer,
    enumerate_subgroups,
    normalizer,
    p_part,
    is_prime,
)

Perm = tuple[int, ...]


def perm_compose(a: Perm, b: Perm) -> Perm:
    """``a o b`` (apply ``b`` first)."""
    return tuple(a[i] for i in b)


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_closure(gens, identity: Perm) -> set[Perm]:
    """Group generated by permutations, grown only when a generator is new."""
    group = {identity}
    accepted: list[Perm] = []
    for g in gens:
        if g in group:
            continue
        accepted.append(g)
        frontier = list(group)
        while frontier:
            nxt = []
            for x in frontier:
                for h in accepted:
                    y = perm_compose(h, x)
                    if y not in group:
                        group.add(y)
                        nxt.append(y)
            frontier = nxt
    return group


@dataclass
class Arrow:
    domain: Subgroup
    mapping: dict[int, int]


@dataclass
class FusionClass:
    """One F-conjugacy class of subgroups.

    ``trans[Q]`` lists the images of ``root.key`` under a chosen isomorphism
    ``root -> Q``; ``aut`` is ``Aut_F(root)`` as permutations of ``root.key``.
    """

    root: Subgroup
    members: dict[frozenset, Subgroup]
    trans: dict[frozenset, tuple[int, ...]]
    aut: set[Perm]
    index: int = -1
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[Subgroup]:
        return sorted(self.members.values(), key=lambda s: s.sort_key)


class FusionSystem:
    """Fusion system over ``S`` generated by ``generators`` and conjugation in ``S``."""

    def __init__(self, S: Subgroup | FiniteGroup, generators=(), name: str = "",
                 p: int | None = None, budget: int | None = None, meta: dict | None = None):
        if isinstance(S, FiniteGroup):
            S = S.whole
        self.S = S
        self.group = S.group
        self.name = name
        self.budget = budget
        self.meta = dict(meta or {})
        if p is None:
            p = _prime_of(S.order)
        self.p = p
        gens = []
        for f in generators:
            if not (f.domain <= S and f.codomain <= S):
                raise PreconditionError("generator is not a map between subgroups of S")
            if not f.is_homomorphism() or not f.is_injective():
                raise PreconditionError("generator is not an injective homomorphism")
            if not f.image() <= S:
                raise PreconditionError("generator image leaves S")
            gens.append(f)
        self.generators: list[GroupHom] = gens
        self._lock = threading.RLock()
        self._classes: dict[frozenset, FusionClass] = {}
        self._class_list: list[FusionClass] = []
        self._subgroups: list[Subgroup] | None = None
        self._norm_order: dict[frozenset, int] = {}
        self._cent_order: dict[frozenset, int] = {}
        self._element_classes = None
        self.arrows = self._make_arrows()

    def __repr__(self) -> str:
        return f"FusionSystem({self.name or '?'}, |S|={self.S.order}, gens={len(self.generators)})"

    def _make_arrows(self) -> list[Arrow]:
        G = self.group
        S = self.S
        arrows = []
        for s in S.gens:
            for g in (s, G.inv(s)):
                arrows.append(Arrow(S, {a: G.conj(g, a) for a in S.elements}))
        for f in self.generators:
            m = f.mapping
            arrows.append(Arrow(f.domain, dict(m)))
            arrows.append(Arrow(f.image(), {v: k for k, v in m.items()}))
        return arrows

    # enumeration ---------------------------------------------------------

    def subgroups(self) -> list[Subgroup]:
        with self._lock:
            if self._subgroups is None:
                self._subgroups = enumerate_subgroups(self.S, self.budget)
            return self._subgroups

    def subgroup(self, gens) -> Subgroup:
        P = self.group.subgroup(gens)
        if not P <= self.S:
            raise PreconditionError("generators do not lie in S")
        return P

    def canonical(self, P: Subgroup) -> Subgroup:
        """The interned subgroup object with the same elements (keeps caches warm)."""
        C = self.fusion_class(P)
        return C.members[P.elements]

    # classes -------------------------------------------------------------

    def fusion_class(self, P: Subgroup) -> FusionClass:
        with self._lock:
            C = self._classes.get(P.elements)
            if C is None:
                C = self._build_class(P)
                C.index = len(self._class_list)
                self._class_list.append(C)
                for key in C.members:
                    self._classes[key] = C
            return C

    def _build_class(self, P: Subgroup) -> FusionClass:
        if not P <= self.S:
            raise PreconditionError("subgroup does not lie in S")
        root = P
        members = {P.elements: P}
        trans = {P.elements: root.key}
        queue = [P]
        schreier: list[Perm] = []
        seen_perm: set[Perm] = set()
        inv_cache: dict[frozenset, dict[int, int]] = {}
        i = 0
        while i < len(queue):
            Q = queue[i]
            i += 1
            tQ = trans[Q.elements]
            for arrow in self.arrows:
                if not Q.elements <= arrow.domain.elements:
                    continue
                m = arrow.mapping
                imgs = tuple(m[a] for a in tQ)
                key = frozenset(imgs)
                t2 = trans.get(key)
                if t2 is None:
                    trans[key] = imgs
                    Q2 = Subgroup(self.group, key)
                    members[key] = Q2
                    queue.append(Q2)
                else:
                    inv = inv_cache.get(key)
                    if inv is None:
                        inv = {g: j for j, g in enumerate(t2)}
                        inv_cache[key] = inv
                    perm = tuple(inv[x] for x in imgs)
                    if perm not in seen_perm:
                        seen_perm.add(perm)
                        schreier.append(perm)
        ident = tuple(range(root.order))
        aut = perm_closure(sorted(schreier), ident)
        return FusionClass(root, members, trans, aut)

    def classes(self) -> list[FusionClass]:
        """All F-conjugacy classes of subgroups, ordered by their least member."""
        for P in self.subgroups():
            self.fusion_class(P)
        out = {id(C): C for C in self._class_list}.values()
        return sorted(out, key=lambda C: C.sorted_members()[0].sort_key)

    def conjugacy_class(self, P: Subgroup) -> list[Subgroup]:
        return self.fusion_class(P).sorted_members()

    # automorphisms and homs ---------------------------------------------------

    def _to_root(self, C: FusionClass, P: Subgroup) -> dict[int, int]:
        """Map P -> root.key positions, inverse of the transversal."""
        cache = C._cache.setdefault("toroot", {})
        d = cache.get(P.elements)
        if d is None:
            d = {g: j for j, g in enumerate(C.trans[P.elements])}
            cache[P.elements] = d
        return d

    def aut_perms(self, P: Subgroup) -> set[Perm]:
        """``Aut_F(P)`` as permutations of ``P.key`` positions."""
        C = self.fusion_class(P)
        cache = C._cache.setdefault("autp", {})
        out = cache.get(P.elements)
        if out is None:
            t = C.trans[P.elements]
            back = self._to_root(C, P)
            loc = P.local
            # sigma: P.key position -> root position
            sigma = [back[a] for a in P.key]
            out = set()
            for alpha in C.aut:
                out.add(tuple(loc[t[alpha[sigma[i]]]] for i in range(P.order)))
            cache[P.elements] = out
        return out

    def aut_order(self, P: Subgroup) -> int:
        return len(self.fusion_class(P).aut)

    def aut_group(self, P: Subgroup) -> list[GroupHom]:
        """``Aut_F(P)`` as homomorphisms, sorted by generator images."""
        key = P.key
        loc = P.local
        gi = [loc[g] for g in P.gens]
        homs = [GroupHom(P, P, [key[perm[j]] for j in gi]) for perm in self.aut_perms(P)]
        homs.sort(key=lambda h: h.images)
        return homs

    def inner_perms(self, P: Subgroup) -> set[Perm]:
        """``Aut_S(P)`` as permutations of ``P.key`` positions."""
        G = self.group
        loc = P.local
        N = normalizer(P, within=self.S)
        return {tuple(loc[G.conj(g, a)] for a in P.key) for g in N.elements}

    def iso_images(self, P: Subgroup, Q: Subgroup):
        """Images of ``P.gens`` under every F-isomorphism ``P -> Q``."""
        C = self.fusion_class(P)
        if Q.elements not in C.members:
            return []
        back = self._to_root(C, P)
        gi = [back[g] for g in P.gens]
        tQ = C.trans[Q.elements]
        return [tuple(tQ[alpha[j]] for j in gi) for alpha in C.aut]

    def hom_images(self, P: Subgroup, Q: Subgroup | None = None) -> list[tuple[int, ...]]:
        """Images of ``P.gens`` under every member of ``Hom_F(P, Q)`` (Q defaults to S)."""
        C = self.fusion_class(P)
        back = self._to_root(C, P)
        gi = [back[g] for g in P.gens]
        out = []
        for key, tQ in C.trans.items():
            if Q is not None and not key <= Q.elements:
                continue
            for alpha in C.aut:
                out.append(tuple(tQ[alpha[j]] for j in gi))
        out.sort()
        return out

    def hom_set(self, P: Subgroup, Q: Subgroup) -> list[GroupHom]:
        return [GroupHom(P, Q, imgs) for imgs in self.hom_images(P, Q)]

    def contains(self, f: GroupHom) -> bool:
        """Whether ``f`` (with image in S) is a morphism of this system."""
        C = self.fusion_class(f.domain)
        img = f.image()
        if img.elements not in C.members:
            return False
        return tuple(f.images) in set(self.iso_images(f.domain, C.members[img.elements]))

    def restriction_images(self, N: Subgroup, P: Subgroup) -> set[tuple[int, ...]]:
        """``{h(P.gens) : h in Hom_F(N, S)}`` for ``P <= N``."""
        C = self.fusion_class(N)
        cache = C._cache.setdefault("restr", {})
        key = (N.elements, P.elements)
        out = cache.get(key)
        if out is None:
            back = self._to_root(C, N)
            gi = [back[g] for g in P.gens]
            out = set()
            for tQ in C.trans.values():
                for alpha in C.aut:
                    out.add(tuple(tQ[alpha[j]] for j in gi))
            cache[key] = out
        return out

    # normalizers and centralizers in S -------------------------------------------

    def normalizer_order(self, P: Subgroup) -> int:
        n = self._norm_order.get(P.elements)
        if n is None:
            n = normalizer(P, within=self.S).order
            self._norm_order[P.elements] = n
        return n

    def centralizer_order(self, P: Subgroup) -> int:
        n = self._cent_order.get(P.elements)
        if n is None:
            n = centralizer(P, within=self.S).order
            self._cent_order[P.elements] = n
        return n

    def is_fully_normalized(self, P: Subgroup) -> bool:
        C = self.fusion_class(P)
        return self.normalizer_order(P) == max(self.normalizer_order(Q) for Q in C.members.values())

    def is_fully_centralized(self, P: Subgroup) -> bool:
        C = self.fusion_class(P)
        return self.centralizer_order(P) == max(self.centralizer_order(Q) for Q in C.members.values())

    def fully_normalized_rep(self, P: Subgroup) -> Subgroup:
        """Deterministic fully normalized member of the class of P."""
        C = self.fusion_class(P)
        best = max(self.normalizer_order(Q) for Q in C.members.values())
        return min((Q for Q in C.members.values() if self.normalizer_order(Q) == best),
                   key=lambda s: s.sort_key)

    # elements ------------------------------------------------------------

    def element_classes(self) -> list[list[int]]:
        """Partition of S into F-conjugacy classes of elements."""
        with self._lock:
            if self._element_classes is None:
                parent = {a: a for a in self.S.elements}

                def find(a):
                    while parent[a] != a:
                        parent[a] = parent[parent[a]]
                        a = parent[a]
                    return a

                for arrow in self.arrows:
                    for a, b in arrow.mapping.items():
                        ra, rb = find(a), find(b)
                        if ra != rb:
                            if ra < rb:
                                parent[rb] = ra
                            else:
                                parent[ra] = rb
                groups: dict[int, list[int]] = {}
                for a in sorted(self.S.elements):
                    groups.setdefault(find(a), []).append(a)
                self._element_classes = sorted(groups.values())
            return self._element_classes

    def element_class_of(self, a: int) -> list[int]:
        for c in self.element_classes():
            if a in c:
                return c
        raise PreconditionError("element not in S")

    def element_classes_of_order_p(self) -> list[list[int]]:
        orders = self.group.orders
        return [c for c in self.element_classes() if orders[c[0]] == self.p]

    # derived data ---------------------------------------------------------

    def automorphism_generators(self) -> list[GroupHom]:
        """Generators as stored (for serialization)."""
        return list(self.generators)

    def order_summary(self) -> dict:
        return {"S": self.S.order, "classes": len(self.classes())}


def _prime_of(n: int) -> int:
    if n == 1:
        return 2
    for q in range(2, n + 1):
        if n % q == 0 and is_prime(q):
            if p_part(n, q) != n:
                raise PreconditionError("S is not a p-group")
            return q
    raise PreconditionError("S is not a p-group")


def generate_fusion(S, generators=(), name: str = "", **kw) -> FusionSystem:
    """Smallest fusion system over S containing the given morphisms."""
    return FusionSystem(S, generators, name=name, **kw)


def inner_fusion(S, name: str = "", **kw) -> FusionSystem:
    """``F_S(S)``."""
    return FusionSystem(S, (), name=name or "F_S(S)", **kw)


def group_fusion(G: FiniteGroup, S: Subgroup, name: str = "", **kw) -> FusionSystem:
    """``F_S(G)`` generated from conjugation by generators of ``N_G(P)`` for every ``P <= S``.

    Only the normalizer generators are harvested; the Hom-sets then follow from
    the closure.  ``direct_hom_images`` gives the brute-force comparison.
    """
    gens = []
    for P in enumerate_subgroups(S):
        N = normalizer(P)
        NS = normalizer(P, within=S)
        for g in N.gens:
            if g in NS.elements:
                continue
            f = GroupHom.conjugation(g, P, P)
            if not f.is_identity():
                gens.append(f)
    return FusionSystem(S, gens, name=name or f"F_S({G.name})", **kw)


def direct_hom_images(G: FiniteGroup, S: Subgroup, P: Subgroup, Q: Subgroup) -> set[tuple[int, ...]]:
    """``{c_g(P.gens) : g in G, g P g^-1 <= Q}`` by brute force over G."""
    out = set()
    for g in range(G.order):
        imgs = tuple(G.conj(g, a) for a in P.gens)
        if all(y in Q.elements for y in imgs):
            out.add(imgs)
    return out
