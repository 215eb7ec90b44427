"""Table-based finite groups, subgroups and homomorphisms.

Every group handled by the package is finite and small enough (a few
thousand elements at most) to be stored as a Cayley table on the integers
``0 .. n-1``.  Element labels are sorted before indexing, so index order is
the deterministic module-wide ordering of elements.
"""

from __future__ import annotations

import math
import os
from collections import deque
from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

DEFAULT_BUDGET = 4096
DEFAULT_SEARCH_CAP = 2_000_000


class FusionKitError(Exception):
    """Base class for errors raised by the package."""


class BudgetExceeded(FusionKitError):
    """An enumeration would exceed the configured size cap."""


class PreconditionError(FusionKitError):
    """An operation was called on input violating its preconditions."""


def default_budget() -> int:
    return int(os.environ.get("FUSIONKIT_BUDGET", DEFAULT_BUDGET))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_power_of(n: int, p: int) -> bool:
    return n >= 1 and p_part(n, p) == n


class FiniteGroup:
    """A finite group stored as a multiplication table.

    ``labels`` are hashable, mutually comparable descriptions of the
    elements; they are sorted on construction, so the element with index
    ``i`` is ``labels[i]``.
    """

    def __init__(self, labels: Sequence[Hashable], mul: Callable, identity: Hashable,
                 name: str = ""):
        labels = sorted(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        self.name = name
        self.labels = labels
        self.index = index
        self.order = n
        self.identity = index[identity]
        self.table = [[index[mul(a, b)] for b in labels] for a in labels]
        e = self.identity
        self._inv = [0] * n
        for a in range(n):
            row = self.table[a]
            for b in range(n):
                if row[b] == e:
                    self._inv[a] = b
                    break
        self._orders: list[int] | None = None
        self.kind: dict | None = None

    @classmethod
    def from_generators(cls, gens: Iterable[Hashable], mul: Callable, identity: Hashable,
                        name: str = "", budget: int | None = None) -> "FiniteGroup":
        """Close ``gens`` under ``mul`` and build the table."""
        cap = default_budget() if budget is None else budget
        gens = list(gens)
        seen = {identity}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"group {name!r} has more than {cap} elements")
                    queue.append(y)
        return cls(seen, mul, identity, name)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, g: int, x: int) -> int:
        """Return ``g x g^-1``."""
        t = self.table
        return t[t[g][x]][self._inv[g]]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self._inv[a], -k
        r = self.identity
        while k:
            if k & 1:
                r = self.table[r][a]
            a = self.table[a][a]
            k >>= 1
        return r

    def element_order(self, a: int) -> int:
        return self.orders[a]

    @property
    def orders(self) -> list[int]:
        if self._orders is None:
            e = self.identity
            out = []
            for a in range(self.order):
                k, x = 1, a
                while x != e:
                    x = self.table[x][a]
                    k += 1
                out.append(k)
            self._orders = out
        return self._orders

    def element(self, label: Hashable) -> int:
        return self.index[label]

    # subgroups ---------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        gens = [g for g in set(gens) if g != self.identity]
        seen = {self.identity}
        frontier = [self.identity]
        t = self.table
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for g in gens:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        gens = list(gens)
        for g in gens:
            if not 0 <= g < self.order:
                raise PreconditionError(f"element {g} not in {self!r}")
        return Subgroup(self, self.closure(gens))

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, frozenset([self.identity]))

    def is_p_group(self, p: int) -> bool:
        return is_power_of(self.order, p)

    def quotient(self, N: "Subgroup") -> tuple["FiniteGroup", list[int]]:
        """Return ``G/N`` and the projection as a list indexed by elements of G."""
        if not is_normal(N, self.whole):
            raise PreconditionError("quotient by a non-normal subgroup")
        rep = [-1] * self.order
        for a in range(self.order):
            if rep[a] < 0:
                coset = [self.table[a][n] for n in N.elements]
                r = min(coset)
                for c in coset:
                    rep[c] = r
        reps = sorted(set(rep))
        t = self.table
        Q = FiniteGroup(reps, lambda a, b: rep[t[a][b]], rep[self.identity],
                        name=f"{self.name}/N")
        proj = [Q.index[rep[a]] for a in range(self.order)]
        return Q, proj


class Subgroup:
    """A subgroup of a :class:`FiniteGroup`, stored by its element set."""

    __slots__ = ("group", "elements", "order", "_gens", "_key", "_hash", "_tree", "__dict__")

    def __init__(self, group: FiniteGroup, elements: frozenset[int], gens: Sequence[int] | None = None):
        self.group = group
        self.elements = elements
        self.order = len(elements)
        self._gens = tuple(gens) if gens is not None else None
        self._key = None
        self._hash = hash(elements)
        self._tree = None

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, gens={list(self.gens)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and self.group is other.group
                and self.elements == other.elements)

    def __hash__(self) -> int:
        return self._hash

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: "Subgroup") -> bool:
        return self.elements < other.elements

    def __iter__(self):
        return iter(self.key)

    def __len__(self) -> int:
        return self.order

    @property
    def key(self) -> tuple[int, ...]:
        if self._key is None:
            self._key = tuple(sorted(self.elements))
        return self._key

    @cached_property
    def local(self) -> dict[int, int]:
        """Position of each element in :attr:`key`."""
        return {a: i for i, a in enumerate(self.key)}

    @property
    def sort_key(self) -> tuple:
        return (self.order, self.key)

    @property
    def gens(self) -> tuple[int, ...]:
        """Deterministic small generating set (greedy, largest order first)."""
        if self._gens is None:
            G = self.group
            orders = G.orders
            cand = sorted(self.elements, key=lambda a: (-orders[a], a))
            gens: list[int] = []
            cur = {G.identity}
            for a in cand:
                if len(cur) == self.order:
                    break
                if a not in cur:
                    gens.append(a)
                    cur = G.closure(gens)
            self._gens = tuple(gens)
        return self._gens

    @property
    def tree(self) -> list[tuple[int, int, int]]:
        """Spanning tree of the Cayley graph: ``(element, parent, gen index)`` in BFS order."""
        if self._tree is None:
            G = self.group
            t = G.table
            gens = self.gens
            out = [(G.identity, -1, -1)]
            seen = {G.identity}
            i = 0
            while i < len(out):
                x = out[i][0]
                for j, g in enumerate(gens):
                    y = t[x][g]
                    if y not in seen:
                        seen.add(y)
                        out.append((y, x, j))
                i += 1
            self._tree = out
        return self._tree

    def is_abelian(self) -> bool:
        t = self.group.table
        gs = self.gens
        return all(t[a][b] == t[b][a] for a in gs for b in gs)

    def exponent(self) -> int:
        return math.lcm(*(self.group.orders[a] for a in self.elements))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.elements & other.elements)

    def join(self, other: "Subgroup") -> "Subgroup":
        return self.group.subgroup(self.gens + other.gens)


def generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return G.subgroup(gens)


def normalizes(g: int, P: Subgroup) -> bool:
    G = P.group
    return all(G.conj(g, a) in P.elements for a in P.gens)


def normalizer(P: Subgroup, within: Subgroup | None = None) -> Subgroup:
    G = P.group
    H = within if within is not None else G.whole
    return Subgroup(G, frozenset(g for g in H.elements if normalizes(g, P)))


def centralizer(P: Subgroup, within: Subgroup | None = None) -> Subgroup:
    G = P.group
    H = within if within is not None else G.whole
    t = G.table
    gs = P.gens
    return Subgroup(G, frozenset(g for g in H.elements if all(t[g][a] == t[a][g] for a in gs)))


def center(P: Subgroup) -> Subgroup:
    return centralizer(P, within=P)


def is_normal(N: Subgroup, H: Subgroup) -> bool:
    return N <= H and all(normalizes(g, N) for g in H.gens)


def conjugate(P: Subgroup, g: int) -> Subgroup:
    G = P.group
    return Subgroup(G, frozenset(G.conj(g, a) for a in P.elements))


def transporter(P: Subgroup, Q: Subgroup, within: Subgroup | None = None) -> list[int]:
    """``N_H(P, Q) = {g in H : g P g^-1 <= Q}``."""
    G = P.group
    H = within if within is not None else G.whole
    return [g for g in sorted(H.elements) if all(G.conj(g, a) in Q.elements for a in P.gens)]


def subgroup_from_labels(G: FiniteGroup, labels: Iterable[Hashable]) -> Subgroup:
    return G.subgroup(G.index[lab] for lab in labels)


# homomorphisms ----------------------------------------------------------


class GroupHom:
    """A homomorphism ``domain -> codomain`` stored by the images of ``domain.gens``.

    Both ends are subgroups, possibly of different ambient groups.  Equality
    and hashing depend only on the domain and the generator images, so the
    representation is canonical.
    """

    __slots__ = ("domain", "codomain", "images", "_map", "_hash")

    def __init__(self, domain: Subgroup, codomain: Subgroup, images: Sequence[int]):
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        if len(self.images) != len(domain.gens):
            raise PreconditionError("one image per domain generator is required")
        self._map = None
        self._hash = hash((domain, self.images))

    @classmethod
    def from_map(cls, domain: Subgroup, codomain: Subgroup, mapping) -> "GroupHom":
        h = cls(domain, codomain, [mapping[g] for g in domain.gens])
        return h

    @classmethod
    def identity(cls, P: Subgroup) -> "GroupHom":
        return cls(P, P, P.gens)

    @classmethod
    def inclusion(cls, P: Subgroup, Q: Subgroup) -> "GroupHom":
        return cls(P, Q, P.gens)

    @classmethod
    def conjugation(cls, g: int, P: Subgroup, Q: Subgroup | None = None) -> "GroupHom":
        G = P.group
        imgs = [G.conj(g, a) for a in P.gens]
        if Q is None:
            Q = Subgroup(G, frozenset(G.conj(g, a) for a in P.elements))
        return cls(P, Q, imgs)

    def __repr__(self) -> str:
        return f"GroupHom({list(self.domain.gens)} -> {list(self.images)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and self.domain == other.domain
                and self.images == other.images)

    def __hash__(self) -> int:
        return self._hash

    def _build(self) -> dict[int, int] | None:
        """Evaluate along the spanning tree; None if the images violate a relation."""
        dom = self.domain
        t = dom.group.table
        ct = self.codomain.group.table
        imgs = self.images
        m = {dom.group.identity: self.codomain.group.identity}
        for x, parent, j in dom.tree[1:]:
            m[x] = ct[m[parent]][imgs[j]]
        for x in dom.elements:
            fx = m[x]
            row = t[x]
            for j, g in enumerate(dom.gens):
                if m[row[g]] != ct[fx][imgs[j]]:
                    return None
        return m

    @property
    def mapping(self) -> dict[int, int]:
        if self._map is None:
            m = self._build()
            if m is None:
                raise PreconditionError("generator images do not define a homomorphism")
            self._map = m
        return self._map

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_homomorphism(self) -> bool:
        if self._map is not None:
            return True
        m = self._build()
        if m is None:
            return False
        self._map = m
        return True

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == self.domain.order

    def image(self) -> Subgroup:
        return Subgroup(self.codomain.group, frozenset(self.mapping.values()))

    def image_of(self, P: Subgroup) -> Subgroup:
        m = self.mapping
        return Subgroup(self.codomain.group, frozenset(m[a] for a in P.elements))

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self o other`` (apply ``other`` first)."""
        m = self.mapping
        return GroupHom(other.domain, self.codomain, [m[y] for y in other.images])

    def inverse(self) -> "GroupHom":
        """Inverse of an injective map, onto its image."""
        inv = {v: k for k, v in self.mapping.items()}
        img = self.image()
        return GroupHom(img, self.domain, [inv[g] for g in img.gens])

    def restrict(self, P: Subgroup, codomain: Subgroup | None = None) -> "GroupHom":
        m = self.mapping
        return GroupHom(P, codomain or self.codomain, [m[g] for g in P.gens])

    def with_codomain(self, Q: Subgroup) -> "GroupHom":
        return GroupHom(self.domain, Q, self.images)

    def is_identity(self) -> bool:
        return self.images == self.domain.gens


def injective_homs(P: Subgroup, Q: Subgroup, cap: int = DEFAULT_SEARCH_CAP,
                   onto: bool = False) -> list[GroupHom]:
    """All injective homomorphisms ``P -> Q`` by backtracking over generator images.

    Generators are assigned one at a time; after each assignment the partial
    map is checked to be a homomorphism on the prefix subgroup it generates.
    With ``onto`` only isomorphisms are returned.
    """
    if P.order > Q.order or (onto and P.order != Q.order):
        return []
    G, H = P.group, Q.group
    gens = P.gens
    if not gens:
        return [GroupHom(P, Q, ())]
    horders = H.orders
    by_order: dict[int, list[int]] = {}
    for y in sorted(Q.elements):
        by_order.setdefault(horders[y], []).append(y)
    cands = [by_order.get(G.orders[g], []) for g in gens]
    space = math.prod(len(c) for c in cands)
    if space > cap:
        raise BudgetExceeded(f"generator-image space {space} exceeds search cap {cap}")
    prefixes = [Subgroup(G, G.closure(gens[:k + 1]), gens[:k + 1]) for k in range(len(gens))]
    out: list[GroupHom] = []
    imgs: list[int] = []

    def rec(k: int) -> None:
        if k == len(gens):
            h = GroupHom(P, Q, imgs)
            if h.is_injective():
                out.append(h)
            return
        for y in cands[k]:
            imgs.append(y)
            partial = GroupHom(prefixes[k], Q, imgs)
            if partial.is_homomorphism() and partial.is_injective():
                rec(k + 1)
            imgs.pop()

    rec(0)
    return out


def automorphisms(P: Subgroup, cap: int = DEFAULT_SEARCH_CAP) -> list[GroupHom]:
    return injective_homs(P, P, cap=cap, onto=True)


def find_isomorphism(P: Subgroup, Q: Subgroup, cap: int = DEFAULT_SEARCH_CAP,
                     accept: Callable[[GroupHom], bool] | None = None) -> GroupHom | None:
    """First isomorphism ``P -> Q`` (optionally satisfying ``accept``), else None."""
    if P.order != Q.order:
        return None
    for h in injective_homs(P, Q, cap=cap, onto=True):
        if accept is None or accept(h):
            return h
    return None


# enumeration ------------------------------------------------------------


def _layered_p_subgroups(G: FiniteGroup, p: int, within: Sequence[int]) -> set[frozenset[int]]:
    """All subgroups of a p-group: each one is an index-p extension of a smaller one."""
    t = G.table
    e = G.identity
    found: set[frozenset[int]] = set()
    layer = {frozenset([e])}
    found |= layer
    while layer:
        nxt: set[frozenset[int]] = set()
        for K in layer:
            Ksub = Subgroup(G, K)
            kg = Ksub.gens
            covered: set[int] = set(K)
            for g in within:
                if g in covered:
                    continue
                if G.pow(g, p) not in K:
                    continue
                if not all(G.conj(g, a) in K for a in kg):
                    continue
                elems = set(K)
                coset = K
                for _ in range(p - 1):
                    coset = frozenset(t[x][g] for x in coset)
                    elems |= coset
                H = frozenset(elems)
                covered |= H
                if H not in found:
                    found.add(H)
                    nxt.add(H)
        layer = nxt
    return found


def _join_closure_subgroups(G: FiniteGroup, within: Sequence[int]) -> set[frozenset[int]]:
    cyclic = {G.closure([a]) for a in within}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = G.closure(list(H) + list(C))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return found


def enumerate_subgroups(G: FiniteGroup | Subgroup, budget: int | None = None) -> list[Subgroup]:
    """All subgroups of ``G`` (a group or a subgroup), sorted by (order, sorted elements)."""
    cap = default_budget() if budget is None else budget
    H = G.whole if isinstance(G, FiniteGroup) else G
    grp = H.group
    if H.order > cap:
        raise BudgetExceeded(f"|S| = {H.order} exceeds subgroup-enumeration cap {cap}")
    primes = [q for q in range(2, H.order + 1) if H.order % q == 0 and is_prime(q)]
    within = sorted(H.elements)
    if len(primes) == 1:
        sets = _layered_p_subgroups(grp, primes[0], within)
    elif not primes:
        sets = {frozenset([grp.identity])}
    else:
        sets = _join_closure_subgroups(grp, within)
    subs = [Subgroup(grp, s) for s in sets]
    subs.sort(key=lambda s: s.sort_key)
    return subs


def opk_prime_core(G: FiniteGroup | Subgroup, p: int) -> Subgroup:
    """Subgroup generated by all elements of order prime to ``p``."""
    H = G.whole if isinstance(G, FiniteGroup) else G
    grp = H.group
    gens = [a for a in H.elements if grp.orders[a] % p != 0]
    return grp.subgroup(gens)


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown greedily through p-subgroup normalizers."""
    target = p_part(G.order, p)
    P = G.trivial
    while P.order < target:
        N = normalizer(P)
        for g in sorted(N.elements):
            if g in P.elements:
                continue
            if is_power_of(G.orders[g], p):
                H = G.subgroup(P.gens + (g,))
                if is_power_of(H.order, p) and H.order > P.order:
                    P = H
                    break
        else:
            raise FusionKitError("Sylow growth stalled")
    return P


# standard small groups --------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(range(n), lambda a, b: (a + b) % n, 0, name=f"C{n}")


def permutation_group(gens: Iterable[Sequence[int]], name: str = "") -> FiniteGroup:
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    ident = tuple(range(n))
    # (a*b)(i) = a(b(i)): right factor acts first
    G = FiniteGroup.from_generators(gens, lambda a, b: tuple(a[i] for i in b), ident, name=name)
    G.kind = {"kind": "permutation", "name": name, "generators": [list(g) for g in gens]}
    return G


def symmetric_group(n: int) -> FiniteGroup:
    cyc = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return permutation_group([cyc, swap], name=f"Sym{n}")


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given order, as permutations of a polygon."""
    n = order // 2
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    if n == 2:
        return FiniteGroup([(a, b) for a in range(2) for b in range(2)],
                           lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), (0, 0), name="D4")
    return permutation_group([rot, ref], name=f"D{order}")


def matrix_group(gens: Iterable[Sequence[Sequence[int]]], modulus: int, name: str = "") -> FiniteGroup:
    """Group generated by square matrices over ``Z/modulus`` (stored as row tuples)."""

    def mul(a, b):
        n = len(a)
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % modulus for j in range(n))
                     for i in range(n))

    gens = [tuple(tuple(x % modulus for x in row) for row in g) for g in gens]
    n = len(gens[0])
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    G = FiniteGroup.from_generators(gens, mul, ident, name=name)
    G.kind = {"kind": "matrix", "modulus": modulus, "name": name,
              "generators": [[list(r) for r in g] for g in gens]}
    return G


def special_linear_group(n: int, q: int) -> FiniteGroup:
    """SL_n(q) for prime q, generated by elementary transvections."""
    gens = []
    for i, j in product(range(n), repeat=2):
        if i != j:
            m = [[int(a == b) for b in range(n)] for a in range(n)]
            m[i][j] = 1
            gens.append(m)
    return matrix_group(gens, q, name=f"SL{n}({q})")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    labels = [(a, b) for a in range(G.order) for b in range(H.order)]
    return FiniteGroup(labels, lambda x, y: (G.table[x[0]][y[0]], H.table[x[1]][y[1]]),
                       (G.identity, H.identity), name=name or f"{G.name}x{H.name}")
